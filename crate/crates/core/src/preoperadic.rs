//! Pre-operadic systems: the restriction maps `R_0` and `R_j` on parameter
//! sets, and an exhaustive checker for the identity, idempotency,
//! commutativity and closure conditions.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::{self, compositions, ParamElement, ParameterKind};

/// The data `(k; n_1, ..., n_k)` of a composition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompositionProfile {
    parts: Vec<usize>,
}

impl CompositionProfile {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidProfile);
        }
        Ok(Self { parts })
    }

    /// `(k; 1, ..., 1)`
    pub fn ones(k: usize) -> Result<Self> {
        Self::new(vec![1; k])
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `n_j`, 1-based.
    pub fn part(&self, j: usize) -> usize {
        self.parts[j - 1]
    }

    /// `N = n_1 + ... + n_k`
    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `N_i = n_1 + ... + n_i`, with `N_0 = 0`.
    pub fn partial(&self, i: usize) -> usize {
        self.parts[..i].iter().sum()
    }
}

impl fmt::Display for CompositionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({}; {})", self.k(), parts.join(","))
    }
}

/// A family of restriction maps `R_0(k; n) : U_N -> U_k` and
/// `R_j(k; n) : U_N -> U_{n_j}`.
pub trait PreOperadicSystem: Sync {
    fn kind(&self) -> ParameterKind;
    fn r_zero(&self, p: &CompositionProfile, u: &ParamElement) -> Result<ParamElement>;
    fn r_part(&self, p: &CompositionProfile, j: usize, u: &ParamElement) -> Result<ParamElement>;
}

/// The built-in system for one of the five parameter families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StandardSystem(pub ParameterKind);

impl PreOperadicSystem for StandardSystem {
    fn kind(&self) -> ParameterKind {
        self.0
    }

    fn r_zero(&self, p: &CompositionProfile, u: &ParamElement) -> Result<ParamElement> {
        r_zero(self.0, p, u)
    }

    fn r_part(&self, p: &CompositionProfile, j: usize, u: &ParamElement) -> Result<ParamElement> {
        r_part(self.0, p, j, u)
    }
}

fn check_input(kind: ParameterKind, p: &CompositionProfile, u: &ParamElement) -> Result<()> {
    if u.kind() != kind || !u.is_valid() {
        return Err(Error::InvalidElement { kind, arity: u.arity() });
    }
    if u.arity() != p.total() {
        return Err(Error::ArityMismatch { expected: p.total(), found: u.arity() });
    }
    Ok(())
}

fn rewrap(kind: ParameterKind, t: params::PlanarTree) -> ParamElement {
    match kind {
        ParameterKind::BinaryTrees => ParamElement::BinaryTree(t),
        _ => ParamElement::PlanarTree(t),
    }
}

/// `R_0(k; n_1, ..., n_k) : U_N -> U_k`
pub fn r_zero(kind: ParameterKind, p: &CompositionProfile, u: &ParamElement) -> Result<ParamElement> {
    check_input(kind, p, u)?;
    let k = p.k();
    Ok(match u {
        ParamElement::Linear { value, .. } => {
            let i = (1..=k)
                .find(|&i| *value <= p.partial(i))
                .expect("value bounded by N");
            ParamElement::Linear { arity: k, value: i }
        }
        ParamElement::BinaryTree(t) | ParamElement::PlanarTree(t) => {
            let keep: Vec<usize> = (0..=k).map(|i| p.partial(i)).collect();
            rewrap(kind, t.keep_leaves(&keep)?)
        }
        ParamElement::Subset { mask, .. } => {
            let mut out = 0u64;
            for i in 1..=k {
                let block = block_mask(p.partial(i - 1) + 1, p.partial(i));
                if mask & block != 0 {
                    out |= 1 << (i - 1);
                }
            }
            ParamElement::Subset { arity: k, mask: out }
        }
        ParamElement::Signs(x) => ParamElement::Signs(
            (1..=k)
                .map(|i| x[p.partial(i - 1)..p.partial(i)].iter().product())
                .collect(),
        ),
    })
}

/// `R_j(k; n_1, ..., n_k) : U_N -> U_{n_j}`, `1 <= j <= k`.
pub fn r_part(
    kind: ParameterKind,
    p: &CompositionProfile,
    j: usize,
    u: &ParamElement,
) -> Result<ParamElement> {
    check_input(kind, p, u)?;
    if j == 0 || j > p.k() {
        return Err(Error::IndexOutOfRange { index: j, max: p.k() });
    }
    let lo = p.partial(j - 1);
    let hi = p.partial(j);
    let nj = p.part(j);
    let total = p.total();
    Ok(match u {
        ParamElement::Linear { value, .. } => {
            let v = if *value <= lo {
                1
            } else if *value <= hi {
                value - lo
            } else {
                nj
            };
            ParamElement::Linear { arity: nj, value: v }
        }
        ParamElement::BinaryTree(t) | ParamElement::PlanarTree(t) => {
            let keep: Vec<usize> = (lo..=hi).collect();
            rewrap(kind, t.keep_leaves(&keep)?)
        }
        ParamElement::Subset { mask, .. } => {
            let mut out = 0u64;
            // The first and last cases both apply when n_j = 1; membership is their union.
            if mask & block_mask(1, lo + 1) != 0 {
                out |= 1;
            }
            for i in 2..nj {
                if mask >> (i + lo - 1) & 1 == 1 {
                    out |= 1 << (i - 1);
                }
            }
            if mask & block_mask(hi, total) != 0 {
                out |= 1 << (nj - 1);
            }
            ParamElement::Subset { arity: nj, mask: out }
        }
        ParamElement::Signs(x) => ParamElement::Signs(x[lo..hi].to_vec()),
    })
}

/// Bits for the 1-based range `from..=to`.
fn block_mask(from: usize, to: usize) -> u64 {
    if from > to {
        return 0;
    }
    let width = to - from + 1;
    let ones = if width >= 64 { u64::MAX } else { (1u64 << width) - 1 };
    ones << (from - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Identity,
    Idempotency,
    Commutativity,
    Closure,
}

impl Axiom {
    pub const ALL: [Axiom; 4] = [
        Axiom::Identity,
        Axiom::Idempotency,
        Axiom::Commutativity,
        Axiom::Closure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Identity => "identity",
            Axiom::Idempotency => "idempotency",
            Axiom::Commutativity => "commutativity",
            Axiom::Closure => "closure",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub axiom: Axiom,
    pub outer: CompositionProfile,
    /// Empty for the identity axiom.
    pub inner: Vec<usize>,
    /// `(i, j)` indices of the commutativity and closure conditions.
    pub position: Option<(usize, usize)>,
    pub element: ParamElement,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} outer={} inner={:?}", self.axiom.name(), self.outer, self.inner)?;
        if let Some((i, j)) = self.position {
            write!(f, " i={i} j={j}")?;
        }
        write!(f, " u={} expected={} actual={}", self.element, self.expected, self.actual)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: HashMap<Axiom, usize>,
    pub counterexamples: Vec<Counterexample>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn axiom_passed(&self, axiom: Axiom) -> bool {
        self.counterexamples.iter().all(|c| c.axiom != axiom)
    }

    pub fn checks(&self, axiom: Axiom) -> usize {
        self.checks.get(&axiom).copied().unwrap_or(0)
    }

    pub fn first(&self, axiom: Axiom) -> Option<&Counterexample> {
        self.counterexamples.iter().find(|c| c.axiom == axiom)
    }

    fn merge(&mut self, other: AxiomReport) {
        for (a, n) in other.checks {
            *self.checks.entry(a).or_default() += n;
        }
        self.counterexamples.extend(other.counterexamples);
    }
}

fn show(r: &Result<ParamElement>) -> String {
    match r {
        Ok(e) => e.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// Exhaustively checks the four conditions for every outer profile
/// `(k; n_1..n_k)`, inner profile `(m_1..m_N)` with `M = sum m <= max_total`
/// and every `u` in `U_M`. Counterexamples are listed in scan order: by `M`,
/// then inner and outer profiles lexicographically, then element order.
pub fn verify_system<S: PreOperadicSystem>(sys: &S, max_total: usize) -> Result<AxiomReport> {
    let kind = sys.kind();
    let mut report = AxiomReport::default();

    for k in 1..=max_total {
        let ones = CompositionProfile::ones(k)?;
        let mut part = AxiomReport::default();
        for u in params::enumerate(kind, k)?.iter() {
            *part.checks.entry(Axiom::Identity).or_default() += 1;
            let got = sys.r_zero(&ones, u);
            if got.as_ref() != Ok(u) {
                part.counterexamples.push(Counterexample {
                    axiom: Axiom::Identity,
                    outer: ones.clone(),
                    inner: Vec::new(),
                    position: None,
                    element: u.clone(),
                    expected: u.to_string(),
                    actual: show(&got),
                });
            }
        }
        report.merge(part);
    }

    let mut jobs = Vec::new();
    for total in 1..=max_total {
        for inner in compositions(total) {
            for outer in compositions(inner.len()) {
                jobs.push((inner.clone(), outer));
            }
        }
    }
    let parts: Vec<Result<AxiomReport>> = jobs
        .par_iter()
        .map(|(inner, outer)| check_pair(sys, inner, outer))
        .collect();
    for p in parts {
        report.merge(p?);
    }
    Ok(report)
}

fn check_pair<S: PreOperadicSystem>(sys: &S, inner: &[usize], outer: &[usize]) -> Result<AxiomReport> {
    let kind = sys.kind();
    let mut report = AxiomReport::default();
    let n_prof = CompositionProfile::new(outer.to_vec())?;
    let m_prof = CompositionProfile::new(inner.to_vec())?;
    let k = n_prof.k();
    let big_m: Vec<usize> = (0..=inner.len()).map(|i| m_prof.partial(i)).collect();
    let t_parts: Vec<usize> = (1..=k)
        .map(|i| big_m[n_prof.partial(i)] - big_m[n_prof.partial(i - 1)])
        .collect();
    let t_prof = CompositionProfile::new(t_parts)?;
    let blocks: Vec<CompositionProfile> = (1..=k)
        .map(|i| CompositionProfile::new(inner[n_prof.partial(i - 1)..n_prof.partial(i)].to_vec()))
        .collect::<Result<_>>()?;

    let mut fail = |axiom, position, u: &ParamElement, expected: &Result<ParamElement>, actual: &Result<ParamElement>| {
        *report.checks.entry(axiom).or_default() += 1;
        if expected.is_err() || expected != actual {
            report.counterexamples.push(Counterexample {
                axiom,
                outer: n_prof.clone(),
                inner: inner.to_vec(),
                position,
                element: u.clone(),
                expected: show(expected),
                actual: show(actual),
            });
        }
    };

    for u in params::enumerate(kind, m_prof.total())?.iter() {
        let inner_zero = sys.r_zero(&m_prof, u);
        let lhs = inner_zero.as_ref().map_err(Clone::clone).and_then(|v| sys.r_zero(&n_prof, v));
        let rhs = sys.r_zero(&t_prof, u);
        fail(Axiom::Idempotency, None, u, &rhs, &lhs);

        for i in 1..=k {
            let ri_t = sys.r_part(&t_prof, i, u);
            let lhs = inner_zero.as_ref().map_err(Clone::clone).and_then(|v| sys.r_part(&n_prof, i, v));
            let rhs = ri_t.as_ref().map_err(Clone::clone).and_then(|v| sys.r_zero(&blocks[i - 1], v));
            fail(Axiom::Commutativity, Some((i, 0)), u, &rhs, &lhs);

            for j in 1..=n_prof.part(i) {
                let lhs = sys.r_part(&m_prof, n_prof.partial(i - 1) + j, u);
                let rhs = ri_t.as_ref().map_err(Clone::clone).and_then(|v| sys.r_part(&blocks[i - 1], j, v));
                fail(Axiom::Closure, Some((i, j)), u, &rhs, &lhs);
            }
        }
    }
    Ok(report)
}

/// The restriction maps of one profile, tabulated on element indices.
#[derive(Debug)]
pub struct ProfileTable {
    /// `R_0` image index for each element of `U_N`.
    pub zero: Vec<usize>,
    /// `parts[j - 1][r]` is the index of `R_j(r)`.
    pub parts: Vec<Vec<usize>>,
}

type TableCache = Mutex<HashMap<(ParameterKind, Vec<usize>), Arc<ProfileTable>>>;

/// Cached index tables for the standard system of `kind`.
pub fn profile_table(kind: ParameterKind, p: &CompositionProfile) -> Result<Arc<ProfileTable>> {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (kind, p.parts().to_vec());
    if let Some(t) = cache.lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let elems = params::enumerate(kind, p.total())?;
    let mut zero = Vec::with_capacity(elems.len());
    let mut parts = vec![Vec::with_capacity(elems.len()); p.k()];
    for u in elems.iter() {
        zero.push(params::encode(kind, &r_zero(kind, p, u)?)?);
        for (j, col) in parts.iter_mut().enumerate() {
            col.push(params::encode(kind, &r_part(kind, p, j + 1, u)?)?);
        }
    }
    let table = Arc::new(ProfileTable { zero, parts });
    cache.lock().unwrap().insert(key, table.clone());
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prof(p: &[usize]) -> CompositionProfile {
        CompositionProfile::new(p.to_vec()).unwrap()
    }

    #[test]
    fn linear_examples() {
        let u = ParamElement::linear(5, 4).unwrap();
        let z = r_zero(ParameterKind::Linear, &prof(&[2, 3]), &u).unwrap();
        assert_eq!(z, ParamElement::linear(2, 2).unwrap());
        let u5 = ParamElement::linear(5, 5).unwrap();
        let r1 = r_part(ParameterKind::Linear, &prof(&[2, 3]), 1, &u5).unwrap();
        assert_eq!(r1, ParamElement::linear(2, 2).unwrap());
    }

    #[test]
    fn subset_and_sign_examples() {
        let x = ParamElement::subset(4, &[3]).unwrap();
        let r = r_part(ParameterKind::NonemptySubsets, &prof(&[2, 2]), 1, &x).unwrap();
        assert_eq!(r, ParamElement::subset(2, &[2]).unwrap());

        let s = ParamElement::signs(vec![1, -1, 0]).unwrap();
        let z = r_zero(ParameterKind::SignVectors, &prof(&[2, 1]), &s).unwrap();
        assert_eq!(z, ParamElement::signs(vec![-1, 0]).unwrap());
        let r2 = r_part(ParameterKind::SignVectors, &prof(&[2, 1]), 2, &s).unwrap();
        assert_eq!(r2, ParamElement::signs(vec![0]).unwrap());
    }

    #[test]
    fn subset_single_part_is_whole_set() {
        for n in 1..=4 {
            for x in params::enumerate(ParameterKind::NonemptySubsets, n).unwrap().iter() {
                let r = r_part(ParameterKind::NonemptySubsets, &prof(&[n]), 1, x).unwrap();
                assert_eq!(&r, x);
            }
        }
        let x = ParamElement::subset(3, &[3]).unwrap();
        let r = r_part(ParameterKind::NonemptySubsets, &prof(&[1, 1, 1]), 2, &x).unwrap();
        assert_eq!(r, ParamElement::subset(1, &[1]).unwrap());
    }

    #[test]
    fn identity_profile_is_identity() {
        for kind in ParameterKind::ALL {
            for u in params::enumerate(kind, 3).unwrap().iter() {
                assert_eq!(&r_zero(kind, &prof(&[1, 1, 1]), u).unwrap(), u);
            }
        }
    }

    #[test]
    fn arity_mismatch_is_error() {
        let u = ParamElement::linear(4, 1).unwrap();
        assert_eq!(
            r_zero(ParameterKind::Linear, &prof(&[2, 3]), &u),
            Err(Error::ArityMismatch { expected: 5, found: 4 })
        );
        let u = ParamElement::linear(5, 1).unwrap();
        assert!(r_part(ParameterKind::Linear, &prof(&[2, 3]), 3, &u).is_err());
        assert!(r_zero(ParameterKind::SignVectors, &prof(&[2, 3]), &u).is_err());
        assert_eq!(CompositionProfile::new(vec![]), Err(Error::InvalidProfile));
        assert_eq!(CompositionProfile::new(vec![1, 0]), Err(Error::InvalidProfile));
    }

    #[test]
    fn tree_r_maps_on_t2() {
        let kind = ParameterKind::PlanarTrees;
        let psi = ParamElement::tree(kind, "(|,|,(|,|))".parse().unwrap()).unwrap();
        // keep leaves 0, 1, 3
        let z = r_zero(kind, &prof(&[1, 2]), &psi).unwrap();
        assert_eq!(z.to_string(), "(|,|,|)");
        // keep leaves 1, 2, 3
        let r2 = r_part(kind, &prof(&[1, 2]), 2, &psi).unwrap();
        assert_eq!(r2.to_string(), "(|,(|,|))");
    }

    #[test]
    fn profile_partials() {
        let p = prof(&[2, 3, 1]);
        assert_eq!(p.k(), 3);
        assert_eq!(p.total(), 6);
        assert_eq!((0..=3).map(|i| p.partial(i)).collect::<Vec<_>>(), [0, 2, 5, 6]);
        assert_eq!(p.to_string(), "(3; 2,3,1)");
    }
}
