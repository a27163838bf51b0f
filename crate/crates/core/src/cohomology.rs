//! Cohomology of the cochain complex `(C^*(A, A), d)` with exact arithmetic.
//!
//! There are no cochains of degree 0, so `H^1 = ker d^1`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::cochain::{pow, Cochain};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Echelon, Insert, SparseMatrix, SparseVec};
use crate::operad::MultContext;
use crate::params::{self, ParameterKind};
use crate::preoperadic::{profile_table, CompositionProfile};

/// The matrix of `d^n : C^n → C^{n+1}` in the flattened cochain coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialMatrix<F: Field> {
    pub degree: usize,
    pub matrix: SparseMatrix<F>,
}

fn dim_cochains(kind: ParameterKind, d: usize, n: usize) -> Result<usize> {
    Ok(params::cardinality(kind, n)? * pow(d, n + 1))
}

/// Per output row `(r, x)`: `d` accumulators, one per output coordinate.
type RowBlock<E> = Vec<BTreeMap<usize, E>>;

fn push<F: Field>(f: &F, acc: &mut BTreeMap<usize, F::Elem>, col: usize, c: &F::Elem, negative: bool) {
    let e = acc.entry(col).or_insert_with(|| f.zero());
    *e = if negative { f.sub(e, c) } else { f.add(e, c) };
}

/// Adds the rows of `f ↦ γ(f; Id, ..., g at slot s, ..., Id)` for a fixed
/// degree-2 cochain `g`, `f` of degree `n`.
fn add_outer<F: Field>(
    ctx: &MultContext<F>,
    n: usize,
    s: usize,
    r: usize,
    digits: &[usize],
    block: &mut RowBlock<F::Elem>,
    negative: bool,
) -> Result<()> {
    let field = ctx.field();
    let d = ctx.dim();
    let mut parts = vec![1; n];
    parts[s] = 2;
    let table = profile_table(ctx.kind(), &CompositionProfile::new(parts)?)?;
    let r0 = table.zero[r];
    let pi = ctx.pi();
    let prod = pi.value(table.parts[s][r], digits[s] * d + digits[s + 1]);
    let n_in = pow(d, n);
    for (t, c) in prod.iter().enumerate() {
        if field.is_zero(c) {
            continue;
        }
        let mut b = 0;
        for (p, &x) in digits.iter().enumerate() {
            if p == s + 1 {
                continue;
            }
            b = b * d + if p == s { t } else { x };
        }
        for (o, acc) in block.iter_mut().enumerate() {
            push(field, acc, (r0 * n_in + b) * d + o, c, negative);
        }
    }
    Ok(())
}

/// Adds the rows of `g ↦ γ(π; g, Id)` (`slot = 0`) or `g ↦ γ(π; Id, g)`
/// (`slot = 1`), `g` of degree `n`.
fn add_inner<F: Field>(
    ctx: &MultContext<F>,
    n: usize,
    slot: usize,
    r: usize,
    digits: &[usize],
    block: &mut RowBlock<F::Elem>,
    negative: bool,
) -> Result<()> {
    let field = ctx.field();
    let d = ctx.dim();
    let parts = if slot == 0 { vec![n, 1] } else { vec![1, n] };
    let table = profile_table(ctx.kind(), &CompositionProfile::new(parts)?)?;
    let r0 = table.zero[r];
    let rg = table.parts[slot][r];
    let (inner, other) = if slot == 0 { (&digits[..n], digits[n]) } else { (&digits[1..], digits[0]) };
    let x = inner.iter().fold(0, |a, &t| a * d + t);
    let n_in = pow(d, n);
    for t in 0..d {
        let col = (rg * n_in + x) * d + t;
        let pair = if slot == 0 { t * d + other } else { other * d + t };
        for (o, c) in ctx.pi().value(r0, pair).iter().enumerate() {
            if !field.is_zero(c) {
                push(field, &mut block[o], col, c, negative);
            }
        }
    }
    Ok(())
}

/// Assembles `d^n` from `dx = γ(π; x, Id) + (-1)^{n-1} γ(π; Id, x)
/// - (-1)^{n-1} Σ_s (-1)^s γ(x; Id, .., π at s, .., Id)`.
pub fn matrix_of_d<F: Field>(ctx: &MultContext<F>, n: usize) -> Result<DifferentialMatrix<F>> {
    if n == 0 {
        return Err(Error::InvalidArity(0));
    }
    let (kind, d) = (ctx.kind(), ctx.dim());
    let n_params = params::cardinality(kind, n + 1)?;
    let n_in = pow(d, n + 1);
    let odd = (n - 1) % 2 == 1;
    let rows: Vec<Vec<SparseVec<F::Elem>>> = (0..n_params)
        .into_par_iter()
        .map(|r| {
            let mut out = Vec::with_capacity(n_in * d);
            for x in 0..n_in {
                let digits = digits_of(x, d, n + 1);
                let mut block: RowBlock<F::Elem> = vec![BTreeMap::new(); d];
                add_inner(ctx, n, 0, r, &digits, &mut block, false)?;
                add_inner(ctx, n, 1, r, &digits, &mut block, odd)?;
                for s in 0..n {
                    add_outer(ctx, n, s, r, &digits, &mut block, odd == (s % 2 == 1))?;
                }
                let f = ctx.field();
                out.extend(
                    block
                        .into_iter()
                        .map(|acc| acc.into_iter().filter(|(_, v)| !f.is_zero(v)).collect()),
                );
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let matrix = SparseMatrix::from_rows(ctx.field().clone(), dim_cochains(kind, d, n)?, rows.concat())?;
    Ok(DifferentialMatrix { degree: n, matrix })
}

fn digits_of(mut x: usize, d: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = x % d;
        x /= d;
    }
    out
}

fn to_sparse<F: Field>(c: &Cochain<F>) -> SparseVec<F::Elem> {
    let f = c.field();
    c.data()
        .iter()
        .enumerate()
        .filter(|(_, v)| !f.is_zero(v))
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

fn from_sparse<F: Field>(ctx: &MultContext<F>, degree: usize, v: &[(usize, F::Elem)]) -> Cochain<F> {
    let mut c = ctx.zero(degree);
    for (i, x) in v {
        c.data_mut()[*i] = x.clone();
    }
    c
}

/// A cohomology class given by a cocycle representative.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyClass<F: Field> {
    rep: Cochain<F>,
}

impl<F: Field> CohomologyClass<F> {
    /// Fails with [`Error::NotACocycle`] unless `d(rep) = 0`.
    pub fn new(ctx: &MultContext<F>, rep: Cochain<F>) -> Result<Self> {
        if !ctx.diff(&rep)?.is_zero() {
            return Err(Error::NotACocycle);
        }
        Ok(Self { rep })
    }

    pub fn degree(&self) -> usize {
        self.rep.degree()
    }

    pub fn representative(&self) -> &Cochain<F> {
        &self.rep
    }
}

/// Result of a coboundary solve `d b = c`.
#[derive(Clone, Debug, PartialEq)]
pub enum Preimage<F: Field> {
    Found(Cochain<F>),
    /// `c = 0` in degree 1, where no cochains of lower degree exist.
    ZeroInDegreeOne,
    NotACoboundary,
}

impl<F: Field> Preimage<F> {
    pub fn is_coboundary(&self) -> bool {
        !matches!(self, Preimage::NotACoboundary)
    }
}

/// Data computed for one degree `n`.
#[derive(Clone, Debug)]
pub struct DegreeData<F: Field> {
    pub degree: usize,
    pub cochain_dim: usize,
    /// Rank of `d^{n-1}` (0 for `n = 1`).
    pub rank_in: usize,
    /// Rank of `d^n`.
    pub rank_out: usize,
    /// `rank_out` recomputed by the preimage-tracking elimination.
    pub rank_out_echelon: usize,
    pub classes: Vec<CohomologyClass<F>>,
    /// Image of `d^{n-1}`, generators labelled by columns of `d^{n-1}`.
    image: Echelon<F>,
    /// Image plus representatives; representative `i` has label `image_gens + i`.
    span: Echelon<F>,
    image_gens: usize,
}

impl<F: Field> DegreeData<F> {
    pub fn nullity(&self) -> usize {
        self.cochain_dim - self.rank_out
    }

    pub fn dim(&self) -> usize {
        self.nullity() - self.rank_in
    }
}

/// Cohomology up to a maximal degree, with the structure needed for
/// coboundary tests and class coordinates.
#[derive(Clone, Debug)]
pub struct Cohomology<F: Field> {
    ctx: MultContext<F>,
    matrices: Vec<DifferentialMatrix<F>>,
    degrees: Vec<DegreeData<F>>,
}

impl<F: Field> Cohomology<F> {
    pub fn compute(ctx: &MultContext<F>, max_degree: usize) -> Result<Self> {
        if max_degree == 0 {
            return Err(Error::InvalidArity(0));
        }
        let matrices: Vec<DifferentialMatrix<F>> =
            (1..=max_degree).into_par_iter().map(|n| matrix_of_d(ctx, n)).collect::<Result<_>>()?;
        let degrees = (1..=max_degree)
            .into_par_iter()
            .map(|n| {
                let incoming = (n > 1).then(|| &matrices[n - 2].matrix);
                degree_data(ctx, n, incoming, &matrices[n - 1].matrix)
            })
            .collect::<Result<_>>()?;
        Ok(Self { ctx: ctx.clone(), matrices, degrees })
    }

    pub fn context(&self) -> &MultContext<F> {
        &self.ctx
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.len()
    }

    pub fn matrix(&self, n: usize) -> Option<&DifferentialMatrix<F>> {
        n.checked_sub(1).and_then(|i| self.matrices.get(i))
    }

    pub fn degree(&self, n: usize) -> Result<&DegreeData<F>> {
        n.checked_sub(1)
            .and_then(|i| self.degrees.get(i))
            .ok_or(Error::IndexOutOfRange { index: n, max: self.max_degree() })
    }

    /// `(n, dim H^n)` for `n = 1..=max_degree`.
    pub fn dims(&self) -> Vec<(usize, usize)> {
        self.degrees.iter().map(|g| (g.degree, g.dim())).collect()
    }

    pub fn representatives(&self, n: usize) -> Result<&[CohomologyClass<F>]> {
        Ok(&self.degree(n)?.classes)
    }

    pub fn coboundary_preimage(&self, c: &Cochain<F>) -> Result<Preimage<F>> {
        self.ctx.pi().check_same(c)?;
        let n = c.degree();
        if n == 1 {
            return Ok(if c.is_zero() { Preimage::ZeroInDegreeOne } else { Preimage::NotACoboundary });
        }
        let data = self.degree(n)?;
        Ok(match data.image.solve(&to_sparse(c)) {
            Some(x) => Preimage::Found(from_sparse(&self.ctx, n - 1, &x)),
            None => Preimage::NotACoboundary,
        })
    }

    pub fn is_coboundary(&self, c: &Cochain<F>) -> Result<bool> {
        Ok(self.coboundary_preimage(c)?.is_coboundary())
    }

    /// Coordinates of the class of cocycle `c` in the representative basis.
    pub fn coordinates(&self, c: &Cochain<F>) -> Result<Vec<F::Elem>> {
        self.ctx.pi().check_same(c)?;
        let data = self.degree(c.degree())?;
        let x = data.span.solve(&to_sparse(c)).ok_or(Error::NotACocycle)?;
        let f = self.ctx.field();
        let mut out = vec![f.zero(); data.classes.len()];
        for (label, v) in x {
            if let Some(i) = label.checked_sub(data.image_gens) {
                out[i] = v;
            }
        }
        Ok(out)
    }

    fn check_class(&self, a: &CohomologyClass<F>) -> Result<()> {
        self.ctx.pi().check_same(a.representative())
    }

    pub fn induced_dot(&self, a: &CohomologyClass<F>, b: &CohomologyClass<F>) -> Result<CohomologyClass<F>> {
        self.check_class(a)?;
        self.check_class(b)?;
        CohomologyClass::new(&self.ctx, self.ctx.dot(a.representative(), b.representative())?)
    }

    pub fn induced_bracket(&self, a: &CohomologyClass<F>, b: &CohomologyClass<F>) -> Result<CohomologyClass<F>> {
        self.check_class(a)?;
        self.check_class(b)?;
        let br = crate::operad::bracket(a.representative(), b.representative())?;
        CohomologyClass::new(&self.ctx, br)
    }

    /// Checks the Gerstenhaber laws on representatives up to coboundary, for
    /// all ordered pairs and triples whose degrees sum to at most `max_degree`
    /// (capped at the computed range).
    pub fn check_g_algebra(&self, max_degree: usize) -> Result<GAlgebraReport> {
        let top = max_degree.min(self.max_degree());
        let reps: Vec<(usize, usize, &CohomologyClass<F>)> = (1..top)
            .flat_map(|n| self.degrees[n - 1].classes.iter().enumerate().map(move |(i, c)| (n, i, c)))
            .collect();
        let mut jobs = Vec::new();
        for a in &reps {
            for b in &reps {
                if a.0 + b.0 <= top {
                    jobs.push(vec![*a, *b]);
                }
                for c in &reps {
                    if a.0 + b.0 + c.0 <= top {
                        jobs.push(vec![*a, *b, *c]);
                    }
                }
            }
        }
        jobs.sort_by_key(|j| j.len());
        let checks: Vec<Vec<GCheck>> = jobs.par_iter().map(|job| self.g_checks(job)).collect::<Result<_>>()?;
        Ok(GAlgebraReport { max_degree: top, checks: checks.concat() })
    }

    fn g_checks(&self, job: &[(usize, usize, &CohomologyClass<F>)]) -> Result<Vec<GCheck>> {
        let ctx = &self.ctx;
        let label = |law| GCheck {
            law,
            degrees: job.iter().map(|j| j.0).collect(),
            indices: job.iter().map(|j| j.1).collect(),
            passed: false,
        };
        let br = crate::operad::bracket;
        let x = job[0].2.representative();
        let y = job[1].2.representative();
        if job.len() == 2 {
            // x·y - (-1)^{deg x deg y} y·x
            let mut c = ctx.dot(x, y)?;
            c.accumulate(&ctx.dot(y, x)?, (x.degree() * y.degree()).is_multiple_of(2));
            return Ok(vec![GCheck { passed: self.is_coboundary(&c)?, ..label(GLaw::Commutativity) }]);
        }
        let z = job[2].2.representative();
        let (sx, sy) = (x.shifted_degree(), y.shifted_degree());

        // [x, y·z] - [x,y]·z - (-1)^{|x| deg y} y·[x,z]
        let mut der = br(x, &ctx.dot(y, z)?)?;
        der.accumulate(&ctx.dot(&br(x, y)?, z)?, true);
        der.accumulate(&ctx.dot(y, &br(x, z)?)?, (sx * y.degree()).is_multiple_of(2));

        // [x,[y,z]] - [[x,y],z] - (-1)^{|x||y|} [y,[x,z]]
        let mut jac = br(x, &br(y, z)?)?;
        jac.accumulate(&br(&br(x, y)?, z)?, true);
        jac.accumulate(&br(y, &br(x, z)?)?, sx * sy % 2 == 0);

        Ok(vec![
            GCheck { passed: self.is_coboundary(&der)?, ..label(GLaw::Derivation) },
            GCheck { passed: self.is_coboundary(&jac)?, ..label(GLaw::Jacobi) },
        ])
    }
}

fn degree_data<F: Field>(
    ctx: &MultContext<F>,
    n: usize,
    incoming: Option<&SparseMatrix<F>>,
    outgoing: &SparseMatrix<F>,
) -> Result<DegreeData<F>> {
    let field = ctx.field().clone();
    let cochain_dim = outgoing.ncols();
    let rank_out = linalg::rank(outgoing);
    let rank_in = incoming.map_or(0, linalg::rank);

    let mut image = Echelon::new(field.clone());
    let mut image_gens = 0;
    if let Some(m) = incoming {
        for (j, col) in m.columns().iter().enumerate() {
            image.insert(j, col);
        }
        image_gens = m.ncols();
    }
    let kernel = linalg::kernel_basis(outgoing);
    let rank_out_echelon = cochain_dim - kernel.len();

    let mut span = image.clone();
    let mut classes = Vec::new();
    for k in &kernel {
        if span.insert(image_gens + classes.len(), k) == Insert::Independent {
            classes.push(CohomologyClass { rep: from_sparse(ctx, n, k) });
        }
    }
    Ok(DegreeData { degree: n, cochain_dim, rank_in, rank_out, rank_out_echelon, classes, image, span, image_gens })
}

/// `(n, dim H^n)` for `n = 1..=max_degree`.
pub fn cohomology_dims<F: Field>(ctx: &MultContext<F>, max_degree: usize) -> Result<Vec<(usize, usize)>> {
    Ok(Cohomology::compute(ctx, max_degree)?.dims())
}

pub fn cocycle_representatives<F: Field>(ctx: &MultContext<F>, n: usize) -> Result<Vec<CohomologyClass<F>>> {
    Ok(Cohomology::compute(ctx, n)?.representatives(n)?.to_vec())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GLaw {
    Commutativity,
    Derivation,
    Jacobi,
}

impl GLaw {
    pub fn name(self) -> &'static str {
        match self {
            GLaw::Commutativity => "graded-commutativity",
            GLaw::Derivation => "bracket-derivation",
            GLaw::Jacobi => "graded-jacobi",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GCheck {
    pub law: GLaw,
    pub degrees: Vec<usize>,
    /// Index of each representative within its degree.
    pub indices: Vec<usize>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GAlgebraReport {
    pub max_degree: usize,
    pub checks: Vec<GCheck>,
}

impl GAlgebraReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// `(checked, failed)` for one law.
    pub fn tally(&self, law: GLaw) -> (usize, usize) {
        let of_law = self.checks.iter().filter(|c| c.law == law);
        (of_law.clone().count(), of_law.filter(|c| !c.passed).count())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraSpec, AlgebraType};
    use crate::field::{PrimeField, Rationals};
    use crate::params::OpSymbol;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn trias(dim: usize) -> MultContext<Rationals> {
        let table: &[(usize, usize, usize, i64)] =
            if dim == 1 { &[(0, 0, 0, 1)] } else { &[(0, 0, 0, 1), (0, 1, 1, 1)] };
        MultContext::new(AlgebraSpec::uniform(AlgebraType::Trias, Rationals, dim, table).unwrap()).unwrap()
    }

    #[test]
    fn matrix_shape_and_pi() {
        let ctx = trias(1);
        let m = matrix_of_d(&ctx, 2).unwrap();
        assert_eq!((m.matrix.nrows(), m.matrix.ncols()), (11, 3));
        let v = m.matrix.apply(ctx.pi().data()).unwrap();
        assert!(v.iter().all(|x| Rationals.is_zero(x)));
    }

    #[test]
    fn matrix_matches_dense_differential() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for ctx in [trias(1), trias(2)] {
            for n in 1..=3 {
                let m = matrix_of_d(&ctx, n).unwrap();
                for _ in 0..3 {
                    let x = Cochain::random(Rationals, ctx.kind(), ctx.dim(), n, 2, &mut rng);
                    assert_eq!(m.matrix.apply(x.data()).unwrap(), ctx.diff(&x).unwrap().into_data());
                }
            }
        }
    }

    #[test]
    fn zero_algebra_has_full_cohomology() {
        let a = AlgebraSpec::zero(AlgebraType::Didend, Rationals, 1).unwrap();
        let ctx = MultContext::new(a).unwrap();
        let h = Cohomology::compute(&ctx, 3).unwrap();
        assert_eq!(h.dims(), vec![(1, 1), (2, 2), (3, 3)]);
    }

    #[test]
    fn representatives_and_preimages() {
        let ctx = trias(1);
        let h = Cohomology::compute(&ctx, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=3 {
            let data = h.degree(n).unwrap();
            assert_eq!(data.classes.len(), data.dim());
            assert_eq!(data.rank_out, data.rank_out_echelon);
            for c in &data.classes {
                assert!(ctx.diff(c.representative()).unwrap().is_zero());
                assert_eq!(h.coboundary_preimage(c.representative()).unwrap(), Preimage::NotACoboundary);
            }
        }
        let b = Cochain::random(Rationals, ctx.kind(), 1, 2, 2, &mut rng);
        let db = ctx.diff(&b).unwrap();
        match h.coboundary_preimage(&db).unwrap() {
            Preimage::Found(x) => assert_eq!(ctx.diff(&x).unwrap(), db),
            other => panic!("{other:?}"),
        }
        assert_eq!(h.coboundary_preimage(&ctx.zero(1)).unwrap(), Preimage::ZeroInDegreeOne);
    }

    #[test]
    fn coordinates_of_representatives() {
        let ctx = trias(1);
        let h = Cohomology::compute(&ctx, 2).unwrap();
        for n in 1..=2 {
            for (i, c) in h.representatives(n).unwrap().iter().enumerate() {
                let coords = h.coordinates(c.representative()).unwrap();
                for (j, v) in coords.iter().enumerate() {
                    assert_eq!(*v, Rationals.from_i64((i == j) as i64));
                }
            }
        }
    }

    #[test]
    fn g_algebra_on_didend() {
        let a = AlgebraSpec::from_entries(AlgebraType::Didend, Rationals, 1, &[(OpSymbol::Prec, 0, 0, 0, 1)]).unwrap();
        let ctx = MultContext::new(a).unwrap();
        let h = Cohomology::compute(&ctx, 3).unwrap();
        assert!(h.check_g_algebra(3).unwrap().passed());
    }

    #[test]
    fn prime_field_dims_agree() {
        let a = AlgebraSpec::uniform(AlgebraType::Trias, PrimeField::new(101).unwrap(), 1, &[(0, 0, 0, 1)]).unwrap();
        let ctx = MultContext::new(a).unwrap();
        let fp = cohomology_dims(&ctx, 3).unwrap();
        assert_eq!(fp, cohomology_dims(&trias(1), 3).unwrap());
    }
}
