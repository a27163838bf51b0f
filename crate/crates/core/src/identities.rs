//! Brace, homotopy-G and operad identities checked exactly on cochains.
//!
//! Each `*_holds` function evaluates both sides of one identity on the given
//! cochains. [`run_identities`] drives them on seeded random inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cochain::Cochain;
use crate::error::Result;
use crate::field::Field;
use crate::operad::{brace, gamma, MultContext};

fn sum_shifted<F: Field>(xs: &[&Cochain<F>]) -> usize {
    xs.iter().map(|x| x.shifted_degree()).sum()
}

/// `γ(γ(f; g_1..g_k); h_1..h_M) = γ(f; γ(g_1; h..), ..., γ(g_k; h..))`
pub fn operad_associativity_holds<F: Field>(f: &Cochain<F>, gs: &[&Cochain<F>], hs: &[&Cochain<F>]) -> Result<bool> {
    let lhs = gamma(&gamma(f, gs)?, hs)?;
    let mut inner = Vec::with_capacity(gs.len());
    let mut at = 0;
    for g in gs {
        inner.push(gamma(g, &hs[at..at + g.degree()])?);
        at += g.degree();
    }
    let refs: Vec<&Cochain<F>> = inner.iter().collect();
    Ok(lhs == gamma(f, &refs)?)
}

/// `γ(f; Id, ..., Id) = f = γ(Id; f)`
pub fn unit_laws_hold<F: Field>(f: &Cochain<F>) -> Result<bool> {
    let id = Cochain::identity(f.field().clone(), f.kind(), f.dim())?;
    let ids = vec![&id; f.degree()];
    Ok(gamma(f, &ids)? == *f && gamma(&id, &[f])? == *f)
}

/// Non-decreasing sequences `0 <= i_1 <= j_1 <= ... <= i_m <= j_m <= n`.
fn interleavings(m: usize, n: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(m: usize, n: usize, lo: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in lo..=n {
            for j in i..=n {
                cur.push((i, j));
                go(m, n, j, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(m, n, 0, &mut Vec::new(), &mut out);
    out
}

/// `x{x_1..x_m}{y_1..y_n} = Σ (-1)^ε x{y_1..y_{i_1}, x_1{y_{i_1+1}..y_{j_1}}, ..., y_{j_m+1}..y_n}`
/// with `ε = Σ_p |x_p| (|y_1| + ... + |y_{i_p}|)`.
pub fn brace_relation_holds<F: Field>(x: &Cochain<F>, xs: &[&Cochain<F>], ys: &[&Cochain<F>]) -> Result<bool> {
    let lhs = brace(&brace(x, xs)?, ys)?;
    let mut rhs = Cochain::zero(x.field().clone(), x.kind(), x.dim(), lhs.degree());
    for cuts in interleavings(xs.len(), ys.len()) {
        let mut inner = Vec::with_capacity(xs.len());
        let mut eps = 0;
        for (p, &(i, j)) in cuts.iter().enumerate() {
            inner.push(brace(xs[p], &ys[i..j])?);
            eps += xs[p].shifted_degree() * sum_shifted(&ys[..i]);
        }
        let mut args: Vec<&Cochain<F>> = Vec::new();
        let mut at = 0;
        for (p, &(i, j)) in cuts.iter().enumerate() {
            args.extend_from_slice(&ys[at..i]);
            args.push(&inner[p]);
            at = j;
        }
        args.extend_from_slice(&ys[at..]);
        rhs.accumulate(&brace(x, &args)?, eps % 2 == 1);
    }
    Ok(lhs == rhs)
}

/// `π{x_1, x_2}{y_1..y_n} = Σ_k (-1)^ε π{x_1{y_1..y_k}, x_2{y_{k+1}..y_n}}`
/// with `ε = |x_2| (|y_1| + ... + |y_k|)`.
///
/// In terms of the signed product `a·b = (-1)^{deg a} π{a, b}` this is the
/// distribution of braces over the dot product.
pub fn dot_brace_holds<F: Field>(
    ctx: &MultContext<F>,
    x1: &Cochain<F>,
    x2: &Cochain<F>,
    ys: &[&Cochain<F>],
) -> Result<bool> {
    let pi = ctx.pi();
    let lhs = brace(&brace(pi, &[x1, x2])?, ys)?;
    let mut rhs = ctx.zero(lhs.degree());
    for k in 0..=ys.len() {
        let term = brace(pi, &[&brace(x1, &ys[..k])?, &brace(x2, &ys[k..])?])?;
        rhs.accumulate(&term, x2.shifted_degree() * sum_shifted(&ys[..k]) % 2 == 1);
    }
    Ok(lhs == rhs)
}

/// The compatibility of `d` with braces, for `x{x_1..x_{n+1}}`:
///
/// ```text
/// d(x{x_1..x_{n+1}}) - (dx){x_1..x_{n+1}}
///     - (-1)^{|x|} Σ_i (-1)^{|x_1|+..+|x_{i-1}|} x{x_1, .., dx_i, .., x_{n+1}}
///   = (-1)^{|x||x_1|+1} π{x_1, x{x_2..x_{n+1}}}
///     + (-1)^{|x|} Σ_{i<=n} (-1)^{|x_1|+..+|x_{i-1}|} x{x_1, .., π{x_i, x_{i+1}}, .., x_{n+1}}
///     - π{x{x_1..x_n}, x_{n+1}}
/// ```
///
/// The products on the right are the unsigned `π{a, b} = (-1)^{deg a} a·b`.
pub fn homotopy_differential_holds<F: Field>(ctx: &MultContext<F>, x: &Cochain<F>, xs: &[&Cochain<F>]) -> Result<bool> {
    let count = xs.len();
    assert!(count >= 1, "at least one brace argument");
    let sx = x.shifted_degree();
    let prefix = |i: usize| sum_shifted(&xs[..i]);

    let mut lhs = ctx.diff(&brace(x, xs)?)?;
    lhs.accumulate(&brace(&ctx.diff(x)?, xs)?, true);
    for i in 0..count {
        let dxi = ctx.diff(xs[i])?;
        let mut args = xs.to_vec();
        args[i] = &dxi;
        lhs.accumulate(&brace(x, &args)?, (sx + prefix(i)).is_multiple_of(2));
    }

    let pi = ctx.pi();
    let m = |a: &Cochain<F>, b: &Cochain<F>| brace(pi, &[a, b]);
    let mut rhs = m(xs[0], &brace(x, &xs[1..])?)?;
    if (sx * xs[0].shifted_degree() + 1) % 2 == 1 {
        rhs = rhs.neg();
    }
    for i in 0..count - 1 {
        let prod = m(xs[i], xs[i + 1])?;
        let mut args: Vec<&Cochain<F>> = xs[..i].to_vec();
        args.push(&prod);
        args.extend_from_slice(&xs[i + 2..]);
        rhs.accumulate(&brace(x, &args)?, (sx + prefix(i)) % 2 == 1);
    }
    rhs.accumulate(&m(&brace(x, &xs[..count - 1])?, xs[count - 1])?, true);
    Ok(lhs == rhs)
}

pub fn d_squared_vanishes<F: Field>(ctx: &MultContext<F>, x: &Cochain<F>) -> Result<bool> {
    Ok(ctx.diff(&ctx.diff(x)?)?.is_zero())
}

pub fn dot_associativity_holds<F: Field>(ctx: &MultContext<F>, x: &Cochain<F>, y: &Cochain<F>, z: &Cochain<F>) -> Result<bool> {
    Ok(ctx.dot(&ctx.dot(x, y)?, z)? == ctx.dot(x, &ctx.dot(y, z)?)?)
}

/// `d(x·y) = dx·y + (-1)^{deg x} x·dy`
pub fn leibniz_holds<F: Field>(ctx: &MultContext<F>, x: &Cochain<F>, y: &Cochain<F>) -> Result<bool> {
    let lhs = ctx.diff(&ctx.dot(x, y)?)?;
    let mut rhs = ctx.dot(&ctx.diff(x)?, y)?;
    rhs.accumulate(&ctx.dot(x, &ctx.diff(y)?)?, x.degree() % 2 == 1);
    Ok(lhs == rhs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    OperadAssociativity,
    OperadUnit,
    BraceRelation,
    DotBrace,
    HomotopyDifferential,
    DifferentialSquare,
    DotAssociativity,
    Leibniz,
}

impl Identity {
    pub const ALL: [Identity; 8] = [
        Identity::OperadAssociativity,
        Identity::OperadUnit,
        Identity::BraceRelation,
        Identity::DotBrace,
        Identity::HomotopyDifferential,
        Identity::DifferentialSquare,
        Identity::DotAssociativity,
        Identity::Leibniz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::OperadAssociativity => "operad-associativity",
            Identity::OperadUnit => "operad-unit",
            Identity::BraceRelation => "brace-relation",
            Identity::DotBrace => "dot-brace-distribution",
            Identity::HomotopyDifferential => "homotopy-g-differential",
            Identity::DifferentialSquare => "d-squared-zero",
            Identity::DotAssociativity => "dot-associativity",
            Identity::Leibniz => "d-derivation-of-dot",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityOutcome {
    pub identity: Identity,
    pub instances: usize,
    pub failures: usize,
    /// Sample index and degree pattern of the first failure.
    pub first_failure: Option<(usize, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub seed: u64,
    pub samples: usize,
    pub max_total: usize,
    pub outcomes: Vec<IdentityOutcome>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.failures == 0)
    }

    pub fn outcome(&self, id: Identity) -> Option<&IdentityOutcome> {
        self.outcomes.iter().find(|o| o.identity == id)
    }
}

/// `count` degrees, each at least 1, summing to at most `max_total`.
fn random_degrees(rng: &mut ChaCha8Rng, count: usize, max_total: usize) -> Vec<usize> {
    let mut left = max_total;
    (0..count)
        .map(|i| {
            let reserve = count - i - 1;
            let deg = rng.gen_range(1..=left - reserve);
            left -= deg;
            deg
        })
        .collect()
}

/// Runs every identity on `samples` random instances. Sample `s` draws from
/// its own ChaCha stream `s` of `seed`, so results do not depend on scheduling.
/// `max_total` bounds the sum of the input degrees and must be at least 3.
pub fn run_identities<F: Field>(ctx: &MultContext<F>, samples: usize, seed: u64, max_total: usize) -> Result<IdentityReport> {
    assert!(max_total >= 3, "max_total must allow three inputs");
    let per_sample: Vec<Vec<(Identity, bool, Vec<usize>)>> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s as u64);
            Identity::ALL.iter().map(|&id| run_one(ctx, id, &mut rng, max_total)).collect()
        })
        .collect::<Result<_>>()?;

    let outcomes = Identity::ALL
        .iter()
        .enumerate()
        .map(|(k, &identity)| {
            let mut out = IdentityOutcome { identity, instances: samples, failures: 0, first_failure: None };
            for (s, row) in per_sample.iter().enumerate() {
                let (_, ok, degs) = &row[k];
                if !ok {
                    out.failures += 1;
                    out.first_failure.get_or_insert_with(|| (s, degs.clone()));
                }
            }
            out
        })
        .collect();
    Ok(IdentityReport { seed, samples, max_total, outcomes })
}

fn run_one<F: Field>(
    ctx: &MultContext<F>,
    id: Identity,
    rng: &mut ChaCha8Rng,
    max_total: usize,
) -> Result<(Identity, bool, Vec<usize>)> {
    let (field, kind, dim) = (ctx.field().clone(), ctx.kind(), ctx.dim());
    let draw = |rng: &mut ChaCha8Rng, degs: &[usize]| -> Vec<Cochain<F>> {
        degs.iter().map(|&n| Cochain::random(field.clone(), kind, dim, n, 2, rng)).collect()
    };
    let (ok, degs) = match id {
        Identity::OperadAssociativity => {
            let k = rng.gen_range(1..=2usize);
            let g_degs = random_degrees(rng, k, max_total - 1);
            let m: usize = g_degs.iter().sum();
            let h_degs = random_degrees(rng, m, m + 1);
            let f = draw(rng, &[k]);
            let gs = draw(rng, &g_degs);
            let hs = draw(rng, &h_degs);
            let gs: Vec<&Cochain<F>> = gs.iter().collect();
            let hs: Vec<&Cochain<F>> = hs.iter().collect();
            let degs = [vec![k], g_degs, h_degs].concat();
            (operad_associativity_holds(&f[0], &gs, &hs)?, degs)
        }
        Identity::OperadUnit => {
            let degs = random_degrees(rng, 1, max_total);
            let c = draw(rng, &degs);
            (unit_laws_hold(&c[0])?, degs)
        }
        Identity::BraceRelation => {
            let m = rng.gen_range(1..=2usize);
            let n = rng.gen_range(0..=max_total - 1 - m);
            let degs = random_degrees(rng, 1 + m + n, max_total);
            let c = draw(rng, &degs);
            let xs: Vec<&Cochain<F>> = c[1..=m].iter().collect();
            let ys: Vec<&Cochain<F>> = c[m + 1..].iter().collect();
            (brace_relation_holds(&c[0], &xs, &ys)?, degs)
        }
        Identity::DotBrace => {
            let n = rng.gen_range(0..=max_total - 2);
            let degs = random_degrees(rng, 2 + n, max_total);
            let c = draw(rng, &degs);
            let ys: Vec<&Cochain<F>> = c[2..].iter().collect();
            (dot_brace_holds(ctx, &c[0], &c[1], &ys)?, degs)
        }
        Identity::HomotopyDifferential => {
            let count = rng.gen_range(1..=max_total - 1);
            let degs = random_degrees(rng, 1 + count, max_total);
            let c = draw(rng, &degs);
            let xs: Vec<&Cochain<F>> = c[1..].iter().collect();
            (homotopy_differential_holds(ctx, &c[0], &xs)?, degs)
        }
        Identity::DifferentialSquare => {
            let degs = random_degrees(rng, 1, max_total);
            let c = draw(rng, &degs);
            (d_squared_vanishes(ctx, &c[0])?, degs)
        }
        Identity::DotAssociativity => {
            let degs = random_degrees(rng, 3, max_total);
            let c = draw(rng, &degs);
            (dot_associativity_holds(ctx, &c[0], &c[1], &c[2])?, degs)
        }
        Identity::Leibniz => {
            let degs = random_degrees(rng, 2, max_total);
            let c = draw(rng, &degs);
            (leibniz_holds(ctx, &c[0], &c[1])?, degs)
        }
    };
    Ok((id, ok, degs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraSpec, AlgebraType};
    use crate::field::Rationals;

    #[test]
    fn interleaving_counts() {
        assert_eq!(interleavings(1, 0), vec![vec![(0, 0)]]);
        // pairs i <= j in 0..=2
        assert_eq!(interleavings(1, 2).len(), 6);
        assert_eq!(interleavings(2, 1).len(), 5);
    }

    #[test]
    fn random_degrees_respect_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for count in 1..=4 {
            for _ in 0..50 {
                let d = random_degrees(&mut rng, count, 4);
                assert_eq!(d.len(), count);
                assert!(d.iter().all(|&x| x >= 1));
                assert!(d.iter().sum::<usize>() <= 4);
            }
        }
    }

    #[test]
    fn suite_passes_on_trias() {
        let a = AlgebraSpec::uniform(AlgebraType::Trias, Rationals, 1, &[(0, 0, 0, 1)]).unwrap();
        let ctx = MultContext::new(a).unwrap();
        let report = run_identities(&ctx, 12, 42, 4).unwrap();
        for o in &report.outcomes {
            assert_eq!(o.failures, 0, "{:?}", o);
        }
    }

    #[test]
    fn suite_is_deterministic() {
        let a = AlgebraSpec::uniform(AlgebraType::Tricub, Rationals, 1, &[(0, 0, 0, 1)]).unwrap();
        let ctx = MultContext::new(a).unwrap();
        assert_eq!(run_identities(&ctx, 4, 7, 4).unwrap(), run_identities(&ctx, 4, 7, 4).unwrap());
    }
}
