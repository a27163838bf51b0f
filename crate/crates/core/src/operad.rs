//! Operadic composition on cochains and the brace calculus built from it.
//!
//! Sign convention for braces: in `x{x_1, ..., x_n}` the placement of `x_p`
//! contributes `(-1)^{|x_p| i_p}` where `i_p` counts the inputs of the composite
//! operation lying in front of the first input of `x_p`. This counts the
//! inputs of the earlier `x_q`, not just the slots of `x` they occupy.

use rayon::prelude::*;

use crate::algebra::{AlgebraSpec, AlgebraType};
use crate::cochain::{pow, tensor_terms, Cochain};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::params::{self, ParamElement, ParameterKind};
use crate::preoperadic::{profile_table, CompositionProfile};

/// `γ(f; g_1, ..., g_k)(r; x_1..x_N) = f(R_0 r; g_1(R_1 r; ..), ..., g_k(R_k r; ..))`
pub fn gamma<F: Field>(f: &Cochain<F>, gs: &[&Cochain<F>]) -> Result<Cochain<F>> {
    if gs.len() != f.degree() {
        return Err(Error::LengthMismatch { expected: f.degree(), found: gs.len() });
    }
    for g in gs {
        f.check_same(g)?;
    }
    let field = f.field().clone();
    let (kind, d) = (f.kind(), f.dim());
    let profile = CompositionProfile::new(gs.iter().map(|g| g.degree()).collect())?;
    let total = profile.total();
    let table = profile_table(kind, &profile)?;
    let mut out = Cochain::zero(field.clone(), kind, d, total);
    let n_in = pow(d, total);
    // digit weights: block i of the input tuple is (x / shift_i) % width_i
    let shifts: Vec<usize> = (1..=gs.len()).map(|i| pow(d, total - profile.partial(i))).collect();
    let widths: Vec<usize> = gs.iter().map(|g| g.inputs()).collect();

    out.data_mut()
        .par_chunks_mut(n_in * d)
        .enumerate()
        .for_each(|(r, chunk)| {
            let r0 = table.zero[r];
            for x in 0..n_in {
                let vs: Vec<&[F::Elem]> = gs
                    .iter()
                    .enumerate()
                    .map(|(i, g)| g.value(table.parts[i][r], (x / shifts[i]) % widths[i]))
                    .collect();
                let slot = &mut chunk[x * d..(x + 1) * d];
                for (b, c) in tensor_terms(&field, d, &vs) {
                    for (o, v) in slot.iter_mut().zip(f.value(r0, b)) {
                        field.add_mul_assign(o, &c, v);
                    }
                }
            }
        });
    Ok(out)
}

/// Strictly increasing `n`-subsets of `0..m`, in lexicographic order.
pub(crate) fn placements(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for s in start..m {
            if m - s < n - cur.len() {
                break;
            }
            cur.push(s);
            go(s + 1, m, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, n, &mut Vec::new(), &mut out);
    out
}

/// The brace `x{x_1, ..., x_n}`: signed sum over all order-preserving
/// substitutions of the `x_p` into the slots of `x`, other slots taking the
/// identity. Empty when `n > deg x`.
pub fn brace<F: Field>(x: &Cochain<F>, xs: &[&Cochain<F>]) -> Result<Cochain<F>> {
    for y in xs {
        x.check_same(y)?;
    }
    if xs.is_empty() {
        return Ok(x.clone());
    }
    let m = x.degree();
    let degree = xs.iter().map(|y| y.degree()).sum::<usize>() + m - xs.len();
    let mut out = Cochain::zero(x.field().clone(), x.kind(), x.dim(), degree);
    if xs.len() > m {
        return Ok(out);
    }
    let id = Cochain::identity(x.field().clone(), x.kind(), x.dim())?;
    for slots in placements(m, xs.len()) {
        let mut args: Vec<&Cochain<F>> = vec![&id; m];
        let mut eps = 0usize;
        let mut before = 0usize;
        for (p, (&s, y)) in slots.iter().zip(xs).enumerate() {
            args[s] = y;
            // inputs in front: s - p identity slots plus the inputs of x_1..x_{p-1}
            eps += y.shifted_degree() * (s - p + before);
            before += y.degree();
        }
        out.accumulate(&gamma(x, &args)?, eps % 2 == 1);
    }
    Ok(out)
}

/// `x ∘ y = x{y}`
pub fn circ<F: Field>(x: &Cochain<F>, y: &Cochain<F>) -> Result<Cochain<F>> {
    brace(x, &[y])
}

/// `[x, y] = x ∘ y - (-1)^{|x||y|} y ∘ x`
pub fn bracket<F: Field>(x: &Cochain<F>, y: &Cochain<F>) -> Result<Cochain<F>> {
    let mut out = circ(x, y)?;
    let sign = x.shifted_degree() * y.shifted_degree() % 2 == 1;
    out.accumulate(&circ(y, x)?, !sign);
    Ok(out)
}

/// An algebra together with its canonical multiplication and unit cochain.
#[derive(Clone, Debug)]
pub struct MultContext<F: Field> {
    alg: AlgebraSpec<F>,
    pi: Cochain<F>,
    id: Cochain<F>,
}

impl<F: Field> MultContext<F> {
    /// Fails with [`Error::NotAMultiplication`] unless `π ∘ π = 0`.
    pub fn new(alg: AlgebraSpec<F>) -> Result<Self> {
        let pi = alg.canonical_multiplication();
        let id = alg.identity_cochain();
        if !circ(&pi, &pi)?.is_zero() {
            return Err(Error::NotAMultiplication);
        }
        Ok(Self { alg, pi, id })
    }

    pub fn algebra(&self) -> &AlgebraSpec<F> {
        &self.alg
    }

    pub fn pi(&self) -> &Cochain<F> {
        &self.pi
    }

    pub fn id(&self) -> &Cochain<F> {
        &self.id
    }

    pub fn field(&self) -> &F {
        self.alg.field()
    }

    pub fn kind(&self) -> ParameterKind {
        self.alg.parameter_kind()
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn zero(&self, degree: usize) -> Cochain<F> {
        Cochain::zero(self.field().clone(), self.kind(), self.dim(), degree)
    }

    fn check(&self, x: &Cochain<F>) -> Result<()> {
        self.pi.check_same(x)
    }

    /// `x · y = (-1)^{deg x} π{x, y}`
    pub fn dot(&self, x: &Cochain<F>, y: &Cochain<F>) -> Result<Cochain<F>> {
        self.check(x)?;
        self.check(y)?;
        let b = brace(&self.pi, &[x, y])?;
        Ok(if x.degree() % 2 == 1 { b.neg() } else { b })
    }

    /// `dx = [π, x] = π ∘ x - (-1)^{|x|} x ∘ π`
    pub fn diff(&self, x: &Cochain<F>) -> Result<Cochain<F>> {
        self.check(x)?;
        bracket(&self.pi, x)
    }
}

/// The explicit trialgebra coboundary `δ = Σ (-1)^i δ_i` built from leaf
/// deletion and the boundary operation symbols of each tree.
pub fn delta_trias<F: Field>(alg: &AlgebraSpec<F>, f: &Cochain<F>) -> Result<Cochain<F>> {
    if alg.ty() != AlgebraType::Trias {
        return Err(Error::UnsupportedForType(alg.ty().name().into()));
    }
    let kind = ParameterKind::PlanarTrees;
    if f.kind() != kind || f.dim() != alg.dim() || f.field() != alg.field() {
        return Err(Error::MixedAlgebras);
    }
    let field = alg.field();
    let d = alg.dim();
    let n = f.degree();
    let mut out = Cochain::zero(field.clone(), kind, d, n + 1);
    let n_in = pow(d, n + 1);
    let trees = params::enumerate(kind, n + 1)?;

    for (u, elem) in trees.iter().enumerate() {
        let psi = elem.as_tree().expect("tree kind");
        // per face i: (index of d_i ψ, symbol ∘_i)
        let faces: Vec<(usize, _)> = (0..=n + 1)
            .map(|i| {
                let face = ParamElement::PlanarTree(psi.delete_leaf(i)?);
                Ok((params::encode(kind, &face)?, psi.boundary_symbol(i)?))
            })
            .collect::<Result<_>>()?;

        for x in 0..n_in {
            let digits = digits_of(x, d, n + 1);
            let mut acc = vec![field.zero(); d];
            for (i, &(face, op)) in faces.iter().enumerate() {
                let term = if i == 0 {
                    let rest = f.value(face, index_of(&digits[1..], d));
                    alg.multiply(op, &alg.unit_vector(digits[0]), rest)?
                } else if i == n + 1 {
                    let head = f.value(face, index_of(&digits[..n], d));
                    alg.multiply(op, head, &alg.unit_vector(digits[n]))?
                } else {
                    let prod = alg.basis_product(op, digits[i - 1], digits[i])?;
                    let mut v = vec![field.zero(); d];
                    for (b, c) in prod.iter().enumerate() {
                        if field.is_zero(c) {
                            continue;
                        }
                        let mut merged = digits[..i - 1].to_vec();
                        merged.push(b);
                        merged.extend_from_slice(&digits[i + 1..]);
                        for (o, w) in v.iter_mut().zip(f.value(face, index_of(&merged, d))) {
                            field.add_mul_assign(o, c, w);
                        }
                    }
                    v
                };
                for (a, t) in acc.iter_mut().zip(&term) {
                    *a = if i % 2 == 1 { field.sub(a, t) } else { field.add(a, t) };
                }
            }
            out.value_mut(u, x).clone_from_slice(&acc);
        }
    }
    Ok(out)
}

fn digits_of(mut x: usize, d: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = x % d;
        x /= d;
    }
    out
}

fn index_of(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &t| acc * d + t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::params::OpSymbol;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn didend1() -> AlgebraSpec<Rationals> {
        AlgebraSpec::from_entries(AlgebraType::Didend, Rationals, 1, &[(OpSymbol::Prec, 0, 0, 0, 1)]).unwrap()
    }

    #[test]
    fn placements_enumerate_subsets() {
        assert_eq!(placements(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(placements(2, 0), vec![Vec::<usize>::new()]);
        assert!(placements(1, 2).is_empty());
    }

    #[test]
    fn unit_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for kind in ParameterKind::ALL {
            let id = Cochain::identity(Rationals, kind, 2).unwrap();
            let f = Cochain::random(Rationals, kind, 2, 2, 3, &mut rng);
            assert_eq!(gamma(&f, &[&id, &id]).unwrap(), f, "{kind}");
            assert_eq!(gamma(&id, &[&f]).unwrap(), f, "{kind}");
        }
    }

    #[test]
    fn gamma_argument_errors() {
        let id = Cochain::identity(Rationals, ParameterKind::Linear, 1).unwrap();
        let f = Cochain::zero(Rationals, ParameterKind::Linear, 1, 2);
        assert!(matches!(gamma(&f, &[&id]), Err(Error::LengthMismatch { .. })));
        let other = Cochain::identity(Rationals, ParameterKind::SignVectors, 1).unwrap();
        assert_eq!(gamma(&f, &[&id, &other]), Err(Error::MixedAlgebras));
    }

    #[test]
    fn brace_small_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let kind = ParameterKind::PlanarTrees;
        let id = Cochain::identity(Rationals, kind, 1).unwrap();
        let x1 = Cochain::random(Rationals, kind, 1, 1, 3, &mut rng);
        let x2 = Cochain::random(Rationals, kind, 1, 2, 3, &mut rng);
        let y = Cochain::random(Rationals, kind, 1, 1, 3, &mut rng);
        assert_eq!(brace(&x2, &[]).unwrap(), x2);
        assert_eq!(brace(&x1, &[&y]).unwrap(), gamma(&x1, &[&y]).unwrap());
        let want = gamma(&x2, &[&y, &id]).unwrap().add(&gamma(&x2, &[&id, &y]).unwrap()).unwrap();
        assert_eq!(brace(&x2, &[&y]).unwrap(), want);
        // more arguments than slots: empty sum in the formal degree
        let z = brace(&x1, &[&y, &y]).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.degree(), 1);
    }

    #[test]
    fn circ_with_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in ParameterKind::ALL {
            let id = Cochain::identity(Rationals, kind, 1).unwrap();
            for deg in 1..=3 {
                let x = Cochain::random(Rationals, kind, 1, deg, 3, &mut rng);
                let c = circ(&x, &id).unwrap();
                // each of the deg placements reproduces x with sign +1
                assert_eq!(c, x.scale(&Rationals.from_i64(deg as i64)), "{kind} {deg}");
            }
        }
    }

    #[test]
    fn context_rejects_invalid_algebra() {
        // ⊣ alone breaking associativity of ⊣
        let a = AlgebraSpec::from_entries(AlgebraType::Trias, Rationals, 2, &[(OpSymbol::Left, 0, 1, 1, 1)]).unwrap();
        assert!(matches!(MultContext::new(a), Err(Error::NotAMultiplication)));
    }

    #[test]
    fn dot_identity_on_didend_fixture() {
        let ctx = MultContext::new(didend1()).unwrap();
        let id = ctx.id().clone();
        let p = ctx.dot(&id, &id).unwrap();
        assert_eq!(p.degree(), 2);
        // π{Id, Id} = γ(π; Id, Id) with ε = 0, then the sign (-1)^{deg Id} = -1
        for u in 0..2 {
            assert_eq!(p.value(u, 0), &[Rationals.from_i64(-1)]);
        }
    }

    #[test]
    fn diff_of_pi_vanishes() {
        let ctx = MultContext::new(didend1()).unwrap();
        assert!(ctx.diff(ctx.pi()).unwrap().is_zero());
    }

    #[test]
    fn delta_requires_trias() {
        let a = didend1();
        let f = Cochain::zero(Rationals, ParameterKind::Linear, 1, 1);
        assert!(matches!(delta_trias(&a, &f), Err(Error::UnsupportedForType(_))));
    }
    fn trias2() -> AlgebraSpec<Rationals> {
        AlgebraSpec::uniform(AlgebraType::Trias, Rationals, 2, &[(0, 0, 0, 1), (0, 1, 1, 1)]).unwrap()
    }

    #[test]
    fn differential_squares_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ctx = MultContext::new(trias2()).unwrap();
        for deg in 1..=2 {
            let x = Cochain::random(Rationals, ctx.kind(), 2, deg, 2, &mut rng);
            assert!(ctx.diff(&ctx.diff(&x).unwrap()).unwrap().is_zero(), "deg {deg}");
        }
    }

    #[test]
    fn differential_matches_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let ctx = MultContext::new(trias2()).unwrap();
        for deg in 1..=3 {
            let x = Cochain::random(Rationals, ctx.kind(), 2, deg, 2, &mut rng);
            let d = ctx.diff(&x).unwrap();
            let delta = delta_trias(ctx.algebra(), &x).unwrap();
            let want = if deg % 2 == 0 { delta.neg() } else { delta };
            assert_eq!(d, want, "deg {deg}");
        }
    }

    #[test]
    fn dot_associative_and_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let ctx = MultContext::new(trias2()).unwrap();
        let x = Cochain::random(Rationals, ctx.kind(), 2, 1, 2, &mut rng);
        let y = Cochain::random(Rationals, ctx.kind(), 2, 2, 2, &mut rng);
        let z = Cochain::random(Rationals, ctx.kind(), 2, 1, 2, &mut rng);
        let l = ctx.dot(&ctx.dot(&x, &y).unwrap(), &z).unwrap();
        let r = ctx.dot(&x, &ctx.dot(&y, &z).unwrap()).unwrap();
        assert_eq!(l, r);
        for (a, b) in [(&x, &y), (&y, &z), (&y, &y)] {
            let lhs = ctx.diff(&ctx.dot(a, b).unwrap()).unwrap();
            let mut rhs = ctx.dot(&ctx.diff(a).unwrap(), b).unwrap();
            rhs.accumulate(&ctx.dot(a, &ctx.diff(b).unwrap()).unwrap(), a.degree() % 2 == 1);
            assert_eq!(lhs, rhs);
        }
    }
}
