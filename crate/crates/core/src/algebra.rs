//! Finite-dimensional Loday algebras given by structure constants.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::cochain::Cochain;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::params::{self, OpSymbol, ParamElement, ParameterKind, PlanarTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraType {
    /// Associative dialgebras `(⊣, ⊢)`.
    Dias,
    /// Dendriform dialgebras `(≺, ≻)`.
    Didend,
    /// Associative trialgebras `(⊣, ⊢, ⊥)`.
    Trias,
    /// Dendriform trialgebras `(≺, ·, ≻)`.
    Tridend,
    /// Cubical trialgebras `(⊣, ⊢, ⊥)`.
    Tricub,
}

impl AlgebraType {
    pub const ALL: [AlgebraType; 5] = [
        AlgebraType::Dias,
        AlgebraType::Didend,
        AlgebraType::Trias,
        AlgebraType::Tridend,
        AlgebraType::Tricub,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgebraType::Dias => "dias",
            AlgebraType::Didend => "didend",
            AlgebraType::Trias => "trias",
            AlgebraType::Tridend => "tridend",
            AlgebraType::Tricub => "tricub",
        }
    }

    pub fn operations(self) -> &'static [OpSymbol] {
        match self {
            AlgebraType::Dias => &[OpSymbol::Left, OpSymbol::Right],
            AlgebraType::Didend => &[OpSymbol::Prec, OpSymbol::Succ],
            AlgebraType::Trias | AlgebraType::Tricub => {
                &[OpSymbol::Left, OpSymbol::Right, OpSymbol::Middle]
            }
            AlgebraType::Tridend => &[OpSymbol::Prec, OpSymbol::Dot, OpSymbol::Succ],
        }
    }

    /// The parameter family tagging cochains of this type.
    pub fn parameter_kind(self) -> ParameterKind {
        match self {
            AlgebraType::Dias => ParameterKind::BinaryTrees,
            AlgebraType::Didend => ParameterKind::Linear,
            AlgebraType::Trias => ParameterKind::PlanarTrees,
            AlgebraType::Tridend => ParameterKind::NonemptySubsets,
            AlgebraType::Tricub => ParameterKind::SignVectors,
        }
    }

    /// Whether the canonical multiplication is the sum of all operations.
    pub fn has_star(self) -> bool {
        matches!(self, AlgebraType::Didend | AlgebraType::Tridend | AlgebraType::Tricub)
    }

    pub fn axioms(self) -> Vec<AxiomDef> {
        axiom_list(self)
    }
}

impl fmt::Display for AlgebraType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgebraType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgebraType::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::UnknownType(s.to_string()))
    }
}

/// `(x o1 y) o2 z` or `x o1 (y o2 z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bracketing {
    LeftNested(OpSymbol, OpSymbol),
    RightNested(OpSymbol, OpSymbol),
}

/// One defining relation `sum(lhs) = sum(rhs)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomDef {
    /// 1-based position in the type's axiom list.
    pub id: usize,
    pub lhs: Vec<Bracketing>,
    pub rhs: Vec<Bracketing>,
}

impl AxiomDef {
    pub fn text(&self) -> String {
        let side = |terms: &[Bracketing]| -> String {
            terms
                .iter()
                .map(|t| match t {
                    Bracketing::LeftNested(a, b) => format!("(x {a} y) {b} z"),
                    Bracketing::RightNested(a, b) => format!("x {a} (y {b} z)"),
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        format!("{} = {}", side(&self.lhs), side(&self.rhs))
    }
}

fn axiom_list(ty: AlgebraType) -> Vec<AxiomDef> {
    use Bracketing::{LeftNested as L, RightNested as R};
    use OpSymbol::*;

    // `star` terms are expanded over the type's operations
    let star = ty.operations();
    let lstar = |o2: OpSymbol| star.iter().map(|&o| L(o, o2)).collect::<Vec<_>>();
    let rstar = |o1: OpSymbol| star.iter().map(|&o| R(o1, o)).collect::<Vec<_>>();

    let rows: Vec<(Vec<Bracketing>, Vec<Bracketing>)> = match ty {
        AlgebraType::Dias => vec![
            (vec![L(Left, Left)], vec![R(Left, Left)]),
            (vec![L(Left, Left)], vec![R(Left, Right)]),
            (vec![L(Right, Left)], vec![R(Right, Left)]),
            (vec![L(Left, Right)], vec![R(Right, Right)]),
            (vec![L(Right, Right)], vec![R(Right, Right)]),
        ],
        AlgebraType::Didend => vec![
            (vec![L(Prec, Prec)], rstar(Prec)),
            (vec![L(Succ, Prec)], vec![R(Succ, Prec)]),
            (lstar(Succ), vec![R(Succ, Succ)]),
        ],
        AlgebraType::Trias => vec![
            (vec![L(Left, Left)], vec![R(Left, Left)]),
            (vec![L(Left, Left)], vec![R(Left, Right)]),
            (vec![L(Right, Left)], vec![R(Right, Left)]),
            (vec![L(Left, Right)], vec![R(Right, Right)]),
            (vec![L(Right, Right)], vec![R(Right, Right)]),
            (vec![L(Left, Left)], vec![R(Left, Middle)]),
            (vec![L(Middle, Left)], vec![R(Middle, Left)]),
            (vec![L(Left, Middle)], vec![R(Middle, Right)]),
            (vec![L(Right, Middle)], vec![R(Right, Middle)]),
            (vec![L(Middle, Right)], vec![R(Right, Right)]),
            (vec![L(Middle, Middle)], vec![R(Middle, Middle)]),
        ],
        AlgebraType::Tridend => vec![
            (vec![L(Prec, Prec)], rstar(Prec)),
            (vec![L(Succ, Prec)], vec![R(Succ, Prec)]),
            (lstar(Succ), vec![R(Succ, Succ)]),
            (vec![L(Succ, Dot)], vec![R(Succ, Dot)]),
            (vec![L(Prec, Dot)], vec![R(Dot, Succ)]),
            (vec![L(Dot, Prec)], vec![R(Dot, Prec)]),
            (vec![L(Dot, Dot)], vec![R(Dot, Dot)]),
        ],
        AlgebraType::Tricub => {
            let ops = [Left, Right, Middle];
            ops.iter()
                .flat_map(|&a| ops.iter().map(move |&b| (vec![L(a, b)], vec![R(a, b)])))
                .collect()
        }
    };
    rows.into_iter()
        .enumerate()
        .map(|(i, (lhs, rhs))| AxiomDef { id: i + 1, lhs, rhs })
        .collect()
}

/// A failing axiom instance on basis elements `e_i, e_j, e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation<E> {
    pub axiom: usize,
    pub text: String,
    pub triple: (usize, usize, usize),
    pub left: Vec<E>,
    pub right: Vec<E>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraSpec<F: Field> {
    ty: AlgebraType,
    field: F,
    basis: Vec<String>,
    /// `tables[op][(i * d + j) * d + k]` is the coefficient of `e_k` in `e_i op e_j`.
    tables: BTreeMap<OpSymbol, Vec<F::Elem>>,
}

impl<F: Field> AlgebraSpec<F> {
    /// Operations of the type missing from `tables` are zero.
    pub fn new(
        ty: AlgebraType,
        field: F,
        basis: Vec<String>,
        mut tables: BTreeMap<OpSymbol, Vec<F::Elem>>,
    ) -> Result<Self> {
        let d = basis.len();
        if d == 0 {
            return Err(Error::InvalidField { field: "dim".into(), message: "must be >= 1".into() });
        }
        for op in tables.keys() {
            if !ty.operations().contains(op) {
                return Err(Error::WrongOperation { op: op.name().into(), ty: ty.name().into() });
            }
        }
        for &op in ty.operations() {
            let t = tables.entry(op).or_insert_with(|| vec![field.zero(); d * d * d]);
            if t.len() != d * d * d {
                return Err(Error::DimensionMismatch { expected: d * d * d, found: t.len() });
            }
        }
        Ok(Self { ty, field, basis, tables })
    }

    /// Builds a spec from `(op, i, j, k, coefficient)` entries.
    pub fn from_entries(
        ty: AlgebraType,
        field: F,
        dim: usize,
        entries: &[(OpSymbol, usize, usize, usize, i64)],
    ) -> Result<Self> {
        let basis = (1..=dim).map(|i| format!("e{i}")).collect();
        let mut tables: BTreeMap<OpSymbol, Vec<F::Elem>> = BTreeMap::new();
        for &(op, i, j, k, c) in entries {
            for idx in [i, j, k] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx, max: dim - 1 });
                }
            }
            let t = tables.entry(op).or_insert_with(|| vec![field.zero(); dim * dim * dim]);
            t[(i * dim + j) * dim + k] = field.from_i64(c);
        }
        Self::new(ty, field, basis, tables)
    }

    /// The all-zero algebra of the given type.
    pub fn zero(ty: AlgebraType, field: F, dim: usize) -> Result<Self> {
        Self::from_entries(ty, field, dim, &[])
    }

    /// Every operation of `ty` equal to the associative product `table`.
    pub fn uniform(ty: AlgebraType, field: F, dim: usize, table: &[(usize, usize, usize, i64)]) -> Result<Self> {
        let entries: Vec<_> = ty
            .operations()
            .iter()
            .flat_map(|&op| table.iter().map(move |&(i, j, k, c)| (op, i, j, k, c)))
            .collect();
        Self::from_entries(ty, field, dim, &entries)
    }

    pub fn ty(&self) -> AlgebraType {
        self.ty
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn parameter_kind(&self) -> ParameterKind {
        self.ty.parameter_kind()
    }

    pub fn table(&self, op: OpSymbol) -> Result<&[F::Elem]> {
        self.tables
            .get(&op)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::WrongOperation { op: op.name().into(), ty: self.ty.name().into() })
    }

    /// `e_i op e_j` as a coordinate vector.
    pub fn basis_product(&self, op: OpSymbol, i: usize, j: usize) -> Result<&[F::Elem]> {
        let d = self.dim();
        let t = self.table(op)?;
        Ok(&t[(i * d + j) * d..(i * d + j + 1) * d])
    }

    pub fn multiply(&self, op: OpSymbol, x: &[F::Elem], y: &[F::Elem]) -> Result<Vec<F::Elem>> {
        let d = self.dim();
        for v in [x, y] {
            if v.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: v.len() });
            }
        }
        let f = &self.field;
        let t = self.table(op)?;
        let mut out = vec![f.zero(); d];
        for (i, xi) in x.iter().enumerate() {
            if f.is_zero(xi) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if f.is_zero(yj) {
                    continue;
                }
                let c = f.mul(xi, yj);
                for (k, o) in out.iter_mut().enumerate() {
                    f.add_mul_assign(o, &c, &t[(i * d + j) * d + k]);
                }
            }
        }
        Ok(out)
    }

    /// Sum of all operations; only defined for the dendriform and cubical types.
    pub fn star(&self, x: &[F::Elem], y: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if !self.ty.has_star() {
            return Err(Error::UnsupportedForType(self.ty.name().into()));
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim()];
        for &op in self.ty.operations() {
            let p = self.multiply(op, x, y)?;
            for (o, v) in out.iter_mut().zip(&p) {
                f.add_assign(o, v);
            }
        }
        Ok(out)
    }

    pub fn unit_vector(&self, i: usize) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    fn eval_bracketing(&self, b: Bracketing, i: usize, j: usize, k: usize) -> Vec<F::Elem> {
        let (ei, ej, ek) = (self.unit_vector(i), self.unit_vector(j), self.unit_vector(k));
        let r = match b {
            Bracketing::LeftNested(a, c) => self.multiply(a, &ei, &ej).and_then(|p| self.multiply(c, &p, &ek)),
            Bracketing::RightNested(a, c) => self.multiply(c, &ej, &ek).and_then(|p| self.multiply(a, &ei, &p)),
        };
        r.expect("axiom operations belong to the type")
    }

    fn eval_side(&self, terms: &[Bracketing], i: usize, j: usize, k: usize) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim()];
        for &t in terms {
            for (o, v) in out.iter_mut().zip(self.eval_bracketing(t, i, j, k)) {
                f.add_assign(o, &v);
            }
        }
        out
    }

    /// Evaluates every defining axiom on every basis triple. By trilinearity
    /// this decides the axioms on the whole algebra.
    pub fn verify_axioms(&self) -> Vec<AxiomViolation<F::Elem>> {
        let d = self.dim();
        let mut out = Vec::new();
        for ax in self.ty.axioms() {
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        let left = self.eval_side(&ax.lhs, i, j, k);
                        let right = self.eval_side(&ax.rhs, i, j, k);
                        if left != right {
                            out.push(AxiomViolation { axiom: ax.id, text: ax.text(), triple: (i, j, k), left, right });
                        }
                    }
                }
            }
        }
        out
    }

    /// Whether `star` is associative on basis triples.
    pub fn star_is_associative(&self) -> Result<bool> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (ei, ej, ek) = (self.unit_vector(i), self.unit_vector(j), self.unit_vector(k));
                    let l = self.star(&self.star(&ei, &ej)?, &ek)?;
                    let r = self.star(&ei, &self.star(&ej, &ek)?)?;
                    if l != r {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// `Id_A(r; x) = x` for every `r` in `U_1`.
    pub fn identity_cochain(&self) -> Cochain<F> {
        Cochain::identity(self.field.clone(), self.parameter_kind(), self.dim())
            .expect("U_1 is non-empty")
    }

    /// The canonical 2-cochain `π`.
    ///
    /// For the dendriform and cubical types `π(u; x, y) = x * y` for every `u`.
    /// For trialgebras the tree with its extra leaf on the right edge selects
    /// `⊣`, the left edge `⊢` and the corolla `⊥`; dialgebras use the two
    /// binary trees the same way.
    pub fn canonical_multiplication(&self) -> Cochain<F> {
        let kind = self.parameter_kind();
        let d = self.dim();
        let elems = params::enumerate(kind, 2).expect("U_2 exists");
        let mut pi = Cochain::zero(self.field.clone(), kind, d, 2);
        for (u, e) in elems.iter().enumerate() {
            for i in 0..d {
                for j in 0..d {
                    let (ei, ej) = (self.unit_vector(i), self.unit_vector(j));
                    let v = if self.ty.has_star() {
                        self.star(&ei, &ej)
                    } else {
                        let op = tree_operation(e.as_tree().expect("tree kind"));
                        self.multiply(op, &ei, &ej)
                    }
                    .expect("operations belong to the type");
                    pi.value_mut(u, i * d + j).clone_from_slice(&v);
                }
            }
        }
        pi
    }
}

/// The operation attached to a tree with three leaves.
pub fn tree_operation(t: &PlanarTree) -> OpSymbol {
    match t.decompose() {
        Ok([a, b]) if a.is_leaf() && !b.is_leaf() => OpSymbol::Left,
        Ok([a, b]) if !a.is_leaf() && b.is_leaf() => OpSymbol::Right,
        Ok([_, _, _]) => OpSymbol::Middle,
        _ => panic!("not a tree with three leaves: {t}"),
    }
}

/// The three trees of `T_2` keyed by operation.
pub fn t2_tree(op: OpSymbol) -> ParamElement {
    let s = match op {
        OpSymbol::Left => "(|,(|,|))",
        OpSymbol::Right => "((|,|),|)",
        _ => "(|,|,|)",
    };
    ParamElement::PlanarTree(s.parse().expect("literal tree"))
}
