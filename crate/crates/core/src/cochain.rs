//! Dense cochains `C^n(A, A) = Hom(K[U_n] ⊗ A^{⊗n}, A)`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::params::{self, ParameterKind};

/// An `n`-cochain stored as a table of coefficients.
///
/// The entry for parameter index `u`, input basis tuple `x` (read as a base-`d`
/// number, first input most significant) and output basis index `o` lives at
/// `(u * d^n + x) * d + o`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<F: Field> {
    field: F,
    kind: ParameterKind,
    dim: usize,
    degree: usize,
    data: Vec<F::Elem>,
}

pub(crate) fn pow(d: usize, n: usize) -> usize {
    d.pow(n as u32)
}

impl<F: Field> Cochain<F> {
    pub fn zero(field: F, kind: ParameterKind, dim: usize, degree: usize) -> Self {
        let len = Self::table_len(kind, dim, degree);
        let data = vec![field.zero(); len];
        Self { field, kind, dim, degree, data }
    }

    /// `|U_n| * d^n * d`
    pub fn table_len(kind: ParameterKind, dim: usize, degree: usize) -> usize {
        params::cardinality(kind, degree).expect("degree >= 1") * pow(dim, degree + 1)
    }

    pub fn from_data(field: F, kind: ParameterKind, dim: usize, degree: usize, data: Vec<F::Elem>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidArity(0));
        }
        let len = Self::table_len(kind, dim, degree);
        if data.len() != len {
            return Err(Error::DimensionMismatch { expected: len, found: data.len() });
        }
        Ok(Self { field, kind, dim, degree, data })
    }

    /// The cochain with a single coefficient 1 at flat position `index`.
    pub fn basis(field: F, kind: ParameterKind, dim: usize, degree: usize, index: usize) -> Self {
        let mut c = Self::zero(field, kind, dim, degree);
        c.data[index] = c.field.one();
        c
    }

    pub fn identity(field: F, kind: ParameterKind, dim: usize) -> Result<Self> {
        let mut c = Self::zero(field, kind, dim, 1);
        for u in 0..params::cardinality(kind, 1)? {
            for x in 0..dim {
                c.data[(u * dim + x) * dim + x] = c.field.one();
            }
        }
        Ok(c)
    }

    /// Coefficients drawn uniformly from `-range..=range`.
    pub fn random<R: Rng + ?Sized>(
        field: F,
        kind: ParameterKind,
        dim: usize,
        degree: usize,
        range: i64,
        rng: &mut R,
    ) -> Self {
        let mut c = Self::zero(field, kind, dim, degree);
        for v in c.data.iter_mut() {
            *v = c.field.from_i64(rng.gen_range(-range..=range));
        }
        c
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn kind(&self) -> ParameterKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `deg x = n`
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `|x| = n - 1`
    pub fn shifted_degree(&self) -> usize {
        self.degree - 1
    }

    pub fn data(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn into_data(self) -> Vec<F::Elem> {
        self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [F::Elem] {
        &mut self.data
    }

    pub fn inputs(&self) -> usize {
        pow(self.dim, self.degree)
    }

    pub fn params(&self) -> usize {
        self.data.len() / (self.inputs() * self.dim)
    }

    /// Output vector at parameter index `u` and input tuple `x`.
    pub fn value(&self, u: usize, x: usize) -> &[F::Elem] {
        let start = (u * self.inputs() + x) * self.dim;
        &self.data[start..start + self.dim]
    }

    pub fn value_mut(&mut self, u: usize, x: usize) -> &mut [F::Elem] {
        let start = (u * self.inputs() + x) * self.dim;
        let d = self.dim;
        &mut self.data[start..start + d]
    }

    /// Evaluates at parameter index `u` on arbitrary input vectors.
    pub fn eval(&self, u: usize, args: &[&[F::Elem]]) -> Result<Vec<F::Elem>> {
        if args.len() != self.degree {
            return Err(Error::LengthMismatch { expected: self.degree, found: args.len() });
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim];
        for (x, c) in tensor_terms(f, self.dim, args) {
            for (o, v) in out.iter_mut().zip(self.value(u, x)) {
                f.add_mul_assign(o, &c, v);
            }
        }
        Ok(out)
    }

    pub fn same_complex(&self, other: &Self) -> bool {
        self.kind == other.kind && self.dim == other.dim && self.field == other.field
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.same_complex(other) {
            Ok(())
        } else {
            Err(Error::MixedAlgebras)
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&F, &F::Elem, &F::Elem) -> F::Elem) -> Result<Self> {
        self.check_same(other)?;
        if self.degree != other.degree {
            return Err(Error::ArityMismatch { expected: self.degree, found: other.degree });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| op(&self.field, a, b))
            .collect();
        Ok(Self { data, ..self.clone_shape() })
    }

    fn clone_shape(&self) -> Self {
        Self { field: self.field.clone(), kind: self.kind, dim: self.dim, degree: self.degree, data: Vec::new() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |f, a, b| f.sub(a, b))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let data = self.data.iter().map(|a| self.field.mul(a, c)).collect();
        Self { data, ..self.clone_shape() }
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|a| self.field.neg(a)).collect();
        Self { data, ..self.clone_shape() }
    }

    /// `self += sign * other`
    pub(crate) fn accumulate(&mut self, other: &Self, negative: bool) {
        debug_assert_eq!(self.data.len(), other.data.len());
        let f = &self.field;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = if negative { f.sub(a, b) } else { f.add(a, b) };
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| self.field.is_zero(a))
    }

    /// Nonzero entries as `(u, x, o, value)`.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize, usize, &F::Elem)> + '_ {
        let (n_in, d) = (self.inputs(), self.dim);
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !self.field.is_zero(v))
            .map(move |(i, v)| (i / (n_in * d), (i / d) % n_in, i % d, v))
    }
}

/// Expands `v_1 ⊗ ... ⊗ v_k` into `(basis tuple index, coefficient)` terms,
/// skipping zero products.
pub(crate) fn tensor_terms<F: Field>(f: &F, d: usize, vs: &[&[F::Elem]]) -> Vec<(usize, F::Elem)> {
    let mut terms = vec![(0usize, f.one())];
    for v in vs {
        let mut next = Vec::with_capacity(terms.len() * d);
        for (idx, c) in &terms {
            for (t, vt) in v.iter().enumerate() {
                if !f.is_zero(vt) {
                    next.push((idx * d + t, f.mul(c, vt)));
                }
            }
        }
        terms = next;
    }
    terms
}
