//! Sparse exact linear algebra.
//!
//! Two eliminations live here and share no code:
//! * [`Echelon`], a field-generic column-space reduction that also tracks
//!   preimages, used for kernels, linear solves and class coordinates;
//! * [`fraction_free_rank`], an integer-only elimination in the Bareiss spirit
//!   (cross multiplication followed by content division) used for ranks over ℚ.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::Field;

/// Sorted `(index, value)` pairs without explicit zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

/// Row-major sparse matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<F: Field> {
    field: F,
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn zero(field: F, nrows: usize, ncols: usize) -> Self {
        Self { field, nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    /// Rows must be sorted by column; zero entries are dropped.
    pub fn from_rows(field: F, ncols: usize, rows: Vec<SparseVec<F::Elem>>) -> Result<Self> {
        let mut clean = Vec::with_capacity(rows.len());
        for row in rows {
            let mut last = None;
            let mut r = Vec::with_capacity(row.len());
            for (c, v) in row {
                if c >= ncols {
                    return Err(Error::IndexOutOfRange { index: c, max: ncols.saturating_sub(1) });
                }
                if last.is_some_and(|l| l >= c) {
                    return Err(Error::InvalidField { field: "row".into(), message: "columns not strictly increasing".into() });
                }
                last = Some(c);
                if !field.is_zero(&v) {
                    r.push((c, v));
                }
            }
            clean.push(r);
        }
        Ok(Self { field, nrows: clean.len(), ncols, rows: clean })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[(usize, F::Elem)] {
        &self.rows[i]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    /// Coordinate triplets sorted by `(row, col)`.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &F::Elem)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    /// Text dump: a `rows cols nnz` header then one `row col value` line per entry.
    pub fn to_triplet_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.nrows, self.ncols, self.nnz());
        for (i, j, v) in self.triplets() {
            let _ = writeln!(s, "{i} {j} {}", self.field.render(v));
        }
        s
    }

    pub fn to_dense(&self) -> Vec<Vec<F::Elem>> {
        let mut out = vec![vec![self.field.zero(); self.ncols]; self.nrows];
        for (i, j, v) in self.triplets() {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn apply(&self, x: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch { expected: self.ncols, found: x.len() });
        }
        let f = &self.field;
        Ok(self
            .rows
            .iter()
            .map(|r| {
                let mut acc = f.zero();
                for (j, v) in r {
                    f.add_mul_assign(&mut acc, v, &x[*j]);
                }
                acc
            })
            .collect())
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<SparseVec<F::Elem>> = vec![Vec::new(); self.ncols];
        for (i, j, v) in self.triplets() {
            cols[j].push((i, v.clone()));
        }
        Self { field: self.field.clone(), nrows: self.ncols, ncols: self.nrows, rows: cols }
    }

    /// Columns as sparse vectors over the row index.
    pub fn columns(&self) -> Vec<SparseVec<F::Elem>> {
        self.transpose().rows
    }

    /// `self · rhs`
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.ncols != rhs.nrows {
            return Err(Error::DimensionMismatch { expected: self.ncols, found: rhs.nrows });
        }
        let f = &self.field;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
                for (k, a) in r {
                    for (j, b) in &rhs.rows[*k] {
                        let e = acc.entry(*j).or_insert_with(|| f.zero());
                        f.add_mul_assign(e, a, b);
                    }
                }
                acc.into_iter().filter(|(_, v)| !f.is_zero(v)).collect()
            })
            .collect();
        Ok(Self { field: f.clone(), nrows: self.nrows, ncols: rhs.ncols, rows })
    }
}

type VecWithPreimage<E> = (SparseVec<E>, SparseVec<E>);

/// Column-space elimination with preimage tracking.
///
/// Each stored vector `b` carries a combination `pre` of generator labels with
/// `A(pre) = b`, where `A` sends a generator to the vector it was inserted with.
/// Stored vectors are normalized so their lowest nonzero index (the pivot)
/// carries coefficient 1.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    /// `(vector, preimage)` pairs
    basis: Vec<VecWithPreimage<F::Elem>>,
    pivots: BTreeMap<usize, usize>,
}

/// Outcome of inserting a generator into an [`Echelon`].
#[derive(Clone, Debug, PartialEq)]
pub enum Insert<E> {
    /// The vector enlarged the span.
    Independent,
    /// The vector was dependent; the relation `A(rel) = 0` is returned.
    Dependent(SparseVec<E>),
}

type Work<E> = BTreeMap<usize, E>;

impl<F: Field> Echelon<F> {
    pub fn new(field: F) -> Self {
        Self { field, basis: Vec::new(), pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    fn reduce_work(&self, v: &mut Work<F::Elem>, pre: &mut Work<F::Elem>) {
        let f = &self.field;
        let mut cursor = 0usize;
        while let Some((&k, c)) = v.range(cursor..).next() {
            cursor = k + 1;
            let Some(&bi) = self.pivots.get(&k) else { continue };
            let c = c.clone();
            let (b, bpre) = &self.basis[bi];
            axpy(f, v, &c, b);
            axpy(f, pre, &c, bpre);
        }
    }

    /// Reduces `v`; returns the remainder and the combination `x` with
    /// `v = remainder + A(x)`.
    pub fn reduce(&self, v: &[(usize, F::Elem)]) -> (SparseVec<F::Elem>, SparseVec<F::Elem>) {
        let mut work: Work<F::Elem> = v.iter().cloned().collect();
        let mut pre = Work::new();
        self.reduce_work(&mut work, &mut pre);
        let f = &self.field;
        let x = pre.into_iter().map(|(i, c)| (i, f.neg(&c))).collect();
        (work.into_iter().collect(), x)
    }

    pub fn contains(&self, v: &[(usize, F::Elem)]) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Some `x` with `A(x) = v`, if `v` lies in the span.
    pub fn solve(&self, v: &[(usize, F::Elem)]) -> Option<SparseVec<F::Elem>> {
        let (rem, x) = self.reduce(v);
        rem.is_empty().then_some(x)
    }

    /// Inserts the vector `v` under generator label `label`.
    pub fn insert(&mut self, label: usize, v: &[(usize, F::Elem)]) -> Insert<F::Elem> {
        let f = self.field.clone();
        let mut work: Work<F::Elem> = v.iter().cloned().collect();
        let mut pre: Work<F::Elem> = [(label, f.one())].into_iter().collect();
        self.reduce_work(&mut work, &mut pre);
        let Some((&p, lead)) = work.iter().next() else {
            return Insert::Dependent(pre.into_iter().collect());
        };
        let inv = f.inv(lead).expect("nonzero lead");
        let scale = |m: Work<F::Elem>| m.into_iter().map(|(i, c)| (i, f.mul(&c, &inv))).collect::<SparseVec<_>>();
        let b = scale(work);
        let bpre = scale(pre);
        self.pivots.insert(p, self.basis.len());
        self.basis.push((b, bpre));
        Insert::Independent
    }
}

/// `v -= c * b`, dropping cancelled entries.
fn axpy<F: Field>(f: &F, v: &mut Work<F::Elem>, c: &F::Elem, b: &[(usize, F::Elem)]) {
    for (i, bi) in b {
        let prod = f.mul(c, bi);
        match v.get_mut(i) {
            Some(e) => {
                *e = f.sub(e, &prod);
                if f.is_zero(e) {
                    v.remove(i);
                }
            }
            None => {
                v.insert(*i, f.neg(&prod));
            }
        }
    }
}

/// Basis of the kernel of `m`, one vector per dependent column, in column order.
pub fn kernel_basis<F: Field>(m: &SparseMatrix<F>) -> Vec<SparseVec<F::Elem>> {
    let mut ech = Echelon::new(m.field().clone());
    m.columns()
        .iter()
        .enumerate()
        .filter_map(|(j, col)| match ech.insert(j, col) {
            Insert::Dependent(rel) => Some(rel),
            Insert::Independent => None,
        })
        .collect()
}

/// Rank over the field of `m`: fraction-free integer elimination when the
/// field is ℚ, otherwise [`Echelon`].
pub fn rank<F: Field>(m: &SparseMatrix<F>) -> usize {
    let cols = m.columns();
    let f = m.field();
    let ints: Option<Vec<_>> = cols.iter().map(|c| f.clear_denominators(c)).collect();
    match ints {
        Some(ints) => fraction_free_rank(ints),
        None => {
            let mut ech = Echelon::new(f.clone());
            for (j, c) in cols.iter().enumerate() {
                ech.insert(j, c);
            }
            ech.rank()
        }
    }
}

/// Rank of a family of integer vectors using only integer arithmetic.
///
/// Reduction of `v` by a stored vector `b` with pivot value `p` at index `k`
/// is `v ← (p/g)·v − (v_k/g)·b` with `g = gcd(p, v_k)`, after which `v` is divided
/// by the gcd of its entries.
pub fn fraction_free_rank(vectors: Vec<SparseVec<BigInt>>) -> usize {
    let mut stored: BTreeMap<usize, BTreeMap<usize, BigInt>> = BTreeMap::new();
    for v in vectors {
        let mut work: BTreeMap<usize, BigInt> = v.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        let mut cursor = 0usize;
        while let Some((&k, vk)) = work.range(cursor..).next() {
            cursor = k + 1;
            let Some(b) = stored.get(&k) else { continue };
            let p = &b[&k];
            let g = p.gcd(vk);
            let (mv, mb) = (p / &g, vk / &g);
            for x in work.values_mut() {
                *x *= &mv;
            }
            for (i, bi) in b {
                let e = work.entry(*i).or_insert_with(BigInt::zero);
                *e -= &mb * bi;
            }
            work.retain(|_, x| !x.is_zero());
            normalize_content(&mut work);
        }
        if let Some((&k, _)) = work.iter().next() {
            stored.insert(k, work);
        }
    }
    stored.len()
}

fn normalize_content(v: &mut BTreeMap<usize, BigInt>) {
    let g = v.values().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.values_mut() {
            *x /= &g;
        }
    }
    if v.values().next().is_some_and(|x| x.is_negative()) {
        for x in v.values_mut() {
            *x = -&*x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn q(rows: &[&[i64]]) -> SparseMatrix<Rationals> {
        let f = Rationals;
        let ncols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().enumerate().map(|(j, &v)| (j, f.from_i64(v))).collect())
            .collect();
        SparseMatrix::from_rows(f, ncols, rows).unwrap()
    }

    #[test]
    fn rank_and_kernel() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&m), 2);
        let ker = kernel_basis(&m);
        assert_eq!(ker.len(), 1);
        let mut x = vec![Rationals.zero(); 3];
        for (i, v) in &ker[0] {
            x[*i] = v.clone();
        }
        assert!(m.apply(&x).unwrap().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn rank_mod_p_differs_when_pivot_vanishes() {
        let f5 = PrimeField::new(5).unwrap();
        let five = f5.from_i64(5);
        let rows = vec![vec![(0, five), (1, 0)], vec![(0, 0), (1, five)]];
        let m = SparseMatrix::from_rows(f5, 2, rows).unwrap();
        assert_eq!(rank(&m), 0);
        assert_eq!(rank(&q(&[&[5, 0], &[0, 5]])), 2);
    }

    #[test]
    fn solve_finds_preimage() {
        let m = q(&[&[1, 0], &[1, 1], &[0, 2]]);
        let mut ech = Echelon::new(Rationals);
        for (j, c) in m.columns().iter().enumerate() {
            assert_eq!(ech.insert(j, c), Insert::Independent);
        }
        let f = Rationals;
        let target = vec![(0, f.from_i64(3)), (1, f.from_i64(1)), (2, f.from_i64(-4))];
        let x = ech.solve(&target).unwrap();
        let mut dense = vec![f.zero(); 2];
        for (i, v) in x {
            dense[i] = v;
        }
        assert_eq!(m.apply(&dense).unwrap(), vec![f.from_i64(3), f.from_i64(1), f.from_i64(-4)]);
        assert!(ech.solve(&[(0, f.one())]).is_none());
    }

    #[test]
    fn product_and_triplets() {
        let a = q(&[&[1, 1], &[0, 1]]);
        let b = q(&[&[1, -1], &[0, 1]]);
        let p = a.mul(&b).unwrap();
        assert_eq!(p, q(&[&[1, 0], &[0, 1]]));
        assert_eq!(p.to_triplet_text(), "2 2 2\n0 0 1\n1 1 1\n");
        assert!(a.mul(&q(&[&[1, 2, 3]])).is_err());
    }

    #[test]
    fn fraction_free_matches_echelon() {
        let m = q(&[&[2, 4, 6, 0], &[3, 5, 7, 1], &[1, 1, 1, 1], &[5, 9, 13, 1]]);
        let mut ech = Echelon::new(Rationals);
        for (j, c) in m.columns().iter().enumerate() {
            ech.insert(j, c);
        }
        assert_eq!(rank(&m), ech.rank());
        assert_eq!(ech.rank(), 2);
    }
}
