//! Shared helpers for the integration suites: fixture loading plus oracles
//! written without the library's own elimination or tree code.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use loday_core::algebra::{AlgebraSpec, AlgebraType};
use loday_core::field::{Field, PrimeField, Rationals};
use loday_core::format::{parse_algebra_file, AnyAlgebra};
use loday_core::params::OpSymbol;
use num_rational::BigRational;
use num_traits::Zero;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_path(name: &str) -> String {
    fixtures_dir().join(name).to_string_lossy().into_owned()
}

/// Every shipped fixture that defines a genuine algebra, sorted by name.
pub fn valid_fixtures() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixtures_dir())
        .expect("fixtures directory")
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".alg") && !n.starts_with("broken_"))
        .collect();
    names.sort();
    names
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixtures_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn load_q(name: &str) -> AlgebraSpec<Rationals> {
    match parse_algebra_file(&fixture_text(name)).unwrap().algebra {
        AnyAlgebra::Rational(a) => a,
        AnyAlgebra::Modular(_) => panic!("{name} is not over Q"),
    }
}

/// The same structure constants read over `F_p`.
pub fn load_mod(name: &str, p: u64) -> AlgebraSpec<PrimeField> {
    let text = fixture_text(name).replace("field = \"Q\"", &format!("field = \"Fp:{p}\""));
    match parse_algebra_file(&text).unwrap().algebra {
        AnyAlgebra::Modular(a) => a,
        AnyAlgebra::Rational(_) => panic!("{name} did not switch field"),
    }
}

/// Rank by textbook Gauss-Jordan on dense rational rows.
pub fn dense_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for v in rows[rank].iter_mut() {
            *v = &*v / &pivot;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (c, pv) in pivot_row.iter().enumerate().skip(col) {
                if !pv.is_zero() {
                    row[c] = &row[c] - &factor * pv;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A planar tree kept apart from the library's representation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OTree {
    Leaf,
    Node(Vec<OTree>),
}

impl OTree {
    /// Reads the `(|,(|,|))` notation.
    pub fn parse(s: &str) -> OTree {
        fn go(b: &[u8], i: &mut usize) -> OTree {
            match b[*i] {
                b'|' => {
                    *i += 1;
                    OTree::Leaf
                }
                b'(' => {
                    *i += 1;
                    let mut kids = vec![go(b, i)];
                    while b[*i] == b',' {
                        *i += 1;
                        kids.push(go(b, i));
                    }
                    assert_eq!(b[*i], b')');
                    *i += 1;
                    OTree::Node(kids)
                }
                c => panic!("unexpected byte {c}"),
            }
        }
        let compact: Vec<u8> = s.bytes().filter(|c| !c.is_ascii_whitespace()).collect();
        let mut i = 0;
        let t = go(&compact, &mut i);
        assert_eq!(i, compact.len());
        t
    }

    pub fn leaves(&self) -> usize {
        match self {
            OTree::Leaf => 1,
            OTree::Node(k) => k.iter().map(OTree::leaves).sum(),
        }
    }

    pub fn render(&self) -> String {
        match self {
            OTree::Leaf => "|".into(),
            OTree::Node(k) => format!("({})", k.iter().map(OTree::render).collect::<Vec<_>>().join(",")),
        }
    }

    /// The subtree spanned by the leaves flagged in `keep`, in one traversal.
    pub fn restrict(&self, keep: &[bool]) -> Option<OTree> {
        fn go(t: &OTree, keep: &[bool], next: &mut usize) -> Option<OTree> {
            match t {
                OTree::Leaf => {
                    let k = keep[*next];
                    *next += 1;
                    k.then_some(OTree::Leaf)
                }
                OTree::Node(kids) => {
                    let mut out: Vec<OTree> = kids.iter().filter_map(|c| go(c, keep, next)).collect();
                    match out.len() {
                        0 => None,
                        1 => out.pop(),
                        _ => Some(OTree::Node(out)),
                    }
                }
            }
        }
        let mut next = 0;
        go(self, keep, &mut next)
    }

    pub fn without_leaf(&self, i: usize) -> OTree {
        let keep: Vec<bool> = (0..self.leaves()).map(|l| l != i).collect();
        self.restrict(&keep).expect("at least one leaf remains")
    }

    /// The operation a tree with three leaves stands for.
    pub fn operation(&self) -> OpSymbol {
        match self.render().as_str() {
            "(|,(|,|))" => OpSymbol::Left,
            "((|,|),|)" => OpSymbol::Right,
            "(|,|,|)" => OpSymbol::Middle,
            other => panic!("not a tree with three leaves: {other}"),
        }
    }
}

/// The four operations in `(x a y) b z - x c (y e z)` attached to a tree with
/// four leaves, as `(a, b, c, e)`.
pub fn bracketing_ops(psi: &OTree) -> (OpSymbol, OpSymbol, OpSymbol, OpSymbol) {
    (
        psi.without_leaf(3).operation(),
        psi.without_leaf(1).operation(),
        psi.without_leaf(2).operation(),
        psi.without_leaf(0).operation(),
    )
}

fn apply<F: Field>(a: &AlgebraSpec<F>, op: Option<OpSymbol>, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
    match op {
        Some(op) => a.multiply(op, x, y).unwrap(),
        None => a.star(x, y).unwrap(),
    }
}

/// Nonzero entries of the associator attached to each parameter of arity 3,
/// as `(parameter, i, j, k)`. `params3` lists the parameter elements as text;
/// for tree kinds the operations come from the trees, otherwise every slot
/// uses the summed operation.
pub fn associator_support<F: Field>(a: &AlgebraSpec<F>, params3: &[String]) -> BTreeSet<(String, usize, usize, usize)> {
    let f = a.field();
    let tree_kind = matches!(a.ty(), AlgebraType::Dias | AlgebraType::Trias);
    let mut out = BTreeSet::new();
    for p in params3 {
        let (il, ol, or, ir) = if tree_kind {
            let (w, x, y, z) = bracketing_ops(&OTree::parse(p));
            (Some(w), Some(x), Some(y), Some(z))
        } else {
            (None, None, None, None)
        };
        let d = a.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (ei, ej, ek) = (a.unit_vector(i), a.unit_vector(j), a.unit_vector(k));
                    let left = apply(a, ol, &apply(a, il, &ei, &ej), &ek);
                    let right = apply(a, or, &ei, &apply(a, ir, &ej, &ek));
                    if left.iter().zip(&right).any(|(l, r)| !f.is_zero(&f.sub(l, r))) {
                        out.insert((p.clone(), i, j, k));
                    }
                }
            }
        }
    }
    out
}
