//! The parameter sets `U_n` that tag the inputs of an `n`-cochain.
//!
//! Five families are supported: the index sets `{1..n}`, binary trees and
//! planar trees with `n + 1` leaves, non-empty subsets of `{1..n}`, and sign
//! vectors in `{-1, 0, +1}^n`. Every family comes with a canonical total order;
//! cochain tables are indexed by position in that order.

mod tree;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

pub use tree::{Orientation, PlanarTree};
pub(crate) use tree::compositions;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParameterKind {
    /// `C_n = {1, ..., n}`
    Linear,
    /// `Y_n`, binary trees with `n + 1` leaves
    BinaryTrees,
    /// `T_n`, planar trees with `n + 1` leaves
    PlanarTrees,
    /// `P_n`, non-empty subsets of `{1, ..., n}`
    NonemptySubsets,
    /// `Q_n = {-1, 0, +1}^n`
    SignVectors,
}

impl ParameterKind {
    pub const ALL: [ParameterKind; 5] = [
        ParameterKind::Linear,
        ParameterKind::BinaryTrees,
        ParameterKind::PlanarTrees,
        ParameterKind::NonemptySubsets,
        ParameterKind::SignVectors,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParameterKind::Linear => "linear",
            ParameterKind::BinaryTrees => "binary",
            ParameterKind::PlanarTrees => "planar",
            ParameterKind::NonemptySubsets => "subsets",
            ParameterKind::SignVectors => "signs",
        }
    }

    pub fn is_tree(self) -> bool {
        matches!(self, ParameterKind::BinaryTrees | ParameterKind::PlanarTrees)
    }
}

impl fmt::Display for ParameterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParameterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "linear" | "c" => ParameterKind::Linear,
            "binary" | "y" => ParameterKind::BinaryTrees,
            "planar" | "t" => ParameterKind::PlanarTrees,
            "subsets" | "p" => ParameterKind::NonemptySubsets,
            "signs" | "q" => ParameterKind::SignVectors,
            _ => return Err(Error::UnknownKind(s.to_string())),
        })
    }
}

/// One binary operation of a Loday algebra type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpSymbol {
    /// ⊣
    Left,
    /// ⊢
    Right,
    /// ⊥
    Middle,
    /// ≺
    Prec,
    /// ≻
    Succ,
    /// ·
    Dot,
}

impl OpSymbol {
    pub fn name(self) -> &'static str {
        match self {
            OpSymbol::Left => "left",
            OpSymbol::Right => "right",
            OpSymbol::Middle => "middle",
            OpSymbol::Prec => "prec",
            OpSymbol::Succ => "succ",
            OpSymbol::Dot => "dot",
        }
    }

    pub fn glyph(self) -> &'static str {
        match self {
            OpSymbol::Left => "⊣",
            OpSymbol::Right => "⊢",
            OpSymbol::Middle => "⊥",
            OpSymbol::Prec => "≺",
            OpSymbol::Succ => "≻",
            OpSymbol::Dot => "·",
        }
    }

    pub fn is_dendriform(self) -> bool {
        matches!(self, OpSymbol::Prec | OpSymbol::Succ | OpSymbol::Dot)
    }
}

impl fmt::Display for OpSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.glyph())
    }
}

/// An element of `U_n` for one of the five families.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ParamElement {
    Linear { arity: usize, value: usize },
    BinaryTree(PlanarTree),
    PlanarTree(PlanarTree),
    /// Bit `i - 1` of `mask` is set iff `i` belongs to the subset.
    Subset { arity: usize, mask: u64 },
    Signs(Vec<i8>),
}

const MAX_SUBSET_ARITY: usize = 63;

impl ParamElement {
    pub fn linear(arity: usize, value: usize) -> Result<Self> {
        Self::Linear { arity, value }.validated()
    }

    pub fn tree(kind: ParameterKind, tree: PlanarTree) -> Result<Self> {
        match kind {
            ParameterKind::BinaryTrees => ParamElement::BinaryTree(tree).validated(),
            ParameterKind::PlanarTrees => ParamElement::PlanarTree(tree).validated(),
            _ => Err(Error::InvalidElement { kind, arity: tree.weight() }),
        }
    }

    /// `members` are 1-based.
    pub fn subset(arity: usize, members: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &m in members {
            if m == 0 || m > arity || m > MAX_SUBSET_ARITY {
                return Err(Error::InvalidElement { kind: ParameterKind::NonemptySubsets, arity });
            }
            mask |= 1 << (m - 1);
        }
        ParamElement::Subset { arity, mask }.validated()
    }

    pub fn signs(signs: Vec<i8>) -> Result<Self> {
        ParamElement::Signs(signs).validated()
    }

    fn validated(self) -> Result<Self> {
        if self.is_valid() {
            Ok(self)
        } else {
            Err(Error::InvalidElement { kind: self.kind(), arity: self.arity() })
        }
    }

    pub fn kind(&self) -> ParameterKind {
        match self {
            ParamElement::Linear { .. } => ParameterKind::Linear,
            ParamElement::BinaryTree(_) => ParameterKind::BinaryTrees,
            ParamElement::PlanarTree(_) => ParameterKind::PlanarTrees,
            ParamElement::Subset { .. } => ParameterKind::NonemptySubsets,
            ParamElement::Signs(_) => ParameterKind::SignVectors,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            ParamElement::Linear { arity, .. } | ParamElement::Subset { arity, .. } => *arity,
            ParamElement::BinaryTree(t) | ParamElement::PlanarTree(t) => t.weight(),
            ParamElement::Signs(s) => s.len(),
        }
    }

    pub fn is_valid(&self) -> bool {
        match self {
            ParamElement::Linear { arity, value } => *arity >= 1 && (1..=*arity).contains(value),
            ParamElement::BinaryTree(t) => t.weight() >= 1 && t.is_binary(),
            ParamElement::PlanarTree(t) => t.weight() >= 1 && t.is_well_formed(),
            ParamElement::Subset { arity, mask } => {
                *arity >= 1
                    && *arity <= MAX_SUBSET_ARITY
                    && *mask != 0
                    && *mask >> *arity == 0
            }
            ParamElement::Signs(s) => !s.is_empty() && s.iter().all(|v| (-1..=1).contains(v)),
        }
    }

    pub fn as_tree(&self) -> Option<&PlanarTree> {
        match self {
            ParamElement::BinaryTree(t) | ParamElement::PlanarTree(t) => Some(t),
            _ => None,
        }
    }
}

impl fmt::Display for ParamElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamElement::Linear { value, .. } => write!(f, "{value}"),
            ParamElement::BinaryTree(t) | ParamElement::PlanarTree(t) => write!(f, "{t}"),
            ParamElement::Subset { arity, mask } => {
                let members: Vec<String> = (1..=*arity)
                    .filter(|i| mask >> (i - 1) & 1 == 1)
                    .map(|i| i.to_string())
                    .collect();
                write!(f, "{{{}}}", members.join(","))
            }
            ParamElement::Signs(s) => {
                let parts: Vec<&str> = s
                    .iter()
                    .map(|v| match v {
                        -1 => "-",
                        0 => "0",
                        _ => "+",
                    })
                    .collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

struct Enumeration {
    elements: Arc<Vec<ParamElement>>,
    index: HashMap<ParamElement, usize>,
}

type EnumCache = Mutex<HashMap<(ParameterKind, usize), Arc<Enumeration>>>;

fn cache() -> &'static EnumCache {
    static CACHE: OnceLock<EnumCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn enumeration(kind: ParameterKind, n: usize) -> Result<Arc<Enumeration>> {
    if n == 0 {
        return Err(Error::InvalidArity(n));
    }
    if let Some(e) = cache().lock().unwrap().get(&(kind, n)) {
        return Ok(e.clone());
    }
    let elements = build(kind, n)?;
    let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let e = Arc::new(Enumeration { elements: Arc::new(elements), index });
    cache().lock().unwrap().insert((kind, n), e.clone());
    Ok(e)
}

fn build(kind: ParameterKind, n: usize) -> Result<Vec<ParamElement>> {
    Ok(match kind {
        ParameterKind::Linear => (1..=n).map(|value| ParamElement::Linear { arity: n, value }).collect(),
        ParameterKind::BinaryTrees => tree::all_trees(n + 1, true)
            .into_iter()
            .map(ParamElement::BinaryTree)
            .collect(),
        ParameterKind::PlanarTrees => tree::all_trees(n + 1, false)
            .into_iter()
            .map(ParamElement::PlanarTree)
            .collect(),
        ParameterKind::NonemptySubsets => {
            if n > 20 {
                return Err(Error::InvalidArity(n));
            }
            (1..1u64 << n).map(|mask| ParamElement::Subset { arity: n, mask }).collect()
        }
        ParameterKind::SignVectors => {
            if n > 12 {
                return Err(Error::InvalidArity(n));
            }
            let total = 3usize.pow(n as u32);
            (0..total)
                .map(|mut code| {
                    let mut s = vec![0i8; n];
                    for slot in s.iter_mut().rev() {
                        *slot = (code % 3) as i8 - 1;
                        code /= 3;
                    }
                    ParamElement::Signs(s)
                })
                .collect()
        }
    })
}

/// All elements of `U_n` in canonical order.
pub fn enumerate(kind: ParameterKind, n: usize) -> Result<Arc<Vec<ParamElement>>> {
    Ok(enumeration(kind, n)?.elements.clone())
}

/// `|U_n|`
pub fn cardinality(kind: ParameterKind, n: usize) -> Result<usize> {
    match kind {
        ParameterKind::Linear => {
            if n == 0 {
                Err(Error::InvalidArity(0))
            } else {
                Ok(n)
            }
        }
        _ => Ok(enumeration(kind, n)?.elements.len()),
    }
}

/// Position of `e` in `enumerate(kind, e.arity())`.
pub fn encode(kind: ParameterKind, e: &ParamElement) -> Result<usize> {
    if e.kind() != kind || !e.is_valid() {
        return Err(Error::InvalidElement { kind, arity: e.arity() });
    }
    Ok(match e {
        ParamElement::Linear { value, .. } => value - 1,
        ParamElement::Subset { mask, .. } => (*mask - 1) as usize,
        ParamElement::Signs(s) => s.iter().fold(0usize, |acc, v| acc * 3 + (*v + 1) as usize),
        ParamElement::BinaryTree(_) | ParamElement::PlanarTree(_) => {
            let en = enumeration(kind, e.arity())?;
            en.index[e]
        }
    })
}

/// The element at position `index` of `enumerate(kind, n)`.
pub fn decode(kind: ParameterKind, n: usize, index: usize) -> Result<ParamElement> {
    let en = enumeration(kind, n)?;
    en.elements
        .get(index)
        .cloned()
        .ok_or(Error::IndexOutOfRange { index, max: en.elements.len().saturating_sub(1) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate(ParameterKind::PlanarTrees, 2).unwrap().len(), 3);
        assert_eq!(enumerate(ParameterKind::PlanarTrees, 3).unwrap().len(), 11);
        assert_eq!(enumerate(ParameterKind::NonemptySubsets, 3).unwrap().len(), 7);
        assert_eq!(enumerate(ParameterKind::BinaryTrees, 3).unwrap().len(), 5);
        let lin: Vec<String> = enumerate(ParameterKind::Linear, 4)
            .unwrap()
            .iter()
            .map(|e| e.to_string())
            .collect();
        assert_eq!(lin, ["1", "2", "3", "4"]);
    }

    #[test]
    fn zero_arity_rejected() {
        for kind in ParameterKind::ALL {
            assert_eq!(enumerate(kind, 0).unwrap_err(), Error::InvalidArity(0));
        }
    }

    #[test]
    fn encode_firsts() {
        let one = ParamElement::linear(3, 1).unwrap();
        assert_eq!(encode(ParameterKind::Linear, &one).unwrap(), 0);
        let first = enumerate(ParameterKind::PlanarTrees, 2).unwrap()[0].clone();
        assert_eq!(encode(ParameterKind::PlanarTrees, &first).unwrap(), 0);
        assert!(encode(ParameterKind::PlanarTrees, &one).is_err());
    }

    #[test]
    fn encode_roundtrip_small() {
        for kind in ParameterKind::ALL {
            for n in 1..=4 {
                for (j, e) in enumerate(kind, n).unwrap().iter().enumerate() {
                    assert_eq!(encode(kind, e).unwrap(), j, "{kind} {n} {e}");
                    assert_eq!(&decode(kind, n, j).unwrap(), e);
                }
            }
        }
    }

    #[test]
    fn sign_order_is_lexicographic() {
        let q = enumerate(ParameterKind::SignVectors, 2).unwrap();
        assert_eq!(q[0], ParamElement::Signs(vec![-1, -1]));
        assert_eq!(q[1], ParamElement::Signs(vec![-1, 0]));
        assert_eq!(q[8], ParamElement::Signs(vec![1, 1]));
    }

    #[test]
    fn constructors_validate() {
        assert!(ParamElement::linear(3, 0).is_err());
        assert!(ParamElement::linear(3, 4).is_err());
        assert!(ParamElement::subset(3, &[]).is_err());
        assert!(ParamElement::subset(3, &[4]).is_err());
        assert!(ParamElement::signs(vec![2]).is_err());
        assert!(ParamElement::tree(ParameterKind::PlanarTrees, PlanarTree::Leaf).is_err());
        let corolla = PlanarTree::corolla(3).unwrap();
        assert!(ParamElement::tree(ParameterKind::BinaryTrees, corolla.clone()).is_err());
        assert!(ParamElement::tree(ParameterKind::PlanarTrees, corolla).is_ok());
    }
}
