//! Planar rooted trees whose internal vertices have at least two children.
//!
//! Leaves are labelled `0..=weight` from left to right. The derived `Ord`
//! compares the nested-list shape (leaf before node, nodes child-wise and then
//! by length) and is the canonical order used to index tree parameter sets.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::params::OpSymbol;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlanarTree {
    Leaf,
    Node(Vec<PlanarTree>),
}

/// Position of a leaf among the children of the vertex underneath it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Left,
    Right,
    Middle,
}

impl PlanarTree {
    /// The one-vertex tree with `leaves` leaves.
    pub fn corolla(leaves: usize) -> Result<Self> {
        Self::graft(vec![PlanarTree::Leaf; leaves])
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, PlanarTree::Leaf)
    }

    pub fn leaves(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(children) => children.iter().map(PlanarTree::leaves).sum(),
        }
    }

    /// Number of leaves minus one.
    pub fn weight(&self) -> usize {
        self.leaves() - 1
    }

    pub fn is_binary(&self) -> bool {
        match self {
            PlanarTree::Leaf => true,
            PlanarTree::Node(children) => {
                children.len() == 2 && children.iter().all(PlanarTree::is_binary)
            }
        }
    }

    /// Every internal vertex has at least two children.
    pub fn is_well_formed(&self) -> bool {
        match self {
            PlanarTree::Leaf => true,
            PlanarTree::Node(children) => {
                children.len() >= 2 && children.iter().all(PlanarTree::is_well_formed)
            }
        }
    }

    /// Joins the roots of `parts` under a new lowest vertex.
    pub fn graft(parts: Vec<PlanarTree>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::GraftTooFew(parts.len()));
        }
        Ok(PlanarTree::Node(parts))
    }

    /// The unique list of subtrees whose grafting is `self`.
    pub fn decompose(&self) -> Result<&[PlanarTree]> {
        match self {
            PlanarTree::Leaf => Err(Error::DecomposeLeaf),
            PlanarTree::Node(children) => Ok(children),
        }
    }

    /// Removes leaf `i`; a vertex left with a single child is spliced out.
    ///
    /// Deleting from a weight-1 tree yields the bare leaf.
    pub fn delete_leaf(&self, i: usize) -> Result<PlanarTree> {
        let w = self.weight();
        if w == 0 || i > w {
            return Err(Error::IndexOutOfRange { index: i, max: w });
        }
        Ok(self.delete_unchecked(i))
    }

    fn delete_unchecked(&self, mut i: usize) -> PlanarTree {
        let PlanarTree::Node(children) = self else {
            unreachable!("leaf deletion never descends into a bare leaf")
        };
        let mut out = Vec::with_capacity(children.len());
        let mut done = false;
        for child in children {
            let n = child.leaves();
            if done || i >= n {
                if !done {
                    i -= n;
                }
                out.push(child.clone());
                continue;
            }
            done = true;
            if !child.is_leaf() {
                out.push(child.delete_unchecked(i));
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            PlanarTree::Node(out)
        }
    }

    /// Deletes every leaf not in `keep`, highest label first.
    pub fn keep_leaves(&self, keep: &[usize]) -> Result<PlanarTree> {
        let mut t = self.clone();
        for i in (0..=self.weight()).rev() {
            if !keep.contains(&i) {
                t = t.delete_leaf(i)?;
            }
        }
        Ok(t)
    }

    pub fn orientation(&self, i: usize) -> Result<Orientation> {
        let w = self.weight();
        if self.is_leaf() || i > w {
            return Err(Error::IndexOutOfRange { index: i, max: w });
        }
        Ok(self.orientation_unchecked(i))
    }

    fn orientation_unchecked(&self, mut i: usize) -> Orientation {
        let PlanarTree::Node(children) = self else {
            unreachable!()
        };
        let last = children.len() - 1;
        for (pos, child) in children.iter().enumerate() {
            let n = child.leaves();
            if i < n {
                return match child {
                    PlanarTree::Leaf if pos == 0 => Orientation::Left,
                    PlanarTree::Leaf if pos == last => Orientation::Right,
                    PlanarTree::Leaf => Orientation::Middle,
                    node => node.orientation_unchecked(i),
                };
            }
            i -= n;
        }
        unreachable!("leaf index checked against weight")
    }

    /// The operation attached to position `i` of a tree of weight `n + 1`,
    /// `0 <= i <= n + 1`, as used by the explicit trialgebra coboundary.
    pub fn boundary_symbol(&self, i: usize) -> Result<OpSymbol> {
        let children = self.decompose()?;
        let top = self.weight();
        if i > top {
            return Err(Error::IndexOutOfRange { index: i, max: top });
        }
        let k = children.len() - 1;
        let sym = if i == 0 {
            if children[0].weight() > 0 {
                OpSymbol::Right
            } else if k == 1 {
                OpSymbol::Left
            } else {
                OpSymbol::Middle
            }
        } else if i == top {
            if children[k].weight() > 0 {
                OpSymbol::Left
            } else if k == 1 {
                OpSymbol::Right
            } else {
                OpSymbol::Middle
            }
        } else {
            match self.orientation_unchecked(i) {
                Orientation::Left => OpSymbol::Left,
                Orientation::Right => OpSymbol::Right,
                Orientation::Middle => OpSymbol::Middle,
            }
        };
        Ok(sym)
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarTree::Leaf => f.write_str("|"),
            PlanarTree::Node(children) => {
                f.write_str("(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for PlanarTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes: Vec<u8> = s.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let mut pos = 0;
        let tree = parse_tree(&bytes, &mut pos)?;
        if pos != bytes.len() || !tree.is_well_formed() {
            return Err(Error::Parse { line: 1, message: format!("bad tree `{s}`") });
        }
        Ok(tree)
    }
}

fn parse_tree(b: &[u8], pos: &mut usize) -> Result<PlanarTree> {
    let bad = |at: usize| Error::Parse { line: 1, message: format!("bad tree at byte {at}") };
    match b.get(*pos) {
        Some(b'|') => {
            *pos += 1;
            Ok(PlanarTree::Leaf)
        }
        Some(b'(') => {
            *pos += 1;
            let mut children = vec![parse_tree(b, pos)?];
            loop {
                match b.get(*pos) {
                    Some(b',') => {
                        *pos += 1;
                        children.push(parse_tree(b, pos)?);
                    }
                    Some(b')') => {
                        *pos += 1;
                        return Ok(PlanarTree::Node(children));
                    }
                    _ => return Err(bad(*pos)),
                }
            }
        }
        _ => Err(bad(*pos)),
    }
}

/// All trees with `leaves` leaves, optionally only binary ones, sorted.
pub(crate) fn all_trees(leaves: usize, binary: bool) -> Vec<PlanarTree> {
    let mut memo: Vec<Vec<PlanarTree>> = vec![Vec::new(), vec![PlanarTree::Leaf]];
    for l in 2..=leaves {
        let mut out = Vec::new();
        for parts in compositions(l) {
            if parts.len() < 2 || (binary && parts.len() != 2) {
                continue;
            }
            let mut partial: Vec<Vec<PlanarTree>> = vec![Vec::new()];
            for &p in &parts {
                let mut next = Vec::new();
                for prefix in &partial {
                    for t in &memo[p] {
                        let mut v = prefix.clone();
                        v.push(t.clone());
                        next.push(v);
                    }
                }
                partial = next;
            }
            out.extend(partial.into_iter().map(PlanarTree::Node));
        }
        out.sort();
        memo.push(out);
    }
    memo.swap_remove(leaves)
}

/// Ordered compositions of `n` into positive parts.
pub(crate) fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
