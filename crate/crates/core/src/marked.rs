//! Trees carrying one marked last branching vertex.

use std::fmt;
use std::str::FromStr;

use crate::config::Bond;
use crate::error::{Error, Result};
use crate::tree::{enumerate_trees, parse_marked, Tree};

/// A tree with exactly one of its last branching vertices marked.
///
/// Rendered with `*` after the marked vertex's closing parenthesis, e.g.
/// `((LL)*(LL))`. Ordered by tree, then by mark position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedTree {
    tree: Tree,
    mark: usize,
}

impl MarkedTree {
    pub fn new(tree: Tree, mark: usize) -> Result<Self> {
        if tree.n() == 0 {
            return Err(Error::NoSites(0));
        }
        if !tree.is_last_branching(mark) {
            return Err(Error::NotLastBranching(mark));
        }
        Ok(MarkedTree { tree, mark })
    }

    pub(crate) fn new_unchecked(tree: Tree, mark: usize) -> Self {
        debug_assert!(tree.is_last_branching(mark));
        MarkedTree { tree, mark }
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn mark(&self) -> usize {
        self.mark
    }

    pub fn n(&self) -> usize {
        self.tree.n()
    }

    /// Drops the mark.
    pub fn forget(&self) -> Tree {
        self.tree.clone()
    }

    pub fn into_tree(self) -> Tree {
        self.tree
    }

    /// The bond of the reduced configuration this mark stands for.
    pub fn bond(&self) -> Bond {
        self.tree.bond_of_lbv(self.mark).expect("mark is validated on construction")
    }
}

/// Every (tree, last branching vertex) pair with `n + 2` endpoints.
pub fn enumerate_marked(n: usize) -> Result<Vec<MarkedTree>> {
    if n == 0 {
        return Err(Error::NoSites(n));
    }
    Ok(enumerate_trees(n)
        .into_iter()
        .flat_map(|t| {
            t.last_branching_vertices()
                .into_iter()
                .map(move |v| MarkedTree::new_unchecked(t.clone(), v))
        })
        .collect())
}

impl fmt::Display for MarkedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.tree.write_marked(f, Some(self.mark))
    }
}

impl FromStr for MarkedTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (tree, marks) = parse_marked(s)?;
        match marks.as_slice() {
            [(_, v)] => MarkedTree::new(tree, *v),
            [] => Err(Error::Parse { pos: s.len(), msg: "no marked vertex".into() }),
            [_, (pos, _), ..] => Err(Error::Parse { pos: *pos, msg: "more than one marked vertex".into() }),
        }
    }
}

impl serde::Serialize for MarkedTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(enumerate_marked(1).unwrap().len(), 2);
        assert_eq!(enumerate_marked(2).unwrap().len(), 6);
        assert_eq!(enumerate_marked(3).unwrap().len(), 20);
        assert_eq!(enumerate_marked(0), Err(Error::NoSites(0)));
    }

    #[test]
    fn fibers_match_lbv_counts() {
        let marked = enumerate_marked(4).unwrap();
        for t in enumerate_trees(4) {
            let fiber = marked.iter().filter(|m| m.forget() == t).count();
            assert_eq!(fiber, t.last_branching_vertices().len());
        }
    }

    #[test]
    fn render_and_parse() {
        let m: MarkedTree = "((LL)(LL)*)".parse().unwrap();
        assert_eq!(m.mark(), 4);
        assert_eq!(m.to_string(), "((LL)(LL)*)");
        assert_eq!(m.bond(), Bond::Exit);
        assert!("((LL)*(LL)*)".parse::<MarkedTree>().is_err());
        assert!("((LL)(LL))".parse::<MarkedTree>().is_err());
        // root is not a last branching vertex here
        assert_eq!("((LL)(LL))*".parse::<MarkedTree>(), Err(Error::NotLastBranching(0)));
        assert_eq!("(LL)*".parse::<MarkedTree>(), Err(Error::NoSites(0)));
    }
}
