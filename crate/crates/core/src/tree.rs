//! Full plane binary trees stored as pre-order node sequences.
//!
//! A tree with `n + 2` endpoints describes an `n`-site system. Vertices are
//! identified by their pre-order index (root = 0). The text form is
//! `tree := "L" | "(" tree tree ")"`.

use std::fmt;
use std::str::FromStr;

use crate::config::{Bond, Configuration, Site};
use crate::error::{Error, Result};

/// One pre-order slot. `Internal < Endpoint` so that the derived order on
/// trees coincides with the byte order of their serializations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Internal,
    Endpoint,
}

/// Which child of its parent a vertex is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Root,
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree {
    code: Vec<Node>,
}

/// Per-vertex structural data, indexed by pre-order position.
#[derive(Debug, Clone)]
pub struct Layout {
    pub parent: Vec<Option<usize>>,
    pub side: Vec<Side>,
    pub depth: Vec<usize>,
    /// One past the last pre-order index of each subtree.
    pub end: Vec<usize>,
    /// Endpoint positions, left to right.
    pub endpoints: Vec<usize>,
    /// For each vertex, its rank among the endpoints when it is one.
    pub endpoint_rank: Vec<Option<usize>>,
}

impl Layout {
    fn of(code: &[Node]) -> Layout {
        let len = code.len();
        let mut layout = Layout {
            parent: vec![None; len],
            side: vec![Side::Root; len],
            depth: vec![0; len],
            end: vec![0; len],
            endpoints: Vec::with_capacity(len / 2 + 1),
            endpoint_rank: vec![None; len],
        };
        let end = layout.walk(code, 0, None, Side::Root, 0);
        debug_assert_eq!(end, len);
        layout
    }

    fn walk(&mut self, code: &[Node], pos: usize, parent: Option<usize>, side: Side, depth: usize) -> usize {
        self.parent[pos] = parent;
        self.side[pos] = side;
        self.depth[pos] = depth;
        let end = match code[pos] {
            Node::Endpoint => {
                self.endpoint_rank[pos] = Some(self.endpoints.len());
                self.endpoints.push(pos);
                pos + 1
            }
            Node::Internal => {
                let mid = self.walk(code, pos + 1, Some(pos), Side::Left, depth + 1);
                self.walk(code, mid, Some(pos), Side::Right, depth + 1)
            }
        };
        self.end[pos] = end;
        end
    }

    /// Side of the `i`-th endpoint (0-based).
    pub fn endpoint_side(&self, i: usize) -> Side {
        self.side[self.endpoints[i]]
    }
}

impl Tree {
    /// Builds a tree from a pre-order code, checking that it is a complete
    /// full binary tree with at least two endpoints.
    pub fn from_code(code: Vec<Node>) -> Result<Tree> {
        let mut open = 1usize;
        for (pos, node) in code.iter().enumerate() {
            if open == 0 {
                return Err(Error::Parse { pos, msg: "trailing vertices".into() });
            }
            match node {
                Node::Internal => open += 1,
                Node::Endpoint => open -= 1,
            }
        }
        if open != 0 {
            return Err(Error::Parse { pos: code.len(), msg: "incomplete tree".into() });
        }
        if code.len() < 3 {
            return Err(Error::Parse { pos: 0, msg: "a tree needs at least two endpoints".into() });
        }
        Ok(Tree { code })
    }

    pub(crate) fn from_code_unchecked(code: Vec<Node>) -> Tree {
        Tree { code }
    }

    pub fn code(&self) -> &[Node] {
        &self.code
    }

    /// Number of sites, i.e. endpoints minus two.
    pub fn n(&self) -> usize {
        self.endpoint_count() - 2
    }

    pub fn endpoint_count(&self) -> usize {
        self.code.len().div_ceil(2)
    }

    pub fn internal_count(&self) -> usize {
        self.code.len() / 2
    }

    pub fn layout(&self) -> Layout {
        Layout::of(&self.code)
    }

    pub fn is_last_branching(&self, v: usize) -> bool {
        matches!(
            self.code.get(v..v + 3),
            Some([Node::Internal, Node::Endpoint, Node::Endpoint])
        )
    }

    /// The reduced configuration: site `k` is filled iff endpoint `k + 1`
    /// is a left child.
    pub fn reduce(&self) -> Configuration {
        let layout = self.layout();
        let n = self.n();
        let sites = (1..=n)
            .map(|k| match layout.endpoint_side(k) {
                Side::Left => Site::Filled,
                _ => Site::Empty,
            })
            .collect();
        Configuration::new(sites)
    }

    /// `(l, r)`: internal vertices strictly between the root and the
    /// leftmost (rightmost) endpoint.
    pub fn weight_exponents(&self) -> (u32, u32) {
        let layout = self.layout();
        let first = layout.endpoints[0];
        let last = *layout.endpoints.last().expect("at least two endpoints");
        ((layout.depth[first] - 1) as u32, (layout.depth[last] - 1) as u32)
    }

    /// Internal vertices whose two children are endpoints, left to right.
    pub fn last_branching_vertices(&self) -> Vec<usize> {
        (0..self.code.len().saturating_sub(2))
            .filter(|&v| self.is_last_branching(v))
            .collect()
    }

    /// The bond of `reduce()` that the last branching vertex `v` stands for.
    pub fn bond_of_lbv(&self, v: usize) -> Result<Bond> {
        if !self.is_last_branching(v) {
            return Err(Error::NotLastBranching(v));
        }
        let layout = self.layout();
        // children are endpoints j and j + 1 (1-based)
        let j = layout.endpoint_rank[v + 1].expect("left child is an endpoint") + 1;
        let n = self.n();
        Ok(if j == 1 {
            Bond::Entry
        } else if j + 1 == n + 2 {
            Bond::Exit
        } else {
            Bond::Bulk(j - 1)
        })
    }

    /// Writes the serialization, appending `*` after the closing parenthesis
    /// of `mark` when given.
    pub(crate) fn write_marked(&self, f: &mut impl fmt::Write, mark: Option<usize>) -> fmt::Result {
        fn go(code: &[Node], pos: usize, mark: Option<usize>, f: &mut impl fmt::Write) -> std::result::Result<usize, fmt::Error> {
            match code[pos] {
                Node::Endpoint => {
                    f.write_char('L')?;
                    Ok(pos + 1)
                }
                Node::Internal => {
                    f.write_char('(')?;
                    let mid = go(code, pos + 1, mark, f)?;
                    let end = go(code, mid, mark, f)?;
                    f.write_char(')')?;
                    if mark == Some(pos) {
                        f.write_char('*')?;
                    }
                    Ok(end)
                }
            }
        }
        go(&self.code, 0, mark, f).map(|_| ())
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_marked(f, None)
    }
}

impl FromStr for Tree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Tree> {
        let (tree, marks) = parse_marked(s)?;
        if let Some(&(pos, _)) = marks.first() {
            return Err(Error::Parse { pos, msg: "unexpected mark in an unmarked tree".into() });
        }
        Ok(tree)
    }
}

impl serde::Serialize for Tree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses a serialization that may carry `*` marks; returns the tree and
/// `(byte offset, vertex)` for every mark found.
pub(crate) fn parse_marked(s: &str) -> Result<(Tree, Vec<(usize, usize)>)> {
    struct Parser<'a> {
        bytes: &'a [u8],
        pos: usize,
        code: Vec<Node>,
        marks: Vec<(usize, usize)>,
    }

    impl Parser<'_> {
        fn err(&self, msg: &str) -> Error {
            Error::Parse { pos: self.pos, msg: msg.to_string() }
        }

        fn tree(&mut self, depth: usize) -> Result<()> {
            if depth > 10_000 {
                return Err(self.err("nesting too deep"));
            }
            match self.bytes.get(self.pos) {
                Some(b'L') => {
                    self.pos += 1;
                    self.code.push(Node::Endpoint);
                    Ok(())
                }
                Some(b'(') => {
                    let vertex = self.code.len();
                    self.pos += 1;
                    self.code.push(Node::Internal);
                    self.tree(depth + 1)?;
                    self.tree(depth + 1)?;
                    if self.bytes.get(self.pos) != Some(&b')') {
                        return Err(self.err("expected ')'"));
                    }
                    self.pos += 1;
                    if self.bytes.get(self.pos) == Some(&b'*') {
                        self.marks.push((self.pos, vertex));
                        self.pos += 1;
                    }
                    Ok(())
                }
                Some(_) => Err(self.err("expected 'L' or '('")),
                None => Err(self.err("unexpected end of input")),
            }
        }
    }

    let mut p = Parser { bytes: s.trim().as_bytes(), pos: 0, code: Vec::new(), marks: Vec::new() };
    p.tree(0)?;
    if p.pos != p.bytes.len() {
        return Err(p.err("trailing input"));
    }
    let tree = Tree::from_code(p.code)?;
    Ok((tree, p.marks))
}

/// All trees with `n + 2` endpoints, in canonical (serialization) order.
pub fn enumerate_trees(n: usize) -> Vec<Tree> {
    let leaves = n + 2;
    // shapes[k] = all pre-order codes with k endpoints
    let mut shapes: Vec<Vec<Vec<Node>>> = vec![Vec::new(), vec![vec![Node::Endpoint]]];
    for k in 2..=leaves {
        let mut level = Vec::new();
        for left in 1..k {
            for l in &shapes[left] {
                for r in &shapes[k - left] {
                    let mut code = Vec::with_capacity(2 * k - 1);
                    code.push(Node::Internal);
                    code.extend_from_slice(l);
                    code.extend_from_slice(r);
                    level.push(code);
                }
            }
        }
        shapes.push(level);
    }
    let mut trees: Vec<Tree> = shapes.swap_remove(leaves).into_iter().map(Tree::from_code_unchecked).collect();
    trees.sort_unstable();
    trees
}
