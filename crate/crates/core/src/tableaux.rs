//! Catalan tableaux and their correspondence with plane binary trees.
//!
//! Reading the endpoints of a tree left to right, a left-child endpoint is
//! an east step and a right-child endpoint a north step. The path is the
//! south-east boundary of a Young diagram (rows numbered from the top,
//! columns from the left, both 1-based). Every internal vertex sits in the
//! cell at the column of its subtree's leftmost endpoint and the row of its
//! subtree's rightmost endpoint; cells holding a right child get a 1.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tree::{Node, Side, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    East,
    North,
}

/// A partition drawn in matrix convention: `parts[0]` is the top row.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct YoungDiagram {
    parts: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidTableau(format!("{parts:?} is not a partition")));
        }
        Ok(YoungDiagram { parts })
    }

    /// The diagram whose south-east boundary is `steps`.
    pub fn from_path(steps: &[Step]) -> Result<Self> {
        let mut parts = Vec::new();
        let mut east = 0;
        for s in steps {
            match s {
                Step::East => east += 1,
                Step::North => parts.push(east),
            }
        }
        if steps.last() != Some(&Step::North) {
            return Err(Error::InvalidTableau("boundary path must end with a north step".into()));
        }
        parts.reverse();
        YoungDiagram::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `λ_1`.
    pub fn columns(&self) -> usize {
        self.parts[0]
    }

    /// `λ^t_1`.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// `λ_1 + λ^t_1 - 1`.
    pub fn index(&self) -> usize {
        self.columns() + self.rows() - 1
    }

    pub fn row_len(&self, row: usize) -> usize {
        self.parts[row - 1]
    }

    pub fn column_height(&self, col: usize) -> usize {
        self.parts.iter().take_while(|&&p| p >= col).count()
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        row >= 1 && col >= 1 && row <= self.rows() && col <= self.row_len(row)
    }

    /// South-east boundary from the bottom-left corner.
    pub fn boundary(&self) -> Vec<Step> {
        let mut steps = Vec::with_capacity(self.index() + 1);
        for row in (1..=self.rows()).rev() {
            let below = if row == self.rows() { 0 } else { self.row_len(row + 1) };
            steps.extend(std::iter::repeat_n(Step::East, self.row_len(row) - below));
            steps.push(Step::North);
        }
        steps
    }
}

/// A 0/1 filling of a Young diagram, not necessarily a Catalan tableau.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    shape: YoungDiagram,
    fill: Vec<Vec<u8>>,
}

impl Tableau {
    pub fn new(shape: Vec<usize>, fill: Vec<Vec<u8>>) -> Result<Self> {
        let shape = YoungDiagram::new(shape)?;
        if fill.len() != shape.rows()
            || fill.iter().enumerate().any(|(i, row)| row.len() != shape.row_len(i + 1))
        {
            return Err(Error::InvalidTableau("filling does not match the shape".into()));
        }
        if fill.iter().flatten().any(|&x| x > 1) {
            return Err(Error::InvalidTableau("entries must be 0 or 1".into()));
        }
        Ok(Tableau { shape, fill })
    }

    fn zeros(shape: YoungDiagram) -> Self {
        let fill = shape.parts().iter().map(|&len| vec![0; len]).collect();
        Tableau { shape, fill }
    }

    pub fn shape(&self) -> &YoungDiagram {
        &self.shape
    }

    pub fn fill(&self) -> &[Vec<u8>] {
        &self.fill
    }

    pub fn index(&self) -> usize {
        self.shape.index()
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.fill[row - 1][col - 1]
    }

    pub fn ones(&self) -> usize {
        self.fill.iter().flatten().filter(|&&x| x == 1).count()
    }

    /// Multi-line rendering, one row per line.
    pub fn to_ascii(&self) -> String {
        let mut out = String::new();
        for row in &self.fill {
            let cells: Vec<String> = row.iter().map(u8::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .fill
            .iter()
            .map(|r| r.iter().map(u8::to_string).collect::<String>())
            .collect();
        write!(f, "{}", rows.join("/"))
    }
}

impl Serialize for Tableau {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            shape: &'a [usize],
            fill: &'a [Vec<u8>],
            index: usize,
        }
        Repr { shape: self.shape.parts(), fill: &self.fill, index: self.index() }.serialize(s)
    }
}

/// Why a filling is not a Catalan tableau.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    OneInLeftmostColumn { row: usize },
    ColumnOnes { col: usize, ones: usize },
    ZeroBetweenOnes { row: usize, col: usize },
    Index { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OneInLeftmostColumn { row } => {
                write!(f, "property 1: leftmost column holds a 1 at row {row}")
            }
            Violation::ColumnOnes { col, ones } => {
                write!(f, "property 1: column {col} holds {ones} ones, expected exactly one")
            }
            Violation::ZeroBetweenOnes { row, col } => write!(
                f,
                "property 2: cell ({row},{col}) is 0 with a 1 above it and a 1 to its left"
            ),
            Violation::Index { expected, found } => write!(f, "index is {found}, expected {expected}"),
        }
    }
}

/// Checks both Catalan properties, and the index when `expected_index` is
/// given. An empty result means the tableau is valid.
pub fn validate_tableau(t: &Tableau, expected_index: Option<usize>) -> Vec<Violation> {
    let shape = t.shape();
    let mut out = Vec::new();
    if let Some(expected) = expected_index {
        if shape.index() != expected {
            out.push(Violation::Index { expected, found: shape.index() });
        }
    }
    for row in 1..=shape.rows() {
        if t.get(row, 1) == 1 {
            out.push(Violation::OneInLeftmostColumn { row });
        }
    }
    for col in 2..=shape.columns() {
        let ones = (1..=shape.column_height(col)).filter(|&r| t.get(r, col) == 1).count();
        if ones != 1 {
            out.push(Violation::ColumnOnes { col, ones });
        }
    }
    for row in 1..=shape.rows() {
        for col in 1..=shape.row_len(row) {
            if t.get(row, col) == 0
                && (1..row).any(|r| t.get(r, col) == 1)
                && (1..col).any(|c| t.get(row, c) == 1)
            {
                out.push(Violation::ZeroBetweenOnes { row, col });
            }
        }
    }
    out
}

fn check(t: &Tableau, expected_index: Option<usize>) -> Result<()> {
    let violations = validate_tableau(t, expected_index);
    if violations.is_empty() {
        return Ok(());
    }
    let msgs: Vec<String> = violations.iter().map(ToString::to_string).collect();
    Err(Error::InvalidTableau(msgs.join("; ")))
}

/// Endpoint steps: east for a left child, north for a right child.
pub fn path_steps(t: &Tree) -> Vec<Step> {
    let layout = t.layout();
    (0..layout.endpoints.len())
        .map(|i| match layout.endpoint_side(i) {
            Side::Left => Step::East,
            _ => Step::North,
        })
        .collect()
}

/// `λ(T)`.
pub fn lattice_path(t: &Tree) -> YoungDiagram {
    YoungDiagram::from_path(&path_steps(t)).expect("tree paths start east and end north")
}

/// Cell of every internal vertex, by pre-order index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedTree {
    pub shape: YoungDiagram,
    /// `(row, col)` for internal vertices, `None` for endpoints.
    pub cells: Vec<Option<(usize, usize)>>,
    pub sides: Vec<Side>,
}

impl EmbeddedTree {
    pub fn cell(&self, v: usize) -> Option<(usize, usize)> {
        self.cells[v]
    }
}

/// Column of each east step and row of each north step, per endpoint.
fn step_positions(steps: &[Step], rows: usize) -> Vec<usize> {
    let (mut east, mut north) = (0, 0);
    steps
        .iter()
        .map(|s| match s {
            Step::East => {
                east += 1;
                east
            }
            Step::North => {
                north += 1;
                rows - north + 1
            }
        })
        .collect()
}

pub fn embed(t: &Tree) -> EmbeddedTree {
    let layout = t.layout();
    let steps = path_steps(t);
    let shape = YoungDiagram::from_path(&steps).expect("tree paths start east and end north");
    let pos = step_positions(&steps, shape.rows());
    let code = t.code();
    let cells = (0..code.len())
        .map(|v| match code[v] {
            Node::Endpoint => None,
            Node::Internal => {
                let leftmost = (v..).find(|&p| code[p] == Node::Endpoint).expect("subtree has an endpoint");
                let rightmost = layout.end[v] - 1;
                let row = pos[layout.endpoint_rank[rightmost].expect("endpoint")];
                let col = pos[layout.endpoint_rank[leftmost].expect("endpoint")];
                Some((row, col))
            }
        })
        .collect();
    EmbeddedTree { shape, cells, sides: layout.side }
}

/// The Catalan tableau of index `n + 1` attached to `t`.
pub fn phi(t: &Tree) -> Tableau {
    let e = embed(t);
    let mut tab = Tableau::zeros(e.shape.clone());
    for (cell, side) in e.cells.iter().zip(&e.sides) {
        if let (Some((row, col)), Side::Right) = (cell, side) {
            tab.fill[row - 1][col - 1] = 1;
        }
    }
    tab
}

/// Rebuilds the tree of a Catalan tableau.
///
/// Walking down from the root, a vertex in cell `(r, c)` has its right child
/// at the next 1 to the right in row `r` (or the row's endpoint if there is
/// none), and that child's column fixes where the endpoints split.
pub fn phi_inverse(tab: &Tableau) -> Result<Tree> {
    check(tab, None)?;
    let shape = tab.shape();
    let steps = shape.boundary();
    let pos = step_positions(&steps, shape.rows());
    let mut col_leaf = vec![0; shape.columns() + 1];
    for (leaf, s) in steps.iter().enumerate() {
        if *s == Step::East {
            col_leaf[pos[leaf]] = leaf;
        }
    }

    fn build(
        lo: usize,
        hi: usize,
        tab: &Tableau,
        steps: &[Step],
        pos: &[usize],
        col_leaf: &[usize],
        code: &mut Vec<Node>,
    ) -> Result<()> {
        if lo == hi {
            code.push(Node::Endpoint);
            return Ok(());
        }
        if steps[lo] != Step::East || steps[hi] != Step::North {
            return Err(Error::InvalidTableau("filling is not in the image of the tree map".into()));
        }
        let (row, col) = (pos[hi], pos[lo]);
        let next_one = (col + 1..=tab.shape().row_len(row)).find(|&c| tab.get(row, c) == 1);
        let split = match next_one {
            Some(c) => col_leaf[c],
            None => hi,
        };
        if split <= lo || split > hi {
            return Err(Error::InvalidTableau("filling is not in the image of the tree map".into()));
        }
        code.push(Node::Internal);
        build(lo, split - 1, tab, steps, pos, col_leaf, code)?;
        build(split, hi, tab, steps, pos, col_leaf, code)
    }

    let mut code = Vec::with_capacity(2 * steps.len() - 1);
    build(0, steps.len() - 1, tab, &steps, &pos, &col_leaf, &mut code)?;
    let tree = Tree::from_code(code)?;
    if &phi(&tree) != tab {
        return Err(Error::InvalidTableau("filling is not in the image of the tree map".into()));
    }
    Ok(tree)
}

/// All Catalan tableaux of the given index, by brute force over shapes and
/// the row of the single 1 in each non-leftmost column.
pub fn enumerate_catalan_tableaux(index: usize) -> Vec<Tableau> {
    let mut out = Vec::new();
    if index == 0 {
        return out;
    }
    let len = index + 1;
    // interior steps vary; the first is east and the last is north
    for mask in 0..1u64 << (len - 2) {
        let mut steps = vec![Step::East];
        steps.extend((0..len - 2).map(|i| if mask >> i & 1 == 1 { Step::North } else { Step::East }));
        steps.push(Step::North);
        let shape = YoungDiagram::from_path(&steps).expect("valid boundary");
        let mut tab = Tableau::zeros(shape);
        let mut row_has_one = vec![false; tab.shape.rows() + 1];
        fill_columns(2, &mut tab, &mut row_has_one, &mut out);
    }
    out.sort();
    out
}

fn fill_columns(col: usize, tab: &mut Tableau, row_has_one: &mut [bool], out: &mut Vec<Tableau>) {
    if col > tab.shape.columns() {
        out.push(tab.clone());
        return;
    }
    let height = tab.shape.column_height(col);
    for r in 1..=height {
        // zeros below the new 1 must not see a 1 to their left
        if (r + 1..=height).any(|i| row_has_one[i]) {
            continue;
        }
        let had = row_has_one[r];
        tab.fill[r - 1][col - 1] = 1;
        row_has_one[r] = true;
        fill_columns(col + 1, tab, row_has_one, out);
        tab.fill[r - 1][col - 1] = 0;
        row_has_one[r] = had;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::enumerate_trees;

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    #[test]
    fn lattice_path_examples() {
        assert_eq!(lattice_path(&t("(L(LL))")).parts(), [2]);
        assert_eq!(lattice_path(&t("((LL)L)")).parts(), [1, 1]);
        assert_eq!(lattice_path(&t("((LL)(LL))")).parts(), [2, 1]);
        assert_eq!(lattice_path(&t("((LL)(LL))")).index(), 3);
    }

    #[test]
    fn embed_examples() {
        let e = embed(&t("(L(LL))"));
        assert_eq!(e.cell(0), Some((1, 1)));
        assert_eq!(e.cell(2), Some((1, 2)));
        let e = embed(&t("((LL)(LL))"));
        assert_eq!(e.cell(0), Some((1, 1)));
        assert_eq!(e.cell(1), Some((2, 1)));
        assert_eq!(e.cell(4), Some((1, 2)));
        let e = embed(&t("((LL)L)"));
        assert!(e.cells.iter().flatten().all(|&(_, c)| c == 1));
    }

    #[test]
    fn phi_examples() {
        let tab = phi(&t("(L(LL))"));
        assert_eq!((tab.shape().parts(), tab.fill()), (&[2][..], &[vec![0, 1]][..]));
        let tab = phi(&t("((LL)L)"));
        assert_eq!(tab.fill(), [vec![0], vec![0]]);
        assert_eq!(phi_inverse(&Tableau::new(vec![2], vec![vec![0, 1]]).unwrap()).unwrap(), t("(L(LL))"));
        assert_eq!(phi_inverse(&Tableau::new(vec![1, 1], vec![vec![0], vec![0]]).unwrap()).unwrap(), t("((LL)L)"));
    }

    #[test]
    fn n2_image() {
        let images: Vec<Tableau> = enumerate_trees(2).iter().map(phi).collect();
        let mut shapes: Vec<Vec<usize>> = images.iter().map(|x| x.shape().parts().to_vec()).collect();
        shapes.sort();
        assert_eq!(shapes, [vec![1, 1, 1], vec![2, 1], vec![2, 2], vec![2, 2], vec![3]]);
        let mut distinct = images.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 5);
        assert!(images.iter().all(|x| validate_tableau(x, Some(3)).is_empty()));
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_catalan_tableaux(1).len(), 1);
        assert_eq!(enumerate_catalan_tableaux(2).len(), 2);
        assert_eq!(enumerate_catalan_tableaux(3).len(), 5);
        assert_eq!(enumerate_catalan_tableaux(4).len(), 14);
    }

    #[test]
    fn violations() {
        let bad = Tableau::new(vec![2], vec![vec![1, 0]]).unwrap();
        let v = validate_tableau(&bad, None);
        assert!(v.contains(&Violation::OneInLeftmostColumn { row: 1 }));
        assert!(v.contains(&Violation::ColumnOnes { col: 2, ones: 0 }));
        assert!(phi_inverse(&bad).is_err());

        let p2 = Tableau::new(vec![3, 3], vec![vec![0, 0, 1], vec![0, 1, 0]]).unwrap();
        assert_eq!(validate_tableau(&p2, None), vec![Violation::ZeroBetweenOnes { row: 2, col: 3 }]);
        assert!(validate_tableau(&p2, Some(5)).contains(&Violation::Index { expected: 5, found: 4 }));

        assert!(Tableau::new(vec![1, 2], vec![vec![0], vec![0, 0]]).is_err());
        assert!(Tableau::new(vec![2], vec![vec![0, 2]]).is_err());
    }

    #[test]
    fn json_shape() {
        let json = serde_json::to_string(&phi(&t("(L(LL))"))).unwrap();
        assert_eq!(json, r#"{"shape":[2],"fill":[[0,1]],"index":2}"#);
    }
}
