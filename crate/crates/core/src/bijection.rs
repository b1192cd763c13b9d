//! The permutation `pi` of marked trees, its inverse `sigma`, and cycles.
//!
//! Both maps cut the marked vertex `v` down to a single endpoint (dropping
//! its inner child) and regrow a two-endpoint vertex at a target endpoint of
//! the contracted tree, which becomes the new mark. Targets are searched
//! strictly beyond the contracted endpoint, in the contracted tree.

use std::collections::HashMap;

use crate::error::Result;
use crate::marked::{enumerate_marked, MarkedTree};
use crate::tree::{Node, Side, Tree};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Forward,
    Backward,
}

pub fn pi(t: &MarkedTree) -> MarkedTree {
    relocate(t, Direction::Forward)
}

pub fn sigma(t: &MarkedTree) -> MarkedTree {
    relocate(t, Direction::Backward)
}

fn relocate(t: &MarkedTree, dir: Direction) -> MarkedTree {
    let code = t.tree().code();
    let v = t.mark();
    let v_side = t.tree().layout().side[v];

    let mut contracted = Vec::with_capacity(code.len() - 2);
    contracted.extend_from_slice(&code[..v]);
    contracted.push(Node::Endpoint);
    contracted.extend_from_slice(&code[v + 3..]);
    let contracted = Tree::from_code_unchecked(contracted);
    let layout = contracted.layout();

    let count = layout.endpoints.len();
    let c = layout.endpoint_rank[v].expect("contracted vertex is an endpoint");
    let side = |i: usize| layout.endpoint_side(i);
    let first_after = |wanted: Side| (c + 1..count).find(|&i| side(i) == wanted);
    let last_before = |wanted: Side| (0..c).rev().find(|&i| side(i) == wanted);

    let target = match (dir, v_side) {
        // v right child: next right-child endpoint to the right; when v held
        // the rightmost endpoint, the rightmost left-child endpoint instead.
        (Direction::Forward, Side::Right) => first_after(Side::Right)
            .or_else(|| (0..count).rev().find(|&i| side(i) == Side::Left)),
        // mirror image
        (Direction::Forward, Side::Left) => {
            last_before(Side::Left).or_else(|| (0..count).find(|&i| side(i) == Side::Right))
        }
        (Direction::Backward, Side::Right) => last_before(Side::Right).or(Some(0)),
        (Direction::Backward, Side::Left) => first_after(Side::Left).or(Some(count - 1)),
        (_, Side::Root) => unreachable!("the root is never marked when n >= 1"),
    }
    .expect("a target endpoint always exists for n >= 1");

    let q = layout.endpoints[target];
    let shrunk = contracted.code();
    let mut grown = Vec::with_capacity(code.len());
    grown.extend_from_slice(&shrunk[..q]);
    grown.extend_from_slice(&[Node::Internal, Node::Endpoint, Node::Endpoint]);
    grown.extend_from_slice(&shrunk[q + 1..]);
    MarkedTree::new_unchecked(Tree::from_code_unchecked(grown), q)
}

/// Disjoint cycles of `pi` on all marked trees with `n + 2` endpoints. Each
/// cycle starts at its smallest element; cycles are sorted by that element.
pub fn cycle_decomposition(n: usize) -> Result<Vec<Vec<MarkedTree>>> {
    let all = enumerate_marked(n)?;
    let index: HashMap<&MarkedTree, usize> = all.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut seen = vec![false; all.len()];
    let mut cycles = Vec::new();
    // `all` is sorted, so the first unseen element leads its cycle
    for start in 0..all.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cycle.push(all[cur].clone());
            let next = pi(&all[cur]);
            cur = *index.get(&next).expect("pi stays within the marked trees");
        }
        debug_assert_eq!(cur, start, "pi is not a permutation");
        cycles.push(cycle);
    }
    Ok(cycles)
}
