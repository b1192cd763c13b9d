use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use tasep_core::rates::{format_rational, parse_rational};
use tasep_core::{active_bonds, phi, phi_inverse, pi, sigma, validate_tableau, MarkedTree, Node, Tree};

/// Pre-order code of a full binary tree with `leaves` endpoints, shaped by `splits`.
fn build(leaves: usize, splits: &mut impl Iterator<Item = usize>, out: &mut Vec<Node>) {
    if leaves == 1 {
        out.push(Node::Endpoint);
        return;
    }
    let left = 1 + splits.next().unwrap_or(0) % (leaves - 1);
    out.push(Node::Internal);
    build(left, splits, out);
    build(leaves - left, splits, out);
}

fn tree(min_sites: usize, max_sites: usize) -> impl Strategy<Value = Tree> {
    (min_sites..=max_sites, prop::collection::vec(any::<usize>(), 16)).prop_map(|(n, splits)| {
        let mut code = Vec::new();
        build(n + 2, &mut splits.into_iter().cycle(), &mut code);
        Tree::from_code(code).expect("full binary tree")
    })
}

fn marked(max_sites: usize) -> impl Strategy<Value = MarkedTree> {
    (tree(1, max_sites), any::<prop::sample::Index>()).prop_map(|(t, i)| {
        let lbvs = t.last_branching_vertices();
        let v = lbvs[i.index(lbvs.len())];
        MarkedTree::new(t, v).expect("last branching vertex")
    })
}

proptest! {
    #[test]
    fn serialization_round_trips(t in tree(0, 14)) {
        let s = t.to_string();
        prop_assert_eq!(s.len(), 2 * t.internal_count() + t.endpoint_count());
        prop_assert_eq!(s.parse::<Tree>().unwrap(), t);
    }

    #[test]
    fn marked_serialization_round_trips(m in marked(12)) {
        prop_assert_eq!(m.to_string().parse::<MarkedTree>().unwrap(), m);
    }

    #[test]
    fn last_branching_vertices_are_active_bonds(t in tree(1, 14)) {
        let mut from_tree: Vec<_> =
            t.last_branching_vertices().into_iter().map(|v| t.bond_of_lbv(v).unwrap()).collect();
        from_tree.sort();
        let mut from_config = active_bonds(&t.reduce());
        from_config.sort();
        prop_assert_eq!(from_tree, from_config);
    }

    #[test]
    fn sigma_inverts_pi(m in marked(12)) {
        let image = pi(&m);
        prop_assert_eq!(image.n(), m.n());
        prop_assert_eq!(&sigma(&image), &m);
        prop_assert_eq!(pi(&sigma(&m)), m);
    }

    #[test]
    fn tableau_round_trips(t in tree(0, 12)) {
        let tab = phi(&t);
        prop_assert_eq!(tab.index(), t.n() + 1);
        prop_assert!(validate_tableau(&tab, Some(t.n() + 1)).is_empty());
        prop_assert_eq!(phi_inverse(&tab).unwrap(), t);
    }

    #[test]
    fn rationals_round_trip(p in 1i64..10_000, q in 1i64..10_000) {
        let r = BigRational::new(BigInt::from(p), BigInt::from(q));
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
}
