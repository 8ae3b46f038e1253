use std::collections::{HashSet, VecDeque};

use proptest::prelude::*;

use toric_lc::fixtures;
use toric_lc::graph::SimpleGraph;
use toric_lc::lc::{find_local_representative, lc_equivalent, lc_orbit, OrbitOptions};
use toric_lc::reduction::{
    class_memberships, classify, epsilon_swap, exchange, is_stricter, leaf_delete_commute_check,
    LeafClass, LeafGraph,
};
use toric_lc::selftest::leaf_suite;
use toric_lc::surface::{adjacency_relation, default_phi, AdjacencyRelation};

type Rows = Vec<u16>;

fn graph_of(rows: &Rows) -> SimpleGraph {
    let n = rows.len();
    let mut edges = Vec::new();
    for (i, &row) in rows.iter().enumerate() {
        for j in i + 1..n {
            if row >> j & 1 == 1 {
                edges.push((i as u32, j as u32));
            }
        }
    }
    SimpleGraph::from_edges((0..n as u32).collect(), &edges).unwrap()
}

fn naive_lc(rows: &Rows, v: usize) -> Rows {
    let nb: Vec<usize> = (0..rows.len()).filter(|&j| rows[v] >> j & 1 == 1).collect();
    let mut out = rows.clone();
    for &i in &nb {
        for &j in &nb {
            if i != j {
                out[i] ^= 1 << j;
            }
        }
    }
    out
}

/// Removes vertex `v`, shifting higher vertices down.
fn naive_delete(rows: &Rows, v: usize) -> Rows {
    let low = (1u16 << v) - 1;
    rows.iter()
        .enumerate()
        .filter(|&(i, _)| i != v)
        .map(|(_, &r)| (r & low) | (r >> 1 & !low))
        .collect()
}

fn naive_orbit(seed: &Rows) -> HashSet<Rows> {
    let mut seen = HashSet::from([seed.clone()]);
    let mut queue = VecDeque::from([seed.clone()]);
    while let Some(g) = queue.pop_front() {
        for v in 0..g.len() {
            let h = naive_lc(&g, v);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    seen
}

/// A leaf graph on `n` vertices: vertex 0 hangs on vertex 1, the rest is
/// given by `bits` over pairs of vertices `1..n`.
fn leaf_rows(n: usize, bits: &[bool]) -> Rows {
    let mut rows = vec![0u16; n];
    rows[0] |= 1 << 1;
    rows[1] |= 1;
    let mut k = 0;
    for i in 1..n {
        for j in i + 1..n {
            if bits[k] {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
            k += 1;
        }
    }
    rows
}

fn leaf_strategy(max_n: usize) -> impl Strategy<Value = Rows> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), (n - 1) * (n - 2) / 2).prop_map(move |b| leaf_rows(n, &b))
    })
}

fn is_connected(rows: &Rows) -> bool {
    let mut seen = 1u16;
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        let fresh = rows[v] & !seen;
        seen |= fresh;
        stack.extend((0..rows.len()).filter(|&j| fresh >> j & 1 == 1));
    }
    seen.count_ones() as usize == rows.len()
}

/// Exactly one of the four leaf classes, straight from the definitions.
fn oracle_class(rows: &Rows) -> Option<LeafClass> {
    let others = !0b11u16 & ((1 << rows.len()) - 1);
    let a_leaf = rows[0] == 0b10;
    let b_leaf = rows[1] == 0b01;
    let twins = rows[0] & others == rows[1] & others;
    let joined = rows[0] & 0b10 != 0;
    match (a_leaf, b_leaf, twins, joined) {
        (true, _, _, _) => Some(LeafClass::A),
        (_, true, _, _) => Some(LeafClass::B),
        (_, _, true, true) => Some(LeafClass::C),
        (_, _, true, false) => Some(LeafClass::D),
        _ => None,
    }
}

fn relation(n: usize, edges: &[(usize, usize)]) -> AdjacencyRelation {
    let mut g = SimpleGraph::empty((0..n as u32).collect()).unwrap();
    for &(a, b) in edges.iter().filter(|(a, b)| a != b) {
        g.set_edge_idx(a, b, true);
    }
    AdjacencyRelation::from_graph(g)
}

#[test]
fn leaf_seeded_classes_are_partitioned() {
    for n in 3..=6 {
        let pairs = (n - 1) * (n - 2) / 2;
        let mut seen: HashSet<Rows> = HashSet::new();
        for mask in 0u32..1 << pairs {
            let bits: Vec<bool> = (0..pairs).map(|k| mask >> k & 1 == 1).collect();
            let seed = leaf_rows(n, &bits);
            if !is_connected(&seed) || seen.contains(&seed) {
                continue;
            }
            let orbit = naive_orbit(&seed);
            let swapped: Rows = (0..n)
                .map(|i| seed_row_swap(&seed, [1, 0].get(i).copied().unwrap_or(i)))
                .collect();
            assert!(orbit.contains(&swapped), "class not closed under the exchange");
            for h in &orbit {
                let expected = oracle_class(h);
                assert!(expected.is_some(), "{h:?} outside A, B, C, D");
                let g = graph_of(h);
                assert_eq!(classify(&g, 0, 1).unwrap(), expected);
                let m = class_memberships(&g, 0, 1).unwrap();
                assert_eq!(m.iter().filter(|&&x| x).count(), 1);
            }
            seen.extend(orbit);
        }
    }
}

/// Row `i` of the seed with bits 0 and 1 exchanged.
fn seed_row_swap(rows: &Rows, i: usize) -> u16 {
    let r = rows[i];
    (r & !0b11) | (r & 1) << 1 | (r >> 1 & 1)
}

#[test]
fn leaf_suites_have_no_failures() {
    for n in 2..=6 {
        let s = leaf_suite(n, &OrbitOptions::default()).unwrap();
        assert!(s.classes > 0);
        assert_eq!(s.failures(), 0, "n={n}: {s:?}");
    }
}

#[test]
fn pentomino_orbit_is_nonlocal() {
    let e = fixtures::setup(fixtures::PENTOMINO).unwrap();
    let (_, g) = default_phi(&e).unwrap();
    let rel = adjacency_relation(&e);
    let search = find_local_representative(&g, rel.graph(), &OrbitOptions::default()).unwrap();
    assert!(!search.is_local());
    let orbit = lc_orbit(&g, &OrbitOptions::default()).unwrap();
    assert_eq!(orbit.len(), 20_992);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn epsilon_swap_exchanges_leaf_labels(rows in leaf_strategy(8)) {
        let g = graph_of(&rows);
        let leaf = LeafGraph::new(g.clone(), 0, 1).unwrap();
        let swapped = epsilon_swap(&leaf);
        let by_hand = naive_lc(&naive_lc(&rows, 1), 0);
        prop_assert!(swapped.graph().labeled_eq(&graph_of(&by_hand)));
        prop_assert!(swapped.graph().labeled_eq(&exchange(&g, 0, 1).unwrap()));
        prop_assert_eq!((swapped.outer(), swapped.inner()), (1, 0));
        prop_assert!(lc_equivalent(&g, swapped.graph()).unwrap().is_some());
        prop_assert!(lc_equivalent(&g, &exchange(&g, 0, 1).unwrap()).unwrap().is_some());
    }

    #[test]
    fn leaf_deletion_commutes(rows in leaf_strategy(9), seq in proptest::collection::vec(1usize..9, 0..16)) {
        let n = rows.len();
        let seq: Vec<usize> = seq.into_iter().map(|v| 1 + (v - 1) % (n - 1)).collect();
        let full = seq.iter().fold(rows.clone(), |g, &v| naive_lc(&g, v));
        let cut = seq.iter().fold(naive_delete(&rows, 0), |g, &v| naive_lc(&g, v - 1));
        prop_assert_eq!(naive_delete(&full, 0), cut);
        let leaf = LeafGraph::new(graph_of(&rows), 0, 1).unwrap();
        let labels: Vec<u32> = seq.iter().map(|&v| v as u32).collect();
        prop_assert!(leaf_delete_commute_check(&leaf, &labels).unwrap());
    }

    #[test]
    fn strictness_is_monotone(
        n in 3usize..8,
        l1 in proptest::collection::vec((0usize..8, 0usize..8), 0..20),
        l2 in proptest::collection::vec((0usize..8, 0usize..8), 0..20),
        extra in proptest::collection::vec((0usize..8, 0usize..8), 1..6),
    ) {
        let clip = |v: &[(usize, usize)]| v.iter().map(|&(a, b)| (a % n, b % n)).collect::<Vec<_>>();
        let (l1, l2, extra) = (clip(&l1), clip(&l2), clip(&extra));
        let sub: Vec<u32> = (0..n as u32).collect();
        let base = is_stricter(&relation(n, &l1), &relation(n, &l2), &sub).unwrap();
        let mut l1_more = l1.clone();
        l1_more.extend(&extra);
        let wider_big = is_stricter(&relation(n, &l1_more), &relation(n, &l2), &sub).unwrap();
        prop_assert!(wider_big.violating_edges.len() >= base.violating_edges.len());
        prop_assert!(!(!base.holds && wider_big.holds));
        let mut l2_more = l2.clone();
        l2_more.extend(&extra);
        let wider_small = is_stricter(&relation(n, &l1), &relation(n, &l2_more), &sub).unwrap();
        prop_assert!(!(base.holds && !wider_small.holds));
        for &(p, q) in &base.violating_edges {
            prop_assert!(relation(n, &l1).related(p, q) && !relation(n, &l2).related(p, q));
        }
    }
}
