//! Non-locality by reduction: leaf graphs, the ε-swap, leaf deletion, the
//! strictness order on adjacency relations, and verification of single
//! reduction steps. Chains of steps and their certificates live in [`chain`].

pub mod chain;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{enumerate_spanning_trees, phi, SimpleGraph};
use crate::lc::{
    lc_equivalent, lc_orbit_until, CompactGraph, LcOrbit, OrbitOptions, OrbitOutcome,
};
use crate::surface::{adjacency_relation, default_phi, tree_from_qubits, AdjacencyRelation, Embedding};

/// A graph with a degree-one vertex `outer` whose only neighbour is `inner`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafGraph {
    graph: SimpleGraph,
    outer: u32,
    inner: u32,
}

impl LeafGraph {
    pub fn new(graph: SimpleGraph, outer: u32, inner: u32) -> Result<Self> {
        let nb = graph.neighbors(outer)?;
        if nb != [inner] {
            return Err(Error::NotLeafGraph(format!(
                "vertex {outer} has neighbours {nb:?}, expected exactly [{inner}]"
            )));
        }
        Ok(Self {
            graph,
            outer,
            inner,
        })
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn outer(&self) -> u32 {
        self.outer
    }

    pub fn inner(&self) -> u32 {
        self.inner
    }

    /// The graph with the outer vertex removed.
    pub fn without_outer(&self) -> SimpleGraph {
        self.graph.delete_vertex(self.outer).expect("outer is a vertex")
    }
}

/// `τ_a τ_b` applied to `G_ab` (`τ_b` first), giving `G_ba`.
pub fn epsilon_swap(l: &LeafGraph) -> LeafGraph {
    let g = l
        .graph
        .local_complement(l.inner)
        .and_then(|g| g.local_complement(l.outer))
        .expect("leaf vertices exist");
    LeafGraph {
        graph: g,
        outer: l.inner,
        inner: l.outer,
    }
}

/// Exchanges the labels `a` and `b` in place (the map `ε_ab` on graphs).
pub fn exchange(g: &SimpleGraph, a: u32, b: u32) -> Result<SimpleGraph> {
    let ia = g.index_of(a).ok_or(Error::UnknownVertex(a))?;
    let ib = g.index_of(b).ok_or(Error::UnknownVertex(b))?;
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.swap(ia, ib);
    let mut h = SimpleGraph::empty(g.labels().to_vec())?;
    for (i, j) in g.edge_indices() {
        h.set_edge_idx(order[i], order[j], true);
    }
    Ok(h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LeafClass {
    A,
    B,
    C,
    D,
}

/// Membership in each of the sets A, B, C, D (not necessarily exclusive
/// outside ε-symmetric classes).
pub fn class_memberships(h: &SimpleGraph, a: u32, b: u32) -> Result<[bool; 4]> {
    let ia = h.index_of(a).ok_or(Error::UnknownVertex(a))?;
    let ib = h.index_of(b).ok_or(Error::UnknownVertex(b))?;
    if ia == ib {
        return Err(Error::Malformed("a and b must differ".into()));
    }
    let na = h.neighbors_idx(ia);
    let nb = h.neighbors_idx(ib);
    let in_a = na == [ib];
    let in_b = nb == [ia];
    let symmetric = (0..h.len())
        .filter(|&v| v != ia && v != ib)
        .all(|v| h.has_edge_idx(ia, v) == h.has_edge_idx(ib, v));
    let ab = h.has_edge_idx(ia, ib);
    Ok([in_a, in_b, symmetric && ab, symmetric && !ab])
}

/// First of A, B, C, D that applies, or `None`.
pub fn classify(h: &SimpleGraph, a: u32, b: u32) -> Result<Option<LeafClass>> {
    let m = class_memberships(h, a, b)?;
    Ok([LeafClass::A, LeafClass::B, LeafClass::C, LeafClass::D]
        .into_iter()
        .zip(m)
        .find_map(|(c, hit)| hit.then_some(c)))
}

/// Compares `seq(G) - a` with `seq(G - a)` for a sequence avoiding `a`.
pub fn leaf_delete_commute_check(l: &LeafGraph, seq: &[u32]) -> Result<bool> {
    if seq.contains(&l.outer) {
        return Err(Error::Malformed(format!(
            "sequence uses the outer vertex {}",
            l.outer
        )));
    }
    let mut full = l.graph.clone();
    let mut cut = l.without_outer();
    for &v in seq {
        full = full.local_complement(v)?;
        cut = cut.local_complement(v)?;
    }
    Ok(full.delete_vertex(l.outer)? == cut)
}

/// Result of comparing two adjacency relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictnessReport {
    pub holds: bool,
    pub violating_edges: Vec<(u32, u32)>,
}

/// `Λ1 ≽ Λ2` on `sub_qubits`: every `Λ1` pair inside `sub_qubits` is a `Λ2`
/// pair.
pub fn is_stricter(
    l1: &AdjacencyRelation,
    l2: &AdjacencyRelation,
    sub_qubits: &[u32],
) -> Result<StrictnessReport> {
    let mut sub = sub_qubits.to_vec();
    sub.sort_unstable();
    let mut q2 = l2.qubits().to_vec();
    q2.sort_unstable();
    if sub != q2 {
        return Err(Error::QubitMismatch(
            "sub-qubits differ from the qubits of the second relation".into(),
        ));
    }
    let restricted = l1
        .graph()
        .induced(sub_qubits)
        .map_err(|_| Error::QubitMismatch("sub-qubits are not qubits of the first relation".into()))?;
    let violating_edges: Vec<(u32, u32)> = restricted
        .edges()
        .into_iter()
        .filter(|&(p, q)| !l2.related(p, q))
        .collect();
    Ok(StrictnessReport {
        holds: violating_edges.is_empty(),
        violating_edges,
    })
}

/// Spanning trees of `big` (as qubit ids) whose φ-graph has `outer` as a
/// leaf attached to `inner`, in enumeration order.
pub fn scan_trees_for_leaf(big: &Embedding, outer: u32, inner: u32) -> Result<Vec<(Vec<u32>, LeafGraph)>> {
    let mut out = Vec::new();
    for t in enumerate_spanning_trees(big.graph())? {
        let g = phi(big.graph(), &t)?;
        if g.neighbors(outer)? == [inner] {
            let tree = t.tree_edges().iter().map(|&i| big.qubits()[i]).collect();
            out.push((tree, LeafGraph::new(g, outer, inner)?));
        }
    }
    Ok(out)
}

/// First orbit member (in breadth-first order) with `outer` a leaf on
/// `inner`, reached from `seed`.
pub fn scan_orbit_for_leaf(
    seed: &SimpleGraph,
    outer: u32,
    inner: u32,
    opts: &OrbitOptions,
) -> Result<Option<LeafGraph>> {
    let ia = seed.index_of(outer).ok_or(Error::UnknownVertex(outer))?;
    let ib = seed.index_of(inner).ok_or(Error::UnknownVertex(inner))?;
    let is_leaf = move |c: &CompactGraph| c.rows()[ia] == 1 << ib;
    match lc_orbit_until(seed, Some(&is_leaf), opts)? {
        OrbitOutcome::Stopped { hit, .. } => Ok(Some(LeafGraph::new(hit, outer, inner)?)),
        OrbitOutcome::Complete(_) => Ok(None),
    }
}

/// Every member of a fully enumerated orbit with `outer` a leaf on `inner`.
pub fn leaf_members(orbit: &LcOrbit, outer: u32, inner: u32) -> Result<Vec<LeafGraph>> {
    let mut out = Vec::new();
    for g in orbit.graphs() {
        if g.neighbors(outer)? == [inner] {
            out.push(LeafGraph::new(g, outer, inner)?);
        }
    }
    Ok(out)
}

/// How a leaf graph is declared in a chain file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeafSpec {
    pub outer: u32,
    pub inner: u32,
    /// φ of the system for this spanning tree (qubit ids).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<Vec<u32>>,
    /// Explicit edge list over qubit ids.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[u32; 2]>>,
}

impl LeafSpec {
    pub fn resolve(&self, big: &Embedding) -> Result<LeafGraph> {
        let g = match (&self.tree, &self.edges) {
            (Some(tree), None) => phi(big.graph(), &tree_from_qubits(big, tree)?)?,
            (None, Some(edges)) => {
                let e: Vec<(u32, u32)> = edges.iter().map(|&[p, q]| (p, q)).collect();
                SimpleGraph::from_edges(big.qubits().to_vec(), &e)?
            }
            _ => {
                return Err(Error::Malformed(
                    "leaf declaration needs exactly one of `tree` or `edges`".into(),
                ))
            }
        };
        LeafGraph::new(g, self.outer, self.inner)
    }
}

/// Outcome of checking the reduction theorem's hypotheses for one step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub strict_a: StrictnessReport,
    pub strict_b: StrictnessReport,
    /// The leaf graph is LC-equivalent to φ of the big system.
    pub leaf_in_class: bool,
    /// `G_ab - a` is LC-equivalent to φ of the `a`-reduced system.
    pub reduced_a_equivalent: bool,
    /// `G_ba - b` is LC-equivalent to φ of the `b`-reduced system.
    pub reduced_b_equivalent: bool,
    pub certified_a: bool,
    pub certified_b: bool,
}

impl StepReport {
    pub fn holds(&self) -> bool {
        self.strict_a.holds
            && self.strict_b.holds
            && self.leaf_in_class
            && self.reduced_a_equivalent
            && self.reduced_b_equivalent
            && self.certified_a
            && self.certified_b
    }

    /// Names of the failed hypotheses.
    pub fn failures(&self) -> Vec<String> {
        let mut f = Vec::new();
        if !self.strict_a.holds {
            f.push(format!("strictness towards the a-reduced system: {:?}", self.strict_a.violating_edges));
        }
        if !self.strict_b.holds {
            f.push(format!("strictness towards the b-reduced system: {:?}", self.strict_b.violating_edges));
        }
        if !self.leaf_in_class {
            f.push("leaf graph is not in the LC class of the system".into());
        }
        if !self.reduced_a_equivalent {
            f.push("G_ab - a is not LC-equivalent to the a-reduced system".into());
        }
        if !self.reduced_b_equivalent {
            f.push("G_ba - b is not LC-equivalent to the b-reduced system".into());
        }
        if !self.certified_a {
            f.push("a-reduced system lacks a non-locality certificate".into());
        }
        if !self.certified_b {
            f.push("b-reduced system lacks a non-locality certificate".into());
        }
        f
    }
}

fn without(qubits: &[u32], q: u32) -> Vec<u32> {
    qubits.iter().copied().filter(|&x| x != q).collect()
}

fn same_set(a: &[u32], b: &[u32]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

/// Checks the three hypotheses of the reduction theorem for
/// `big → (reduced_a, reduced_b)`. Class membership is decided with the
/// pairwise Bouchet test, so no orbit of `big` is enumerated.
/// `certified_a` / `certified_b` state whether non-locality certificates for
/// the reduced systems are available.
pub fn verify_reduction_step(
    big: &Embedding,
    reduced_a: &Embedding,
    reduced_b: &Embedding,
    leaf: &LeafGraph,
    certified_a: bool,
    certified_b: bool,
) -> Result<StepReport> {
    let (a, b) = (leaf.outer(), leaf.inner());
    if !same_set(reduced_a.qubits(), &without(big.qubits(), a)) {
        return Err(Error::QubitMismatch(format!(
            "a-reduced system must carry every qubit except {a}"
        )));
    }
    if !same_set(reduced_b.qubits(), &without(big.qubits(), b)) {
        return Err(Error::QubitMismatch(format!(
            "b-reduced system must carry every qubit except {b}"
        )));
    }
    if !leaf.graph().same_vertex_set(&SimpleGraph::empty(big.qubits().to_vec())?) {
        return Err(Error::QubitMismatch("leaf graph must live on the system's qubits".into()));
    }
    let lam = adjacency_relation(big);
    let lam_a = adjacency_relation(reduced_a);
    let lam_b = adjacency_relation(reduced_b);
    let strict_a = is_stricter(&lam, &lam_a, reduced_a.qubits())?;
    let strict_b = is_stricter(&lam, &lam_b, reduced_b.qubits())?;

    let (_, g_big) = default_phi(big)?;
    let (_, g_a) = default_phi(reduced_a)?;
    let (_, g_b) = default_phi(reduced_b)?;
    let leaf_in_class = lc_equivalent(leaf.graph(), &g_big)?.is_some();
    let reduced_a_equivalent = lc_equivalent(&leaf.without_outer(), &g_a)?.is_some();
    let swapped = epsilon_swap(leaf);
    let reduced_b_equivalent = lc_equivalent(&swapped.without_outer(), &g_b)?.is_some();

    Ok(StepReport {
        strict_a,
        strict_b,
        leaf_in_class,
        reduced_a_equivalent,
        reduced_b_equivalent,
        certified_a,
        certified_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_abc() -> LeafGraph {
        let g = SimpleGraph::from_edges(vec![1, 2, 3], &[(1, 2), (2, 3)]).unwrap();
        LeafGraph::new(g, 1, 2).unwrap()
    }

    #[test]
    fn swap_examples() {
        let k2 = LeafGraph::new(SimpleGraph::complete(vec![1, 2]).unwrap(), 1, 2).unwrap();
        assert_eq!(epsilon_swap(&k2).graph(), k2.graph());

        let l = path_abc();
        let s = epsilon_swap(&l);
        assert_eq!(s.outer(), 2);
        assert_eq!(s.inner(), 1);
        assert_eq!(
            s.graph(),
            &SimpleGraph::from_edges(vec![1, 2, 3], &[(2, 1), (1, 3)]).unwrap()
        );
        assert_eq!(s.graph(), &exchange(l.graph(), 1, 2).unwrap());
        assert_eq!(epsilon_swap(&s).graph(), l.graph());
    }

    #[test]
    fn not_a_leaf() {
        let g = SimpleGraph::complete(vec![1, 2, 3]).unwrap();
        assert!(matches!(LeafGraph::new(g, 1, 2), Err(Error::NotLeafGraph(_))));
    }

    #[test]
    fn classify_examples() {
        let star = SimpleGraph::from_edges(vec![0, 1, 2, 3], &[(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(classify(&star, 0, 1).unwrap(), Some(LeafClass::A));
        assert_eq!(classify(&star, 1, 0).unwrap(), Some(LeafClass::B));
        let c = SimpleGraph::from_edges(vec![0, 1, 2], &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(classify(&c, 0, 1).unwrap(), Some(LeafClass::C));
        let d = SimpleGraph::from_edges(vec![0, 1, 2], &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(classify(&d, 0, 1).unwrap(), Some(LeafClass::D));
        let none = SimpleGraph::from_edges(vec![0, 1, 2, 3], &[(0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(classify(&none, 0, 1).unwrap(), None);
    }

    #[test]
    fn commute_check_examples() {
        let l = path_abc();
        assert!(leaf_delete_commute_check(&l, &[]).unwrap());
        assert!(leaf_delete_commute_check(&l, &[2]).unwrap());
        assert!(leaf_delete_commute_check(&l, &[1]).is_err());
    }

    #[test]
    fn strictness_examples() {
        let q = vec![0, 1, 2];
        let k3 = AdjacencyRelation::from_graph(SimpleGraph::complete(q.clone()).unwrap());
        let p = AdjacencyRelation::from_graph(SimpleGraph::path(q.clone()).unwrap());
        assert!(is_stricter(&k3, &k3, &q).unwrap().holds);
        assert!(is_stricter(&p, &k3, &q).unwrap().holds);
        let r = is_stricter(&k3, &p, &q).unwrap();
        assert!(!r.holds);
        assert_eq!(r.violating_edges, vec![(0, 2)]);
        let sub = AdjacencyRelation::from_graph(SimpleGraph::complete(vec![0, 1]).unwrap());
        assert!(is_stricter(&k3, &sub, &[0, 1]).unwrap().holds);
        assert!(matches!(is_stricter(&k3, &sub, &[0, 2]), Err(Error::QubitMismatch(_))));
    }

    fn first_step() -> (Embedding, Embedding, Embedding, LeafGraph) {
        let spec = crate::fixtures::pentomino_chain().unwrap();
        let systems = spec.systems().unwrap();
        let step = &spec.steps[0];
        let big = systems[&step.system].clone();
        let leaf = step.leaf.resolve(&big).unwrap();
        (
            big,
            systems[&step.reduced_a].clone(),
            systems[&step.reduced_b].clone(),
            leaf,
        )
    }

    #[test]
    fn chain_step_holds() {
        let (big, ra, rb, leaf) = first_step();
        let r = verify_reduction_step(&big, &ra, &rb, &leaf, true, true).unwrap();
        assert!(r.holds(), "{:?}", r.failures());
        let r = verify_reduction_step(&big, &ra, &rb, &leaf, true, false).unwrap();
        assert_eq!(r.failures().len(), 1);
    }

    #[test]
    fn scrambled_reduced_system_breaks_strictness() {
        let (big, ra, rb, leaf) = first_step();
        let mut setup = ra.to_setup();
        let mut q = ra.qubits().to_vec();
        let last = q.len() - 1;
        q.swap(0, last);
        setup.qubits = Some(q);
        let scrambled = Embedding::from_setup(&setup).unwrap();
        let r = verify_reduction_step(&big, &scrambled, &rb, &leaf, true, true).unwrap();
        assert!(!r.strict_a.holds);
        assert!(!r.strict_a.violating_edges.is_empty());
        assert!(!r.holds());
    }

    #[test]
    fn reduced_qubits_must_match() {
        let (big, ra, rb, leaf) = first_step();
        assert!(matches!(
            verify_reduction_step(&big, &rb, &ra, &leaf, true, true),
            Err(Error::QubitMismatch(_))
        ));
    }

    #[test]
    fn orbit_scan_finds_leaf_in_bfs_order() {
        let (big, _, _, leaf) = first_step();
        let (_, g) = default_phi(&big).unwrap();
        let found = scan_orbit_for_leaf(&g, leaf.outer(), leaf.inner(), &OrbitOptions::default())
            .unwrap()
            .unwrap();
        assert_eq!(found.graph().neighbors(leaf.outer()).unwrap(), vec![leaf.inner()]);
        assert!(lc_equivalent(found.graph(), &g).unwrap().is_some());
        let trees = scan_trees_for_leaf(&big, leaf.outer(), leaf.inner()).unwrap();
        assert!(trees.iter().any(|(_, l)| l == &leaf));
    }
}
