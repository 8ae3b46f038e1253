//! Surface codes on embedded multigraphs.
//!
//! Qubits sit on edges. Each vertex `s` carries a star `A_s` (X on the incident
//! edges) and each face `p` a plaquette `B_p` (Z on its boundary walk).

mod polyform;

pub use polyform::{polyform_enumerate, Lattice, Polyform};

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gf2::{self, BitMatrix, BitVec};
use crate::graph::{fundamental_basis, phi, Multigraph, SimpleGraph, SpanningTree};
use crate::pauli::{graph_stabilizer, span_equal, PauliString, Tableau};

/// On-disk setup description. Qubit ids default to edge indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetupFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<u32>,
    pub edges: Vec<[u32; 2]>,
    pub faces: Vec<Vec<usize>>,
    pub closed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubits: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<usize>,
}

/// A validated 2-cell embedding: multigraph plus face walks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    name: Option<String>,
    graph: Multigraph,
    faces: Vec<Vec<usize>>,
    closed: bool,
    genus: Option<usize>,
}

impl Embedding {
    /// Validates and builds. For closed surfaces the genus is derived from
    /// Euler's formula; `genus` (if given) must agree.
    pub fn new(
        graph: Multigraph,
        faces: Vec<Vec<usize>>,
        closed: bool,
        genus: Option<usize>,
    ) -> Result<Self> {
        let mut e = Self {
            name: None,
            graph,
            faces,
            closed,
            genus: None,
        };
        e.genus = e.validate(genus)?;
        Ok(e)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn from_setup(s: &SetupFile) -> Result<Self> {
        let edges: Vec<(u32, u32)> = s.edges.iter().map(|&[u, v]| (u, v)).collect();
        let labels = s.qubits.clone().unwrap_or_else(|| (0..edges.len() as u32).collect());
        let graph = Multigraph::with_edge_labels(s.vertices.clone(), &edges, labels)?;
        let mut e = Self::new(graph, s.faces.clone(), s.closed, s.genus)?;
        e.name = s.name.clone();
        Ok(e)
    }

    pub fn to_setup(&self) -> SetupFile {
        let m = &self.graph;
        let default_labels = m.edge_labels().iter().enumerate().all(|(i, &l)| l == i as u32);
        SetupFile {
            name: self.name.clone(),
            vertices: m.vertices().to_vec(),
            edges: (0..m.edge_count())
                .map(|e| {
                    let (u, v) = m.endpoint_ids(e);
                    [u, v]
                })
                .collect(),
            faces: self.faces.clone(),
            closed: self.closed,
            qubits: (!default_labels).then(|| m.edge_labels().to_vec()),
            genus: self.genus,
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_setup(&serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_setup()).expect("setup serializes")
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn genus(&self) -> Option<usize> {
        self.genus
    }

    pub fn n_qubits(&self) -> usize {
        self.graph.edge_count()
    }

    /// Qubit ids in edge-index order.
    pub fn qubits(&self) -> &[u32] {
        self.graph.edge_labels()
    }

    pub fn qubit_index(&self, label: u32) -> Result<usize> {
        self.graph
            .edge_index_of_label(label)
            .ok_or(Error::UnknownVertex(label))
    }

    /// SHA-256 over the geometric content (the name is excluded).
    pub fn digest(&self) -> String {
        let mut s = self.to_setup();
        s.name = None;
        let bytes = serde_json::to_vec(&s).expect("setup serializes");
        hex::encode(Sha256::digest(bytes))
    }

    fn validate(&self, declared_genus: Option<usize>) -> Result<Option<usize>> {
        let m = &self.graph;
        let ne = m.edge_count();
        if !m.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut uses = vec![0usize; ne];
        for (fi, face) in self.faces.iter().enumerate() {
            if let Some(&e) = face.iter().find(|&&e| e >= ne) {
                return Err(Error::InvalidEmbedding(format!("face {fi} uses unknown edge {e}")));
            }
            let walk = face_walk(m, face)
                .ok_or_else(|| Error::InvalidEmbedding(format!("face {fi} is not a closed walk")))?;
            if !self.closed {
                let distinct: BTreeSet<usize> = walk.iter().copied().collect();
                let edges: BTreeSet<usize> = face.iter().copied().collect();
                if distinct.len() != walk.len() || edges.len() != face.len() {
                    return Err(Error::InvalidEmbedding(format!(
                        "face {fi} is not a simple cycle"
                    )));
                }
            }
            for &e in face {
                uses[e] += 1;
            }
        }
        for (e, &u) in uses.iter().enumerate() {
            let ok = if self.closed { u == 2 } else { u == 1 || u == 2 };
            if !ok {
                return Err(Error::InvalidEmbedding(format!(
                    "edge {e} lies on {u} face walks"
                )));
            }
        }
        if !self.closed {
            return match declared_genus {
                None | Some(0) => Ok(None),
                Some(g) => Err(Error::InvalidEmbedding(format!(
                    "open embedding declares genus {g}"
                ))),
            };
        }
        let chi = m.vertex_count() as i64 + self.faces.len() as i64 - ne as i64;
        if chi > 2 || (2 - chi) % 2 != 0 {
            return Err(Error::InvalidEmbedding(format!(
                "Euler characteristic {chi} is not 2 - 2g"
            )));
        }
        let g = ((2 - chi) / 2) as usize;
        if let Some(d) = declared_genus {
            if d != g {
                return Err(Error::InvalidEmbedding(format!(
                    "declared genus {d}, Euler formula gives {g}"
                )));
            }
        }
        Ok(Some(g))
    }

    /// Edge-space vector of each face (edges used an odd number of times).
    pub fn face_vectors(&self) -> Vec<BitVec> {
        let n = self.n_qubits();
        self.faces
            .iter()
            .map(|f| {
                let mut v = BitVec::zeros(n);
                for &e in f {
                    v.flip(e);
                }
                v
            })
            .collect()
    }

    /// Contracts the edge carrying `qubit`: its endpoints merge (keeping the
    /// smaller vertex id) and it leaves every face walk.
    pub fn contract(&self, qubit: u32) -> Result<Embedding> {
        let m = &self.graph;
        let e = self.qubit_index(qubit)?;
        let (u, v) = m.endpoint_ids(e);
        let (keep, gone) = if u < v { (u, v) } else { (v, u) };
        let mut edges = Vec::with_capacity(m.edge_count() - 1);
        let mut labels = Vec::with_capacity(m.edge_count() - 1);
        let mut remap = vec![usize::MAX; m.edge_count()];
        for (f, slot) in remap.iter_mut().enumerate() {
            if f == e {
                continue;
            }
            let (a, b) = m.endpoint_ids(f);
            let a = if a == gone { keep } else { a };
            let b = if b == gone { keep } else { b };
            if a == b {
                return Err(Error::Contraction(
                    qubit,
                    format!("edge {} is parallel and would become a loop", m.edge_labels()[f]),
                ));
            }
            *slot = edges.len();
            edges.push((a, b));
            labels.push(m.edge_labels()[f]);
        }
        let vertices: Vec<u32> = m.vertices().iter().copied().filter(|&x| x != gone).collect();
        let graph = Multigraph::with_edge_labels(vertices, &edges, labels)?;
        let faces = self
            .faces
            .iter()
            .map(|f| f.iter().filter(|&&x| x != e).map(|&x| remap[x]).collect())
            .collect();
        let mut out = Embedding::new(graph, faces, self.closed, None)
            .map_err(|err| Error::Contraction(qubit, err.to_string()))?;
        out.name = self.name.as_ref().map(|n| format!("{n}/{qubit}"));
        Ok(out)
    }

    /// Contracts several qubits in order.
    pub fn contract_all(&self, qubits: &[u32]) -> Result<Embedding> {
        qubits.iter().try_fold(self.clone(), |e, &q| e.contract(q))
    }
}

/// Vertex positions visited by a cyclic edge sequence, or `None` if the
/// sequence does not close up.
fn face_walk(m: &Multigraph, face: &[usize]) -> Option<Vec<usize>> {
    if face.len() < 2 {
        return None;
    }
    let (a, b) = m.ends(face[0]);
    'start: for (start, next) in [(a, b), (b, a)] {
        let mut walk = vec![start];
        let mut cur = next;
        for &e in &face[1..] {
            let (x, y) = m.ends(e);
            walk.push(cur);
            cur = if x == cur {
                y
            } else if y == cur {
                x
            } else {
                continue 'start;
            };
        }
        if cur == start {
            return Some(walk);
        }
    }
    None
}

/// Checks a setup without keeping it.
pub fn validate_embedding(s: &SetupFile) -> Result<Embedding> {
    Embedding::from_setup(s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceStabilizer {
    pub tableau: Tableau,
    pub degeneracy: u128,
}

pub fn star_operator(e: &Embedding, vertex: usize) -> PauliString {
    let m = e.graph();
    let n = e.n_qubits();
    let mut x = BitVec::zeros(n);
    for f in 0..m.edge_count() {
        let (a, b) = m.ends(f);
        if a == vertex || b == vertex {
            x.flip(f);
        }
    }
    PauliString::from_parts(x, BitVec::zeros(n), false)
}

pub fn plaquette_operator(e: &Embedding, face: usize) -> PauliString {
    let n = e.n_qubits();
    PauliString::from_parts(BitVec::zeros(n), e.face_vectors().swap_remove(face), false)
}

/// Stars then plaquettes, dependent generators removed.
pub fn surface_stabilizer(e: &Embedding) -> Result<SurfaceStabilizer> {
    let mut gens: Vec<PauliString> =
        (0..e.graph().vertex_count()).map(|s| star_operator(e, s)).collect();
    let n = e.n_qubits();
    for z in e.face_vectors() {
        gens.push(PauliString::from_parts(BitVec::zeros(n), z, false));
    }
    let tableau = Tableau::reduced(n, gens)?;
    let degeneracy = tableau.degeneracy();
    Ok(SurfaceStabilizer {
        tableau,
        degeneracy,
    })
}

/// `dim(cycle space) - rank(face boundaries)`; equals `2g` on closed surfaces.
pub fn homology_rank(e: &Embedding) -> Result<usize> {
    if !e.is_closed() {
        return Err(Error::OpenEmbedding);
    }
    let m = e.graph();
    let cycle_dim = m.edge_count() + 1 - m.vertex_count();
    let faces = BitMatrix::from_rows(e.n_qubits(), &e.face_vectors());
    Ok(cycle_dim - gf2::rank(&faces))
}

/// The vicinity relation `Λ`: two qubits are related iff they share a face
/// walk or an endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyRelation {
    graph: SimpleGraph,
}

impl AdjacencyRelation {
    /// Any simple graph is irreflexive and symmetric, so every graph is a
    /// valid relation.
    pub fn from_graph(graph: SimpleGraph) -> Self {
        Self { graph }
    }

    /// The graph `G_Λ`.
    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn qubits(&self) -> &[u32] {
        self.graph.labels()
    }

    pub fn related(&self, p: u32, q: u32) -> bool {
        self.graph.has_edge(p, q)
    }

    /// Edges of `g` outside the relation.
    pub fn violations(&self, g: &SimpleGraph) -> Vec<(u32, u32)> {
        g.edges()
            .into_iter()
            .filter(|&(p, q)| !self.related(p, q))
            .collect()
    }

    pub fn admits(&self, g: &SimpleGraph) -> bool {
        g.same_vertex_set(&self.graph) && self.violations(g).is_empty()
    }
}

pub fn adjacency_relation(e: &Embedding) -> AdjacencyRelation {
    let m = e.graph();
    let mut g = SimpleGraph::empty(m.edge_labels().to_vec()).expect("distinct edge labels");
    let mut link_all = |set: &[usize]| {
        for (i, &p) in set.iter().enumerate() {
            for &q in &set[i + 1..] {
                if p != q {
                    g.set_edge_idx(p, q, true);
                }
            }
        }
    };
    for inc in m.incidence() {
        link_all(&inc);
    }
    for f in e.faces() {
        link_all(f);
    }
    AdjacencyRelation { graph: g }
}

/// `L x L` square lattice on the torus. Horizontal edge `h(i,j) = i*L + j`
/// joins `(i,j)` and `(i,j+1)`; vertical edge `v(i,j) = L^2 + i*L + j` joins
/// `(i,j)` and `(i+1,j)`, indices mod `L`. Vertex `(i,j)` has id `i*L + j`.
pub fn square_torus(l: usize) -> Result<Embedding> {
    if l < 2 {
        return Err(Error::Malformed("torus side must be at least 2".into()));
    }
    let vid = |i: usize, j: usize| ((i % l) * l + j % l) as u32;
    let h = |i: usize, j: usize| (i % l) * l + j % l;
    let v = |i: usize, j: usize| l * l + (i % l) * l + j % l;
    let mut edges = Vec::with_capacity(2 * l * l);
    for i in 0..l {
        for j in 0..l {
            edges.push((vid(i, j), vid(i, j + 1)));
        }
    }
    for i in 0..l {
        for j in 0..l {
            edges.push((vid(i, j), vid(i + 1, j)));
        }
    }
    let faces = (0..l)
        .flat_map(|i| (0..l).map(move |j| vec![h(i, j), v(i, j + 1), h(i + 1, j), v(i, j)]))
        .collect();
    let graph = Multigraph::new((0..(l * l) as u32).collect(), &edges)?;
    Ok(Embedding::new(graph, faces, true, Some(1))?.with_name(format!("torus-{l}x{l}")))
}

/// A Z-loop on a cycle and the X-loop on a dual cycle crossing it once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopOperatorPair {
    pub z_loop: PauliString,
    pub x_loop: PauliString,
}

/// Straight coordinate loops on the `L x L` torus of [`square_torus`]:
/// `Z_1` along row 0 with `X_1` across column 0, `Z_2` along column 0 with
/// `X_2` across row 0.
pub fn loop_operators(l: usize) -> Result<Vec<LoopOperatorPair>> {
    if l < 2 {
        return Err(Error::Malformed("torus side must be at least 2".into()));
    }
    let n = 2 * l * l;
    let h = |i: usize, j: usize| i * l + j;
    let v = |i: usize, j: usize| l * l + i * l + j;
    Ok(vec![
        LoopOperatorPair {
            z_loop: PauliString::z_on(n, (0..l).map(|j| h(0, j))),
            x_loop: PauliString::x_on(n, (0..l).map(|i| h(i, 0))),
        },
        LoopOperatorPair {
            z_loop: PauliString::z_on(n, (0..l).map(|i| v(i, 0))),
            x_loop: PauliString::x_on(n, (0..l).map(|j| v(0, j))),
        },
    ])
}

/// `{Z_k, X_k} = 0`, `[Z_k, X_l] = 0` for `k != l`, `[Z_k, Z_l] = [X_k, X_l] = 0`,
/// and every loop commutes with every generator of `stab`.
pub fn loop_algebra_holds(pairs: &[LoopOperatorPair], stab: &Tableau) -> bool {
    for (k, pk) in pairs.iter().enumerate() {
        if pk.z_loop.commutes_with(&pk.x_loop) {
            return false;
        }
        for (l, pl) in pairs.iter().enumerate() {
            if k != l && !pk.z_loop.commutes_with(&pl.x_loop) {
                return false;
            }
            if !pk.z_loop.commutes_with(&pl.z_loop) || !pk.x_loop.commutes_with(&pl.x_loop) {
                return false;
            }
        }
        let commute_all = |p: &PauliString| stab.generators().iter().all(|g| g.commutes_with(p));
        if !commute_all(&pk.z_loop) || !commute_all(&pk.x_loop) {
            return false;
        }
    }
    true
}

/// Stabilizer of the state with `Z_k = signs[k]` (true means `-1`).
pub fn sector_tableau(
    stab: &Tableau,
    pairs: &[LoopOperatorPair],
    negative: &[bool],
) -> Result<Tableau> {
    let zs = pairs
        .iter()
        .zip(negative)
        .map(|(p, &neg)| if neg { p.z_loop.negated() } else { p.z_loop.clone() })
        .collect();
    stab.extended(zs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformResult {
    /// Qubit ids of the deleted edges, which receive a Hadamard.
    pub hadamard_set: Vec<u32>,
    pub graph: SimpleGraph,
    /// Full-rank tableau of the surface-code state (before the Hadamards).
    pub state_tableau: Tableau,
    pub verified: bool,
}

/// Full-rank stabilizer of the surface-code state. On closed surfaces the
/// logical sector is fixed to `+1` for the Z-loops on the fundamental cycles
/// of `t`.
pub fn state_tableau(e: &Embedding, t: &SpanningTree) -> Result<Tableau> {
    let stab = surface_stabilizer(e)?.tableau;
    let n = e.n_qubits();
    let full = if e.is_closed() {
        let basis = fundamental_basis(e.graph(), t)?;
        stab.extended(
            basis
                .cycles
                .values()
                .map(|c| PauliString::z_on(n, c.iter().copied()))
                .collect(),
        )?
    } else {
        stab
    };
    if full.rank() < n {
        return Err(Error::ResidualDegeneracy(1u64 << (n - full.rank())));
    }
    Ok(full)
}

/// Hadamards on the deleted edges map the surface-code state onto the graph
/// state of `phi(L, T)`; `verified` records the span comparison.
pub fn transform_to_graph_state(e: &Embedding, t: &SpanningTree) -> Result<TransformResult> {
    let full = state_tableau(e, t)?;
    let graph = phi(e.graph(), t)?;
    let rotated = full.conjugate_hadamard(t.deleted_edges())?;
    let verified = span_equal(&rotated, &graph_stabilizer(&graph));
    let labels = e.qubits();
    Ok(TransformResult {
        hadamard_set: t.deleted_edges().iter().map(|&i| labels[i]).collect(),
        graph,
        state_tableau: full,
        verified,
    })
}

/// `phi` for the first spanning tree in edge-index order.
pub fn default_phi(e: &Embedding) -> Result<(SpanningTree, SimpleGraph)> {
    let t = SpanningTree::first(e.graph())?;
    let g = phi(e.graph(), &t)?;
    Ok((t, g))
}

/// Spanning tree from a list of qubit ids.
pub fn tree_from_qubits(e: &Embedding, qubits: &[u32]) -> Result<SpanningTree> {
    let idx: Vec<usize> = qubits.iter().map(|&q| e.qubit_index(q)).collect::<Result<_>>()?;
    SpanningTree::from_edges(e.graph(), &idx)
}

/// Qubit ids grouped by the faces they bound, for reports.
pub fn face_qubits(e: &Embedding) -> Vec<Vec<u32>> {
    let labels = e.qubits();
    e.faces()
        .iter()
        .map(|f| f.iter().map(|&i| labels[i]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_spanning_trees;

    fn plaquette(n: u32) -> Embedding {
        let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let m = Multigraph::new((0..n).collect(), &edges).unwrap();
        Embedding::new(m, vec![(0..n as usize).collect()], false, None).unwrap()
    }

    #[test]
    fn single_plaquette() {
        let e = plaquette(4);
        let s = surface_stabilizer(&e).unwrap();
        assert_eq!(s.tableau.rank(), 4);
        assert_eq!(s.degeneracy, 1);
        let lam = adjacency_relation(&e);
        assert_eq!(lam.graph(), &SimpleGraph::complete(vec![0, 1, 2, 3]).unwrap());
    }

    #[test]
    fn torus_2x2() {
        let e = square_torus(2).unwrap();
        assert_eq!(e.genus(), Some(1));
        let s = surface_stabilizer(&e).unwrap();
        assert_eq!(s.tableau.rank(), 6);
        assert_eq!(s.degeneracy, 4);
        assert_eq!(homology_rank(&e).unwrap(), 2);
    }

    #[test]
    fn torus_3x3() {
        let e = square_torus(3).unwrap();
        assert_eq!(surface_stabilizer(&e).unwrap().degeneracy, 4);
        assert_eq!(homology_rank(&e).unwrap(), 2);
    }

    #[test]
    fn edge_on_three_faces_rejected() {
        let m = Multigraph::new(vec![0, 1], &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let faces = vec![vec![0, 1], vec![1, 2], vec![0, 1]];
        assert!(matches!(
            Embedding::new(m, faces, true, None),
            Err(Error::InvalidEmbedding(_))
        ));
    }

    #[test]
    fn non_closed_walk_rejected() {
        let m = Multigraph::new(vec![0, 1, 2, 3], &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(Embedding::new(m, vec![vec![0, 2]], false, None).is_err());
    }

    #[test]
    fn sphere_has_trivial_homology() {
        // Two digon faces glued along their boundary.
        let m = Multigraph::new(vec![0, 1], &[(0, 1), (0, 1)]).unwrap();
        let e = Embedding::new(m, vec![vec![0, 1], vec![0, 1]], true, None).unwrap();
        assert_eq!(e.genus(), Some(0));
        assert_eq!(homology_rank(&e).unwrap(), 0);
    }

    #[test]
    fn loops_on_torus() {
        for l in [2, 3] {
            let e = square_torus(l).unwrap();
            let stab = surface_stabilizer(&e).unwrap().tableau;
            let pairs = loop_operators(l).unwrap();
            assert!(loop_algebra_holds(&pairs, &stab));
            for p in &pairs {
                assert!(!stab.contains(&p.z_loop));
            }
        }
    }

    #[test]
    fn transform_on_plaquette_and_torus() {
        let e = plaquette(4);
        for t in enumerate_spanning_trees(e.graph()).unwrap() {
            let r = transform_to_graph_state(&e, &t).unwrap();
            assert!(r.verified);
            assert_eq!(r.graph.edge_count(), 3);
        }
        let torus = square_torus(2).unwrap();
        let t = SpanningTree::first(torus.graph()).unwrap();
        assert!(transform_to_graph_state(&torus, &t).unwrap().verified);
    }

    #[test]
    fn contraction_shrinks_faces() {
        let e = plaquette(4);
        let c = e.contract(0).unwrap();
        assert_eq!(c.qubits(), &[1, 2, 3]);
        assert_eq!(c.faces(), &[vec![0, 1, 2]]);
        let c2 = c.contract(1).unwrap();
        assert!(c2.contract(2).is_err());
    }

    #[test]
    fn setup_round_trip() {
        let e = square_torus(2).unwrap();
        let back = Embedding::from_json_str(&e.to_json_string()).unwrap();
        assert_eq!(back, e);
        assert_eq!(back.digest(), e.digest());
    }
}
