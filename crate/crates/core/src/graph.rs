//! Labeled simple graphs, multigraphs and spanning trees.
//!
//! Vertices of a [`SimpleGraph`] carry opaque `u32` labels (qubit ids); the
//! adjacency matrix is indexed by position in the label list. A
//! [`Multigraph`] is the carrier of a surface code: its edges are the qubits
//! and are addressed by stable edge index, so parallel edges stay distinct.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// On-disk graph description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<u32>,
    pub edges: Vec<[u32; 2]>,
}

/// Simple undirected graph over labeled vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    labels: Vec<u32>,
    adj: BitMatrix,
}

impl std::fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimpleGraph")
            .field("vertices", &self.labels)
            .field("edges", &self.edges())
            .finish()
    }
}

impl SimpleGraph {
    /// Edgeless graph on the given labels.
    pub fn empty(labels: Vec<u32>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &l in &labels {
            if !seen.insert(l) {
                return Err(Error::DuplicateVertex(l));
            }
        }
        let n = labels.len();
        Ok(Self {
            labels,
            adj: BitMatrix::zeros(n, n),
        })
    }

    pub fn from_file(f: &GraphFile) -> Result<Self> {
        let edges: Vec<(u32, u32)> = f.edges.iter().map(|&[u, v]| (u, v)).collect();
        Self::from_edges(f.vertices.clone(), &edges)
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            name: None,
            vertices: self.labels.clone(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Graph with vertices `0..n`.
    pub fn with_vertices(n: usize) -> Self {
        Self::empty((0..n as u32).collect()).expect("distinct labels")
    }

    pub fn from_edges(labels: Vec<u32>, edges: &[(u32, u32)]) -> Result<Self> {
        let mut g = Self::empty(labels)?;
        for &(u, v) in edges {
            let i = g.index_of(u).ok_or(Error::UnknownVertex(u))?;
            let j = g.index_of(v).ok_or(Error::UnknownVertex(v))?;
            if i == j {
                return Err(Error::Malformed(format!("self-loop at vertex {u}")));
            }
            g.set_edge_idx(i, j, true);
        }
        Ok(g)
    }

    /// Builds a graph from a symmetric, zero-diagonal adjacency matrix.
    pub fn from_adjacency(labels: Vec<u32>, adj: BitMatrix) -> Result<Self> {
        let g = Self::empty(labels)?;
        if adj.rows() != g.len() || !adj.is_symmetric() {
            return Err(Error::Malformed("adjacency must be square and symmetric".into()));
        }
        if (0..g.len()).any(|i| adj.get(i, i)) {
            return Err(Error::Malformed("adjacency diagonal must be zero".into()));
        }
        Ok(Self { adj, ..g })
    }

    pub fn complete(labels: Vec<u32>) -> Result<Self> {
        let mut g = Self::empty(labels)?;
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                g.set_edge_idx(i, j, true);
            }
        }
        Ok(g)
    }

    /// Star with `labels[0]` as centre.
    pub fn star(labels: Vec<u32>) -> Result<Self> {
        let mut g = Self::empty(labels)?;
        for j in 1..g.len() {
            g.set_edge_idx(0, j, true);
        }
        Ok(g)
    }

    pub fn path(labels: Vec<u32>) -> Result<Self> {
        let mut g = Self::empty(labels)?;
        for j in 1..g.len() {
            g.set_edge_idx(j - 1, j, true);
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    pub fn index_of(&self, label: u32) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn label(&self, idx: usize) -> u32 {
        self.labels[idx]
    }

    #[inline]
    pub fn has_edge_idx(&self, i: usize, j: usize) -> bool {
        self.adj.get(i, j)
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(i), Some(j)) => self.adj.get(i, j),
            _ => false,
        }
    }

    pub fn set_edge_idx(&mut self, i: usize, j: usize, present: bool) {
        assert_ne!(i, j, "simple graphs have no loops");
        self.adj.set(i, j, present);
        self.adj.set(j, i, present);
    }

    pub fn toggle_edge_idx(&mut self, i: usize, j: usize) {
        let present = self.adj.get(i, j);
        self.set_edge_idx(i, j, !present);
    }

    pub fn neighbors_idx(&self, i: usize) -> Vec<usize> {
        self.adj.row(i).ones().collect()
    }

    pub fn neighbors(&self, label: u32) -> Result<Vec<u32>> {
        let i = self.index_of(label).ok_or(Error::UnknownVertex(label))?;
        Ok(self.neighbors_idx(i).into_iter().map(|j| self.labels[j]).collect())
    }

    pub fn degree_idx(&self, i: usize) -> usize {
        self.adj.row(i).count_ones()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.len()).map(|i| self.degree_idx(i)).sum::<usize>() / 2
    }

    /// Edges as label pairs, ordered by vertex position.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in self.adj.row(i).ones().filter(|&j| j > i) {
                out.push((self.labels[i], self.labels[j]));
            }
        }
        out
    }

    /// Edges as position pairs `(i, j)` with `i < j`.
    pub fn edge_indices(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in self.adj.row(i).ones().filter(|&j| j > i) {
                out.push((i, j));
            }
        }
        out
    }

    /// `τ_v`: toggles every edge between two neighbours of `v`.
    pub fn local_complement(&self, v: u32) -> Result<SimpleGraph> {
        let i = self.index_of(v).ok_or(Error::UnknownVertex(v))?;
        let mut g = self.clone();
        g.local_complement_idx(i);
        Ok(g)
    }

    pub fn local_complement_idx(&mut self, i: usize) {
        let nb = self.neighbors_idx(i);
        for (k, &a) in nb.iter().enumerate() {
            for &b in &nb[k + 1..] {
                self.toggle_edge_idx(a, b);
            }
        }
    }

    /// Removes a vertex together with its incident edges.
    pub fn delete_vertex(&self, v: u32) -> Result<SimpleGraph> {
        let i = self.index_of(v).ok_or(Error::UnknownVertex(v))?;
        let keep: Vec<usize> = (0..self.len()).filter(|&k| k != i).collect();
        Ok(self.induced_idx(&keep))
    }

    fn induced_idx(&self, keep: &[usize]) -> SimpleGraph {
        let labels = keep.iter().map(|&k| self.labels[k]).collect();
        let mut adj = BitMatrix::zeros(keep.len(), keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                if self.adj.get(i, j) {
                    adj.set(a, b, true);
                }
            }
        }
        SimpleGraph { labels, adj }
    }

    /// Induced subgraph on the listed labels, in the listed order.
    pub fn induced(&self, labels: &[u32]) -> Result<SimpleGraph> {
        let keep = labels
            .iter()
            .map(|&l| self.index_of(l).ok_or(Error::UnknownVertex(l)))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.induced_idx(&keep))
    }

    /// Same labeled graph with vertices listed in ascending label order.
    pub fn sorted(&self) -> SimpleGraph {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&k| self.labels[k]);
        self.induced_idx(&order)
    }

    /// Reorders vertices to follow `order` (which must be a permutation of the
    /// label set).
    pub fn reordered(&self, order: &[u32]) -> Result<SimpleGraph> {
        if order.len() != self.len() {
            return Err(Error::VertexSetMismatch);
        }
        self.induced(order).map_err(|_| Error::VertexSetMismatch)
    }

    /// Renames vertices through `map` (labels not in the map are kept).
    pub fn relabeled(&self, map: &HashMap<u32, u32>) -> Result<SimpleGraph> {
        let labels: Vec<u32> = self
            .labels
            .iter()
            .map(|l| *map.get(l).unwrap_or(l))
            .collect();
        let g = SimpleGraph::empty(labels)?;
        Ok(SimpleGraph {
            adj: self.adj.clone(),
            ..g
        })
    }

    pub fn same_vertex_set(&self, other: &SimpleGraph) -> bool {
        let mut a = self.labels.clone();
        let mut b = other.labels.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    /// Labeled equality independent of vertex order.
    pub fn labeled_eq(&self, other: &SimpleGraph) -> bool {
        self.same_vertex_set(other) && self.sorted().adj == other.sorted().adj
    }

    /// Edge set contained in `other`'s edge set (labels compared).
    pub fn is_subgraph_of(&self, other: &SimpleGraph) -> bool {
        self.edges().iter().all(|&(u, v)| other.has_edge(u, v))
    }

    pub fn is_connected(&self) -> bool {
        if self.len() <= 1 {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for w in self.neighbors_idx(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut count = 0;
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for w in self.neighbors_idx(u) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// Two-colouring if one exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut colour: Vec<Option<bool>> = vec![None; self.len()];
        for s in 0..self.len() {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let cu = colour[u].unwrap();
                for w in self.neighbors_idx(u) {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(colour.into_iter().map(|c| c.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Graphviz rendering. When a relation graph is supplied, edges missing
    /// from it are drawn dashed.
    pub fn to_dot(&self, name: &str, relation: Option<&SimpleGraph>) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph \"{name}\" {{");
        let _ = writeln!(s, "  node [shape=circle];");
        for &l in &self.labels {
            let _ = writeln!(s, "  q{l} [label=\"{l}\"];");
        }
        for (u, v) in self.edges() {
            let local = relation.is_none_or(|r| r.has_edge(u, v));
            if local {
                let _ = writeln!(s, "  q{u} -- q{v};");
            } else {
                let _ = writeln!(s, "  q{u} -- q{v} [style=dashed];");
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Undirected multigraph without loops. Edges keep their insertion index and
/// carry a label (the qubit id) that defaults to that index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    vertices: Vec<u32>,
    ends: Vec<(usize, usize)>,
    edge_labels: Vec<u32>,
}

impl Multigraph {
    pub fn new(vertices: Vec<u32>, edges: &[(u32, u32)]) -> Result<Self> {
        let labels = (0..edges.len() as u32).collect();
        Self::with_edge_labels(vertices, edges, labels)
    }

    pub fn with_edge_labels(
        vertices: Vec<u32>,
        edges: &[(u32, u32)],
        edge_labels: Vec<u32>,
    ) -> Result<Self> {
        let mut pos = HashMap::new();
        for (i, &v) in vertices.iter().enumerate() {
            if pos.insert(v, i).is_some() {
                return Err(Error::DuplicateVertex(v));
            }
        }
        if edge_labels.len() != edges.len() {
            return Err(Error::Malformed("one label per edge required".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &l in &edge_labels {
            if !seen.insert(l) {
                return Err(Error::Malformed(format!("duplicate edge label {l}")));
            }
        }
        let mut ends = Vec::with_capacity(edges.len());
        for (index, &(u, v)) in edges.iter().enumerate() {
            let a = *pos.get(&u).ok_or(Error::UnknownVertex(u))?;
            let b = *pos.get(&v).ok_or(Error::UnknownVertex(v))?;
            if a == b {
                return Err(Error::LoopEdge { index, vertex: u });
            }
            ends.push((a, b));
        }
        Ok(Self {
            vertices,
            ends,
            edge_labels,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn edge_labels(&self) -> &[u32] {
        &self.edge_labels
    }

    /// Endpoints of edge `e` as vertex positions.
    pub fn ends(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    /// Endpoints of edge `e` as vertex ids.
    pub fn endpoint_ids(&self, e: usize) -> (u32, u32) {
        let (a, b) = self.ends[e];
        (self.vertices[a], self.vertices[b])
    }

    pub fn edge_index_of_label(&self, label: u32) -> Option<usize> {
        self.edge_labels.iter().position(|&l| l == label)
    }

    /// Edge indices incident to each vertex position.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (e, &(a, b)) in self.ends.iter().enumerate() {
            inc[a].push(e);
            inc[b].push(e);
        }
        inc
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n <= 1 {
            return true;
        }
        let mut dsu = Dsu::new(n);
        for &(a, b) in &self.ends {
            dsu.union(a, b);
        }
        dsu.components == 1
    }
}

#[derive(Clone)]
struct Dsu {
    parent: Vec<usize>,
    components: usize,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            components: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        self.components -= 1;
        true
    }
}

/// Spanning tree of a multigraph, as a partition of its edge indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpanningTree {
    tree_edges: Vec<usize>,
    deleted_edges: Vec<usize>,
}

impl SpanningTree {
    /// Validates that `tree_edges` span `m` without cycles.
    pub fn from_edges(m: &Multigraph, tree_edges: &[usize]) -> Result<Self> {
        let mut t: Vec<usize> = tree_edges.to_vec();
        t.sort_unstable();
        t.dedup();
        if t.len() != tree_edges.len() {
            return Err(Error::InvalidTree("repeated edge index".into()));
        }
        if let Some(&bad) = t.iter().find(|&&e| e >= m.edge_count()) {
            return Err(Error::InvalidTree(format!("edge index {bad} out of range")));
        }
        let n = m.vertex_count();
        if t.len() + 1 != n.max(1) {
            return Err(Error::InvalidTree(format!(
                "{} edges cannot span {} vertices",
                t.len(),
                n
            )));
        }
        let mut dsu = Dsu::new(n);
        for &e in &t {
            let (a, b) = m.ends(e);
            if !dsu.union(a, b) {
                return Err(Error::InvalidTree(format!("edge {e} closes a cycle")));
            }
        }
        let deleted = (0..m.edge_count()).filter(|e| t.binary_search(e).is_err()).collect();
        Ok(Self {
            tree_edges: t,
            deleted_edges: deleted,
        })
    }

    /// Greedy tree taking edges in index order.
    pub fn first(m: &Multigraph) -> Result<Self> {
        if !m.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut dsu = Dsu::new(m.vertex_count());
        let t: Vec<usize> = (0..m.edge_count())
            .filter(|&e| {
                let (a, b) = m.ends(e);
                dsu.union(a, b)
            })
            .collect();
        Self::from_edges(m, &t)
    }

    pub fn tree_edges(&self) -> &[usize] {
        &self.tree_edges
    }

    pub fn deleted_edges(&self) -> &[usize] {
        &self.deleted_edges
    }

    pub fn contains(&self, e: usize) -> bool {
        self.tree_edges.binary_search(&e).is_ok()
    }

    fn check_host(&self, m: &Multigraph) -> Result<()> {
        if self.tree_edges.len() + self.deleted_edges.len() != m.edge_count() {
            return Err(Error::InvalidTree("tree does not belong to this multigraph".into()));
        }
        Self::from_edges(m, &self.tree_edges).map(|_| ())
    }
}

/// All spanning trees, in the order produced by include-before-exclude
/// recursion over edge indices.
pub fn enumerate_spanning_trees(m: &Multigraph) -> Result<Vec<SpanningTree>> {
    if !m.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = m.vertex_count();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut excluded = vec![false; m.edge_count()];
    recurse_trees(m, 0, &mut Dsu::new(n), &mut chosen, &mut excluded, &mut out);
    Ok(out)
}

fn recurse_trees(
    m: &Multigraph,
    e: usize,
    dsu: &mut Dsu,
    chosen: &mut Vec<usize>,
    excluded: &mut [bool],
    out: &mut Vec<SpanningTree>,
) {
    let n = m.vertex_count();
    if chosen.len() + 1 >= n {
        let deleted = (0..m.edge_count()).filter(|x| !chosen.contains(x)).collect();
        out.push(SpanningTree {
            tree_edges: chosen.clone(),
            deleted_edges: deleted,
        });
        return;
    }
    if e == m.edge_count() {
        return;
    }
    let (a, b) = m.ends(e);
    let mut with = dsu.clone();
    if with.union(a, b) {
        chosen.push(e);
        recurse_trees(m, e + 1, &mut with, chosen, excluded, out);
        chosen.pop();
    }
    excluded[e] = true;
    if still_connected(m, excluded) {
        recurse_trees(m, e + 1, dsu, chosen, excluded, out);
    }
    excluded[e] = false;
}

fn still_connected(m: &Multigraph, excluded: &[bool]) -> bool {
    let mut dsu = Dsu::new(m.vertex_count());
    for (e, &skip) in excluded.iter().enumerate().take(m.edge_count()) {
        if !skip {
            let (a, b) = m.ends(e);
            dsu.union(a, b);
        }
    }
    dsu.components <= 1
}

/// Tree rooted at the lowest vertex id, for path queries.
struct RootedTree {
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
}

impl RootedTree {
    fn new(m: &Multigraph, t: &SpanningTree) -> Self {
        let n = m.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for &e in t.tree_edges() {
            let (a, b) = m.ends(e);
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        if n > 0 {
            let root = (0..n).min_by_key(|&i| m.vertices()[i]).unwrap();
            let mut seen = vec![false; n];
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &(w, e) in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some((u, e));
                        depth[w] = depth[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        Self { parent, depth }
    }

    /// Edge indices on the unique tree path between two vertex positions.
    fn path(&self, mut p: usize, mut q: usize) -> Vec<usize> {
        let mut edges = Vec::new();
        while self.depth[p] > self.depth[q] {
            let (up, e) = self.parent[p].unwrap();
            edges.push(e);
            p = up;
        }
        while self.depth[q] > self.depth[p] {
            let (up, e) = self.parent[q].unwrap();
            edges.push(e);
            q = up;
        }
        while p != q {
            let (up, e) = self.parent[p].unwrap();
            edges.push(e);
            p = up;
            let (uq, eq) = self.parent[q].unwrap();
            edges.push(eq);
            q = uq;
        }
        edges.sort_unstable();
        edges
    }
}

/// The bipartite graph on the edges of `m`: each deleted edge `{p,q}` is
/// joined to every tree edge on the tree path from `p` to `q`. Vertex labels
/// are the edge labels of `m`, in edge-index order.
pub fn phi(m: &Multigraph, t: &SpanningTree) -> Result<SimpleGraph> {
    t.check_host(m)?;
    let rooted = RootedTree::new(m, t);
    let mut g = SimpleGraph::empty(m.edge_labels().to_vec())?;
    for &e in t.deleted_edges() {
        let (p, q) = m.ends(e);
        for f in rooted.path(p, q) {
            g.set_edge_idx(e, f, true);
        }
    }
    Ok(g)
}

/// Fundamental cycles (per deleted edge) and cuts (per tree edge), as sorted
/// edge-index sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalBasis {
    pub cycles: BTreeMap<usize, Vec<usize>>,
    pub cuts: BTreeMap<usize, Vec<usize>>,
}

pub fn fundamental_basis(m: &Multigraph, t: &SpanningTree) -> Result<FundamentalBasis> {
    t.check_host(m)?;
    let rooted = RootedTree::new(m, t);
    let mut cycles = BTreeMap::new();
    for &e in t.deleted_edges() {
        let (p, q) = m.ends(e);
        let mut c = rooted.path(p, q);
        c.push(e);
        c.sort_unstable();
        cycles.insert(e, c);
    }
    let mut cuts = BTreeMap::new();
    for &f in t.tree_edges() {
        // Side of the tree containing one endpoint once `f` is removed.
        let side = tree_side(m, t, f);
        let cut: Vec<usize> = (0..m.edge_count())
            .filter(|&e| {
                let (a, b) = m.ends(e);
                side[a] != side[b]
            })
            .collect();
        cuts.insert(f, cut);
    }
    Ok(FundamentalBasis { cycles, cuts })
}

fn tree_side(m: &Multigraph, t: &SpanningTree, removed: usize) -> Vec<bool> {
    let n = m.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for &e in t.tree_edges().iter().filter(|&&e| e != removed) {
        let (a, b) = m.ends(e);
        adj[a].push(b);
        adj[b].push(a);
    }
    let start = m.ends(removed).0;
    let mut side = vec![false; n];
    side[start] = true;
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !side[w] {
                side[w] = true;
                stack.push(w);
            }
        }
    }
    side
}
