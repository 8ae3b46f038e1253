//! The acceptance suite: one check per criterion, each reporting pass, fail
//! or skip with a one-line detail and its wall time.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::error::Result;
use crate::exec::Exec;
use crate::fixtures;
use crate::graph::{enumerate_spanning_trees, phi, Multigraph, SimpleGraph};
use crate::lc::{
    lc_equivalent, lc_equivalent_compact, lc_orbit, verify_witness, CanonicalKey, CompactGraph,
    LcOrbit, OrbitOptions, DEFAULT_NULLITY_LIMIT,
};
use crate::reduction::chain::{certify_exhaustive, reduction_chain, Certificate, CertificateStore};
use crate::reduction::{class_memberships, leaf_delete_commute_check, LeafGraph};
use crate::state::{graph_state_vector, stabilizer_residual};
use crate::surface::{
    homology_rank, loop_algebra_holds, loop_operators, polyform_enumerate, state_tableau,
    surface_stabilizer, transform_to_graph_state, tree_from_qubits, Embedding, Lattice,
};

/// Per-amplitude tolerance of the state-vector oracle.
pub const ORACLE_TOLERANCE: f64 = 1e-10;
pub const FAST_LIMIT: Duration = Duration::from_secs(1);
pub const TETRIAMOND_LIMIT: Duration = Duration::from_secs(60);
pub const CHAIN_LIMIT: Duration = Duration::from_secs(300);
pub const RANDOM_MULTIGRAPHS: usize = 500;
pub const LEAF_DELETION_CASES: usize = 500;
const SEED: u64 = 0x746f_7269_632d_6c63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub status: Status,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AC{:<2} {}  {}: {} ({:.2} s)",
            self.id, self.status, self.title, self.detail, self.seconds
        )
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SelftestOptions {
    pub exec: Exec,
    /// Limits the all-pairs cross-oracle sweep to five vertices and reports
    /// it as skipped.
    pub quick: bool,
}

pub const TITLES: [&str; 11] = [
    "plaquette",
    "double plaquette and hexagon",
    "phi bipartite",
    "tree independence",
    "Bouchet vs orbit",
    "tetriamond",
    "eight-qubit base system",
    "pentomino chain",
    "polyomino counts",
    "stabilizer arithmetic",
    "leaf-graph properties",
];

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: u8, opts: &SelftestOptions) -> CriterionReport {
    let start = Instant::now();
    let outcome = match id {
        1 => ac1_plaquette(),
        2 => ac2_regressions(),
        3 => ac3_bipartite(),
        4 => ac4_tree_independence(),
        5 => ac5_cross_oracle(opts),
        6 => ac6_tetriamond(opts),
        7 => ac7_base(opts),
        8 => ac8_chain(opts),
        9 => ac9_polyominoes(),
        10 => ac10_stabilizers(),
        11 => ac11_appendix(opts),
        _ => Ok((Status::Fail, format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let (mut status, mut detail) = outcome.unwrap_or_else(|e| (Status::Fail, format!("error: {e}")));
    let limit = match id {
        1 | 2 => Some(FAST_LIMIT),
        6 => Some(TETRIAMOND_LIMIT),
        8 => Some(CHAIN_LIMIT),
        _ => None,
    };
    if let Some(limit) = limit {
        if status == Status::Pass && elapsed >= limit {
            status = Status::Fail;
            detail = format!("{detail}; exceeded {} s", limit.as_secs());
        }
    }
    CriterionReport {
        id,
        title: TITLES.get(id.wrapping_sub(1) as usize).copied().unwrap_or("unknown"),
        status,
        detail,
        seconds: elapsed.as_secs_f64(),
    }
}

pub fn run_all(opts: &SelftestOptions) -> Vec<CriterionReport> {
    (1..=11).map(|id| run_criterion(id, opts)).collect()
}

type Outcome = Result<(Status, String)>;

fn verdict(ok: bool, detail: String) -> Outcome {
    Ok((if ok { Status::Pass } else { Status::Fail }, detail))
}

fn is_star(g: &SimpleGraph) -> bool {
    let n = g.len();
    n >= 2 && g.edge_count() == n - 1 && (0..n).any(|i| g.degree_idx(i) == n - 1)
}

fn ac1_plaquette() -> Outcome {
    let e = fixtures::setup(fixtures::PLAQUETTE4)?;
    let t = tree_from_qubits(&e, &[0, 1, 2])?;
    let r = transform_to_graph_state(&e, &t)?;
    let deleted: Vec<usize> = t.deleted_edges().to_vec();
    let v = graph_state_vector(&r.graph)?.apply_hadamards(&deleted);
    let err = stabilizer_residual(&v, &state_tableau(&e, &t)?);
    let star = is_star(&r.graph) && r.graph.len() == 4;
    verdict(
        star && r.verified && err <= ORACLE_TOLERANCE,
        format!("star={star}, span check={}, oracle error {err:.1e}", r.verified),
    )
}

fn ac2_regressions() -> Outcome {
    let bow = fixtures::setup(fixtures::DOUBLE_PLAQUETTE)?;
    let trees = enumerate_spanning_trees(bow.graph())?;
    let mut disconnected = 0;
    for t in &trees {
        if phi(bow.graph(), t)?.component_count() > 1 {
            disconnected += 1;
        }
    }
    let hex = fixtures::setup(fixtures::HEXAGON)?;
    let hex_trees = enumerate_spanning_trees(hex.graph())?;
    let mut stars = 0;
    for t in &hex_trees {
        if is_star(&phi(hex.graph(), t)?) {
            stars += 1;
        }
    }
    verdict(
        disconnected == trees.len() && stars == hex_trees.len(),
        format!(
            "double plaquette disconnected for {disconnected}/{} trees, hexagon 6-star for {stars}/{} trees",
            trees.len(),
            hex_trees.len()
        ),
    )
}

/// Connected multigraph without loops: a random tree plus random extra
/// edges (parallel edges allowed), at most `max_edges` edges.
pub fn random_connected_multigraph(rng: &mut impl Rng, max_edges: usize) -> Result<Multigraph> {
    let n = rng.gen_range(2..=8usize.min(max_edges + 1));
    let m = rng.gen_range(n - 1..=max_edges);
    let mut edges: Vec<(u32, u32)> = (1..n).map(|i| (rng.gen_range(0..i) as u32, i as u32)).collect();
    while edges.len() < m {
        let u = rng.gen_range(0..n) as u32;
        let v = rng.gen_range(0..n) as u32;
        if u != v {
            edges.push((u, v));
        }
    }
    for i in (1..edges.len()).rev() {
        edges.swap(i, rng.gen_range(0..=i));
    }
    Multigraph::new((0..n as u32).collect(), &edges)
}

fn ac3_bipartite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut graphs_ok, mut trees) = (0, 0usize);
    for _ in 0..RANDOM_MULTIGRAPHS {
        let m = random_connected_multigraph(&mut rng, 12)?;
        let mut ok = true;
        for t in enumerate_spanning_trees(&m)? {
            trees += 1;
            let g = phi(&m, &t)?;
            let tree_side = |i: usize| t.contains(m.edge_index_of_label(g.label(i)).expect("qubit is an edge"));
            let sides_respected = g.edge_indices().iter().all(|&(i, j)| tree_side(i) != tree_side(j));
            ok &= g.is_bipartite() && sides_respected;
        }
        graphs_ok += ok as usize;
    }
    verdict(
        graphs_ok == RANDOM_MULTIGRAPHS,
        format!("{graphs_ok}/{RANDOM_MULTIGRAPHS} multigraphs bipartite over all {trees} spanning trees"),
    )
}

/// Bundled setups and polyforms with at most `max_edges` edges.
pub fn small_setups(max_edges: usize) -> Result<Vec<Embedding>> {
    let mut out = Vec::new();
    for (_, json) in fixtures::SETUPS {
        let e = fixtures::setup(json)?;
        if e.n_qubits() <= max_edges {
            out.push(e);
        }
    }
    for lattice in [Lattice::Square, Lattice::Triangular] {
        for n in 1.. {
            let forms: Vec<Embedding> = polyform_enumerate(n, lattice)
                .iter()
                .map(|p| p.to_embedding(lattice))
                .collect::<Result<_>>()?;
            if forms.iter().all(|e| e.n_qubits() > max_edges) {
                break;
            }
            out.extend(forms.into_iter().filter(|e| e.n_qubits() <= max_edges));
        }
    }
    Ok(out)
}

fn ac4_tree_independence() -> Outcome {
    let setups = small_setups(10)?;
    let (mut pairs, mut failures) = (0usize, 0usize);
    for e in &setups {
        let graphs: Vec<SimpleGraph> = enumerate_spanning_trees(e.graph())?
            .iter()
            .map(|t| phi(e.graph(), t))
            .collect::<Result<_>>()?;
        for i in 0..graphs.len() {
            for j in i + 1..graphs.len() {
                pairs += 1;
                let ok = match lc_equivalent(&graphs[i], &graphs[j])? {
                    Some(w) => verify_witness(&graphs[i], &graphs[j], &w)?,
                    None => false,
                };
                failures += !ok as usize;
            }
        }
    }
    verdict(
        failures == 0,
        format!("{} setups, {pairs} tree pairs, {failures} without a valid witness", setups.len()),
    )
}

/// Every connected graph on `n` labeled vertices.
pub fn connected_graphs(n: usize) -> Vec<CompactGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let mut rows = vec![0u16; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
        }
        let g = CompactGraph::from_rows(&rows).expect("symmetric rows");
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

/// Class index of each graph, from orbit enumeration.
fn orbit_classes(graphs: &[CompactGraph], opts: &OrbitOptions) -> Result<(Vec<u32>, usize)> {
    let n = graphs.first().map_or(0, |g| g.len());
    let labels: Vec<u32> = (0..n as u32).collect();
    let mut class_of: FxHashMap<u128, u32> = FxHashMap::default();
    let mut classes = 0u32;
    for g in graphs {
        if class_of.contains_key(&g.key().bits()) {
            continue;
        }
        let orbit = lc_orbit(&g.to_simple(&labels), opts)?;
        for k in orbit.sorted_keys() {
            class_of.insert(k.bits(), classes);
        }
        classes += 1;
    }
    let ids = graphs.iter().map(|g| class_of[&g.key().bits()]).collect();
    Ok((ids, classes as usize))
}

fn ac5_cross_oracle(opts: &SelftestOptions) -> Outcome {
    let max_n = if opts.quick { 5 } else { 6 };
    let orbit_opts = OrbitOptions {
        exec: opts.exec,
        ..OrbitOptions::default()
    };
    let (mut pairs, mut mismatches, mut graphs_total, mut classes_total) = (0usize, 0usize, 0, 0);
    for n in 1..=max_n {
        let graphs = connected_graphs(n);
        let (class, classes) = orbit_classes(&graphs, &orbit_opts)?;
        let per_row: Vec<Result<usize>> = opts.exec.map_range(graphs.len(), |i| {
            let mut bad = 0;
            for j in i..graphs.len() {
                let found = lc_equivalent_compact(&graphs[i], &graphs[j], DEFAULT_NULLITY_LIMIT)?.is_some();
                bad += (found != (class[i] == class[j])) as usize;
            }
            Ok(bad)
        });
        for r in per_row {
            mismatches += r?;
        }
        pairs += graphs.len() * (graphs.len() + 1) / 2;
        graphs_total += graphs.len();
        classes_total += classes;
    }
    let detail = format!(
        "n<={max_n}: {graphs_total} graphs, {classes_total} classes, {pairs} pairs, {mismatches} disagreements"
    );
    if opts.quick {
        return Ok((Status::Skip, format!("quick mode ran {detail}")));
    }
    verdict(mismatches == 0, detail)
}

fn exhaustive(json: &str, opts: &SelftestOptions) -> Result<(Embedding, Option<Certificate>)> {
    let e = fixtures::setup(json)?;
    let orbit_opts = OrbitOptions {
        exec: opts.exec,
        ..OrbitOptions::default()
    };
    let c = certify_exhaustive(&e, &orbit_opts)?;
    Ok((e, c))
}

fn exhaustive_verdict(json: &str, opts: &SelftestOptions) -> Outcome {
    let (e, c) = exhaustive(json, opts)?;
    match c {
        Some(Certificate::Exhaustive { orbit_size, .. }) => verdict(
            true,
            format!("N={}, orbit of {orbit_size} enumerated, no local member", e.n_qubits()),
        ),
        _ => verdict(false, format!("N={}, local representative found", e.n_qubits())),
    }
}

fn ac6_tetriamond(opts: &SelftestOptions) -> Outcome {
    exhaustive_verdict(fixtures::TETRIAMOND, opts)
}

fn ac7_base(opts: &SelftestOptions) -> Outcome {
    exhaustive_verdict(fixtures::DOUBLED_SQUARE, opts)
}

fn ac8_chain(opts: &SelftestOptions) -> Outcome {
    let spec = fixtures::pentomino_chain()?;
    let orbit_opts = OrbitOptions {
        exec: opts.exec,
        ..OrbitOptions::default()
    };
    let r = reduction_chain(&spec, &mut CertificateStore::new(), &orbit_opts)?;
    let pent = fixtures::setup(fixtures::PENTOMINO)?;
    let base = fixtures::setup(fixtures::DOUBLED_SQUARE)?;
    let on_target = r.target_digest == pent.digest();
    let grounded = r.enumerated.len() == 1
        && r.systems.iter().any(|s| s.digest == base.digest() && s.id == r.enumerated[0].id);
    let max_n = r.max_enumerated_qubits();
    verdict(
        on_target && grounded && max_n < pent.n_qubits() && r.verdict == "nonlocal",
        format!(
            "N={} {}: {} steps verified, largest enumerated orbit at N={max_n}",
            r.target_qubits, r.verdict, r.steps_verified
        ),
    )
}

fn ac9_polyominoes() -> Outcome {
    let counts: Vec<usize> = (1..=5).map(|n| polyform_enumerate(n, Lattice::Square).len()).collect();
    verdict(counts == [1, 1, 2, 5, 12], format!("counts {counts:?}"))
}

fn ac10_stabilizers() -> Outcome {
    let plaq = surface_stabilizer(&fixtures::setup(fixtures::PLAQUETTE4)?)?.degeneracy;
    let torus = fixtures::setup(fixtures::TORUS2X2)?;
    let stab = surface_stabilizer(&torus)?;
    let rank = homology_rank(&torus)?;
    let loops = loop_algebra_holds(&loop_operators(2)?, &stab.tableau);
    verdict(
        plaq == 1 && stab.degeneracy == 4 && rank == 2 && loops,
        format!(
            "plaquette degeneracy {plaq}, torus degeneracy {}, homology rank {rank}, loop algebra {loops}",
            stab.degeneracy
        ),
    )
}

/// Counts from the exhaustive leaf-graph suites.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LeafSuite {
    pub classes: usize,
    pub members: usize,
    pub epsilon_failures: usize,
    pub partition_failures: usize,
    pub subgraph_failures: usize,
}

impl LeafSuite {
    pub fn failures(&self) -> usize {
        self.epsilon_failures + self.partition_failures + self.subgraph_failures
    }
}

fn keys(o: &LcOrbit) -> FxHashSet<u128> {
    o.sorted_keys().iter().map(CanonicalKey::bits).collect()
}

/// Exchange closure, the A/B/C/D partition and the leaf-deletion subgraph
/// property over every LC class containing a leaf graph on `n` vertices with
/// outer vertex 0 and inner vertex 1 (a representative choice: classes of
/// other leaf pairs are relabelings). The partition is
/// checked for `n >= 3`; on two vertices the only class is `K2`, in which
/// A, B and C coincide.
pub fn leaf_suite(n: usize, opts: &OrbitOptions) -> Result<LeafSuite> {
    let mut s = LeafSuite::default();
    let labels: Vec<u32> = (0..n as u32).collect();
    let mut seen: FxHashSet<u128> = FxHashSet::default();
    for rest in connected_graphs(n - 1) {
        let mut rows = vec![1u16 << 1];
        rows.extend(rest.rows().iter().map(|r| r << 1));
        rows[1] |= 1;
        let g = CompactGraph::from_rows(&rows)?;
        if seen.contains(&g.key().bits()) {
            continue;
        }
        let gab = g.to_simple(&labels);
        let leaf = LeafGraph::new(gab.clone(), 0, 1)?;
        let orbit = lc_orbit(&gab, opts)?;
        let members = keys(&orbit);
        s.classes += 1;
        s.members += members.len();

        let gba = crate::reduction::epsilon_swap(&leaf);
        let side_a = keys(&lc_orbit(&leaf.without_outer(), opts)?);
        let side_b = keys(&lc_orbit(&gba.without_outer(), opts)?);
        let key_of = |c: &CompactGraph| c.key().bits();
        for &k in &members {
            let h = CompactGraph::from_key(CanonicalKey::from_raw(n, k));
            if !members.contains(&key_of(&h.swap_vertices(0, 1))) {
                s.epsilon_failures += 1;
            }
            if n >= 3 {
                let m = class_memberships(&h.to_simple(&labels), 0, 1)?;
                if m.iter().filter(|&&x| x).count() != 1 {
                    s.partition_failures += 1;
                }
            }
            // G_ba - b has vertex 0 in front, matching h.delete_vertex(1).
            if !side_a.contains(&key_of(&h.delete_vertex(0))) && !side_b.contains(&key_of(&h.delete_vertex(1))) {
                s.subgraph_failures += 1;
            }
        }
        seen.extend(members);
    }
    Ok(s)
}

/// Random leaf graphs on at most `max_n` vertices with random
/// complementation sequences avoiding the outer vertex.
pub fn leaf_deletion_cases(cases: usize, max_n: usize, seed: u64) -> Result<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..cases {
        let n = rng.gen_range(3..=max_n);
        let labels: Vec<u32> = (0..n as u32).collect();
        let mut g = SimpleGraph::empty(labels.clone())?;
        let outer = rng.gen_range(0..n);
        let others: Vec<usize> = (0..n).filter(|&v| v != outer).collect();
        let inner = others[rng.gen_range(0..others.len())];
        g.set_edge_idx(outer, inner, true);
        for (x, &i) in others.iter().enumerate() {
            for &j in &others[x + 1..] {
                if rng.gen_bool(0.5) {
                    g.set_edge_idx(i, j, true);
                }
            }
        }
        let leaf = LeafGraph::new(g, outer as u32, inner as u32)?;
        let len = rng.gen_range(1..=12);
        let seq: Vec<u32> = (0..len).map(|_| others[rng.gen_range(0..others.len())] as u32).collect();
        failures += !leaf_delete_commute_check(&leaf, &seq)? as usize;
    }
    Ok((cases, failures))
}

fn ac11_appendix(opts: &SelftestOptions) -> Outcome {
    let orbit_opts = OrbitOptions {
        exec: opts.exec,
        ..OrbitOptions::default()
    };
    let mut total = LeafSuite::default();
    for n in 2..=7 {
        let s = leaf_suite(n, &orbit_opts)?;
        total.classes += s.classes;
        total.members += s.members;
        total.epsilon_failures += s.epsilon_failures;
        total.partition_failures += s.partition_failures;
        total.subgraph_failures += s.subgraph_failures;
    }
    let (cases, deletion_failures) = leaf_deletion_cases(LEAF_DELETION_CASES, 8, SEED)?;
    verdict(
        total.failures() == 0 && deletion_failures == 0,
        format!(
            "{} leaf-seeded classes ({} members, n<=7): epsilon {} / partition {} / subgraph {} failures; leaf deletion {deletion_failures}/{cases} failures",
            total.classes, total.members, total.epsilon_failures, total.partition_failures, total.subgraph_failures
        ),
    )
}
