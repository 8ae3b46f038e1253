use rustc_hash::{FxHashMap, FxHashSet};
use sha2::{Digest, Sha256};

use super::compact::{CanonicalKey, CompactGraph};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::SimpleGraph;

/// Default cap on the number of orbit members.
pub const DEFAULT_ORBIT_BUDGET: usize = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitOptions {
    pub budget: usize,
    /// Keep a parent pointer per member so complementation sequences can be
    /// reconstructed for every member, not just a stop hit.
    pub track_paths: bool,
    pub exec: Exec,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_ORBIT_BUDGET,
            track_paths: false,
            exec: Exec::default(),
        }
    }
}

impl OrbitOptions {
    pub fn with_budget(budget: usize) -> Self {
        Self {
            budget,
            ..Self::default()
        }
    }
}

const SEED: u8 = u8::MAX;

/// The set of labeled graphs reachable from a seed by local complementations.
#[derive(Clone, Debug)]
pub struct LcOrbit {
    labels: Vec<u32>,
    seed: CanonicalKey,
    members: FxHashSet<u128>,
    parents: Option<FxHashMap<u128, (u128, u8)>>,
    levels: usize,
}

impl LcOrbit {
    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }

    /// Vertex labels, in the order the keys are packed.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn seed(&self) -> CanonicalKey {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of BFS levels (largest complementation distance from the seed).
    pub fn depth(&self) -> usize {
        self.levels
    }

    pub fn contains(&self, key: &CanonicalKey) -> bool {
        key.n_vertices() == self.n_vertices() && self.members.contains(&key.bits())
    }

    /// Membership for a graph over the same label set, in any vertex order.
    pub fn contains_graph(&self, g: &SimpleGraph) -> Result<bool> {
        let g = g.reordered(&self.labels)?;
        Ok(self.contains(&CanonicalKey::of(&g)?))
    }

    pub fn sorted_keys(&self) -> Vec<CanonicalKey> {
        let n = self.n_vertices();
        let mut v: Vec<u128> = self.members.iter().copied().collect();
        v.sort_unstable();
        v.into_iter().map(|b| CanonicalKey::from_raw(n, b)).collect()
    }

    pub fn graph(&self, key: &CanonicalKey) -> SimpleGraph {
        CompactGraph::from_key(*key).to_simple(&self.labels)
    }

    pub fn graphs(&self) -> impl Iterator<Item = SimpleGraph> + '_ {
        self.sorted_keys().into_iter().map(move |k| self.graph(&k))
    }

    /// Complementation sequence (vertex labels, first applied first) from the
    /// seed to `key`, when paths were tracked.
    pub fn path_to(&self, key: &CanonicalKey) -> Option<Vec<u32>> {
        let parents = self.parents.as_ref()?;
        let mut seq = Vec::new();
        let mut cur = key.bits();
        loop {
            let &(parent, v) = parents.get(&cur)?;
            if v == SEED {
                break;
            }
            seq.push(self.labels[v as usize]);
            cur = parent;
        }
        seq.reverse();
        Some(seq)
    }

    /// SHA-256 over the sorted member keys, hex encoded.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.n_vertices() as u64).to_le_bytes());
        for l in &self.labels {
            h.update(l.to_le_bytes());
        }
        for k in self.sorted_keys() {
            h.update(k.bits().to_le_bytes());
        }
        hex::encode(h.finalize())
    }
}

/// Result of an orbit enumeration.
#[derive(Clone, Debug)]
pub enum OrbitOutcome {
    /// The full orbit; no member satisfied the stop predicate.
    Complete(LcOrbit),
    /// A member satisfied the stop predicate. `path` is the shortest
    /// complementation sequence reaching it (lexicographically least by vertex
    /// position among the shortest).
    Stopped {
        hit: SimpleGraph,
        path: Vec<u32>,
        explored: usize,
    },
}

impl OrbitOutcome {
    pub fn into_complete(self) -> Option<LcOrbit> {
        match self {
            OrbitOutcome::Complete(o) => Some(o),
            OrbitOutcome::Stopped { .. } => None,
        }
    }
}

pub type StopPredicate<'a> = &'a (dyn Fn(&CompactGraph) -> bool + Sync);

/// Full orbit of `g` (no stop predicate).
pub fn lc_orbit(g: &SimpleGraph, opts: &OrbitOptions) -> Result<LcOrbit> {
    Ok(lc_orbit_until(g, None, opts)?
        .into_complete()
        .expect("no stop predicate"))
}

/// Level-synchronous breadth-first closure of `{g}` under all `τ_v`.
///
/// Each level is ordered by the lexicographic order of the complementation
/// sequences reaching its members, which makes the stop hit and every
/// recorded path independent of how the level expansion is scheduled.
pub fn lc_orbit_until(
    g: &SimpleGraph,
    stop: Option<StopPredicate<'_>>,
    opts: &OrbitOptions,
) -> Result<OrbitOutcome> {
    let seed = CompactGraph::from_simple(g)?;
    let n = seed.len();
    let labels = g.labels().to_vec();
    let keep_parents = opts.track_paths || stop.is_some();

    let mut members = FxHashSet::default();
    let mut parents: Option<FxHashMap<u128, (u128, u8)>> = keep_parents.then(FxHashMap::default);
    let seed_key = seed.key();
    members.insert(seed_key.bits());
    if let Some(p) = parents.as_mut() {
        p.insert(seed_key.bits(), (0, SEED));
    }
    if stop.is_some_and(|f| f(&seed)) {
        return Ok(OrbitOutcome::Stopped {
            hit: g.clone(),
            path: Vec::new(),
            explored: 1,
        });
    }
    if opts.budget == 0 {
        return Err(Error::OrbitBudgetExceeded { budget: 0 });
    }

    let mut frontier = vec![seed];
    let mut levels = 0;
    while !frontier.is_empty() {
        let candidates: Vec<Vec<(CompactGraph, u8)>> = opts.exec.map(&frontier, |parent| {
            (0..n)
                .filter(|&v| parent.degree(v) >= 2)
                .filter_map(|v| {
                    let child = parent.complemented(v);
                    (!members.contains(&child.key().bits())).then_some((child, v as u8))
                })
                .collect()
        });
        let mut next = Vec::new();
        for (parent, kids) in frontier.iter().zip(candidates) {
            for (child, v) in kids {
                let bits = child.key().bits();
                if members.insert(bits) {
                    if let Some(p) = parents.as_mut() {
                        p.insert(bits, (parent.key().bits(), v));
                    }
                    next.push(child);
                }
            }
            if members.len() > opts.budget {
                return Err(Error::OrbitBudgetExceeded {
                    budget: opts.budget,
                });
            }
        }
        if next.is_empty() {
            break;
        }
        levels += 1;
        if let Some(f) = stop {
            let hits = opts.exec.map(&next, |c| f(c));
            if let Some(i) = hits.iter().position(|&h| h) {
                let hit = next[i];
                let orbit = LcOrbit {
                    labels: labels.clone(),
                    seed: seed_key,
                    members,
                    parents,
                    levels,
                };
                let path = orbit.path_to(&hit.key()).expect("parents recorded");
                return Ok(OrbitOutcome::Stopped {
                    hit: hit.to_simple(&labels),
                    path,
                    explored: orbit.len(),
                });
            }
        }
        frontier = next;
    }
    Ok(OrbitOutcome::Complete(LcOrbit {
        labels,
        seed: seed_key,
        members,
        parents: if opts.track_paths { parents } else { None },
        levels,
    }))
}
