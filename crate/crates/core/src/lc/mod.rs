//! Local-complementation classes: orbit enumeration, the pairwise Bouchet
//! test, and the search for a representative whose edges stay inside an
//! allowed-adjacency graph.

mod bouchet;
mod compact;
mod orbit;

pub use bouchet::{
    lc_equivalent, lc_equivalent_compact, lc_equivalent_with_limit, verify_witness, CompactWitness,
    LcWitness, DEFAULT_NULLITY_LIMIT,
};
pub use compact::{canonical_key, CanonicalKey, CompactGraph, MAX_ORBIT_VERTICES};
pub use orbit::{
    lc_orbit, lc_orbit_until, LcOrbit, OrbitOptions, OrbitOutcome, StopPredicate,
    DEFAULT_ORBIT_BUDGET,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Outcome of [`find_local_representative`]. Budget exhaustion is an error,
/// never a verdict.
#[derive(Clone, Debug)]
pub enum LocalitySearch {
    Local {
        graph: SimpleGraph,
        path: Vec<u32>,
        explored: usize,
    },
    /// The whole orbit was enumerated and no member fits.
    Nonlocal(LcOrbit),
}

impl LocalitySearch {
    pub fn is_local(&self) -> bool {
        matches!(self, LocalitySearch::Local { .. })
    }

    pub fn local_graph(&self) -> Option<&SimpleGraph> {
        match self {
            LocalitySearch::Local { graph, .. } => Some(graph),
            LocalitySearch::Nonlocal(_) => None,
        }
    }
}

/// Searches the orbit of `g` for a subgraph of `allowed` (the graph `G_Λ` of
/// an adjacency relation). Both graphs must carry the same labels.
pub fn find_local_representative(
    g: &SimpleGraph,
    allowed: &SimpleGraph,
    opts: &OrbitOptions,
) -> Result<LocalitySearch> {
    if !g.same_vertex_set(allowed) {
        return Err(Error::VertexSetMismatch);
    }
    let allowed = CompactGraph::from_simple(&allowed.reordered(g.labels())?)?;
    let allowed_rows = allowed.rows().to_vec();
    let is_local = move |c: &CompactGraph| c.edges_within(&allowed_rows);
    Ok(match lc_orbit_until(g, Some(&is_local), opts)? {
        OrbitOutcome::Stopped {
            hit,
            path,
            explored,
        } => LocalitySearch::Local {
            graph: hit,
            path,
            explored,
        },
        OrbitOutcome::Complete(orbit) => LocalitySearch::Nonlocal(orbit),
    })
}

#[derive(Serialize)]
struct OrbitDump<'a> {
    labels: &'a [u32],
    size: usize,
    depth: usize,
    digest: String,
    seed: String,
    members: Vec<MemberDump>,
}

#[derive(Serialize)]
struct MemberDump {
    key: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<Vec<u32>>,
}

/// Structured dump of an orbit: hex keys in ascending order, with
/// complementation paths when they were tracked.
pub fn orbit_to_json(orbit: &LcOrbit, with_members: bool) -> serde_json::Value {
    let members = if with_members {
        orbit
            .sorted_keys()
            .into_iter()
            .map(|k| MemberDump {
                key: k.to_hex(),
                path: orbit.path_to(&k),
            })
            .collect()
    } else {
        Vec::new()
    };
    serde_json::to_value(OrbitDump {
        labels: orbit.labels(),
        size: orbit.len(),
        depth: orbit.depth(),
        digest: orbit.digest(),
        seed: orbit.seed().to_hex(),
        members,
    })
    .expect("orbit dump serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_is_local_for_complete_relation() {
        let g = SimpleGraph::star(vec![0, 1, 2, 3]).unwrap();
        let k4 = SimpleGraph::complete(vec![0, 1, 2, 3]).unwrap();
        let r = find_local_representative(&g, &k4, &OrbitOptions::default()).unwrap();
        assert_eq!(r.local_graph(), Some(&g));
    }

    #[test]
    fn empty_relation_only_admits_edgeless() {
        let g = SimpleGraph::path(vec![0, 1, 2]).unwrap();
        let none = SimpleGraph::with_vertices(3);
        let r = find_local_representative(&g, &none, &OrbitOptions::default()).unwrap();
        match r {
            LocalitySearch::Nonlocal(o) => assert_eq!(o.len(), 4),
            LocalitySearch::Local { .. } => panic!("no edgeless member"),
        }
    }

    #[test]
    fn path_found_by_complementing() {
        // τ_0 on K3 removes edge 12, leaving the path centred at 0.
        let g = SimpleGraph::complete(vec![0, 1, 2]).unwrap();
        let allowed = SimpleGraph::star(vec![0, 1, 2]).unwrap();
        match find_local_representative(&g, &allowed, &OrbitOptions::default()).unwrap() {
            LocalitySearch::Local { graph, path, .. } => {
                assert_eq!(path, vec![0]);
                assert_eq!(graph, allowed);
            }
            LocalitySearch::Nonlocal(_) => panic!("star is in the class"),
        }
    }

    #[test]
    fn dump_lists_sorted_members() {
        let g = SimpleGraph::complete(vec![0, 1, 2]).unwrap();
        let o = lc_orbit(&g, &OrbitOptions::default()).unwrap();
        let v = orbit_to_json(&o, true);
        assert_eq!(v["size"], 4);
        let keys: Vec<&str> = v["members"].as_array().unwrap().iter().map(|m| m["key"].as_str().unwrap()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }
}
