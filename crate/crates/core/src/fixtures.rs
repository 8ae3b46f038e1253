//! Bundled setups, graphs and the plus-pentomino reduction chain.

use crate::error::Result;
use crate::graph::SimpleGraph;
use crate::reduction::chain::ChainSpec;
use crate::surface::Embedding;

pub const PLAQUETTE4: &str = include_str!("../fixtures/plaquette4.json");
pub const HEXAGON: &str = include_str!("../fixtures/hexagon.json");
/// Two squares sharing a single vertex.
pub const DOUBLE_PLAQUETTE: &str = include_str!("../fixtures/double_plaquette.json");
/// The triangle-shaped tetriamond (9 qubits).
pub const TETRIAMOND: &str = include_str!("../fixtures/tetriamond.json");
/// The plus-shaped pentomino (16 qubits).
pub const PENTOMINO: &str = include_str!("../fixtures/pentomino.json");
/// Eight-qubit square with doubled sides; the base of the pentomino chain.
pub const DOUBLED_SQUARE: &str = include_str!("../fixtures/doubled_square.json");
pub const TORUS2X2: &str = include_str!("../fixtures/torus2x2.json");
pub const STAR5: &str = include_str!("../fixtures/star5.json");
pub const COMPLETE5: &str = include_str!("../fixtures/complete5.json");
pub const PENTOMINO_CHAIN: &str = include_str!("../fixtures/pentomino_chain.json");

/// Setup fixtures by file stem.
pub const SETUPS: &[(&str, &str)] = &[
    ("plaquette4", PLAQUETTE4),
    ("hexagon", HEXAGON),
    ("double_plaquette", DOUBLE_PLAQUETTE),
    ("tetriamond", TETRIAMOND),
    ("pentomino", PENTOMINO),
    ("doubled_square", DOUBLED_SQUARE),
    ("torus2x2", TORUS2X2),
];

pub fn setup(json: &str) -> Result<Embedding> {
    Embedding::from_json_str(json)
}

pub fn graph(json: &str) -> Result<SimpleGraph> {
    SimpleGraph::from_json_str(json)
}

pub fn pentomino_chain() -> Result<ChainSpec> {
    ChainSpec::from_json_str(PENTOMINO_CHAIN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_setups_load() {
        for (name, json) in SETUPS {
            setup(json).unwrap_or_else(|err| panic!("{name}: {err}"));
        }
        assert_eq!(setup(TETRIAMOND).unwrap().n_qubits(), 9);
        assert_eq!(setup(PENTOMINO).unwrap().n_qubits(), 16);
        assert_eq!(setup(DOUBLED_SQUARE).unwrap().n_qubits(), 8);
        assert!(setup(TORUS2X2).unwrap().is_closed());
        assert_eq!(graph(STAR5).unwrap().edge_count(), 4);
        assert_eq!(graph(COMPLETE5).unwrap().edge_count(), 10);
        assert_eq!(pentomino_chain().unwrap().steps.len(), 120);
    }
}
