//! Free polyominoes and polyiamonds, grown cell by cell and deduplicated by
//! a canonical form under the lattice point group.
//!
//! Lattice points use integer coordinates; on the triangular lattice they are
//! axial, with unit vectors `(1,0)` and `(0,1)` at 60 degrees.

use std::collections::BTreeSet;

use super::Embedding;
use crate::error::Result;
use crate::graph::Multigraph;

type Point = (i32, i32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lattice {
    Square,
    Triangular,
}

impl Lattice {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "square" => Some(Lattice::Square),
            "triangular" | "triangle" => Some(Lattice::Triangular),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Lattice::Square => "square",
            Lattice::Triangular => "triangular",
        }
    }

    fn rotate(self, (x, y): Point) -> Point {
        match self {
            Lattice::Square => (-y, x),
            Lattice::Triangular => (-y, x + y),
        }
    }

    fn mirror(self, (x, y): Point) -> Point {
        match self {
            Lattice::Square => (x, -y),
            Lattice::Triangular => (x + y, -y),
        }
    }

    fn rotation_order(self) -> usize {
        match self {
            Lattice::Square => 4,
            Lattice::Triangular => 6,
        }
    }

    /// Corners of the cell at `(x, y)`; on the triangular lattice `up`
    /// selects the upward triangle.
    fn cell(self, x: i32, y: i32, up: bool) -> Cell {
        let mut c = match (self, up) {
            (Lattice::Square, _) => vec![(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)],
            (Lattice::Triangular, true) => vec![(x, y), (x + 1, y), (x, y + 1)],
            (Lattice::Triangular, false) => vec![(x + 1, y), (x, y + 1), (x + 1, y + 1)],
        };
        c.sort_unstable();
        c
    }

    /// Cells sharing a side with `c`.
    fn neighbours(self, c: &Cell) -> Vec<Cell> {
        match self {
            Lattice::Square => {
                let (x, y) = c[0];
                [(x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)]
                    .into_iter()
                    .map(|(a, b)| self.cell(a, b, true))
                    .collect()
            }
            Lattice::Triangular => {
                let (x, y) = c[0];
                if c[1] == (x, y + 1) {
                    // upward triangle at (x, y)
                    vec![
                        self.cell(x, y, false),
                        self.cell(x, y - 1, false),
                        self.cell(x - 1, y, false),
                    ]
                } else {
                    // downward triangle at (x, y - 1)
                    vec![
                        self.cell(x, y - 1, true),
                        self.cell(x + 1, y - 1, true),
                        self.cell(x, y, true),
                    ]
                }
            }
        }
    }

    /// Sides of a cell as corner pairs, in boundary order.
    fn sides(self, c: &Cell) -> Vec<(Point, Point)> {
        let cycle: Vec<Point> = match self {
            // sorted: (x,y), (x,y+1), (x+1,y), (x+1,y+1)
            Lattice::Square => vec![c[0], c[2], c[3], c[1]],
            Lattice::Triangular => c.clone(),
        };
        (0..cycle.len())
            .map(|i| (cycle[i], cycle[(i + 1) % cycle.len()]))
            .collect()
    }
}

/// Sorted corner list of one cell.
type Cell = Vec<Point>;

/// A free polyform in canonical form: sorted cells, translated so the
/// smallest coordinates are zero, minimal over the point group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polyform {
    cells: Vec<Cell>,
}

impl Polyform {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Vec<(i32, i32)>] {
        &self.cells
    }

    fn canonical(lattice: Lattice, cells: &[Cell]) -> Polyform {
        let mut best: Option<Vec<Cell>> = None;
        let mut cur: Vec<Cell> = cells.to_vec();
        for _ in 0..2 {
            for _ in 0..lattice.rotation_order() {
                let n = normalized(&cur);
                if best.as_ref().is_none_or(|b| n < *b) {
                    best = Some(n);
                }
                cur = map_cells(&cur, |p| lattice.rotate(p));
            }
            cur = map_cells(&cur, |p| lattice.mirror(p));
        }
        Polyform {
            cells: best.expect("point group is non-empty"),
        }
    }

    /// Open planar embedding with one face per cell. Vertices and edges are
    /// numbered in sorted coordinate order.
    pub fn to_embedding(&self, lattice: Lattice) -> Result<Embedding> {
        let points: BTreeSet<Point> = self.cells.iter().flatten().copied().collect();
        let points: Vec<Point> = points.into_iter().collect();
        let vid = |p: &Point| points.binary_search(p).expect("corner is a vertex") as u32;
        let key = |a: Point, b: Point| if a <= b { (a, b) } else { (b, a) };
        let sides: BTreeSet<(Point, Point)> = self
            .cells
            .iter()
            .flat_map(|c| lattice.sides(c))
            .map(|(a, b)| key(a, b))
            .collect();
        let sides: Vec<(Point, Point)> = sides.into_iter().collect();
        let edges: Vec<(u32, u32)> = sides.iter().map(|(a, b)| (vid(a), vid(b))).collect();
        let faces = self
            .cells
            .iter()
            .map(|c| {
                lattice
                    .sides(c)
                    .into_iter()
                    .map(|(a, b)| sides.binary_search(&key(a, b)).expect("side is an edge"))
                    .collect()
            })
            .collect();
        let graph = Multigraph::new((0..points.len() as u32).collect(), &edges)?;
        Embedding::new(graph, faces, false, None)
    }
}

fn map_cells(cells: &[Cell], f: impl Fn(Point) -> Point) -> Vec<Cell> {
    cells
        .iter()
        .map(|c| {
            let mut m: Cell = c.iter().map(|&p| f(p)).collect();
            m.sort_unstable();
            m
        })
        .collect()
}

fn normalized(cells: &[Cell]) -> Vec<Cell> {
    let mx = cells.iter().flatten().map(|p| p.0).min().unwrap_or(0);
    let my = cells.iter().flatten().map(|p| p.1).min().unwrap_or(0);
    let mut out = map_cells(cells, |(x, y)| (x - mx, y - my));
    out.sort_unstable();
    out
}

/// All free polyforms with `n` edge-connected cells, in canonical order.
pub fn polyform_enumerate(n: usize, lattice: Lattice) -> Vec<Polyform> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: BTreeSet<Polyform> = BTreeSet::new();
    level.insert(Polyform::canonical(lattice, &[lattice.cell(0, 0, true)]));
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for p in &level {
            let present: BTreeSet<&Cell> = p.cells.iter().collect();
            for c in &p.cells {
                for nb in lattice.neighbours(c) {
                    if present.contains(&nb) {
                        continue;
                    }
                    let mut grown = p.cells.clone();
                    grown.push(nb);
                    next.insert(Polyform::canonical(lattice, &grown));
                }
            }
        }
        level = next;
    }
    level.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polyomino_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| polyform_enumerate(n, Lattice::Square).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 12]);
    }

    #[test]
    fn polyiamond_counts() {
        let counts: Vec<usize> =
            (1..=6).map(|n| polyform_enumerate(n, Lattice::Triangular).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 3, 4, 12]);
    }

    #[test]
    fn neighbours_share_a_side() {
        for lattice in [Lattice::Square, Lattice::Triangular] {
            for up in [true, false] {
                let c = lattice.cell(2, 3, up);
                for nb in lattice.neighbours(&c) {
                    let shared = c.iter().filter(|p| nb.contains(p)).count();
                    assert_eq!(shared, 2, "{lattice:?} {c:?} {nb:?}");
                }
            }
        }
    }

    #[test]
    fn tetriamonds_have_nine_qubits() {
        for p in polyform_enumerate(4, Lattice::Triangular) {
            let e = p.to_embedding(Lattice::Triangular).unwrap();
            assert_eq!(e.n_qubits(), 9);
            assert_eq!(e.graph().vertex_count(), 6);
        }
    }

    #[test]
    fn pentomino_sizes() {
        for p in polyform_enumerate(5, Lattice::Square) {
            let e = p.to_embedding(Lattice::Square).unwrap();
            assert_eq!(e.faces().len(), 5);
            assert_eq!(e.n_qubits() + 1, e.graph().vertex_count() + 5);
        }
    }
}
