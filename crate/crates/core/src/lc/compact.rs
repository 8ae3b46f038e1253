use std::fmt;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Largest vertex count an orbit key can hold (`16 * 15 / 2 = 120` bits).
pub const MAX_ORBIT_VERTICES: usize = 16;

/// Adjacency rows as bitmasks, for fast local complementation.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CompactGraph {
    n: u8,
    rows: [u16; MAX_ORBIT_VERTICES],
}

impl fmt::Debug for CompactGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CompactGraph({}, {})", self.n, self.key())
    }
}

impl CompactGraph {
    pub fn from_simple(g: &SimpleGraph) -> Result<Self> {
        let n = g.len();
        if n > MAX_ORBIT_VERTICES {
            return Err(Error::OrbitTooLarge(n));
        }
        let mut rows = [0u16; MAX_ORBIT_VERTICES];
        for (i, row) in rows.iter_mut().enumerate().take(n) {
            for j in g.adjacency().row(i).ones() {
                *row |= 1 << j;
            }
        }
        Ok(Self { n: n as u8, rows })
    }

    pub fn to_simple(&self, labels: &[u32]) -> SimpleGraph {
        assert_eq!(labels.len(), self.len(), "label count mismatch");
        let mut g = SimpleGraph::empty(labels.to_vec()).expect("distinct labels");
        for i in 0..self.len() {
            let mut r = self.rows[i] & !(((2u32 << i) - 1) as u16);
            while r != 0 {
                let j = r.trailing_zeros() as usize;
                r &= r - 1;
                g.set_edge_idx(i, j, true);
            }
        }
        g
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn rows(&self) -> &[u16] {
        &self.rows[..self.len()]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    #[inline]
    pub fn local_complement(&mut self, v: usize) {
        let nv = self.rows[v];
        let mut r = nv;
        while r != 0 {
            let u = r.trailing_zeros() as usize;
            r &= r - 1;
            self.rows[u] ^= nv & !(1 << u);
        }
    }

    #[inline]
    pub fn complemented(&self, v: usize) -> Self {
        let mut g = *self;
        g.local_complement(v);
        g
    }

    #[inline]
    pub fn degree(&self, v: usize) -> u32 {
        self.rows[v].count_ones()
    }

    /// Every edge also present in `allowed` (same vertex order).
    #[inline]
    pub fn edges_within(&self, allowed: &[u16]) -> bool {
        self.rows().iter().zip(allowed).all(|(r, a)| r & !a == 0)
    }

    #[inline]
    pub fn key(&self) -> CanonicalKey {
        let n = self.len();
        let mut bits = 0u128;
        let mut offset = 0u32;
        for i in 0..n {
            let width = (n - 1 - i) as u32;
            if width == 0 {
                break;
            }
            let part = (self.rows[i] >> (i + 1)) as u128 & ((1u128 << width) - 1);
            bits |= part << offset;
            offset += width;
        }
        CanonicalKey { n: n as u8, bits }
    }

    /// Graph from symmetric, loop-free adjacency rows.
    pub fn from_rows(rows: &[u16]) -> Result<Self> {
        let n = rows.len();
        if n > MAX_ORBIT_VERTICES {
            return Err(Error::OrbitTooLarge(n));
        }
        let mut g = Self {
            n: n as u8,
            rows: [0; MAX_ORBIT_VERTICES],
        };
        g.rows[..n].copy_from_slice(rows);
        for (i, &row) in rows.iter().enumerate() {
            if g.has_edge(i, i) || (n < 16 && row >> n != 0) {
                return Err(Error::Malformed(format!("row {i} has a loop or out-of-range bit")));
            }
            if (0..n).any(|j| g.has_edge(i, j) != g.has_edge(j, i)) {
                return Err(Error::Malformed("adjacency rows are not symmetric".into()));
            }
        }
        Ok(g)
    }

    /// Removes vertex `v`; later vertices shift down by one.
    pub fn delete_vertex(&self, v: usize) -> Self {
        let n = self.len();
        assert!(v < n, "vertex {v} out of range");
        let low = (1u16 << v) - 1;
        let mut rows = [0u16; MAX_ORBIT_VERTICES];
        for (k, i) in (0..n).filter(|&i| i != v).enumerate() {
            let r = self.rows[i];
            rows[k] = (r & low) | ((r >> 1) & !low);
        }
        Self {
            n: self.n - 1,
            rows,
        }
    }

    /// Exchanges the positions of vertices `a` and `b`.
    pub fn swap_vertices(&self, a: usize, b: usize) -> Self {
        let mut rows = self.rows;
        rows.swap(a, b);
        for r in rows.iter_mut().take(self.len()) {
            let (x, y) = (*r >> a & 1, *r >> b & 1);
            if x != y {
                *r ^= (1 << a) | (1 << b);
            }
        }
        Self { n: self.n, rows }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n <= 1 {
            return true;
        }
        let full = if n == 16 { u16::MAX } else { (1u16 << n) - 1 };
        let mut seen = 1u16;
        let mut frontier = 1u16;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.rows[v] & !seen;
            seen |= new;
            frontier |= new;
        }
        seen == full
    }

    pub fn from_key(key: CanonicalKey) -> Self {
        let n = key.n as usize;
        let mut rows = [0u16; MAX_ORBIT_VERTICES];
        let mut offset = 0u32;
        for i in 0..n {
            for j in i + 1..n {
                if key.bits >> offset & 1 == 1 {
                    rows[i] |= 1 << j;
                    rows[j] |= 1 << i;
                }
                offset += 1;
            }
        }
        Self { n: key.n, rows }
    }
}

/// Packed upper triangle of the adjacency matrix, row-major: bit 0 is the
/// pair `(0,1)`, then `(0,2)`, ..., `(1,2)`, ...
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    n: u8,
    bits: u128,
}

impl CanonicalKey {
    pub fn of(g: &SimpleGraph) -> Result<Self> {
        Ok(CompactGraph::from_simple(g)?.key())
    }

    pub fn n_vertices(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn width(&self) -> usize {
        let n = self.n as usize;
        n * n.saturating_sub(1) / 2
    }

    /// Fixed-width lowercase hex.
    pub fn to_hex(&self) -> String {
        let digits = self.width().div_ceil(4).max(1);
        format!("{:0digits$x}", self.bits)
    }

    pub fn from_hex(n: usize, s: &str) -> Result<Self> {
        if n > MAX_ORBIT_VERTICES {
            return Err(Error::OrbitTooLarge(n));
        }
        let bits = u128::from_str_radix(s, 16)
            .map_err(|e| Error::Malformed(format!("bad key {s:?}: {e}")))?;
        let key = Self { n: n as u8, bits };
        if key.width() < 128 && bits >> key.width() != 0 {
            return Err(Error::Malformed(format!("key {s:?} too wide for {n} vertices")));
        }
        Ok(key)
    }

    pub(crate) fn from_raw(n: usize, bits: u128) -> Self {
        Self { n: n as u8, bits }
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({}, {})", self.n, self.to_hex())
    }
}

/// Key of a labeled graph; injective for a fixed vertex list.
pub fn canonical_key(g: &SimpleGraph) -> Result<CanonicalKey> {
    CanonicalKey::of(g)
}
