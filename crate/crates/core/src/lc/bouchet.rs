//! Pairwise LC-equivalence via Bouchet's algebraic criterion.
//!
//! Graphs with adjacency matrices `Γ`, `Γ'` on the same labeled vertices are
//! LC-equivalent iff there are diagonal `A, B, C, D` with
//! `(ΓB + D)Γ' + (ΓA + C) = 0` and `AD + BC = I`. The first condition is
//! linear in the `4N` diagonal entries; the second is checked per candidate
//! while walking the solution space in Gray-code order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{nullspace_words, solve_affine, BitMatrix, BitVec};
use crate::graph::SimpleGraph;

use super::compact::{CompactGraph, MAX_ORBIT_VERTICES};

/// Largest nullspace dimension enumerated by default (`2^30` candidates).
pub const DEFAULT_NULLITY_LIMIT: usize = 30;

/// Diagonals of `A, B, C, D`, indexed like the vertex labels of the first graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcWitness {
    pub labels: Vec<u32>,
    #[serde(with = "bits_str")]
    pub a: BitVec,
    #[serde(with = "bits_str")]
    pub b: BitVec,
    #[serde(with = "bits_str")]
    pub c: BitVec,
    #[serde(with = "bits_str")]
    pub d: BitVec,
}

mod bits_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::gf2::BitVec;

    pub fn serialize<S: Serializer>(v: &BitVec, s: S) -> Result<S::Ok, S::Error> {
        let text: String = (0..v.len()).map(|i| if v.get(i) { '1' } else { '0' }).collect();
        s.serialize_str(&text)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BitVec, D::Error> {
        let text = String::deserialize(d)?;
        if !text.chars().all(|c| c == '0' || c == '1') {
            return Err(serde::de::Error::custom("expected a string of 0/1"));
        }
        Ok(BitVec::from_bit_str(&text))
    }
}

impl LcWitness {
    pub fn identity(labels: Vec<u32>) -> Self {
        let n = labels.len();
        let ones = BitVec::from_indices(n, 0..n);
        Self {
            labels,
            a: ones.clone(),
            b: BitVec::zeros(n),
            c: BitVec::zeros(n),
            d: ones,
        }
    }

    /// `a_i d_i + b_i c_i = 1` for every vertex.
    pub fn is_invertible(&self) -> bool {
        let n = self.labels.len();
        (0..n).all(|i| (self.a.get(i) & self.d.get(i)) ^ (self.b.get(i) & self.c.get(i)))
    }
}

fn diagonal(v: &BitVec) -> BitMatrix {
    let mut m = BitMatrix::zeros(v.len(), v.len());
    for i in v.ones() {
        m.set(i, i, true);
    }
    m
}

fn aligned(g: &SimpleGraph, h: &SimpleGraph) -> Result<SimpleGraph> {
    if !g.same_vertex_set(h) {
        return Err(Error::VertexSetMismatch);
    }
    h.reordered(g.labels())
}

/// Recheck a witness with explicit matrix products, independent of the solver.
pub fn verify_witness(g: &SimpleGraph, h: &SimpleGraph, w: &LcWitness) -> Result<bool> {
    let h = aligned(g, h)?;
    if w.labels != g.labels() {
        return Ok(false);
    }
    let n = g.len();
    if [&w.a, &w.b, &w.c, &w.d].iter().any(|v| v.len() != n) {
        return Ok(false);
    }
    let gm = g.adjacency();
    let hm = h.adjacency();
    let lhs = gm
        .mul(&diagonal(&w.b))
        .add(&diagonal(&w.d))
        .mul(hm)
        .add(&gm.mul(&diagonal(&w.a)).add(&diagonal(&w.c)));
    Ok(lhs.is_zero() && w.is_invertible())
}

/// Bouchet test with the default nullity limit.
pub fn lc_equivalent(g: &SimpleGraph, h: &SimpleGraph) -> Result<Option<LcWitness>> {
    lc_equivalent_with_limit(g, h, DEFAULT_NULLITY_LIMIT)
}

pub fn lc_equivalent_with_limit(
    g: &SimpleGraph,
    h: &SimpleGraph,
    nullity_limit: usize,
) -> Result<Option<LcWitness>> {
    let h = aligned(g, h)?;
    if g.labeled_eq(&h) {
        return Ok(Some(LcWitness::identity(g.labels().to_vec())));
    }
    if g.len() <= MAX_ORBIT_VERTICES {
        word_search(g, &h, nullity_limit)
    } else {
        dense_search(g, &h, nullity_limit)
    }
}

/// Diagonals of a witness as bitmasks over vertex positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompactWitness {
    pub a: u16,
    pub b: u16,
    pub c: u16,
    pub d: u16,
}

/// Word-level Bouchet test on compact graphs over the same vertex order.
///
/// The diagonal equations give `c_i = Σ_{k ∈ N_Γ(i) ∩ N_Γ'(i)} b_k`, so only
/// the off-diagonal equations in `a | b | d` are eliminated; `c` is carried
/// along in the top `N` bits of each nullspace vector.
pub fn lc_equivalent_compact(
    g: &CompactGraph,
    h: &CompactGraph,
    nullity_limit: usize,
) -> Result<Option<CompactWitness>> {
    let n = g.len();
    assert_eq!(n, h.len(), "vertex count mismatch");
    let gr = g.rows();
    let hr = h.rows();
    let mut rows = [0u64; MAX_ORBIT_VERTICES * MAX_ORBIT_VERTICES];
    let mut len = 0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            // Σ_k Γ_ik Γ'_kj b_k + Γ'_ij d_i + Γ_ij a_j; Γ' symmetric, so column j is row j.
            let mut eq = ((gr[i] & hr[j]) as u64) << n;
            eq |= ((hr[i] >> j & 1) as u64) << (2 * n + i);
            eq |= ((gr[i] >> j & 1) as u64) << j;
            if eq != 0 {
                rows[len] = eq;
                len += 1;
            }
        }
    }
    let mut basis = Vec::new();
    nullspace_words(&mut rows[..len], 3 * n, &mut basis);
    let k = basis.len();
    if k > nullity_limit {
        return Err(Error::SolutionSpaceTooLarge {
            nullity: k,
            limit: nullity_limit,
        });
    }
    let mask = (1u64 << n) - 1;
    for v in basis.iter_mut() {
        let b = (*v >> n & mask) as u16;
        let mut c = 0u64;
        for i in 0..n {
            c |= ((b & gr[i] & hr[i]).count_ones() as u64 & 1) << i;
        }
        *v |= c << (3 * n);
    }
    let mut x = 0u64;
    // x = 0 never passes, so start at the first Gray step.
    for t in 1u64..(1u64 << k) {
        x ^= basis[t.trailing_zeros() as usize];
        let a = x & mask;
        let b = x >> n & mask;
        let d = x >> (2 * n) & mask;
        let c = x >> (3 * n) & mask;
        if (a & d) ^ (b & c) == mask {
            return Ok(Some(CompactWitness {
                a: a as u16,
                b: b as u16,
                c: c as u16,
                d: d as u16,
            }));
        }
    }
    Ok(None)
}

fn word_search(g: &SimpleGraph, h: &SimpleGraph, limit: usize) -> Result<Option<LcWitness>> {
    let n = g.len();
    let w = lc_equivalent_compact(&CompactGraph::from_simple(g)?, &CompactGraph::from_simple(h)?, limit)?;
    Ok(w.map(|w| {
        let part = |m: u16| BitVec::from_indices(n, (0..n).filter(|&i| m >> i & 1 == 1));
        LcWitness {
            labels: g.labels().to_vec(),
            a: part(w.a),
            b: part(w.b),
            c: part(w.c),
            d: part(w.d),
        }
    }))
}

fn dense_search(g: &SimpleGraph, h: &SimpleGraph, limit: usize) -> Result<Option<LcWitness>> {
    let n = g.len();
    let gm = g.adjacency();
    let hm = h.adjacency();
    let mut m = BitMatrix::zeros(n * n, 4 * n);
    for i in 0..n {
        for j in 0..n {
            let r = i * n + j;
            for k in 0..n {
                if gm.get(i, k) && hm.get(k, j) {
                    m.set(r, n + k, true);
                }
            }
            if hm.get(i, j) {
                m.set(r, 3 * n + i, true);
            }
            if gm.get(i, j) {
                m.set(r, j, true);
            }
            if i == j {
                m.set(r, 2 * n + i, true);
            }
        }
    }
    let sol = solve_affine(&m, &BitVec::zeros(n * n)).expect("homogeneous system");
    let basis = sol.nullspace_basis;
    let k = basis.len();
    if k > limit {
        return Err(Error::SolutionSpaceTooLarge {
            nullity: k,
            limit,
        });
    }
    let mut x = sol.particular;
    for t in 1u64..(1u64 << k) {
        x.xor_assign(&basis[t.trailing_zeros() as usize]);
        if (0..n).all(|i| (x.get(i) & x.get(3 * n + i)) ^ (x.get(n + i) & x.get(2 * n + i))) {
            let part = |s: usize| BitVec::from_indices(n, (0..n).filter(|&i| x.get(s * n + i)));
            return Ok(Some(LcWitness {
                labels: g.labels().to_vec(),
                a: part(0),
                b: part(1),
                c: part(2),
                d: part(3),
            }));
        }
    }
    Ok(None)
}
