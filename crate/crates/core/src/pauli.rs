//! Sign-tracked Hermitian Pauli strings and stabilizer tableaux.
//!
//! A [`PauliString`] stores one `(x, z)` bit pair per qubit, where `(1, 1)`
//! denotes the Hermitian `Y`, plus an overall sign. Products of commuting
//! strings are again Hermitian, so a single sign bit is enough for every
//! stabilizer group handled here.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{self, BitMatrix, BitVec};
use crate::graph::SimpleGraph;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: BitVec,
    z: BitVec,
    negative: bool,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            negative: false,
        }
    }

    pub fn from_parts(x: BitVec, z: BitVec, negative: bool) -> Self {
        assert_eq!(x.len(), z.len(), "x and z parts must have equal length");
        Self { x, z, negative }
    }

    /// `X` on every listed qubit.
    pub fn x_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        Self::from_parts(BitVec::from_indices(n, qubits), BitVec::zeros(n), false)
    }

    /// `Z` on every listed qubit.
    pub fn z_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        Self::from_parts(BitVec::zeros(n), BitVec::from_indices(n, qubits), false)
    }

    /// Parses strings such as `"+XZI"`, `"-YY"` or `"ZZ"` (sign optional).
    pub fn parse(s: &str) -> Result<Self> {
        let (negative, body) = match s.as_bytes().first() {
            Some(b'+') => (false, &s[1..]),
            Some(b'-') => (true, &s[1..]),
            _ => (false, s),
        };
        let n = body.chars().count();
        let mut p = Self::identity(n);
        p.negative = negative;
        for (i, c) in body.chars().enumerate() {
            match c {
                'I' | '_' => {}
                'X' => p.x.set(i, true),
                'Z' => p.z.set(i, true),
                'Y' => {
                    p.x.set(i, true);
                    p.z.set(i, true);
                }
                other => return Err(Error::Malformed(format!("bad Pauli letter {other:?}"))),
            }
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn negated(&self) -> Self {
        Self {
            negative: !self.negative,
            ..self.clone()
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Symplectic form: `x·z' + z·x'` over GF(2).
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        self.x.dot(&other.z) == other.x.dot(&self.z)
    }

    /// Product `self · other` of two commuting strings.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        assert_eq!(self.len(), other.len(), "qubit count mismatch");
        let mut x = self.x.clone();
        x.xor_assign(&other.x);
        let mut z = self.z.clone();
        z.xor_assign(&other.z);
        // sigma(x,z) = i^{x.z} X^x Z^z; reorder Z1 X2 at cost (-1)^{z1.x2}.
        let mut exp = 2 * (u32::from(self.negative) + u32::from(other.negative));
        exp += self.x.and(&self.z).count_ones() as u32;
        exp += other.x.and(&other.z).count_ones() as u32;
        exp += 2 * u32::from(self.z.dot(&other.x));
        exp += 4 - (x.and(&z).count_ones() as u32 % 4);
        match exp % 4 {
            0 => Ok(PauliString { x, z, negative: false }),
            2 => Ok(PauliString { x, z, negative: true }),
            _ => Err(Error::Malformed("product of anticommuting Pauli strings is not Hermitian".into())),
        }
    }

    /// Concatenated `x | z` bit row.
    pub fn symplectic_row(&self) -> BitVec {
        let n = self.len();
        BitVec::from_indices(2 * n, self.x.ones().chain(self.z.ones().map(|i| i + n)))
    }

    /// Conjugation by Hadamards on the listed qubits: swaps `X` and `Z`
    /// there, with `H Y H = -Y`.
    pub fn hadamard(&self, qubits: &[usize]) -> PauliString {
        let mut p = self.clone();
        for &q in qubits {
            let (xb, zb) = (p.x.get(q), p.z.get(q));
            if xb && zb {
                p.negative = !p.negative;
            }
            p.x.set(q, zb);
            p.z.set(q, xb);
        }
        p
    }

    /// Moves qubit `i` to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> PauliString {
        let n = self.len();
        PauliString {
            x: BitVec::from_indices(n, self.x.ones().map(|i| perm[i])),
            z: BitVec::from_indices(n, self.z.ones().map(|i| perm[i])),
            negative: self.negative,
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        for i in 0..self.len() {
            let c = match (self.x.get(i), self.z.get(i)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Independent, pairwise commuting generators of a stabilizer group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n_qubits: usize,
    generators: Vec<PauliString>,
}

impl Tableau {
    /// Checks commutation and independence of the given generators.
    pub fn new(n_qubits: usize, generators: Vec<PauliString>) -> Result<Self> {
        let t = Self {
            n_qubits,
            generators,
        };
        t.check_lengths()?;
        t.check_commuting()?;
        if gf2::rank(&t.symplectic_matrix()) != t.generators.len() {
            return Err(Error::Malformed("generators are not independent".into()));
        }
        Ok(t)
    }

    /// Keeps a maximal independent prefix-greedy subset of `candidates`.
    /// Dropped generators must be reproduced with their sign by the kept
    /// ones; otherwise the group would contain `-I`.
    pub fn reduced(n_qubits: usize, candidates: Vec<PauliString>) -> Result<Self> {
        let mut t = Self {
            n_qubits,
            generators: Vec::new(),
        };
        let all = Self {
            n_qubits,
            generators: candidates.clone(),
        };
        all.check_lengths()?;
        all.check_commuting()?;
        for p in candidates {
            match t.express(&p) {
                None => t.generators.push(p),
                Some(prod) => {
                    if prod.negative != p.negative {
                        return Err(Error::Malformed(format!(
                            "generator {p} contradicts the group (would contain -I)"
                        )));
                    }
                }
            }
        }
        Ok(t)
    }

    fn check_lengths(&self) -> Result<()> {
        if let Some(p) = self.generators.iter().find(|p| p.len() != self.n_qubits) {
            return Err(Error::Malformed(format!(
                "generator {p} has wrong qubit count (expected {})",
                self.n_qubits
            )));
        }
        Ok(())
    }

    fn check_commuting(&self) -> Result<()> {
        for (i, p) in self.generators.iter().enumerate() {
            for q in &self.generators[i + 1..] {
                if !p.commutes_with(q) {
                    return Err(Error::Malformed(format!("{p} and {q} anticommute")));
                }
            }
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// `log2` of the protected-space dimension, `N - d`.
    pub fn log2_degeneracy(&self) -> usize {
        self.n_qubits - self.rank()
    }

    /// Protected-space dimension `2^(N - d)`.
    pub fn degeneracy(&self) -> u128 {
        1u128 << self.log2_degeneracy()
    }

    /// One `x | z` row per generator.
    pub fn symplectic_matrix(&self) -> BitMatrix {
        let rows: Vec<BitVec> = self.generators.iter().map(PauliString::symplectic_row).collect();
        BitMatrix::from_rows(2 * self.n_qubits, &rows)
    }

    /// Writes `p` (ignoring its sign) as an ordered product of generators and
    /// returns that product, or `None` if `p` is outside the bit span.
    pub fn express(&self, p: &PauliString) -> Option<PauliString> {
        if self.generators.is_empty() {
            return p.is_identity().then(|| PauliString::identity(self.n_qubits));
        }
        let m = self.symplectic_matrix().transpose();
        let sol = gf2::solve_affine(&m, &p.symplectic_row())?;
        let mut acc = PauliString::identity(self.n_qubits);
        for i in sol.particular.ones() {
            acc = acc
                .mul(&self.generators[i])
                .expect("tableau generators commute");
        }
        Some(acc)
    }

    /// True iff `p`, with its sign, belongs to the stabilizer group.
    pub fn contains(&self, p: &PauliString) -> bool {
        self.express(p).is_some_and(|q| q == *p)
    }

    /// Hadamard conjugation on the listed qubit positions.
    pub fn conjugate_hadamard(&self, qubits: &[usize]) -> Result<Tableau> {
        if let Some(&q) = qubits.iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::Malformed(format!("qubit {q} out of range")));
        }
        Ok(Tableau {
            n_qubits: self.n_qubits,
            generators: self.generators.iter().map(|g| g.hadamard(qubits)).collect(),
        })
    }

    /// Conjugation by a Pauli string: generators anticommuting with `p`
    /// change sign.
    pub fn conjugate_by(&self, p: &PauliString) -> Tableau {
        Tableau {
            n_qubits: self.n_qubits,
            generators: self
                .generators
                .iter()
                .map(|g| if g.commutes_with(p) { g.clone() } else { g.negated() })
                .collect(),
        }
    }

    /// Appends generators, dropping those already in the group.
    pub fn extended(&self, extra: Vec<PauliString>) -> Result<Tableau> {
        let mut all = self.generators.clone();
        all.extend(extra);
        Tableau::reduced(self.n_qubits, all)
    }
}

impl Tableau {
    /// Relabels qubits; `perm` must be a permutation of `0..n`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Tableau> {
        let mut seen = vec![false; self.n_qubits];
        if perm.len() != self.n_qubits || perm.iter().any(|&i| i >= self.n_qubits || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::Malformed("qubit map is not a permutation".into()));
        }
        Ok(Tableau {
            n_qubits: self.n_qubits,
            generators: self.generators.iter().map(|g| g.permuted(perm)).collect(),
        })
    }
}

/// Graph-state generators `X_v Z_{N(v)}`, one per vertex, in vertex order.
pub fn graph_stabilizer(g: &SimpleGraph) -> Tableau {
    let n = g.len();
    let generators = (0..n)
        .map(|v| {
            PauliString::from_parts(
                BitVec::from_indices(n, [v]),
                g.adjacency().row(v),
                false,
            )
        })
        .collect();
    Tableau {
        n_qubits: n,
        generators,
    }
}

/// True iff both tableaux generate the same signed group.
pub fn span_equal(a: &Tableau, b: &Tableau) -> bool {
    assert_eq!(a.n_qubits, b.n_qubits, "qubit counts differ");
    if !gf2::row_space_equal(&a.symplectic_matrix(), &b.symplectic_matrix()) {
        return false;
    }
    a.generators.iter().all(|g| b.contains(g)) && b.generators.iter().all(|g| a.contains(g))
}
