//! Dense state vectors for small qubit counts, used as an independent check
//! on the stabilizer arithmetic.
//!
//! Qubit `q` of an `n`-qubit register is bit `n - 1 - q` of the basis index,
//! so basis states read left to right as `q0 q1 ...`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::pauli::{PauliString, Tableau};

pub const MAX_STATE_QUBITS: usize = 14;

/// Per-amplitude tolerance for stabilization checks.
pub const STABILIZED_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n_qubits > MAX_STATE_QUBITS {
            return Err(Error::TooManyQubits(n_qubits));
        }
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::Malformed("amplitude count must be 2^n".into()));
        }
        let v = Self {
            n_qubits,
            amplitudes,
        };
        if (v.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Malformed(format!("state norm {} is not 1", v.norm())));
        }
        Ok(v)
    }

    /// Computational basis state given as a bit string, e.g. `"01"`.
    pub fn basis(bits: &str) -> Result<Self> {
        let n = bits.len();
        if n > MAX_STATE_QUBITS {
            return Err(Error::TooManyQubits(n));
        }
        let idx = usize::from_str_radix(bits, 2)
            .map_err(|_| Error::Malformed(format!("bad basis label {bits:?}")))?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[idx] = Complex64::new(1.0, 0.0);
        Self::new(n, amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    #[inline]
    fn bit_of(&self, q: usize) -> usize {
        1 << (self.n_qubits - 1 - q)
    }

    fn mask(&self, bits: &crate::gf2::BitVec) -> usize {
        bits.ones().fold(0, |m, q| m | self.bit_of(q))
    }

    /// `P |v>` computed index by index, without building a matrix.
    pub fn apply_pauli(&self, p: &PauliString) -> StateVector {
        assert_eq!(p.len(), self.n_qubits, "qubit count mismatch");
        let xmask = self.mask(p.x_bits());
        let zmask = self.mask(p.z_bits());
        let ys = p.x_bits().and(p.z_bits()).count_ones();
        // Y = i X Z, so each Y contributes a factor i on top of the Z sign.
        let mut base = match ys % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        if p.is_negative() {
            base = -base;
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (k, &a) in self.amplitudes.iter().enumerate() {
            let phase = if (k & zmask).count_ones() % 2 == 1 { -base } else { base };
            out[k ^ xmask] = phase * a;
        }
        StateVector {
            n_qubits: self.n_qubits,
            amplitudes: out,
        }
    }

    pub fn apply_hadamard(&self, q: usize) -> StateVector {
        let bit = self.bit_of(q);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut out = self.amplitudes.clone();
        for k in 0..self.amplitudes.len() {
            if k & bit == 0 {
                let a0 = self.amplitudes[k];
                let a1 = self.amplitudes[k | bit];
                out[k] = (a0 + a1) * s;
                out[k | bit] = (a0 - a1) * s;
            }
        }
        StateVector {
            n_qubits: self.n_qubits,
            amplitudes: out,
        }
    }

    pub fn apply_hadamards(&self, qubits: &[usize]) -> StateVector {
        qubits.iter().fold(self.clone(), |v, &q| v.apply_hadamard(q))
    }

    /// Largest per-amplitude deviation from `other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `prod_{ab in E} CZ_ab |+>^n`.
pub fn graph_state_vector(g: &SimpleGraph) -> Result<StateVector> {
    let n = g.len();
    if n > MAX_STATE_QUBITS {
        return Err(Error::TooManyQubits(n));
    }
    let amp = (1.0 / (1u64 << n) as f64).sqrt();
    let mut amps = vec![Complex64::new(amp, 0.0); 1 << n];
    let bit = |q: usize| 1usize << (n - 1 - q);
    for (a, b) in g.edge_indices() {
        let m = bit(a) | bit(b);
        for (k, x) in amps.iter_mut().enumerate() {
            if k & m == m {
                *x = -*x;
            }
        }
    }
    StateVector::new(n, amps)
}

/// Largest per-amplitude deviation `max_g |g v - v|` over the generators.
pub fn stabilizer_residual(v: &StateVector, t: &Tableau) -> f64 {
    assert_eq!(v.n_qubits(), t.n_qubits(), "qubit count mismatch");
    t.generators()
        .iter()
        .map(|g| v.apply_pauli(g).max_abs_diff(v))
        .fold(0.0, f64::max)
}

pub fn is_stabilized(v: &StateVector, t: &Tableau) -> bool {
    stabilizer_residual(v, t) <= STABILIZED_TOL
}
