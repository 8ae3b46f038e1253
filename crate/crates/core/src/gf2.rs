//! Dense linear algebra over the two-element field.
//!
//! Rows are packed into `u64` words, bit `j` of a row living in word `j / 64`
//! at position `j % 64`. Elimination always picks the leftmost (lowest column)
//! pivot, so echelon forms and nullspace bases are reproducible.

use std::fmt;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    /// Parses a string of `0`/`1` characters; bit 0 is the first character.
    pub fn from_bit_str(s: &str) -> Self {
        let bits: Vec<bool> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => false,
                '1' => true,
                other => panic!("invalid bit character {other:?}"),
            })
            .collect();
        Self::from_bools(&bits)
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len, "length mismatch");
        BitVec {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    /// Parity of the bitwise AND, i.e. the dot product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_words(words: Vec<u64>, len: usize) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        Self { words, len }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec(")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// Dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from row vectors of equal length.
    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    /// Parses rows written as `0`/`1` strings, e.g. `["110", "011"]`.
    pub fn from_bit_strs(rows: &[&str]) -> Self {
        let vecs: Vec<BitVec> = rows.iter().map(|s| BitVec::from_bit_str(s)).collect();
        let cols = vecs.first().map_or(0, BitVec::len);
        Self::from_rows(cols, &vecs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        (self.data[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        let w = &mut self.data[r * self.stride + c / 64];
        let mask = 1u64 << (c % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.row_words(r).to_vec(), self.cols)
    }

    pub fn row_vecs(&self) -> Vec<BitVec> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    /// `row[dst] ^= row[src]`.
    fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..src * s + s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..dst * s + s])
        };
        // `a` is the source row, `b` the destination.
        for (d, w) in b.iter_mut().zip(a) {
            *d ^= *w;
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(i * self.stride + w, j * self.stride + w);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in self.row(r).ones() {
                for w in 0..out.stride {
                    out.data[r * out.stride + w] ^= other.data[k * other.stride + w];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        out
    }

    pub fn mul_vec(&self, x: &BitVec) -> BitVec {
        assert_eq!(self.cols, x.len(), "dimension mismatch in product");
        let mut y = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(x.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if parity & 1 == 1 {
                y.set(r, true);
            }
        }
        y
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    /// Reduced row echelon form in place; returns the pivot column of each
    /// nonzero row, in order.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(next, p);
            for r in 0..self.rows {
                if r != next && self.get(r, c) {
                    self.xor_row_into(next, r);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        Ok(())
    }
}

/// Dimension of the row space.
pub fn rank(m: &BitMatrix) -> usize {
    m.rref().1.len()
}

/// Solution set of `M x = y` as a particular solution plus a nullspace basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: BitVec,
    /// Basis of `{x : M x = 0}`, one vector per free column in ascending order.
    pub nullspace_basis: Vec<BitVec>,
}

/// Solves `M x = y`, returning `None` when the system is inconsistent.
pub fn solve_affine(m: &BitMatrix, y: &BitVec) -> Option<AffineSolution> {
    assert_eq!(y.len(), m.rows(), "right-hand side length must equal row count");
    let n = m.cols();
    let mut aug = BitMatrix::zeros(m.rows(), n + 1);
    for r in 0..m.rows() {
        for c in m.row(r).ones() {
            aug.set(r, c, true);
        }
        if y.get(r) {
            aug.set(r, n, true);
        }
    }
    let pivots = aug.rref_in_place();
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut particular = BitVec::zeros(n);
    for (r, &c) in pivots.iter().enumerate() {
        if aug.get(r, n) {
            particular.set(c, true);
        }
    }
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let nullspace_basis = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitVec::zeros(n);
            v.set(f, true);
            for (r, &c) in pivots.iter().enumerate() {
                if aug.get(r, f) {
                    v.set(c, true);
                }
            }
            v
        })
        .collect();
    Some(AffineSolution {
        particular,
        nullspace_basis,
    })
}

/// True iff the two matrices span the same row space.
pub fn row_space_equal(a: &BitMatrix, b: &BitMatrix) -> bool {
    assert_eq!(a.cols(), b.cols(), "column counts differ");
    let (ra, pa) = a.rref();
    let (rb, pb) = b.rref();
    // Reduced echelon form is unique for a given row space.
    pa == pb && (0..pa.len()).all(|r| ra.row_words(r) == rb.row_words(r))
}

/// True iff `v` lies in the row space of `m`.
pub fn in_row_space(m: &BitMatrix, v: &BitVec) -> bool {
    solve_affine(&m.transpose(), v).is_some()
}

/// Homogeneous nullspace for systems with at most 64 unknowns, one `u64` per
/// equation (bit `c` is unknown `c`). `rows` is reduced in place; the basis is
/// appended to `basis` in ascending free-column order.
pub fn nullspace_words(rows: &mut [u64], ncols: usize, basis: &mut Vec<u64>) {
    assert!(ncols <= 64, "word kernel supports at most 64 unknowns");
    let mut pivot_cols = [0u8; 64];
    let mut npiv = 0usize;
    let mut pivot_mask = 0u64;
    for c in 0..ncols {
        if npiv == rows.len() {
            break;
        }
        let Some(p) = rows[npiv..].iter().position(|r| r >> c & 1 == 1) else {
            continue;
        };
        rows.swap(npiv, npiv + p);
        let pr = rows[npiv];
        for row in rows.iter_mut() {
            *row ^= pr & (*row >> c & 1).wrapping_neg();
        }
        rows[npiv] = pr;
        pivot_cols[npiv] = c as u8;
        pivot_mask |= 1 << c;
        npiv += 1;
    }
    for f in 0..ncols {
        if pivot_mask >> f & 1 == 1 {
            continue;
        }
        let mut v = 1u64 << f;
        for (r, &pc) in rows.iter().zip(&pivot_cols[..npiv]) {
            v |= (r >> f & 1) << pc;
        }
        basis.push(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&BitMatrix::identity(3)), 3);
        assert_eq!(rank(&BitMatrix::zeros(2, 4)), 0);
        assert_eq!(rank(&BitMatrix::from_bit_strs(&["110", "011", "101"])), 2);
    }

    #[test]
    fn solve_identity() {
        let s = solve_affine(&BitMatrix::identity(3), &BitVec::from_bit_str("101")).unwrap();
        assert_eq!(s.particular, BitVec::from_bit_str("101"));
        assert!(s.nullspace_basis.is_empty());
    }

    #[test]
    fn solve_inconsistent() {
        let m = BitMatrix::zeros(1, 1);
        assert!(solve_affine(&m, &BitVec::from_bit_str("1")).is_none());
    }

    #[test]
    fn solve_underdetermined() {
        let m = BitMatrix::from_bit_strs(&["11"]);
        let s = solve_affine(&m, &BitVec::from_bit_str("0")).unwrap();
        assert_eq!(s.particular, BitVec::from_bit_str("00"));
        assert_eq!(s.nullspace_basis, vec![BitVec::from_bit_str("11")]);
    }

    #[test]
    fn row_space_examples() {
        let m = BitMatrix::from_bit_strs(&["110", "011", "001"]);
        let p = BitMatrix::from_bit_strs(&["001", "110", "011"]);
        assert!(row_space_equal(&m, &p));
        assert!(!row_space_equal(
            &BitMatrix::from_bit_strs(&["10"]),
            &BitMatrix::from_bit_strs(&["11"])
        ));
        assert!(row_space_equal(
            &BitMatrix::from_bit_strs(&["110", "011"]),
            &BitMatrix::from_bit_strs(&["101", "011"])
        ));
    }

    #[test]
    fn word_kernel_matches_general_solver() {
        // x0 + x2 = 0, x1 + x2 + x3 = 0
        let mut rows = [0b0101u64, 0b1110];
        let mut basis = Vec::new();
        nullspace_words(&mut rows, 4, &mut basis);
        let m = BitMatrix::from_bit_strs(&["1010", "0111"]);
        let s = solve_affine(&m, &BitVec::zeros(2)).unwrap();
        let general: Vec<u64> = s
            .nullspace_basis
            .iter()
            .map(|v| v.words()[0])
            .collect();
        assert_eq!(basis, general);
    }

    #[test]
    fn mul_and_transpose() {
        let a = BitMatrix::from_bit_strs(&["110", "011"]);
        let at = a.transpose();
        assert_eq!(at, BitMatrix::from_bit_strs(&["10", "11", "01"]));
        let p = a.mul(&at);
        // [[0,1],[1,0]] over GF(2)
        assert_eq!(p, BitMatrix::from_bit_strs(&["01", "10"]));
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let mut m = BitMatrix::zeros(3, 130);
        m.set(0, 0, true);
        m.set(0, 129, true);
        m.set(1, 64, true);
        m.set(1, 129, true);
        m.set(2, 0, true);
        m.set(2, 64, true);
        assert_eq!(rank(&m), 2);
    }
}
