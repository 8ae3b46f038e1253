use proptest::prelude::*;

use toric_lc::gf2::{nullspace_words, rank, row_space_equal, solve_affine, BitMatrix, BitVec};

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), c), r).prop_map(move |rows| {
            let rows: Vec<BitVec> = rows.iter().map(|b| BitVec::from_bools(b)).collect();
            BitMatrix::from_rows(c, &rows)
        })
    })
}

/// Rank by brute force: the size of the span is `2^rank`.
fn span_size(m: &BitMatrix) -> usize {
    let mut span = std::collections::HashSet::new();
    span.insert(vec![false; m.cols()]);
    for r in 0..m.rows() {
        let row: Vec<bool> = (0..m.cols()).map(|c| m.get(r, c)).collect();
        let next: Vec<Vec<bool>> = span
            .iter()
            .map(|v| v.iter().zip(&row).map(|(a, b)| a ^ b).collect())
            .collect();
        span.extend(next);
    }
    span.len()
}

proptest! {
    #[test]
    fn rank_equals_transpose_rank(m in matrix(16, 16)) {
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
        prop_assert!(rank(&m) <= m.rows().min(m.cols()));
    }

    #[test]
    fn rank_matches_span_size(m in matrix(8, 10)) {
        prop_assert_eq!(1usize << rank(&m), span_size(&m));
    }

    #[test]
    fn affine_solutions_solve(m in matrix(10, 12), ybits in proptest::collection::vec(any::<bool>(), 10)) {
        let y = BitVec::from_bools(&ybits[..m.rows()]);
        match solve_affine(&m, &y) {
            Some(sol) => {
                prop_assert!(sol.nullspace_basis.len() <= 12);
                for combo in 0u32..1 << sol.nullspace_basis.len() {
                    let mut x = sol.particular.clone();
                    for (k, b) in sol.nullspace_basis.iter().enumerate() {
                        if combo >> k & 1 == 1 {
                            x.xor_assign(b);
                        }
                    }
                    prop_assert_eq!(m.mul_vec(&x), y.clone());
                }
                prop_assert_eq!(sol.nullspace_basis.len(), m.cols() - rank(&m));
            }
            None => {
                // Inconsistent iff appending y as a column raises the rank.
                let mut aug = BitMatrix::zeros(m.rows(), m.cols() + 1);
                for r in 0..m.rows() {
                    for c in m.row(r).ones() {
                        aug.set(r, c, true);
                    }
                    aug.set(r, m.cols(), y.get(r));
                }
                prop_assert_eq!(rank(&aug), rank(&m) + 1);
            }
        }
    }

    #[test]
    fn word_kernel_matches_solver(m in matrix(20, 40)) {
        let mut rows: Vec<u64> = (0..m.rows())
            .map(|r| m.row(r).ones().fold(0u64, |w, c| w | 1 << c))
            .collect();
        let mut basis = Vec::new();
        nullspace_words(&mut rows, m.cols(), &mut basis);
        let sol = solve_affine(&m, &BitVec::zeros(m.rows())).unwrap();
        let expected: Vec<u64> = sol
            .nullspace_basis
            .iter()
            .map(|v| v.ones().fold(0u64, |w, c| w | 1 << c))
            .collect();
        prop_assert_eq!(basis, expected);
    }

    #[test]
    fn row_space_equal_is_an_equivalence(a in matrix(6, 8), b in matrix(6, 8), c in matrix(6, 8)) {
        let fit = |m: &BitMatrix| {
            let rows: Vec<BitVec> = (0..m.rows())
                .map(|r| BitVec::from_indices(8, m.row(r).ones()))
                .collect();
            BitMatrix::from_rows(8, &rows)
        };
        let (a, b, c) = (fit(&a), fit(&b), fit(&c));
        prop_assert!(row_space_equal(&a, &a));
        prop_assert_eq!(row_space_equal(&a, &b), row_space_equal(&b, &a));
        if row_space_equal(&a, &b) && row_space_equal(&b, &c) {
            prop_assert!(row_space_equal(&a, &c));
        }
        // Adding a combination of rows never changes the space.
        let mut rows = a.row_vecs();
        let mut extra = rows[0].clone();
        if rows.len() > 1 {
            extra.xor_assign(&rows[1]);
        }
        rows.push(extra);
        prop_assert!(row_space_equal(&a, &BitMatrix::from_rows(8, &rows)));
    }
}
