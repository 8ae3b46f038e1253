use std::collections::{BTreeSet, HashSet, VecDeque};

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_lc::exec::Exec;
use toric_lc::graph::SimpleGraph;
use toric_lc::lc::{canonical_key, lc_equivalent, lc_orbit, verify_witness, OrbitOptions};

/// Adjacency rows as bitmasks, vertex `i` labeled `i`.
type Rows = Vec<u16>;

fn rows_of(g: &SimpleGraph) -> Rows {
    (0..g.len())
        .map(|i| g.neighbors_idx(i).iter().fold(0u16, |r, &j| r | 1 << j))
        .collect()
}

fn graph_of(rows: &Rows) -> SimpleGraph {
    let n = rows.len();
    let mut edges = Vec::new();
    for (i, &row) in rows.iter().enumerate() {
        for j in i + 1..n {
            if row >> j & 1 == 1 {
                edges.push((i as u32, j as u32));
            }
        }
    }
    SimpleGraph::from_edges((0..n as u32).collect(), &edges).unwrap()
}

fn naive_lc(rows: &Rows, v: usize) -> Rows {
    let nb: Vec<usize> = (0..rows.len()).filter(|&j| rows[v] >> j & 1 == 1).collect();
    let mut out = rows.clone();
    for &i in &nb {
        for &j in &nb {
            if i != j {
                out[i] ^= 1 << j;
            }
        }
    }
    out
}

fn naive_orbit(seed: &Rows) -> HashSet<Rows> {
    let mut seen = HashSet::from([seed.clone()]);
    let mut queue = VecDeque::from([seed.clone()]);
    while let Some(g) = queue.pop_front() {
        for v in 0..g.len() {
            let h = naive_lc(&g, v);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    seen
}

fn all_graphs(n: usize) -> Vec<Rows> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    (0u32..1 << pairs.len())
        .map(|mask| {
            let mut rows = vec![0u16; n];
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    rows[i] |= 1 << j;
                    rows[j] |= 1 << i;
                }
            }
            rows
        })
        .collect()
}

fn random_rows(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Rows {
    let mut rows = vec![0u16; n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
        }
    }
    rows
}

fn rows_strategy(max_n: usize) -> impl Strategy<Value = Rows> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut rows = vec![0u16; n];
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        rows[i] |= 1 << j;
                        rows[j] |= 1 << i;
                    }
                    k += 1;
                }
            }
            rows
        })
    })
}

/// Brute force over all diagonal `A, B, C, D` with `ad + bc = 1` per vertex,
/// testing `G B H + D H + G A + C = 0` entry by entry.
fn brute_bouchet(g: &Rows, h: &Rows) -> bool {
    let n = g.len();
    let choices: Vec<[u8; 4]> = (0u8..16)
        .map(|m| [m & 1, m >> 1 & 1, m >> 2 & 1, m >> 3 & 1])
        .filter(|[a, b, c, d]| (a & d) ^ (b & c) == 1)
        .collect();
    let e = |m: &Rows, i: usize, j: usize| (m[i] >> j & 1) as u8;
    let mut idx = vec![0usize; n];
    loop {
        let w: Vec<[u8; 4]> = idx.iter().map(|&k| choices[k]).collect();
        let ok = (0..n).all(|i| {
            (0..n).all(|j| {
                let gbh = (0..n).fold(0, |s, k| s ^ (e(g, i, k) & w[k][1] & e(h, k, j)));
                let dh = w[i][3] & e(h, i, j);
                let ga = e(g, i, j) & w[j][0];
                let c = if i == j { w[i][2] } else { 0 };
                gbh ^ dh ^ ga ^ c == 0
            })
        });
        if ok {
            return true;
        }
        let mut k = 0;
        loop {
            if k == n {
                return false;
            }
            idx[k] += 1;
            if idx[k] < choices.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Graph state amplitudes `(-1)^{|E[x]|} / sqrt(2^n)`, qubit 0 most significant.
fn oracle_state(rows: &Rows) -> Vec<Complex64> {
    let n = rows.len();
    let amp = 1.0 / ((1u64 << n) as f64).sqrt();
    (0usize..1 << n)
        .map(|k| {
            let x: u16 = (0..n).fold(0, |m, q| m | (((k >> (n - 1 - q)) & 1) as u16) << q);
            let edges: u32 = (0..n).filter(|&i| x >> i & 1 == 1).map(|i| (rows[i] & x).count_ones()).sum();
            Complex64::new(if (edges / 2).is_multiple_of(2) { amp } else { -amp }, 0.0)
        })
        .collect()
}

fn apply_1q(state: &mut [Complex64], n: usize, q: usize, u: [[Complex64; 2]; 2]) {
    let bit = 1 << (n - 1 - q);
    for k in 0..state.len() {
        if k & bit == 0 {
            let (a0, a1) = (state[k], state[k | bit]);
            state[k] = u[0][0] * a0 + u[0][1] * a1;
            state[k | bit] = u[1][0] * a0 + u[1][1] * a1;
        }
    }
}

/// `|<a|b>|`, equal to 1 iff the states agree up to a global phase.
fn overlap(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm()
}

#[test]
fn graph_state_matches_oracle_amplitudes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let n = rng.gen_range(1..=8);
        let rows = random_rows(&mut rng, n, 0.5);
        let v = toric_lc::state::graph_state_vector(&graph_of(&rows)).unwrap();
        let expected = oracle_state(&rows);
        let err = v
            .amplitudes()
            .iter()
            .zip(&expected)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-12, "n={n} err={err}");
    }
}

#[test]
fn local_complement_is_local_clifford_on_states() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    // exp(-i pi/4 X) and exp(i pi/4 Z).
    let sqrt_x = [[one * s, -i * s], [-i * s, one * s]];
    let sqrt_z = [[(one + i) * s, zero], [zero, (one - i) * s]];
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..60 {
        let n = rng.gen_range(2..=8);
        let rows = random_rows(&mut rng, n, 0.5);
        let v = rng.gen_range(0..n);
        let g = graph_of(&rows);
        let tau = g.local_complement(v as u32).unwrap();
        assert_eq!(rows_of(&tau), naive_lc(&rows, v));
        let mut state = oracle_state(&rows);
        apply_1q(&mut state, n, v, sqrt_x);
        for w in (0..n).filter(|&w| rows[v] >> w & 1 == 1) {
            apply_1q(&mut state, n, w, sqrt_z);
        }
        let target = oracle_state(&rows_of(&tau));
        assert!((overlap(&state, &target) - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn orbit_matches_naive_bfs() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for round in 0..40 {
        let n = rng.gen_range(2..=7);
        let rows = random_rows(&mut rng, n, 0.4);
        let expected = naive_orbit(&rows);
        let exec = if round % 2 == 0 { Exec::Sequential } else { Exec::Parallel };
        let opts = OrbitOptions { exec, ..OrbitOptions::default() };
        let orbit = lc_orbit(&graph_of(&rows), &opts).unwrap();
        assert_eq!(orbit.len(), expected.len());
        let got: HashSet<Rows> = orbit.graphs().map(|g| rows_of(&g)).collect();
        assert_eq!(got, expected);
    }
}

#[test]
fn orbit_paths_replay_to_members() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let n = rng.gen_range(3..=7);
        let rows = random_rows(&mut rng, n, 0.5);
        let opts = OrbitOptions { track_paths: true, ..OrbitOptions::default() };
        let orbit = lc_orbit(&graph_of(&rows), &opts).unwrap();
        for key in orbit.sorted_keys() {
            let path = orbit.path_to(&key).unwrap();
            let replay = path.iter().fold(rows.clone(), |g, &v| naive_lc(&g, v as usize));
            assert_eq!(replay, rows_of(&orbit.graph(&key)));
            // Closure: every neighbour of a member is a member.
            for v in 0..n {
                let h = graph_of(&naive_lc(&replay, v));
                assert!(orbit.contains(&canonical_key(&h).unwrap()));
            }
        }
    }
}

#[test]
fn bouchet_matches_brute_force_and_orbits() {
    for n in 1..=4 {
        let graphs = all_graphs(n);
        let classes: Vec<BTreeSet<Rows>> = graphs.iter().map(|g| naive_orbit(g).into_iter().collect()).collect();
        for (gi, g) in graphs.iter().enumerate() {
            for h in &graphs {
                let in_orbit = classes[gi].contains(h);
                assert_eq!(brute_bouchet(g, h), in_orbit, "oracle disagreement {g:?} {h:?}");
                let (sg, sh) = (graph_of(g), graph_of(h));
                let w = lc_equivalent(&sg, &sh).unwrap();
                assert_eq!(w.is_some(), in_orbit, "{g:?} {h:?}");
                if let Some(w) = w {
                    assert!(verify_witness(&sg, &sh, &w).unwrap());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn local_complement_is_an_involution(rows in rows_strategy(10), v in 0usize..10) {
        let v = v % rows.len();
        let g = graph_of(&rows);
        let back = g.local_complement(v as u32).unwrap().local_complement(v as u32).unwrap();
        prop_assert!(back.labeled_eq(&g));
    }

    #[test]
    fn witness_for_random_sequences(rows in rows_strategy(12), seq in proptest::collection::vec(0usize..12, 0..12)) {
        let n = rows.len();
        let h = seq.iter().fold(rows.clone(), |g, &v| naive_lc(&g, v % n));
        let (sg, sh) = (graph_of(&rows), graph_of(&h));
        let w = lc_equivalent(&sg, &sh).unwrap().expect("related by construction");
        prop_assert!(verify_witness(&sg, &sh, &w).unwrap());
        let w = lc_equivalent(&sh, &sg).unwrap().expect("symmetric");
        prop_assert!(verify_witness(&sh, &sg, &w).unwrap());
    }

    #[test]
    fn edge_flip_breaks_small_orbits(rows in rows_strategy(6), i in 0usize..6, j in 0usize..6) {
        let n = rows.len();
        let (i, j) = (i % n, j % n);
        prop_assume!(i != j);
        let mut h = rows.clone();
        h[i] ^= 1 << j;
        h[j] ^= 1 << i;
        let expected = naive_orbit(&rows).contains(&h);
        prop_assert_eq!(lc_equivalent(&graph_of(&rows), &graph_of(&h)).unwrap().is_some(), expected);
    }
}
