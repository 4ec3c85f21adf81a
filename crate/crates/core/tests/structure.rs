//! Exhaustive and randomized invariants of the GF(2), graph, quantum,
//! matrix-test and cluster layers.

use entloc::cluster::{dejong_extractable, islands, matrix_test_line};
use entloc::gf2::{gf2_rank, gf2_solve, Gf2Matrix, Gf2Vector};
use entloc::graphs::{parse_graph6, to_graph6, Bipartition, EnsembleSpec, Graph};
use entloc::graphtest::ps_montecarlo;
use entloc::quantum::{
    build_graph_state, fidelity, n_tangle, partial_trace, trace_ratio, DensityMatrix, StateVector, C64,
};
use entloc::rng::task_rng;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

fn random_matrix<R: Rng>(rows: usize, cols: usize, density: f64, rng: &mut R) -> Gf2Matrix {
    let mut m = Gf2Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.random_bool(density));
        }
    }
    m
}

/// Rank by plain Gaussian elimination on a `Vec<Vec<u8>>`.
fn naive_rank(m: &Gf2Matrix) -> usize {
    let mut a: Vec<Vec<u8>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| u8::from(m.get(i, j))).collect())
        .collect();
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(p) = (rank..a.len()).find(|&r| a[r][col] == 1) else {
            continue;
        };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank && a[r][col] == 1 {
                let pivot = a[rank].clone();
                for (x, y) in a[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn rank_matches_naive_elimination() {
    for i in 0..500 {
        let mut rng = task_rng(20, i);
        let density = rng.random_range(0.1..0.9);
        let m = random_matrix(8, 8, density, &mut rng);
        assert_eq!(gf2_rank(&m), naive_rank(&m));
    }
}

#[test]
fn solvability_is_rank_consistency_up_to_64() {
    for i in 0..300 {
        let mut rng = task_rng(21, i);
        let rows = rng.random_range(1..=64);
        let cols = rng.random_range(1..=64);
        let m = random_matrix(rows, cols, rng.random_range(0.05..0.6), &mut rng);
        let d = Gf2Vector::from_bits(&(0..rows).map(|_| rng.random_bool(0.5)).collect::<Vec<_>>());
        let consistent = gf2_rank(&m) == gf2_rank(&m.augment(&d).unwrap());
        match gf2_solve(&m, &d).unwrap() {
            Some(x) => {
                assert!(consistent);
                assert_eq!(m.mul_vec(&x).unwrap(), d);
            }
            None => assert!(!consistent),
        }
    }
}

#[test]
fn graph6_round_trips_every_graph_up_to_seven() {
    for n in 0..=7usize {
        for bits in 0..1u64 << (n * n.saturating_sub(1) / 2) {
            let g = Graph::from_upper_bits(n, bits);
            assert_eq!(parse_graph6(&to_graph6(&g)).unwrap(), g);
        }
    }
}

#[test]
fn graph_state_marginals_have_binary_trace_ratio() {
    for n in 2..=6usize {
        let bps: Vec<Bipartition> = (0..1u64 << n)
            .map(|m| Bipartition::new(n, m).unwrap())
            .filter(|bp| bp.n_b() >= 2 && bp.n_b() % 2 == 0)
            .collect();
        for bits in 0..1u64 << (n * (n - 1) / 2) {
            let psi = build_graph_state(&Graph::from_upper_bits(n, bits)).unwrap();
            for bp in &bps {
                let r = trace_ratio(&partial_trace(&psi, bp).unwrap());
                assert!(
                    r.abs() < 1e-9 || (r - 1.0).abs() < 1e-9,
                    "n={n} graph {bits} mask {}: {r}",
                    bp.a_mask()
                );
            }
        }
    }
}

fn random_density(n_qubits: usize, seed: u64) -> DensityMatrix {
    let mut rng = task_rng(22, seed);
    let d = 1 << n_qubits;
    let rank = rng.random_range(1..=d);
    let g = DMatrix::from_fn(d, rank, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::new(n_qubits, m.map(|x| x / tr)).unwrap()
}

#[test]
fn fidelity_is_symmetric_on_random_mixed_states() {
    for i in 0..200 {
        let n = 1 + (i as usize % 4);
        let (rho, sigma) = (random_density(n, 2 * i), random_density(n, 2 * i + 1));
        let (a, b) = (fidelity(&rho, &sigma).unwrap(), fidelity(&sigma, &rho).unwrap());
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        assert!((0.0..=1.0).contains(&a));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tangle_ignores_global_phase(n in 1usize..=6, seed in any::<u64>(), theta in -10.0f64..10.0) {
        let mut rng = task_rng(seed, 0);
        let amp = (0..1usize << n).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let psi = StateVector::normalized(n, amp).unwrap();
        prop_assert!((n_tangle(&psi) - n_tangle(&psi.with_phase(theta))).abs() < 1e-12);
    }

    #[test]
    fn tangle_lies_in_unit_interval(n in 1usize..=6, seed in any::<u64>()) {
        let mut rng = task_rng(seed, 1);
        let amp = (0..1usize << n).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let t = n_tangle(&StateVector::normalized(n, amp).unwrap());
        prop_assert!((0.0..=1.0 + 1e-12).contains(&t));
    }
}

/// Maximal runs of set bits in `b_mask`, lowest vertex first.
fn runs(n: usize, b_mask: u64) -> Vec<usize> {
    let mut out = Vec::new();
    let mut len = 0;
    for v in 0..=n {
        if v < n && b_mask >> v & 1 == 1 {
            len += 1;
        } else if len > 0 {
            out.push(len);
            len = 0;
        }
    }
    out
}

#[test]
fn line_cluster_consistency_up_to_sixteen() {
    for n in 2..=16usize {
        let full = (1u64 << n) - 1;
        for a_mask in 1..full {
            let bp = Bipartition::new(n, a_mask).unwrap();
            if !bp.n_b().is_multiple_of(2) {
                continue;
            }
            let lengths = runs(n, bp.b_mask());
            assert_eq!(islands(&bp).lengths(), lengths);
            let passes = matrix_test_line(&bp).unwrap();
            if dejong_extractable(&bp) {
                assert!(passes, "n={n} a_mask={a_mask:b}: extractable but the test fails");
            }
            if lengths.iter().any(|&l| l >= 3) {
                assert!(!passes, "n={n} a_mask={a_mask:b}: long island passes");
            }
        }
    }
}

#[test]
fn montecarlo_is_nondecreasing_in_n_a() {
    let trials = 2000;
    let est: Vec<(f64, f64)> = [2, 4, 6, 8]
        .iter()
        .map(|&n_a| {
            let e = ps_montecarlo(&EnsembleSpec::uniform(10, n_a), trials, 31).unwrap();
            (e.estimate, e.std_error)
        })
        .collect();
    for w in est.windows(2) {
        let pooled = (w[0].1.powi(2) + w[1].1.powi(2)).sqrt();
        assert!(w[1].0 >= w[0].0 - 3.0 * pooled, "{est:?}");
    }
}

#[test]
fn montecarlo_is_bit_reproducible() {
    let spec = EnsembleSpec::uniform(14, 6);
    assert_eq!(
        ps_montecarlo(&spec, 500, 9).unwrap(),
        ps_montecarlo(&spec, 500, 9).unwrap()
    );
}
