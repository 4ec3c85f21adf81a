//! The GF(2) test for graph states and the probability that it succeeds.
//!
//! For a graph state `|G⟩` and a bipartition with `|B|` even, the EA is
//! either 0 or 1, and it is 1 exactly when `Γ_BA x = D` has a solution over
//! GF(2). Here `Γ_BA` is the `B × A` block of the adjacency matrix and `D`
//! marks the `B` vertices of even degree inside `B`. `p_s` is the
//! probability of success over a graph ensemble, which equals the ensemble
//! mean of the EA.

use std::fs::File;
use std::io::BufReader;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{capability, contract, Error, Result};
use crate::gf2::{gf2_solve, Gf2Vector};
use crate::graphs::{
    connected, gamma_and_d, make_family, read_graph6, sample_uniform, Bipartition, BipartitionMode, EnsembleKind,
    EnsembleSpec, Graph,
};
use crate::quantum::{build_graph_state, partial_trace, DensityMatrix, SpinFlip};
use crate::rng::task_rng;

/// Largest `n` for exhaustive enumeration over all labelled graphs.
pub const EXACT_MAX_VERTICES: usize = 6;

/// A solution `x ∈ F_2^A` of `Γ_BA x = D`, or `None` when there is none.
pub fn ea_graph_witness(g: &Graph, bp: &Bipartition) -> Result<Option<Gf2Vector>> {
    bp.require_even_b()?;
    let (gamma, d) = gamma_and_d(g, bp)?;
    gf2_solve(&gamma, &d)
}

/// `true` iff the graph state has EA 1 across `bp`.
pub fn ea_graph_test(g: &Graph, bp: &Bipartition) -> Result<bool> {
    Ok(ea_graph_witness(g, bp)?.is_some())
}

/// Exact `p_s` for the uniform ensemble, with `A` the first `n_a` vertices.
/// Relabelling vertices preserves the uniform measure, so any `A` of the
/// same size gives the same value.
pub fn ps_exact(n: usize, n_a: usize) -> Result<Ratio<u64>> {
    ps_exact_for(&Bipartition::leading(n, n_a)?)
}

/// Exact `p_s` over all `2^{n(n-1)/2}` graphs for a given bipartition.
pub fn ps_exact_for(bp: &Bipartition) -> Result<Ratio<u64>> {
    let n = bp.n();
    if n > EXACT_MAX_VERTICES {
        return Err(capability(format!(
            "exhaustive enumeration supports n <= {EXACT_MAX_VERTICES}, got {n}"
        )));
    }
    bp.require_even_b()?;
    if bp.n_a() == 0 {
        return Err(contract("A must be nonempty"));
    }
    let pairs = n * (n - 1) / 2;
    let total = 1u64 << pairs;
    let hits = (0..total)
        .into_par_iter()
        .map(|bits| ea_graph_test(&Graph::from_upper_bits(n, bits), bp).map(u64::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(Ratio::new(hits, total))
}

/// A Monte Carlo estimate of `p_s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub estimate: f64,
    pub successes: u64,
    pub trials: u64,
    /// Plug-in binomial standard error `√(p̂(1−p̂)/trials)`.
    pub std_error: f64,
    pub seed: u64,
    pub ensemble: EnsembleSpec,
}

impl EstimateResult {
    fn new(successes: u64, trials: u64, seed: u64, ensemble: EnsembleSpec) -> Self {
        let p = successes as f64 / trials as f64;
        Self {
            estimate: p,
            successes,
            trials,
            std_error: (p * (1.0 - p) / trials as f64).sqrt(),
            seed,
            ensemble,
        }
    }
}

/// Estimates `p_s` from `trials` draws. Trial `t` uses RNG stream `t` of
/// `seed`, so the result is identical for any thread count.
///
/// * `Uniform`: each edge present with probability 1/2, `A` a uniformly
///   random `n_a`-subset.
/// * `Family`: a family instance with a uniformly random `n_a`-subset.
/// * `IsomorphismClass`: the first `trials` graphs of the graph6 source
///   (after the optional connectivity filter), each with one random
///   bipartition. A source with fewer usable graphs is an input error.
pub fn ps_montecarlo(spec: &EnsembleSpec, trials: u64, seed: u64) -> Result<EstimateResult> {
    spec.validate()?;
    if trials == 0 {
        return Err(contract("need at least one trial"));
    }
    let n = spec.n;
    let successes = match &spec.kind {
        EnsembleKind::Uniform => count(trials, |t| {
            let mut rng = task_rng(seed, t);
            let g = sample_uniform(n, &mut rng)?;
            let bp = Bipartition::random_fixed(n, spec.n_a, &mut rng)?;
            ea_graph_test(&g, &bp)
        })?,
        EnsembleKind::Family { family } => count(trials, |t| {
            let mut rng = task_rng(seed, t);
            let g = make_family(*family, n, &mut rng)?;
            let bp = Bipartition::random_fixed(n, spec.n_a, &mut rng)?;
            ea_graph_test(&g, &bp)
        })?,
        EnsembleKind::IsomorphismClass {
            source,
            mode,
            connected_only,
        } => {
            let file =
                File::open(source).map_err(|e| Error::Input(format!("cannot open {}: {e}", source.display())))?;
            let mut graphs = Vec::with_capacity(trials as usize);
            for record in read_graph6(BufReader::new(file)) {
                let g = record?;
                if g.n() != n {
                    return Err(Error::Input(format!(
                        "graph with {} vertices in a list for n = {n}",
                        g.n()
                    )));
                }
                if *connected_only && !connected(&g) {
                    continue;
                }
                graphs.push(g);
                if graphs.len() as u64 == trials {
                    break;
                }
            }
            if (graphs.len() as u64) < trials {
                return Err(Error::Input(format!(
                    "{} holds only {} usable graphs, {trials} requested",
                    source.display(),
                    graphs.len()
                )));
            }
            let mode = *mode;
            count(trials, |t| {
                let mut rng = task_rng(seed, t);
                let bp = match mode {
                    BipartitionMode::FixedSize => Bipartition::random_fixed(n, spec.n_a, &mut rng)?,
                    BipartitionMode::AnyEvenTarget => Bipartition::random_even_target(n, &mut rng)?,
                };
                ea_graph_test(&graphs[t as usize], &bp)
            })?
        }
    };
    Ok(EstimateResult::new(successes, trials, seed, spec.clone()))
}

fn count<F>(trials: u64, trial: F) -> Result<u64>
where
    F: Fn(u64) -> Result<bool> + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|t| trial(t).map(u64::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// `(d_A + 1)/(d_A + d_B − 1)`, the large-dimension value of `p_s` for the
/// uniform ensemble.
pub fn ps_approx(d_a: f64, d_b: f64) -> f64 {
    (d_a + 1.0) / (d_a + d_b - 1.0)
}

/// Lower and upper bounds on `p_s` for the uniform ensemble at slack `r`,
/// clamped to `[0, 1]`.
pub fn ps_bounds(d_a: f64, d_b: f64, r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0 && r < 1.0) {
        return Err(contract(format!("r must lie in (0, 1), got {r}")));
    }
    let s = d_a + d_b - 1.0;
    let eps1 = d_a * d_b * (d_a - 1.0) * (d_b - 1.0) / (r * r * (1.0 + r) * s.powi(3));
    let eps2 = (d_a - 1.0) * (d_b - 1.0) / (r * r * s.powi(3));
    let lower = (d_a + 1.0) / ((1.0 + r) * s) - eps1;
    let upper = (d_a + 1.0) / ((1.0 - r) * s) + eps2;
    Ok((lower.max(0.0), upper.min(1.0)))
}

/// Ensemble means of `Tr[G_B G̃_B]` and `Tr[G_B²]` over all graphs on `n`
/// vertices with `A` the first `n_a`, next to their closed forms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactExpectations {
    pub n: usize,
    pub n_a: usize,
    pub mean_flip_overlap: f64,
    pub expected_flip_overlap: f64,
    pub mean_purity: f64,
    pub expected_purity: f64,
}

impl ExactExpectations {
    pub fn max_deviation(&self) -> f64 {
        (self.mean_flip_overlap - self.expected_flip_overlap)
            .abs()
            .max((self.mean_purity - self.expected_purity).abs())
    }
}

/// Dense enumeration of [`ExactExpectations`]; `n <= 6`.
pub fn exact_expectations(n: usize, n_a: usize) -> Result<ExactExpectations> {
    if n > EXACT_MAX_VERTICES {
        return Err(capability(format!(
            "exhaustive enumeration supports n <= {EXACT_MAX_VERTICES}, got {n}"
        )));
    }
    let bp = Bipartition::leading(n, n_a)?;
    if n_a == 0 || n_a >= n {
        return Err(contract("need 0 < n_a < n"));
    }
    let total = 1u64 << (n * (n - 1) / 2);
    let (overlap, purity) = (0..total)
        .into_par_iter()
        .map(|bits| -> Result<(f64, f64)> {
            let g = Graph::from_upper_bits(n, bits);
            let rho: DensityMatrix = partial_trace(&build_graph_state(&g)?, &bp)?;
            Ok((rho.overlap(&rho.spin_flip()).re, rho.purity()))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (d_a, d_b) = ((1u64 << n_a) as f64, (1u64 << (n - n_a)) as f64);
    Ok(ExactExpectations {
        n,
        n_a,
        mean_flip_overlap: overlap / total as f64,
        expected_flip_overlap: (d_a + 1.0) / (d_a * d_b),
        mean_purity: purity / total as f64,
        expected_purity: (d_a + d_b - 1.0) / (d_a * d_b),
    })
}

/// Outcome of comparing the GF(2) test against the dense EA.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub n: usize,
    /// (graph, bipartition) pairs checked.
    pub cases: u64,
    /// Pairs where the test and the rounded dense EA disagree, or where the
    /// dense EA is farther than `1e-9` from both 0 and 1.
    pub mismatches: u64,
    /// Largest distance of a dense EA value from `{0, 1}`.
    pub max_distance_from_binary: f64,
}

/// Runs [`ea_graph_test`] and the dense [`ea`](crate::localization::ea) on
/// every labelled graph on `n <= 6` vertices and every bipartition with
/// `|B|` even and nonzero (`A` may be empty).
pub fn oracle_sweep(n: usize) -> Result<OracleReport> {
    if n > EXACT_MAX_VERTICES {
        return Err(capability(format!(
            "exhaustive enumeration supports n <= {EXACT_MAX_VERTICES}, got {n}"
        )));
    }
    let masks: Vec<Bipartition> = (0..1u64 << n)
        .map(|m| Bipartition::new(n, m))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|bp| bp.n_b() >= 2 && bp.n_b() % 2 == 0)
        .collect();
    let total = 1u64 << (n * n.saturating_sub(1) / 2);
    let per_graph = (0..total)
        .into_par_iter()
        .map(|bits| -> Result<(u64, u64, f64)> {
            let g = Graph::from_upper_bits(n, bits);
            let state = build_graph_state(&g)?;
            let mut bad = 0;
            let mut worst = 0.0f64;
            for bp in &masks {
                let fast = ea_graph_test(&g, bp)?;
                let dense = crate::localization::ea(&state, bp)?;
                let dist = dense.abs().min((dense - 1.0).abs());
                worst = worst.max(dist);
                if fast != (dense > 0.5) || dist > 1e-9 {
                    bad += 1;
                }
            }
            Ok((masks.len() as u64, bad, worst))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleReport {
        n,
        cases: per_graph.iter().map(|r| r.0).sum(),
        mismatches: per_graph.iter().map(|r| r.1).sum(),
        max_distance_from_binary: per_graph.iter().map(|r| r.2).fold(0.0, f64::max),
    })
}
