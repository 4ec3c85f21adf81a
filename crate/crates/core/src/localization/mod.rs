//! Entanglement of assistance, localizable entanglement and the pieces they
//! are built from.
//!
//! For a state `Ψ` on `A ∪ B`, measuring `A` in a basis `β = (φ_i)` leaves
//! `B` in the branch `M_i` with probability `p_i`. The average tangle
//! `τ̄_β(Ψ) = Σ_i p_i τ(M_i)` maximised over all bases is the EA, which has
//! the closed form `F(Ψ_B, Ψ̃_B)`; maximised over product bases it is the LE.
//! The LE has no closed form and is estimated from below by local search.

mod basis;
mod bounds;
mod optimize;
mod scan;

pub use basis::{basis_norm, element_state, projector_distance, Basis, GlobalBasis, ProductBasis, SingleQubitBasis};
pub use bounds::{concentration_rhs, k_constant, log_concentration_rhs, Regime};
pub use optimize::{nelder_mead, Minimum};
pub use scan::{haar_scan, HaarScanRow};

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{capability, contract, Result};
use crate::graphs::Bipartition;
use crate::quantum::{overlap_with_flip, partial_trace, StateVector, C64, STATE_MAX_QUBITS};
use crate::rng::task_rng;

/// Branch probabilities below this count as zero.
pub const ZERO_BRANCH: f64 = 1e-14;

/// A Haar-random pure state: normalized i.i.d. standard complex Gaussians.
pub fn haar_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<StateVector> {
    if n_qubits > STATE_MAX_QUBITS {
        return Err(capability(format!(
            "{n_qubits} qubits exceeds the {STATE_MAX_QUBITS}-qubit statevector cap"
        )));
    }
    let amp = (0..1usize << n_qubits)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    StateVector::normalized(n_qubits, amp)
}

/// `(p_v, M_v)` for the outcome `v` on `A`. The branch is `None` when
/// `p_v < 1e-14`.
pub fn post_measurement(psi: &StateVector, bp: &Bipartition, v: &StateVector) -> Result<(f64, Option<StateVector>)> {
    let branch = unnormalized_branch(psi, bp, v)?;
    let p: f64 = branch.iter().map(|x| x.norm_sqr()).sum();
    if p < ZERO_BRANCH {
        return Ok((p, None));
    }
    let state = StateVector::normalized(bp.n_b(), branch)?;
    Ok((p, Some(state)))
}

/// `(⟨v|_A ⊗ I_B)|Ψ⟩`.
fn unnormalized_branch(psi: &StateVector, bp: &Bipartition, v: &StateVector) -> Result<Vec<C64>> {
    if v.n_qubits() != bp.n_a() {
        return Err(contract(format!(
            "outcome on {} qubits for |A| = {}",
            v.n_qubits(),
            bp.n_a()
        )));
    }
    let m = psi.split(bp)?;
    let d_b = 1usize << bp.n_b();
    let mut out = vec![C64::new(0.0, 0.0); d_b];
    for (a, va) in v.amplitudes().iter().enumerate() {
        let c = va.conj();
        for (o, x) in out.iter_mut().zip(&m[a * d_b..(a + 1) * d_b]) {
            *o += c * x;
        }
    }
    Ok(out)
}

/// `p·τ` of an unnormalized branch `P`, which is `|⟨P|P̃⟩|`.
fn weighted_tangle(branch: &[C64]) -> f64 {
    let p: f64 = branch.iter().map(|x| x.norm_sqr()).sum();
    if p < ZERO_BRANCH {
        0.0
    } else {
        overlap_with_flip(branch).norm()
    }
}

/// `F_v(Ψ) = p_v τ(M_v)`.
pub fn branch_tangle(psi: &StateVector, bp: &Bipartition, v: &StateVector) -> Result<f64> {
    bp.require_even_b()?;
    Ok(weighted_tangle(&unnormalized_branch(psi, bp, v)?))
}

/// `τ̄_β(Ψ) = Σ_i F_{φ_i}(Ψ)`.
pub fn avg_tangle<B: Basis + ?Sized>(psi: &StateVector, bp: &Bipartition, basis: &B) -> Result<f64> {
    bp.require_even_b()?;
    if basis.n_qubits() != bp.n_a() {
        return Err(contract(format!(
            "basis on {} qubits for |A| = {}",
            basis.n_qubits(),
            bp.n_a()
        )));
    }
    let mut m = psi.split(bp)?;
    Ok(avg_tangle_split(&mut m, 1 << bp.n_b(), basis))
}

fn avg_tangle_split<B: Basis + ?Sized>(m: &mut [C64], d_b: usize, basis: &B) -> f64 {
    basis.branches(m, d_b);
    m.chunks(d_b).map(weighted_tangle).sum()
}

/// Branch probabilities `p_{φ_i}(Ψ)` for every basis element.
pub fn branch_probabilities<B: Basis + ?Sized>(psi: &StateVector, bp: &Bipartition, basis: &B) -> Result<Vec<f64>> {
    if basis.n_qubits() != bp.n_a() {
        return Err(contract("basis size does not match |A|"));
    }
    let mut m = psi.split(bp)?;
    let d_b = 1 << bp.n_b();
    basis.branches(&mut m, d_b);
    Ok(m.chunks(d_b).map(|r| r.iter().map(|x| x.norm_sqr()).sum()).collect())
}

/// Entanglement of assistance `F(Ψ_B, Ψ̃_B)`.
pub fn ea(psi: &StateVector, bp: &Bipartition) -> Result<f64> {
    bp.require_even_b()?;
    let rho = partial_trace(psi, bp)?;
    crate::quantum::fidelity_with_flip(&rho)
}

/// Settings for the multi-start local search behind [`le`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_evals: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 10,
            max_evals: 2000,
            tolerance: 1e-7,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_evals == 0 || !(self.tolerance > 0.0) {
            return Err(contract(
                "optimizer restarts, evaluations and tolerance must be positive",
            ));
        }
        Ok(())
    }
}

/// Best product measurement found by [`le`].
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOptimum {
    /// `τ̄` of `basis`; a lower bound on the localizable entanglement.
    pub value: f64,
    pub basis: ProductBasis,
    pub evaluations: usize,
    /// Restarts whose search produced no finite value.
    pub skipped_restarts: usize,
}

/// Localizable entanglement estimated from below: Nelder-Mead over the
/// `2·|A|` angles of a product basis from `restarts` uniformly random
/// starting bases. Restart `r` draws from stream `r` of the configured seed,
/// and the maximum is reduced in restart order, so the result does not
/// depend on the thread pool.
pub fn le(psi: &StateVector, bp: &Bipartition, cfg: &OptimizerConfig) -> Result<LocalOptimum> {
    bp.require_even_b()?;
    cfg.validate()?;
    let m0 = psi.split(bp)?;
    let d_b = 1usize << bp.n_b();
    let n_a = bp.n_a();

    let objective = |angles: &[f64], scratch: &mut Vec<C64>| -> f64 {
        scratch.clear();
        scratch.extend_from_slice(&m0);
        let basis = ProductBasis::from_angles(angles).expect("angle pairs");
        avg_tangle_split(scratch, d_b, &basis)
    };

    let runs: Vec<(Option<Minimum>, usize)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = task_rng(cfg.seed, r as u64);
            let x0: Vec<f64> = (0..n_a)
                .flat_map(|_| {
                    let cos_theta: f64 = rng.random_range(-1.0..=1.0);
                    [cos_theta.acos(), rng.random_range(0.0..TAU)]
                })
                .collect();
            let mut scratch = Vec::with_capacity(m0.len());
            let min = nelder_mead(
                |x| -objective(x, &mut scratch),
                &x0,
                PI / 4.0,
                cfg.max_evals,
                cfg.tolerance,
            );
            let evals = min.evaluations;
            (min.value.is_finite().then_some(min), evals)
        })
        .collect();

    let evaluations = runs.iter().map(|r| r.1).sum();
    let skipped_restarts = runs.iter().filter(|r| r.0.is_none()).count();
    let best = runs
        .into_iter()
        .filter_map(|r| r.0)
        .fold(None::<Minimum>, |acc, m| match acc {
            Some(a) if a.value <= m.value => Some(a),
            _ => Some(m),
        })
        .ok_or_else(|| contract("every optimizer restart failed"))?;
    Ok(LocalOptimum {
        value: -best.value,
        basis: ProductBasis::from_angles(&best.x)?,
        evaluations,
        skipped_restarts,
    })
}
