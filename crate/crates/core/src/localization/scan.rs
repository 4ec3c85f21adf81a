use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ea, haar_state, k_constant, le, OptimizerConfig};
use crate::error::{capability, contract, Result};
use crate::graphs::Bipartition;
use crate::quantum::{DENSITY_MAX_QUBITS, STATE_MAX_QUBITS};
use crate::rng::{child_seed, task_rng};

/// Sample statistics of EA (and optionally LE) over Haar-random states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HaarScanRow {
    pub n_a: usize,
    pub n_b: usize,
    pub samples: usize,
    pub mean_ea: f64,
    pub std_ea: f64,
    pub mean_le: Option<f64>,
    pub std_le: Option<f64>,
    /// `√(2/(d_B+1))`.
    pub k: f64,
    /// `1 − √(2 d_B / d_A)`, the typical EA when `d_A ≫ d_B`.
    pub ea_typical: f64,
}

/// Draws `samples` Haar states on `n_a + n_b` qubits, `A` the first `n_a`.
///
/// Sample `s` is drawn from stream `s` of a row seed derived from `seed` and
/// `n_a`; when `le_cfg` is given, its restarts use a seed derived from the
/// row seed and `s` (the configured seed is ignored). Standard deviations
/// use the `n − 1` denominator.
pub fn haar_scan(
    n_a: usize,
    n_b: usize,
    samples: usize,
    seed: u64,
    le_cfg: Option<&OptimizerConfig>,
) -> Result<HaarScanRow> {
    if n_a == 0 || n_b == 0 || !n_b.is_multiple_of(2) {
        return Err(contract(format!("need n_a >= 1 and even n_b >= 2, got {n_a}, {n_b}")));
    }
    if n_a + n_b > STATE_MAX_QUBITS || n_b > DENSITY_MAX_QUBITS {
        return Err(capability(format!(
            "{n_a} + {n_b} qubits exceeds the dense caps ({STATE_MAX_QUBITS} total, {DENSITY_MAX_QUBITS} kept)"
        )));
    }
    if samples < 2 {
        return Err(contract("need at least two samples"));
    }
    if let Some(cfg) = le_cfg {
        cfg.validate()?;
    }
    let n = n_a + n_b;
    let bp = Bipartition::leading(n, n_a)?;
    let row_seed = child_seed(seed, n_a as u64);
    let values = (0..samples)
        .into_par_iter()
        .map(|s| -> Result<(f64, Option<f64>)> {
            let psi = haar_state(n, &mut task_rng(row_seed, s as u64))?;
            let e = ea(&psi, &bp)?;
            let l = match le_cfg {
                Some(cfg) => {
                    let cfg = OptimizerConfig {
                        seed: child_seed(row_seed, s as u64),
                        ..cfg.clone()
                    };
                    Some(le(&psi, &bp, &cfg)?.value)
                }
                None => None,
            };
            Ok((e, l))
        })
        .collect::<Result<Vec<_>>>()?;

    let eas: Vec<f64> = values.iter().map(|v| v.0).collect();
    let les: Option<Vec<f64>> = values.iter().map(|v| v.1).collect();
    let (mean_ea, std_ea) = mean_std(&eas);
    let le_stats = les.map(|l| mean_std(&l));
    let (d_a, d_b) = ((1u64 << n_a) as f64, (1u64 << n_b) as f64);
    Ok(HaarScanRow {
        n_a,
        n_b,
        samples,
        mean_ea,
        std_ea,
        mean_le: le_stats.map(|s| s.0),
        std_le: le_stats.map(|s| s.1),
        k: k_constant(1 << n_b),
        ea_typical: 1.0 - (2.0 * d_b / d_a).sqrt(),
    })
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_is_reproducible_and_ordered() {
        let cfg = OptimizerConfig {
            restarts: 2,
            max_evals: 300,
            ..Default::default()
        };
        let a = haar_scan(2, 2, 8, 5, Some(&cfg)).unwrap();
        let b = haar_scan(2, 2, 8, 5, Some(&cfg)).unwrap();
        assert_eq!(a, b);
        let (ea, le) = (a.mean_ea, a.mean_le.unwrap());
        assert!(0.0 <= le && le <= ea + 1e-9 && ea <= 1.0);
        assert!(haar_scan(2, 2, 8, 6, None).unwrap().mean_le.is_none());
    }

    #[test]
    fn scan_rejects_bad_sizes() {
        assert!(haar_scan(2, 3, 8, 0, None).is_err());
        assert!(haar_scan(0, 2, 8, 0, None).is_err());
        assert!(haar_scan(13, 2, 8, 0, None).is_err());
        assert!(haar_scan(2, 2, 1, 0, None).is_err());
    }

    #[test]
    fn mean_std_small() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
    }
}
