//! Typical-value constant and concentration tail bounds.

use std::f64::consts::{LN_2, PI, SQRT_2};

use crate::error::{contract, Result};

/// `K = √(2 / (d_B + 1))`, the typical ceiling of localizable entanglement.
pub fn k_constant(d_b: usize) -> f64 {
    (2.0 / (d_b as f64 + 1.0)).sqrt()
}

/// Which tail bound [`concentration_rhs`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Regime {
    /// `2 (10√2 d_A d_B / ε)^{2 d_A} exp(−d_B ε² / (18π³ (4√2+2)² d_A))`,
    /// for EA when `d_B ≫ d_A`.
    GlobalThm4,
    /// `2 (40 (1+2√2)² N_A² d_A² d_B² / ε²)^{8 N_A} exp(−d_A d_B ε² / (18π³ (2+4√2)²))`,
    /// for LE.
    LocalThm5,
    /// `2 exp(−C d_A d_B ε²)` with an unspecified constant `C`, for EA
    /// when `d_A ≫ d_B`.
    GlobalPrior { c: f64 },
}

/// Natural log of the right-hand side of the chosen tail bound.
pub fn log_concentration_rhs(regime: Regime, d_a: usize, d_b: usize, n_a: usize, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(contract(format!("ε must be positive, got {eps}")));
    }
    let (da, db, na) = (d_a as f64, d_b as f64, n_a as f64);
    let pi3 = PI.powi(3);
    Ok(match regime {
        Regime::GlobalThm4 => {
            let lip = 4.0 * SQRT_2 + 2.0;
            LN_2 + 2.0 * da * (10.0 * SQRT_2 * da * db / eps).ln() - db * eps * eps / (18.0 * pi3 * lip * lip * da)
        }
        Regime::LocalThm5 => {
            let c = 1.0 + 2.0 * SQRT_2;
            let lip = 2.0 + 4.0 * SQRT_2;
            LN_2 + 8.0 * na * (40.0 * c * c * na * na * da * da * db * db / (eps * eps)).ln()
                - da * db * eps * eps / (18.0 * pi3 * lip * lip)
        }
        Regime::GlobalPrior { c } => LN_2 - c * da * db * eps * eps,
    })
}

/// The tail bound itself; may be `+∞` when the prefactor overflows.
pub fn concentration_rhs(regime: Regime, d_a: usize, d_b: usize, n_a: usize, eps: f64) -> Result<f64> {
    log_concentration_rhs(regime, d_a, d_b, n_a, eps).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_values() {
        assert!((k_constant(4) - (0.4f64).sqrt()).abs() < 1e-15);
        assert!((k_constant(4) - 0.63246).abs() < 1e-5);
        assert!((k_constant(2) - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let ks: Vec<f64> = (1..12).map(|k| k_constant(1 << k)).collect();
        assert!(ks.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn thm4_matches_direct_evaluation() {
        // Small enough that the linear-domain formula does not overflow.
        let eps = 0.7;
        let direct = 2.0
            * (10.0 * SQRT_2 * 8.0 / eps).powi(4)
            * (-(4.0 * eps * eps) / (18.0 * PI.powi(3) * (4.0 * SQRT_2 + 2.0).powi(2) * 2.0)).exp();
        let v = concentration_rhs(Regime::GlobalThm4, 2, 4, 1, eps).unwrap();
        assert!((v / direct - 1.0).abs() < 1e-12);
        // The exponential factor is within 0.1% of one here.
        let prefactor = 2.0 * (10.0 * SQRT_2 * 8.0 / eps).powi(4);
        assert!((v / prefactor - 1.0).abs() < 1e-3);
    }

    #[test]
    fn thm5_matches_direct_evaluation() {
        let (da, db, na, eps) = (2.0f64, 2.0f64, 1.0f64, 0.5f64);
        let c = (1.0 + 2.0 * SQRT_2).powi(2);
        let direct = 2.0
            * (40.0 * c * na * na * da * da * db * db / (eps * eps)).powi(8)
            * (-(da * db * eps * eps) / (18.0 * PI.powi(3) * (2.0 + 4.0 * SQRT_2).powi(2))).exp();
        let v = concentration_rhs(Regime::LocalThm5, 2, 2, 1, eps).unwrap();
        assert!((v / direct - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decreasing_in_eps_and_vanishing() {
        for regime in [Regime::GlobalThm4, Regime::LocalThm5, Regime::GlobalPrior { c: 1.0 }] {
            let vals: Vec<f64> = [0.1, 1.0, 10.0, 100.0, 1e4]
                .iter()
                .map(|&e| log_concentration_rhs(regime, 4, 16, 2, e).unwrap())
                .collect();
            assert!(vals.windows(2).all(|w| w[1] < w[0]), "{regime:?}: {vals:?}");
            assert_eq!(concentration_rhs(regime, 4, 16, 2, 1e6).unwrap(), 0.0);
        }
        assert!(concentration_rhs(Regime::GlobalThm4, 2, 2, 1, 0.0).is_err());
    }

    #[test]
    fn prior_bound_uses_its_constant() {
        let a = concentration_rhs(Regime::GlobalPrior { c: 1.0 }, 2, 2, 1, 0.5).unwrap();
        assert!((a - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        let b = concentration_rhs(Regime::GlobalPrior { c: 2.0 }, 2, 2, 1, 0.5).unwrap();
        assert!((b - 2.0 * (-2.0f64).exp()).abs() < 1e-15);
    }
}
