//! Perturbation-specific gain ratios: in the small-improvement regime the
//! accuracy gains for two perturbation types relate as (1-rho1)/(1-rho2).

use crate::config::SimConfig;
use crate::contraction::{simulate_contraction, RhoMode};
use crate::error::SimError;
use serde::{Deserialize, Serialize};

/// Linearization validity gate on alpha * K * (1 - rho).
pub const LINEARIZATION_GATE: f64 = 0.3;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GainRatioResult {
    /// None when both gains are zero (alpha = 0).
    pub empirical_ratio: Option<f64>,
    pub predicted_ratio: f64,
    /// True when the small-gain linearization does not hold for these
    /// parameters; the prediction is then not expected to be accurate.
    pub approximation_invalid: bool,
}

pub fn gain_ratio_experiment(
    rho1: f64,
    rho2: f64,
    alpha: f64,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<GainRatioResult, SimError> {
    if !(rho1 < 1.0 && rho2 < 1.0) {
        return Err(SimError::InvalidConfig(format!(
            "gain ratio needs rho < 1, got {rho1} and {rho2}"
        )));
    }
    let gain = |rho: f64, salt: u64| -> Result<f64, SimError> {
        let cfg = SimConfig {
            alpha,
            rho,
            k_steps: k,
            trials,
            initial_norm: 1.0,
            seed: seed.wrapping_add(salt),
        };
        let sim = simulate_contraction(&cfg, RhoMode::Exact)?;
        Ok(1.0 - sim.empirical_mean[k])
    };
    let (g1, g2) = (gain(rho1, 0)?, gain(rho2, 1)?);
    let empirical_ratio = if g1 == 0.0 && g2 == 0.0 {
        None
    } else {
        Some(g1 / g2)
    };
    let gate = |rho: f64| alpha * k as f64 * (1.0 - rho) <= LINEARIZATION_GATE;
    Ok(GainRatioResult {
        empirical_ratio,
        predicted_ratio: (1.0 - rho1) / (1.0 - rho2),
        approximation_invalid: !(gate(rho1) && gate(rho2)),
    })
}
