use crate::error::SimError;
use serde::{Deserialize, Serialize};

pub const MIN_TRIALS: usize = 1000;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SimConfig {
    /// Tool-selection accuracy.
    pub alpha: f64,
    /// Per-application reduction factor.
    pub rho: f64,
    pub k_steps: usize,
    pub trials: usize,
    /// Initial perturbation norm.
    pub initial_norm: f64,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(SimError::InvalidConfig(format!("alpha {}", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(SimError::InvalidConfig(format!("rho {}", self.rho)));
        }
        if self.k_steps == 0 {
            return Err(SimError::InvalidConfig("k_steps must be >= 1".into()));
        }
        if self.trials < MIN_TRIALS {
            return Err(SimError::InvalidConfig(format!(
                "trials {} below statistical minimum {MIN_TRIALS}",
                self.trials
            )));
        }
        if !(self.initial_norm > 0.0 && self.initial_norm.is_finite()) {
            return Err(SimError::InvalidConfig(format!(
                "initial_norm {}",
                self.initial_norm
            )));
        }
        Ok(())
    }

    /// Expected per-step shrinkage 1 - alpha(1 - rho).
    pub fn contraction_factor(&self) -> f64 {
        1.0 - self.alpha * (1.0 - self.rho)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundConfig {
    /// Combined Lipschitz constant of model and encoder.
    pub lipschitz_l: f64,
    /// Loss on clean data.
    pub baseline_loss: f64,
}

impl BoundConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.lipschitz_l > 0.0 && self.lipschitz_l.is_finite()) {
            return Err(SimError::InvalidConfig(format!(
                "lipschitz_l {}",
                self.lipschitz_l
            )));
        }
        if !(self.baseline_loss >= 0.0 && self.baseline_loss.is_finite()) {
            return Err(SimError::InvalidConfig(format!(
                "baseline_loss {}",
                self.baseline_loss
            )));
        }
        Ok(())
    }
}
