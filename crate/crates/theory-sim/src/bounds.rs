//! Closed-form comparison of the multi-step loss bound against the
//! one-shot baseline bound through the Lipschitz chain.

use crate::config::{BoundConfig, SimConfig};
use crate::error::SimError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundComparison {
    pub tws_bound: f64,
    pub baseline_bound: f64,
    /// Ratio of the perturbation-induced loss terms; infinite when the
    /// contraction factor hits zero (full recovery).
    pub improvement_factor: f64,
}

pub fn compare_bounds(cfg: &SimConfig, bc: &BoundConfig) -> Result<BoundComparison, SimError> {
    cfg.validate()?;
    bc.validate()?;
    let factor = cfg.contraction_factor().powi(cfg.k_steps as i32);
    let tws_bound = bc.baseline_loss + bc.lipschitz_l * factor * cfg.initial_norm;
    let baseline_bound = bc.baseline_loss + bc.lipschitz_l * cfg.initial_norm;
    Ok(BoundComparison {
        tws_bound,
        baseline_bound,
        improvement_factor: 1.0 / factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sim(alpha: f64, rho: f64, k: usize) -> SimConfig {
        SimConfig {
            alpha,
            rho,
            k_steps: k,
            trials: 1000,
            initial_norm: 2.0,
            seed: 1,
        }
    }

    const BC: BoundConfig = BoundConfig {
        lipschitz_l: 1.5,
        baseline_loss: 0.2,
    };

    #[test]
    fn alpha_zero_gives_no_improvement() {
        let r = compare_bounds(&sim(0.0, 0.4, 3), &BC).unwrap();
        assert_eq!(r.tws_bound, r.baseline_bound);
        assert_eq!(r.improvement_factor, 1.0);
    }

    #[test]
    fn non_adaptive_operators_give_no_improvement() {
        let r = compare_bounds(&sim(0.8, 1.0, 3), &BC).unwrap();
        assert_eq!(r.tws_bound, r.baseline_bound);
    }

    #[test]
    fn perfect_single_step_recovers_baseline_loss() {
        let r = compare_bounds(&sim(1.0, 0.0, 1), &BC).unwrap();
        assert_eq!(r.tws_bound, BC.baseline_loss);
        assert!(r.improvement_factor.is_infinite());
    }

    #[test]
    fn improvement_matches_closed_form() {
        let r = compare_bounds(&sim(0.5, 0.5, 2), &BC).unwrap();
        let factor = 0.75f64.powi(2);
        assert!((r.improvement_factor - 1.0 / factor).abs() < 1e-12);
        assert!(r.tws_bound < r.baseline_bound);
    }
}
