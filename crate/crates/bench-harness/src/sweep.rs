//! Step-budget sweep: re-run the same evaluation at several k_max values.

use crate::error::HarnessError;
use crate::eval::{evaluate, EvalConfig};
use perturbations::ManifestRecord;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k_max: usize,
    pub accuracy: f64,
    pub mean_steps: f64,
    pub mean_wall_time_ms: f64,
}

pub fn sweep_kmax(
    manifest: &[ManifestRecord],
    cfg: &EvalConfig,
    values: &[usize],
) -> Result<Vec<SweepRow>, HarnessError> {
    if values.is_empty() {
        return Err(HarnessError::Usage("sweep needs at least one k_max".into()));
    }
    values
        .iter()
        .map(|&k_max| {
            let cfg = EvalConfig {
                k_max,
                trace_dir: None,
                ..cfg.clone()
            };
            let (summary, results) = evaluate(manifest, &cfg)?;
            let mean_wall_time_ms =
                results.iter().map(|r| r.wall_time_ms).sum::<f64>() / results.len() as f64;
            Ok(SweepRow {
                k_max,
                accuracy: summary.overall_accuracy,
                mean_steps: summary.mean_steps,
                mean_wall_time_ms,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{BackendSpec, Mode};
    use crate::synthetic::{forced_kind_hard_set, synthesize_sources};
    use perturbations::PerturbationKind;

    #[test]
    fn accuracy_plateaus_once_budget_covers_corrections() {
        let dir = tempfile::tempdir().unwrap();
        let sources = synthesize_sources(&dir.path().join("src"), 7, 23).unwrap();
        // two forced kinds need two tool steps plus the answer step
        let manifest = forced_kind_hard_set(
            &sources,
            &dir.path().join("hard"),
            &[PerturbationKind::AdditiveNoise, PerturbationKind::TimeStretch],
            23,
        )
        .unwrap();
        let cfg = EvalConfig {
            mode: Mode::Tws,
            backend: BackendSpec::Oracle { alpha: 1.0, seed: 9 },
            k_max: 5,
            exclusions: Vec::new(),
            parallelism: 2,
            trace_dir: None,
        };
        let rows = sweep_kmax(&manifest, &cfg, &[1, 3, 5, 8]).unwrap();
        assert!(rows[0].accuracy < rows[1].accuracy);
        assert_eq!(rows[1].accuracy, rows[2].accuracy);
        assert_eq!(rows[2].accuracy, rows[3].accuracy);
        assert!(rows[3].mean_steps < 8.0);
    }

    #[test]
    fn empty_values_rejected() {
        let cfg = EvalConfig {
            mode: Mode::Tws,
            backend: BackendSpec::Scripted(vec![]),
            k_max: 5,
            exclusions: Vec::new(),
            parallelism: 1,
            trace_dir: None,
        };
        assert!(matches!(
            sweep_kmax(&[], &cfg, &[]),
            Err(HarnessError::Usage(_))
        ));
    }
}
