//! Leave-one-category-out ablation over a fixed manifest.

use crate::error::HarnessError;
use crate::eval::{evaluate, EvalConfig, EvalSummary, Mode};
use operators::Category;
use perturbations::ManifestRecord;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub variant: String,
    pub accuracy: f64,
    pub mean_steps: f64,
    /// Accuracy delta relative to the full configuration.
    pub delta_vs_full: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationTable {
    pub rows: Vec<AblationRow>,
}

/// Runs the full system, four leave-one-out variants, and the baseline,
/// all against the same manifest and backend.
pub fn ablate_operators(
    manifest: &[ManifestRecord],
    cfg: &EvalConfig,
) -> Result<AblationTable, HarnessError> {
    let run = |mode: Mode, exclusions: Vec<Category>| -> Result<EvalSummary, HarnessError> {
        let cfg = EvalConfig {
            mode,
            exclusions,
            trace_dir: None,
            ..cfg.clone()
        };
        Ok(evaluate(manifest, &cfg)?.0)
    };
    let full = run(Mode::Tws, Vec::new())?;
    let mut rows = vec![AblationRow {
        variant: "full".to_string(),
        accuracy: full.overall_accuracy,
        mean_steps: full.mean_steps,
        delta_vs_full: 0.0,
    }];
    for cat in Category::ALL {
        let s = run(Mode::Tws, vec![cat])?;
        rows.push(AblationRow {
            variant: format!("w/o-{}", cat.name()),
            accuracy: s.overall_accuracy,
            mean_steps: s.mean_steps,
            delta_vs_full: s.overall_accuracy - full.overall_accuracy,
        });
    }
    let baseline = run(Mode::Baseline, Vec::new())?;
    rows.push(AblationRow {
        variant: "baseline".to_string(),
        accuracy: baseline.overall_accuracy,
        mean_steps: baseline.mean_steps,
        delta_vs_full: baseline.overall_accuracy - full.overall_accuracy,
    });
    Ok(AblationTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::BackendSpec;
    use crate::synthetic::{forced_kind_hard_set, synthesize_sources};
    use perturbations::PerturbationKind;

    #[test]
    fn denoising_matters_most_on_noise() {
        let dir = tempfile::tempdir().unwrap();
        let sources = synthesize_sources(&dir.path().join("src"), 8, 11).unwrap();
        let manifest = forced_kind_hard_set(
            &sources,
            &dir.path().join("hard"),
            &[PerturbationKind::AdditiveNoise],
            11,
        )
        .unwrap();
        let cfg = EvalConfig {
            mode: Mode::Tws,
            backend: BackendSpec::Oracle { alpha: 1.0, seed: 2 },
            k_max: 5,
            exclusions: Vec::new(),
            parallelism: 2,
            trace_dir: None,
        };
        let table = ablate_operators(&manifest, &cfg).unwrap();
        assert_eq!(table.rows.len(), 6);
        assert_eq!(table.rows[0].variant, "full");
        assert_eq!(table.rows[5].variant, "baseline");
        let worst = table.rows[1..5]
            .iter()
            .min_by(|a, b| a.delta_vs_full.total_cmp(&b.delta_vs_full))
            .unwrap();
        assert_eq!(worst.variant, "w/o-denoising");
        assert!(worst.delta_vs_full < 0.0);
    }
}
