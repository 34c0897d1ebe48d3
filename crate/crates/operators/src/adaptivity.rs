//! Empirical adaptivity measurement: how much of a perturbation an
//! operator removes, expressed as the worst-case residual ratio
//! ||T(x + d) - x|| / ||d|| over seeded trials.

use crate::error::OperatorError;
use crate::registry::{OpOutput, Registry};
use crate::report::track_pitch;
use audio_core::pitch::median_voiced_f0;
use audio_core::{signal_distance, Waveform};
use perturbations::rng::substream;
use perturbations::{apply_spec, sample_spec, PerturbationKind};
use serde::{Deserialize, Serialize};

pub const MIN_TRIALS: usize = 30;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdaptivityReport {
    pub operator_name: String,
    pub perturbation_kind: PerturbationKind,
    /// Largest perturbation norm seen across trials.
    pub epsilon: f64,
    /// Empirical max of ||T(x + d) - x|| / ||d||.
    pub rho_estimate: f64,
    pub trials: usize,
}

/// Measures adaptivity for an arbitrary correction function. The function
/// receives (perturbed, clean reference); registry-backed operators ignore
/// the reference, while test harness bounds (identity, return-reference)
/// use it.
pub fn measure_adaptivity_with<F>(
    operator_name: &str,
    kind: PerturbationKind,
    corpus: &[Waveform],
    trials: usize,
    seed: u64,
    op: F,
) -> Result<AdaptivityReport, OperatorError>
where
    F: Fn(&Waveform, &Waveform) -> Result<Waveform, OperatorError>,
{
    if trials < MIN_TRIALS {
        return Err(OperatorError::TooFewTrials {
            got: trials,
            need: MIN_TRIALS,
        });
    }
    if corpus.is_empty() {
        return Err(OperatorError::EmptyCorpus);
    }
    let mut epsilon = 0.0f64;
    let mut rho = 0.0f64;
    let mut counted = 0usize;
    for trial in 0..trials {
        let clean = &corpus[trial % corpus.len()];
        let mut rng = substream(&[seed, trial as u64, kind.index()]);
        let mut spec = sample_spec(
            kind,
            &mut rng,
            vec![seed, trial as u64, kind.index()],
        );
        // adaptivity characterizes the whole-signal corruption; gated noise
        // mixes corrupted and untouched regions and a global profile cannot
        // express it, so the mask is disabled for measurement
        if let perturbations::PerturbationParams::AdditiveNoise {
            temporal_mask_active,
            ..
        } = &mut spec.params
        {
            *temporal_mask_active = false;
        }
        let perturbed = apply_spec(clean, &spec)?;
        let delta = signal_distance(clean, &perturbed)?.value();
        if delta <= 1e-12 {
            continue;
        }
        let corrected = op(&perturbed, clean)?;
        let residual = signal_distance(&corrected, clean)?.value();
        epsilon = epsilon.max(delta);
        rho = rho.max(residual / delta);
        counted += 1;
    }
    if counted == 0 {
        return Err(OperatorError::DegenerateTrials);
    }
    Ok(AdaptivityReport {
        operator_name: operator_name.to_string(),
        perturbation_kind: kind,
        epsilon,
        rho_estimate: rho,
        trials: counted,
    })
}

/// Estimates corrective arguments for parameterized operators by comparing
/// the perturbed audio with the clean reference — the same measurements a
/// reasoning loop would derive from analysis-tool output.
pub fn corrective_args(
    op_name: &str,
    perturbed: &Waveform,
    clean: &Waveform,
) -> Vec<(String, String)> {
    match op_name {
        "denoise" => vec![("over_subtraction".to_string(), "2.5".to_string())],
        "correct_pitch" => {
            let f0 = |w: &Waveform| {
                track_pitch(w)
                    .map(|c| median_voiced_f0(&c))
                    .unwrap_or(0.0)
            };
            let (fp, fc) = (f0(perturbed), f0(clean));
            let semitones = if fp > 0.0 && fc > 0.0 {
                (-12.0 * (fp / fc).log2()).clamp(-4.0, 4.0)
            } else {
                0.0
            };
            vec![("semitones".to_string(), format!("{semitones}"))]
        }
        "restore_tempo" => {
            let factor = (perturbed.len() as f64 / clean.len() as f64).clamp(0.25, 4.0);
            vec![("factor".to_string(), format!("{factor}"))]
        }
        _ => Vec::new(),
    }
}

/// Measures adaptivity of a registry operator. Parameterized operators run
/// at their estimated corrective settings; analysis operators are treated
/// as identity (they do not modify audio).
pub fn measure_adaptivity(
    registry: &Registry,
    op_name: &str,
    kind: PerturbationKind,
    corpus: &[Waveform],
    trials: usize,
    seed: u64,
) -> Result<AdaptivityReport, OperatorError> {
    let desc = registry
        .lookup(op_name)
        .ok_or_else(|| OperatorError::UnknownTool(op_name.to_string()))?;
    let name = desc.name;
    measure_adaptivity_with(name, kind, corpus, trials, seed, |perturbed, clean| {
        let args = corrective_args(name, perturbed, clean);
        match registry.invoke(name, &args, perturbed)? {
            OpOutput::Audio(w) => Ok(w),
            OpOutput::Report(_) => Ok(perturbed.clone()),
        }
    })
}
