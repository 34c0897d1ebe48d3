//! Empirical covering study: measure every (operator, kind) adaptivity
//! cell on a synthetic corpus and decide, per kind, whether any operator
//! contracts it.

use crate::error::SimError;
use audio_core::synth::{harmonic_stack, sine, speech_like};
use audio_core::Waveform;
use operators::{
    measure_adaptivity, measure_adaptivity_with, AdaptivityReport, Registry,
};
use perturbations::rng::substream;
use perturbations::PerturbationKind;
use serde::{Deserialize, Serialize};

pub const MIN_CORPUS: usize = 10;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoveringMatrix {
    /// One report per (operator, kind) cell, operators outer.
    pub reports: Vec<AdaptivityReport>,
    /// Per kind: does any operator measure rho < 1.
    pub covered: Vec<(PerturbationKind, bool)>,
}

/// Pads a signal with silence so noise-profile estimation has noise-only
/// frames to work with, mirroring conversational clips with pauses.
fn with_pauses(w: Waveform) -> Waveform {
    let gap = vec![0.0; (0.3 * 16_000.0) as usize];
    let mut samples = gap.clone();
    samples.extend_from_slice(w.samples());
    samples.extend_from_slice(&gap);
    Waveform::new(samples, 16_000).expect("finite samples")
}

/// Twelve synthetic clips spanning pure tones, harmonic stacks, and
/// speech-like vowels, all carrying silent pauses.
pub fn synthetic_corpus(seed: u64) -> Vec<Waveform> {
    let mut corpus = Vec::with_capacity(12);
    for i in 0..4u64 {
        corpus.push(with_pauses(sine(
            130.0 + 60.0 * i as f64,
            0.4,
            16_000,
            1.0,
        )));
    }
    for i in 0..4u64 {
        corpus.push(with_pauses(harmonic_stack(
            110.0 + 35.0 * i as f64,
            6,
            0.25,
            16_000,
            1.0,
        )));
    }
    for i in 0..4u64 {
        let mut rng = substream(&[seed, i]);
        corpus.push(speech_like(125.0 + 30.0 * i as f64, 16_000, &mut rng));
    }
    corpus
}

pub fn covering_study(
    registry: &Registry,
    kinds: &[PerturbationKind],
    corpus: &[Waveform],
    trials: usize,
    seed: u64,
) -> Result<CoveringMatrix, SimError> {
    if corpus.len() < MIN_CORPUS {
        return Err(SimError::InvalidConfig(format!(
            "covering corpus needs >= {MIN_CORPUS} signals, got {}",
            corpus.len()
        )));
    }
    let mut reports = Vec::new();
    for desc in registry.descriptors() {
        for kind in kinds {
            reports.push(measure_adaptivity(
                registry, desc.name, *kind, corpus, trials, seed,
            )?);
        }
    }
    let covered = kinds
        .iter()
        .map(|kind| {
            let any = reports
                .iter()
                .any(|r| r.perturbation_kind == *kind && r.rho_estimate < 1.0);
            (*kind, any)
        })
        .collect();
    Ok(CoveringMatrix { reports, covered })
}

/// The identity-operator row: the no-op baseline every cell is judged
/// against; measures rho = 1 exactly.
pub fn identity_row(
    kinds: &[PerturbationKind],
    corpus: &[Waveform],
    trials: usize,
    seed: u64,
) -> Result<Vec<AdaptivityReport>, SimError> {
    kinds
        .iter()
        .map(|kind| {
            measure_adaptivity_with("identity", *kind, corpus, trials, seed, |perturbed, _| {
                Ok(perturbed.clone())
            })
            .map_err(SimError::from)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use operators::MIN_TRIALS;

    #[test]
    fn corpus_is_large_and_silence_bearing() {
        let corpus = synthetic_corpus(42);
        assert!(corpus.len() >= MIN_CORPUS);
        for w in &corpus {
            let zeros = w.samples().iter().filter(|s| **s == 0.0).count();
            assert!(zeros as f64 / w.len() as f64 > 0.1);
        }
    }

    #[test]
    fn identity_measures_exactly_one_for_every_kind() {
        let corpus = synthetic_corpus(42);
        let rows = identity_row(&PerturbationKind::ALL, &corpus, MIN_TRIALS, 3).unwrap();
        assert_eq!(rows.len(), 4);
        for r in rows {
            assert!(
                (r.rho_estimate - 1.0).abs() < 1e-9,
                "{:?}: {}",
                r.perturbation_kind,
                r.rho_estimate
            );
        }
    }

    #[test]
    fn denoise_and_dereverb_cover_their_kinds() {
        let corpus = synthetic_corpus(42);
        let reg = Registry::with_descriptors(
            Registry::standard()
                .descriptors()
                .iter()
                .filter(|d| d.name == "denoise" || d.name == "dereverb")
                .cloned()
                .collect(),
        );
        let kinds = [
            PerturbationKind::AdditiveNoise,
            PerturbationKind::Reverberation,
        ];
        let m = covering_study(&reg, &kinds, &corpus, MIN_TRIALS, 3).unwrap();
        assert!(m.covered.iter().all(|(_, c)| *c), "{:?}", m.covered);
        let cell = |op: &str, kind: PerturbationKind| {
            m.reports
                .iter()
                .find(|r| r.operator_name == op && r.perturbation_kind == kind)
                .unwrap()
                .rho_estimate
        };
        assert!(cell("denoise", PerturbationKind::AdditiveNoise) < 1.0);
        assert!(cell("dereverb", PerturbationKind::Reverberation) < 1.0);
    }

    #[test]
    fn fixed_seed_reproduces_the_matrix() {
        let corpus = synthetic_corpus(42);
        let reg = Registry::with_descriptors(
            Registry::standard()
                .descriptors()
                .iter()
                .filter(|d| d.name == "denoise")
                .cloned()
                .collect(),
        );
        let kinds = [PerturbationKind::AdditiveNoise];
        let a = covering_study(&reg, &kinds, &corpus, MIN_TRIALS, 3).unwrap();
        let b = covering_study(&reg, &kinds, &corpus, MIN_TRIALS, 3).unwrap();
        assert_eq!(a.reports[0].rho_estimate, b.reports[0].rho_estimate);
        assert_eq!(a.reports[0].epsilon, b.reports[0].epsilon);
    }

    #[test]
    fn small_corpus_rejected() {
        let corpus = synthetic_corpus(42)[..4].to_vec();
        let reg = Registry::standard();
        assert!(covering_study(
            &reg,
            &[PerturbationKind::AdditiveNoise],
            &corpus,
            MIN_TRIALS,
            3
        )
        .is_err());
    }
}
