//! Synthetic desk-scale corpora: labeled speech-like source clips and
//! forced-kind hard sets for shape experiments that do not need MELD.

use crate::error::HarnessError;
use audio_core::wav::store_wav;
use perturbations::rng::{hash_str, substream};
use perturbations::{
    apply_specs, sample_spec, ManifestRecord, PerturbationKind, SourceRecord,
};
use std::path::Path;
use tws_engine::EmotionLabel;

/// Writes `count` speech-like WAV clips with labels cycling through the
/// seven categories and returns their source records.
pub fn synthesize_sources(
    dir: &Path,
    count: usize,
    seed: u64,
) -> Result<Vec<SourceRecord>, HarnessError> {
    std::fs::create_dir_all(dir).map_err(|source| HarnessError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut records = Vec::with_capacity(count);
    for i in 0..count {
        let utterance_id = format!("syn-{i:04}");
        let mut rng = substream(&[seed, i as u64]);
        let f0 = 110.0 + (i % 12) as f64 * 11.0;
        let w = audio_core::synth::speech_like(f0, 16_000, &mut rng);
        let source_path = dir.join(format!("{utterance_id}.wav"));
        store_wav(&w, &source_path)?;
        let label = EmotionLabel::ALL[i % EmotionLabel::ALL.len()];
        records.push(SourceRecord {
            utterance_id,
            source_path,
            label: label.name().to_string(),
        });
    }
    Ok(records)
}

/// Builds a hard set that applies exactly the given kinds, in canonical
/// order, to every record. Used for the ablation (noise-dominant) and
/// step-sweep (fixed tool count) protocols.
pub fn forced_kind_hard_set(
    sources: &[SourceRecord],
    out_dir: &Path,
    kinds: &[PerturbationKind],
    master_seed: u64,
) -> Result<Vec<ManifestRecord>, HarnessError> {
    std::fs::create_dir_all(out_dir).map_err(|source| HarnessError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut ordered: Vec<PerturbationKind> = PerturbationKind::ALL
        .into_iter()
        .filter(|k| kinds.contains(k))
        .collect();
    if ordered.len() != kinds.len() {
        ordered = kinds.to_vec();
    }
    sources
        .iter()
        .map(|src| {
            let clean = audio_core::wav::load_wav(&src.source_path)?;
            let uid = hash_str(&src.utterance_id);
            let specs: Vec<_> = ordered
                .iter()
                .map(|kind| {
                    let path = vec![master_seed, uid, kind.index(), 0];
                    let mut rng = substream(&path);
                    sample_spec(*kind, &mut rng, path)
                })
                .collect();
            let perturbed = apply_specs(&clean, &specs)?;
            let output_path = out_dir.join(format!("{}.wav", src.utterance_id));
            store_wav(&perturbed, &output_path)?;
            Ok(ManifestRecord {
                utterance_id: src.utterance_id.clone(),
                source_path: src.source_path.to_string_lossy().into_owned(),
                output_path: output_path.to_string_lossy().into_owned(),
                label: src.label.clone(),
                applied_specs: specs,
            })
        })
        .collect()
}
