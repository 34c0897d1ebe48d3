//! Deterministic oracle backend. It stands in for a real audio language
//! model: it knows which corruptions a record carries and picks the
//! matched corrective tool with a seeded per-step probability alpha,
//! otherwise a mismatched one. Answers come from the hidden ground-truth
//! label only when the current audio passes integrity thresholds against
//! the clean reference; otherwise it answers a deterministic wrong label.

use crate::backend::ModelBackend;
use crate::error::EngineError;
use crate::label::EmotionLabel;
use crate::parse::parse_tool_call_grammar;
use crate::turn::{ChatTurn, Role, ToolCall};
use audio_core::Waveform;
use operators::{analyze_spectrum, corrective_args};
use perturbations::rng::{hash_str, substream};
use perturbations::PerturbationKind;
use rand::Rng;

/// Integrity thresholds: how far the corrected audio may sit from the
/// clean reference and still count as restored.
pub const DURATION_RATIO_TOL: f64 = 0.06;
pub const F0_RATIO_TOL: f64 = 0.05;
pub const MIN_ESTIMATED_SNR_DB: f64 = 5.0;

#[derive(Debug, Clone, Copy)]
pub struct OraclePolicy {
    /// Per-step probability of picking the kind-matched corrective tool.
    pub alpha: f64,
    pub seed: u64,
}

/// Ground truth for one record, hidden from the engine itself.
#[derive(Debug, Clone)]
pub struct RecordContext {
    pub utterance_id: String,
    pub true_label: EmotionLabel,
    pub clean: Waveform,
    pub applied_kinds: Vec<PerturbationKind>,
}

pub struct OracleBackend {
    policy: OraclePolicy,
    record: RecordContext,
}

/// Correction priority: denoise before anything pitch-related so the
/// pitch tracker sees cleaned audio, tempo before pitch so the final
/// duration check reflects the restored clip.
const CORRECTION_ORDER: [PerturbationKind; 4] = [
    PerturbationKind::AdditiveNoise,
    PerturbationKind::Reverberation,
    PerturbationKind::TimeStretch,
    PerturbationKind::PitchShift,
];

fn matched_tool(kind: PerturbationKind) -> &'static str {
    match kind {
        PerturbationKind::AdditiveNoise => "denoise",
        PerturbationKind::Reverberation => "dereverb",
        PerturbationKind::TimeStretch => "restore_tempo",
        PerturbationKind::PitchShift => "correct_pitch",
    }
}

/// A tool the oracle picks when it misses: harmless, always available in
/// the standard registry, and corrective for nothing.
const MISMATCHED_TOOL: &str = "normalize_loudness";

impl OracleBackend {
    pub fn new(policy: OraclePolicy, record: RecordContext) -> Result<Self, EngineError> {
        if !(0.0..=1.0).contains(&policy.alpha) {
            return Err(EngineError::Backend(format!(
                "oracle alpha {} outside [0, 1]",
                policy.alpha
            )));
        }
        Ok(OracleBackend { policy, record })
    }

    /// Kinds whose matched tool was called in a prior assistant turn and
    /// did not come back as an error result.
    fn addressed_kinds(&self, turns: &[ChatTurn]) -> Vec<PerturbationKind> {
        let mut addressed = Vec::new();
        for (i, turn) in turns.iter().enumerate() {
            if turn.role != Role::Assistant {
                continue;
            }
            let Ok(Some(call)) = parse_tool_call_grammar(&turn.text) else {
                continue;
            };
            let succeeded = turns
                .get(i + 1)
                .map(|t| t.role == Role::Tool && !t.text.starts_with("ERROR"))
                .unwrap_or(false);
            if !succeeded {
                continue;
            }
            for kind in PerturbationKind::ALL {
                if call.name.eq_ignore_ascii_case(matched_tool(kind)) {
                    addressed.push(kind);
                }
            }
        }
        addressed
    }

    /// True iff the current audio is close enough to the clean reference,
    /// checking only the aspects the record's corruptions can disturb.
    fn integrity_passes(&self, current: &Waveform, addressed: &[PerturbationKind]) -> bool {
        let kinds = &self.record.applied_kinds;
        if kinds.iter().any(|k| !addressed.contains(k)) {
            return false;
        }
        // Reverb legitimately lengthens the clip, so the duration check
        // only applies when a tempo restore should have pinned it back.
        if kinds.contains(&PerturbationKind::TimeStretch) {
            let ratio = current.len() as f64 / self.record.clean.len() as f64;
            if (ratio - 1.0).abs() > DURATION_RATIO_TOL {
                return false;
            }
        }
        if kinds.contains(&PerturbationKind::PitchShift) {
            let f0 = |w: &Waveform| {
                operators::track_pitch(w)
                    .map(|c| audio_core::pitch::median_voiced_f0(&c))
                    .unwrap_or(0.0)
            };
            let (fc, fp) = (f0(&self.record.clean), f0(current));
            if fc > 0.0 && fp > 0.0 && (fp / fc - 1.0).abs() > F0_RATIO_TOL {
                return false;
            }
        }
        if kinds.contains(&PerturbationKind::AdditiveNoise) {
            match analyze_spectrum(current) {
                Ok(report) => {
                    if report.estimated_snr_db < MIN_ESTIMATED_SNR_DB {
                        return false;
                    }
                }
                Err(_) => return false,
            }
        }
        true
    }

    fn answer_text(&self, pass: bool) -> String {
        let (label, reasoning) = if pass {
            (
                self.record.true_label,
                "signal integrity checks passed against expectations",
            )
        } else {
            (
                self.record.true_label.next(),
                "residual degradation detected; classification uncertain",
            )
        };
        format!("Final Answer:\nReasoning: {reasoning}.\nEmotion: {label}")
    }
}

impl ModelBackend for OracleBackend {
    fn next_turn(
        &self,
        turns: &[ChatTurn],
        current_audio: &Waveform,
    ) -> Result<String, EngineError> {
        let tool_mode = turns
            .first()
            .map(|t| t.text.contains("[TOOL:"))
            .unwrap_or(false);
        let addressed = self.addressed_kinds(turns);
        if !tool_mode {
            return Ok(self.answer_text(self.integrity_passes(current_audio, &addressed)));
        }

        let pending: Vec<PerturbationKind> = CORRECTION_ORDER
            .into_iter()
            .filter(|k| self.record.applied_kinds.contains(k) && !addressed.contains(k))
            .collect();
        if pending.is_empty() {
            return Ok(self.answer_text(self.integrity_passes(current_audio, &addressed)));
        }

        let step = turns.iter().filter(|t| t.role == Role::Assistant).count() as u64;
        let mut rng = substream(&[
            self.policy.seed,
            hash_str(&self.record.utterance_id),
            step,
        ]);
        let call = if rng.gen_bool(self.policy.alpha) {
            let tool = matched_tool(pending[0]);
            ToolCall {
                name: tool.to_string(),
                args: corrective_args(tool, current_audio, &self.record.clean),
            }
        } else {
            ToolCall {
                name: MISMATCHED_TOOL.to_string(),
                args: Vec::new(),
            }
        };
        Ok(format!(
            "Step {}: assessing quality and applying {}.\n{call}",
            step + 1,
            call.name
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run_baseline, run_tws};
    use crate::prompt::TWS_TASK_PROMPT;
    use crate::trace::TerminatedBy;
    use operators::Registry;
    use perturbations::{apply_spec, sample_spec, PerturbationParams, PerturbationSpec};

    fn clean_clip(i: u64) -> Waveform {
        let mut rng = substream(&[900, i]);
        audio_core::synth::speech_like(140.0 + 20.0 * i as f64, 16_000, &mut rng)
    }

    fn record(kinds: Vec<PerturbationKind>, clip: Waveform) -> RecordContext {
        RecordContext {
            utterance_id: "utt-test".into(),
            true_label: EmotionLabel::Joy,
            clean: clip,
            applied_kinds: kinds,
        }
    }

    #[test]
    fn clean_clip_answers_correctly_in_one_step() {
        let clip = clean_clip(0);
        let oracle = OracleBackend::new(
            OraclePolicy { alpha: 1.0, seed: 7 },
            record(vec![], clip.clone()),
        )
        .unwrap();
        let trace = run_tws(&clip, TWS_TASK_PROMPT, &Registry::standard(), &oracle, 5).unwrap();
        assert_eq!(trace.steps_used, 1);
        assert_eq!(trace.final_answer, Some(EmotionLabel::Joy));
        assert_eq!(trace.audio_versions.len(), 1);
    }

    #[test]
    fn noise_corrupted_clip_denoise_then_answer() {
        let clip = clean_clip(1);
        let spec = PerturbationSpec {
            params: PerturbationParams::AdditiveNoise {
                snr_db: 4.0,
                noise_type: perturbations::NoiseType::White,
                temporal_mask_active: false,
            },
            seed_path: vec![11, 0],
        };
        let noisy = apply_spec(&clip, &spec).unwrap();
        let oracle = OracleBackend::new(
            OraclePolicy { alpha: 1.0, seed: 7 },
            record(vec![PerturbationKind::AdditiveNoise], clip),
        )
        .unwrap();
        let trace = run_tws(&noisy, TWS_TASK_PROMPT, &Registry::standard(), &oracle, 5).unwrap();
        assert_eq!(trace.tool_calls.len(), 1);
        assert_eq!(trace.tool_calls[0].name, "denoise");
        assert_eq!(trace.steps_used, 2);
        assert_eq!(trace.final_answer, Some(EmotionLabel::Joy));
    }

    #[test]
    fn alpha_zero_never_matches_and_times_out() {
        let clip = clean_clip(2);
        let mut rng = substream(&[31, 0]);
        let spec = sample_spec(PerturbationKind::AdditiveNoise, &mut rng, vec![31, 0]);
        let noisy = apply_spec(&clip, &spec).unwrap();
        let oracle = OracleBackend::new(
            OraclePolicy { alpha: 0.0, seed: 7 },
            record(vec![PerturbationKind::AdditiveNoise], clip),
        )
        .unwrap();
        let trace = run_tws(&noisy, TWS_TASK_PROMPT, &Registry::standard(), &oracle, 5).unwrap();
        assert_eq!(trace.terminated_by, TerminatedBy::KMaxReached);
        assert_eq!(trace.steps_used, 5);
        assert!(trace.final_answer.is_none());
        assert!(trace.tool_calls.iter().all(|c| c.name == MISMATCHED_TOOL));
    }

    #[test]
    fn baseline_mode_answers_wrong_on_corrupted_audio() {
        let clip = clean_clip(3);
        let mut rng = substream(&[32, 0]);
        let spec = sample_spec(PerturbationKind::AdditiveNoise, &mut rng, vec![32, 0]);
        let noisy = apply_spec(&clip, &spec).unwrap();
        let oracle = OracleBackend::new(
            OraclePolicy { alpha: 1.0, seed: 7 },
            record(vec![PerturbationKind::AdditiveNoise], clip.clone()),
        )
        .unwrap();
        let trace = run_baseline(&noisy, crate::prompt::BASELINE_PROMPT, &oracle).unwrap();
        assert_eq!(trace.final_answer, Some(EmotionLabel::Joy.next()));
        assert_eq!(trace.steps_used, 1);
    }

    #[test]
    fn missing_tool_loops_to_cap() {
        let clip = clean_clip(4);
        let mut rng = substream(&[33, 0]);
        let spec = sample_spec(PerturbationKind::AdditiveNoise, &mut rng, vec![33, 0]);
        let noisy = apply_spec(&clip, &spec).unwrap();
        let oracle = OracleBackend::new(
            OraclePolicy { alpha: 1.0, seed: 7 },
            record(vec![PerturbationKind::AdditiveNoise], clip),
        )
        .unwrap();
        let no_denoise = Registry::without_category(operators::Category::Denoise);
        let trace = run_tws(&noisy, TWS_TASK_PROMPT, &no_denoise, &oracle, 5).unwrap();
        assert_eq!(trace.terminated_by, TerminatedBy::KMaxReached);
        assert!(trace.final_answer.is_none());
        assert_eq!(trace.audio_versions.len(), 1);
    }

    #[test]
    fn invalid_alpha_rejected() {
        let clip = clean_clip(5);
        assert!(OracleBackend::new(
            OraclePolicy { alpha: 1.5, seed: 7 },
            record(vec![], clip),
        )
        .is_err());
    }
}
