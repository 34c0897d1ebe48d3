//! Perturbation kinds and their parameter distributions.
//!
//! Parameter ranges and distributions follow the hard-set construction
//! recipe: SNR, room size, semitones, and stretch factor are uniform; RT60
//! is log-uniform; the noise type is an equal-weight categorical; the
//! temporal mask, formant preservation, and quality mode flags are
//! Bernoulli with p = 0.2, 0.7, and 0.8 respectively.

use crate::error::PerturbError;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Default per-kind application probability when building a hard set.
pub const DEFAULT_P_APPLY: f64 = 0.3;
/// Default master seed for perturbation sampling.
pub const DEFAULT_MASTER_SEED: u64 = 1337;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationKind {
    AdditiveNoise,
    Reverberation,
    PitchShift,
    TimeStretch,
}

impl PerturbationKind {
    /// Canonical application order.
    pub const ALL: [PerturbationKind; 4] = [
        PerturbationKind::AdditiveNoise,
        PerturbationKind::Reverberation,
        PerturbationKind::PitchShift,
        PerturbationKind::TimeStretch,
    ];

    /// Stable index used in RNG stream keys.
    pub fn index(self) -> u64 {
        match self {
            PerturbationKind::AdditiveNoise => 0,
            PerturbationKind::Reverberation => 1,
            PerturbationKind::PitchShift => 2,
            PerturbationKind::TimeStretch => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PerturbationKind::AdditiveNoise => "additive_noise",
            PerturbationKind::Reverberation => "reverberation",
            PerturbationKind::PitchShift => "pitch_shift",
            PerturbationKind::TimeStretch => "time_stretch",
        }
    }
}

impl std::fmt::Display for PerturbationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for PerturbationKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "additive_noise" | "an" => Ok(PerturbationKind::AdditiveNoise),
            "reverberation" | "re" => Ok(PerturbationKind::Reverberation),
            "pitch_shift" | "ps" => Ok(PerturbationKind::PitchShift),
            "time_stretch" | "ts" => Ok(PerturbationKind::TimeStretch),
            other => Err(format!("unknown perturbation kind: {other}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseType {
    White,
    Pink,
    Brown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QualityMode {
    Fast,
    High,
}

/// Kind-specific parameter record; serializes as `{kind, params}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum PerturbationParams {
    AdditiveNoise {
        snr_db: f64,
        noise_type: NoiseType,
        temporal_mask_active: bool,
    },
    Reverberation {
        rt60_ms: f64,
        room_size_m3: f64,
    },
    PitchShift {
        semitones: f64,
        formant_preservation: bool,
    },
    TimeStretch {
        stretch_factor: f64,
        quality_mode: QualityMode,
    },
}

impl PerturbationParams {
    pub fn kind(&self) -> PerturbationKind {
        match self {
            PerturbationParams::AdditiveNoise { .. } => PerturbationKind::AdditiveNoise,
            PerturbationParams::Reverberation { .. } => PerturbationKind::Reverberation,
            PerturbationParams::PitchShift { .. } => PerturbationKind::PitchShift,
            PerturbationParams::TimeStretch { .. } => PerturbationKind::TimeStretch,
        }
    }

    pub fn validate(&self) -> Result<(), PerturbError> {
        let fail = |msg: String| Err(PerturbError::ParamOutOfRange(msg));
        match *self {
            PerturbationParams::AdditiveNoise { snr_db, .. } => {
                if !(0.0..=25.0).contains(&snr_db) {
                    return fail(format!("snr_db {snr_db} outside [0, 25]"));
                }
            }
            PerturbationParams::Reverberation {
                rt60_ms,
                room_size_m3,
            } => {
                if !(100.0..=800.0).contains(&rt60_ms) {
                    return fail(format!("rt60_ms {rt60_ms} outside [100, 800]"));
                }
                if !(20.0..=200.0).contains(&room_size_m3) {
                    return fail(format!("room_size_m3 {room_size_m3} outside [20, 200]"));
                }
            }
            PerturbationParams::PitchShift { semitones, .. } => {
                if !(-4.0..=4.0).contains(&semitones) {
                    return fail(format!("semitones {semitones} outside [-4, 4]"));
                }
            }
            PerturbationParams::TimeStretch { stretch_factor, .. } => {
                if !(0.7..=1.3).contains(&stretch_factor) {
                    return fail(format!("stretch_factor {stretch_factor} outside [0.7, 1.3]"));
                }
            }
        }
        Ok(())
    }
}

/// A concrete perturbation draw plus the RNG stream path that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    #[serde(flatten)]
    pub params: PerturbationParams,
    pub seed_path: Vec<u64>,
}

impl PerturbationSpec {
    pub fn kind(&self) -> PerturbationKind {
        self.params.kind()
    }
}

/// Draws kind-specific parameters from the Table-style distributions.
pub fn sample_params(kind: PerturbationKind, rng: &mut impl Rng) -> PerturbationParams {
    match kind {
        PerturbationKind::AdditiveNoise => {
            let snr_db = rng.gen_range(0.0..=25.0);
            let noise_type = match rng.gen_range(0..3u8) {
                0 => NoiseType::White,
                1 => NoiseType::Pink,
                _ => NoiseType::Brown,
            };
            let temporal_mask_active = rng.gen_bool(0.2);
            PerturbationParams::AdditiveNoise {
                snr_db,
                noise_type,
                temporal_mask_active,
            }
        }
        PerturbationKind::Reverberation => {
            // log-uniform over [100, 800] ms
            let lo = 100.0f64.ln();
            let hi = 800.0f64.ln();
            let rt60_ms = rng.gen_range(lo..=hi).exp();
            let room_size_m3 = rng.gen_range(20.0..=200.0);
            PerturbationParams::Reverberation {
                rt60_ms,
                room_size_m3,
            }
        }
        PerturbationKind::PitchShift => PerturbationParams::PitchShift {
            semitones: rng.gen_range(-4.0..=4.0),
            formant_preservation: rng.gen_bool(0.7),
        },
        PerturbationKind::TimeStretch => PerturbationParams::TimeStretch {
            stretch_factor: rng.gen_range(0.7..=1.3),
            quality_mode: if rng.gen_bool(0.8) {
                QualityMode::High
            } else {
                QualityMode::Fast
            },
        },
    }
}

/// Total spec sampler: draws parameters and attaches the stream path.
pub fn sample_spec(
    kind: PerturbationKind,
    rng: &mut impl Rng,
    seed_path: Vec<u64>,
) -> PerturbationSpec {
    PerturbationSpec {
        params: sample_params(kind, rng),
        seed_path,
    }
}
