//! Seeded acoustic perturbations and deterministic hard-set construction.
//!
//! Four perturbation families — additive colored noise, convolution reverb,
//! pitch shift, and time stretch — are applied in a fixed canonical order
//! with parameters drawn from named RNG substreams, so a corpus build is
//! reproducible bit-for-bit from (master seed, utterance id) alone.

pub mod corpus;
pub mod error;
pub mod noise;
pub mod psola;
pub mod reverb;
pub mod rng;
pub mod spec;
pub mod vocoder;

pub use corpus::{
    apply_spec, apply_specs, build_hard_set, draw_record_specs, read_manifest, write_manifest,
    ManifestRecord, SourceRecord,
};
pub use error::PerturbError;
pub use noise::{add_noise_at_snr, gen_colored_noise, AdditiveNoiseParams};
pub use psola::{pitch_shift, PitchShiftOutput};
pub use reverb::{apply_reverb, schroeder_rt60_ms, synth_room_ir};
pub use spec::{
    sample_params, sample_spec, NoiseType, PerturbationKind, PerturbationParams, PerturbationSpec,
    QualityMode, DEFAULT_MASTER_SEED, DEFAULT_P_APPLY,
};
pub use vocoder::time_stretch;
