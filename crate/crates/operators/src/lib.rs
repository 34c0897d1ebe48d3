//! The audio operator set invoked by the interleaved reasoning loop:
//! enhancement, analysis, transformation, and separation tools, plus the
//! adaptivity measurement that connects them to the contraction theory.

pub mod adaptivity;
pub mod error;
pub mod ops;
pub mod registry;
pub mod report;

pub use adaptivity::{
    corrective_args, measure_adaptivity, measure_adaptivity_with, AdaptivityReport, MIN_TRIALS,
};
pub use error::OperatorError;
pub use ops::{
    correct_pitch, denoise, dereverb, extract_voice, normalize_loudness, restore_tempo,
    DEFAULT_OVER_SUBTRACTION, DEFAULT_TARGET_DBFS,
};
pub use registry::{
    Category, OpOutput, OperatorDescriptor, OperatorGroup, ParamSpec, Registry, ReturnKind,
};
pub use report::{analyze_spectrum, track_pitch, FeatureReport};
