//! Desk-scale validation of the error-contraction theory: Monte-Carlo
//! simulation of the step-wise bound, closed-form loss-bound comparison,
//! gain-ratio experiments, and empirical operator covering measurements.

pub mod bounds;
pub mod config;
pub mod contraction;
pub mod covering;
pub mod error;
pub mod export;
pub mod gain;

pub use bounds::{compare_bounds, BoundComparison};
pub use config::{BoundConfig, SimConfig, MIN_TRIALS};
pub use contraction::{simulate_contraction, ContractionResult, RhoMode};
pub use covering::{covering_study, identity_row, synthetic_corpus, CoveringMatrix};
pub use error::SimError;
pub use export::{contraction_to_csv, covering_to_csv};
pub use gain::{gain_ratio_experiment, GainRatioResult, LINEARIZATION_GATE};
