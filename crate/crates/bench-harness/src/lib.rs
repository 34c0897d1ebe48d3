//! Benchmark harness: manifest construction, synthetic corpora,
//! evaluation orchestration, ablations, step sweeps, and report export.

pub mod ablate;
pub mod breakdown;
pub mod error;
pub mod eval;
pub mod manifest;
pub mod report;
pub mod sweep;
pub mod synthetic;

pub use ablate::{ablate_operators, AblationRow, AblationTable};
pub use breakdown::{breakdown_by_perturbation, KindBreakdown};
pub use error::HarnessError;
pub use eval::{
    evaluate, BackendSpec, ConfigSnapshot, EvalConfig, EvalRecordResult, EvalSummary, Mode,
};
pub use manifest::{build_manifest, read_source_manifest, write_source_manifest};
pub use report::{
    ablation_to_csv, breakdown_to_csv, records_to_jsonl, summary_to_csv, sweep_to_csv,
    write_report,
};
pub use sweep::{sweep_kmax, SweepRow};
pub use synthetic::{forced_kind_hard_set, synthesize_sources};
