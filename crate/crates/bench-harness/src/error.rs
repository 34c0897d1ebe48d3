use std::path::PathBuf;

/// Harness failures, grouped by exit code: usage errors (1), data errors
/// (2), backend errors (3).
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Perturb(#[from] perturbations::PerturbError),
    #[error(transparent)]
    Audio(#[from] audio_core::AudioError),
    #[error(transparent)]
    Operator(#[from] operators::OperatorError),
    #[error(transparent)]
    Sim(#[from] theory_sim::SimError),
    #[error("backend: {0}")]
    Backend(String),
}

impl From<tws_engine::EngineError> for HarnessError {
    fn from(e: tws_engine::EngineError) -> Self {
        HarnessError::Backend(e.to_string())
    }
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) | HarnessError::Sim(_) => 1,
            HarnessError::Backend(_) => 3,
            _ => 2,
        }
    }
}
