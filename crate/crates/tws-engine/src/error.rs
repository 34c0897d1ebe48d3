use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Operator(#[from] operators::OperatorError),
    #[error(transparent)]
    Audio(#[from] audio_core::AudioError),
    #[error("unknown tool: {0}")]
    UnknownTool(String),
    #[error("malformed tool call: {0}")]
    MalformedToolCall(String),
    #[error("backend failure: {0}")]
    Backend(String),
    #[error("scripted backend exhausted after {0} turns")]
    ScriptExhausted(usize),
    #[error("k_max must be at least 1")]
    BadKMax,
    #[error("TwS mode requires a non-empty operator registry")]
    EmptyRegistry,
    #[error("environment variable {0} is not set")]
    MissingEnv(&'static str),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed trace file {path}: {message}")]
    MalformedTrace { path: PathBuf, message: String },
}
