use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum PerturbError {
    #[error(transparent)]
    Audio(#[from] audio_core::AudioError),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("input has zero power")]
    ZeroPowerInput,
    #[error("output directory not writable: {path}: {source}")]
    OutputDirUnwritable {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed manifest line {line}: {message}")]
    MalformedManifest { line: usize, message: String },
}
