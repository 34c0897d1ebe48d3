#[derive(Debug, thiserror::Error)]
pub enum OperatorError {
    #[error(transparent)]
    Audio(#[from] audio_core::AudioError),
    #[error(transparent)]
    Perturb(#[from] perturbations::PerturbError),
    #[error("unknown tool: {0}")]
    UnknownTool(String),
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),
    #[error("input too short: {got} samples, need {need}")]
    TooShort { got: usize, need: usize },
    #[error("input has zero power")]
    ZeroPowerInput,
    #[error("adaptivity measurement needs at least {need} trials, got {got}")]
    TooFewTrials { got: usize, need: usize },
    #[error("adaptivity corpus is empty")]
    EmptyCorpus,
    #[error("all adaptivity trials produced zero-norm perturbations")]
    DegenerateTrials,
}
