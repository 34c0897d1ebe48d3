use std::path::PathBuf;

/// Errors produced by the audio foundation layer.
#[derive(Debug, thiserror::Error)]
pub enum AudioError {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("not a RIFF/WAVE file: {0}")]
    NotRiffWave(PathBuf),
    #[error("truncated WAV header in {0}")]
    TruncatedHeader(PathBuf),
    #[error("truncated WAV data chunk in {0}")]
    TruncatedData(PathBuf),
    #[error("unsupported WAV codec (format tag {format_tag}) in {path}")]
    UnsupportedCodec { path: PathBuf, format_tag: u16 },
    #[error("unsupported bit depth {bits} in {path} (only PCM 16-bit is supported)")]
    UnsupportedBitDepth { path: PathBuf, bits: u16 },
    #[error("unsupported channel count {channels} in {path} (mono or stereo only)")]
    UnsupportedChannels { path: PathBuf, channels: u16 },
    #[error("empty waveform")]
    EmptyWaveform,
    #[error("non-finite sample at index {0}")]
    NonFiniteSample(usize),
    #[error("sample rate must be positive")]
    ZeroSampleRate,
    #[error("sample rate mismatch: {0} Hz vs {1} Hz")]
    SampleRateMismatch(u32, u32),
    #[error("length mismatch: {0} vs {1} samples")]
    LengthMismatch(usize, usize),
    #[error("zero-power signal")]
    ZeroPower,
    #[error("invalid STFT parameters: {0}")]
    BadStftParams(String),
    #[error("signal too short: {got} samples, need at least {need}")]
    TooShort { got: usize, need: usize },
    #[error("inconsistent spectrogram frame dimensions")]
    InconsistentFrames,
}
