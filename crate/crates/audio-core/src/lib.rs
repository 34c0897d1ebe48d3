//! Audio foundation layer: waveform representation, WAV I/O, time-frequency
//! transforms, resampling, pitch tracking, and the signal metrics the rest
//! of the toolkit measures with.
//!
//! All operations are pure functions of their inputs; values are immutable
//! after construction and safe to share across threads.

pub mod error;
pub mod fft;
pub mod metrics;
pub mod pitch;
pub mod resample;
pub mod stft;
pub mod synth;
pub mod wav;
pub mod waveform;

pub use error::AudioError;
pub use metrics::{measure_snr, signal_distance, SignalDistance};
pub use resample::{resample, resample_by_factor};
pub use stft::{hann_periodic, istft, stft, Spectrogram, WindowKind, DEFAULT_HOP, DEFAULT_WINDOW_LEN};
pub use wav::{load_wav, pcm16_bytes, store_wav};
pub use waveform::{Waveform, CANONICAL_SAMPLE_RATE_HZ};
