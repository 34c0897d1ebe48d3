//! Short-time Fourier transform with constant-overlap-add reconstruction.

use crate::error::AudioError;
use crate::fft::{fft_forward, fft_inverse};
use crate::waveform::Waveform;
use rustfft::num_complex::Complex;

/// Default analysis window length for speech at 16 kHz.
pub const DEFAULT_WINDOW_LEN: usize = 1024;
/// Default hop (75% overlap).
pub const DEFAULT_HOP: usize = 256;

/// Window taper identifier. Only the periodic Hann taper is supported; the
/// enum exists so spectrogram parameters are self-describing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    HannPeriodic,
}

/// One-sided complex spectrogram (frame-major).
#[derive(Debug, Clone)]
pub struct Spectrogram {
    /// frame_count x (window_len/2 + 1) complex bins.
    pub frames: Vec<Vec<Complex<f64>>>,
    pub window_len: usize,
    pub hop: usize,
    pub window_kind: WindowKind,
    pub sample_rate_hz: u32,
    /// Length of the signal the spectrogram was computed from; istft trims
    /// its output back to this.
    pub source_len: usize,
}

impl Spectrogram {
    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    pub fn bin_count(&self) -> usize {
        self.window_len / 2 + 1
    }

    /// Center frequency of bin `k` in Hz.
    pub fn bin_hz(&self, k: usize) -> f64 {
        k as f64 * self.sample_rate_hz as f64 / self.window_len as f64
    }

    /// Magnitudes, frame-major.
    pub fn magnitudes(&self) -> Vec<Vec<f64>> {
        self.frames
            .iter()
            .map(|f| f.iter().map(|c| c.norm()).collect())
            .collect()
    }
}

/// Periodic Hann window of length `n`.
pub fn hann_periodic(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
        .collect()
}

fn check_params(window_len: usize, hop: usize) -> Result<(), AudioError> {
    if !window_len.is_power_of_two() {
        return Err(AudioError::BadStftParams(format!(
            "window_len {window_len} is not a power of two"
        )));
    }
    if hop == 0 || window_len % hop != 0 {
        return Err(AudioError::BadStftParams(format!(
            "hop {hop} does not divide window_len {window_len}"
        )));
    }
    if window_len / hop < 2 {
        return Err(AudioError::BadStftParams(format!(
            "hop {hop} too large for COLA (need window_len/hop >= 2)"
        )));
    }
    Ok(())
}

/// Left padding applied before framing so that every real sample is covered
/// by the full set of overlapping windows (the periodic Hann taper is zero
/// at its first sample, so edge samples would otherwise be unrecoverable).
pub fn stft_pad_left(window_len: usize, hop: usize) -> usize {
    window_len - hop
}

/// Windowed DFT of overlapping frames. The signal is zero-padded on both
/// sides; frame `f` covers source samples
/// `[f*hop - pad_left, f*hop - pad_left + window_len)` with
/// `pad_left = window_len - hop`.
pub fn stft(w: &Waveform, window_len: usize, hop: usize) -> Result<Spectrogram, AudioError> {
    check_params(window_len, hop)?;
    if w.is_empty() {
        return Err(AudioError::EmptyWaveform);
    }
    let n = w.len();
    let pad_left = stft_pad_left(window_len, hop);
    // enough frames that the last real sample still sees every overlap
    let n_frames = (pad_left + n).div_ceil(hop) + (window_len / hop - 1);
    let padded_len = (n_frames - 1) * hop + window_len;
    let mut padded = vec![0.0f64; pad_left];
    padded.extend_from_slice(w.samples());
    padded.resize(padded_len, 0.0);

    let win = hann_periodic(window_len);
    let bins = window_len / 2 + 1;
    let mut frames = Vec::with_capacity(n_frames);
    let mut buf = vec![Complex::new(0.0, 0.0); window_len];
    for f in 0..n_frames {
        let start = f * hop;
        for i in 0..window_len {
            buf[i] = Complex::new(padded[start + i] * win[i], 0.0);
        }
        fft_forward(&mut buf);
        frames.push(buf[..bins].to_vec());
    }
    Ok(Spectrogram {
        frames,
        window_len,
        hop,
        window_kind: WindowKind::HannPeriodic,
        sample_rate_hz: w.sample_rate_hz(),
        source_len: n,
    })
}

/// Overlap-add synthesis normalized by the per-sample window overlap sum.
pub fn istft(s: &Spectrogram) -> Result<Waveform, AudioError> {
    let bins = s.window_len / 2 + 1;
    if s.frames.iter().any(|f| f.len() != bins) {
        return Err(AudioError::InconsistentFrames);
    }
    check_params(s.window_len, s.hop)?;
    let n_frames = s.frames.len();
    if n_frames == 0 {
        return Err(AudioError::EmptyWaveform);
    }
    let padded_len = (n_frames - 1) * s.hop + s.window_len;
    let win = hann_periodic(s.window_len);

    let mut out = vec![0.0f64; padded_len];
    let mut wsum = vec![0.0f64; padded_len];
    let mut buf = vec![Complex::new(0.0, 0.0); s.window_len];
    for (f, frame) in s.frames.iter().enumerate() {
        // rebuild the full spectrum by conjugate symmetry
        buf[..bins].copy_from_slice(frame);
        for k in bins..s.window_len {
            buf[k] = frame[s.window_len - k].conj();
        }
        fft_inverse(&mut buf);
        let start = f * s.hop;
        for i in 0..s.window_len {
            out[start + i] += buf[i].re;
            wsum[start + i] += win[i];
        }
    }
    for (o, w) in out.iter_mut().zip(wsum.iter()) {
        if *w > 1e-12 {
            *o /= *w;
        }
    }
    let pad_left = stft_pad_left(s.window_len, s.hop);
    let trimmed: Vec<f64> = out
        .into_iter()
        .skip(pad_left)
        .take(s.source_len)
        .collect();
    Waveform::new(trimmed, s.sample_rate_hz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_wave(rng: &mut ChaCha8Rng, len: usize) -> Waveform {
        Waveform::new((0..len).map(|_| rng.gen_range(-1.0..1.0)).collect(), 16_000).unwrap()
    }

    #[test]
    fn perfect_reconstruction_cola_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(win, hop) in &[(1024usize, 256usize), (1024, 512), (2048, 512), (512, 128), (256, 64)] {
            for _ in 0..5 {
                let len = rng.gen_range(256..65536);
                let w = rand_wave(&mut rng, len);
                let s = stft(&w, win, hop).unwrap();
                let r = istft(&s).unwrap();
                assert_eq!(r.len(), w.len());
                let max_err = w
                    .samples()
                    .iter()
                    .zip(r.samples())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                assert!(max_err < 1e-6, "win={win} hop={hop}: err {max_err}");
            }
        }
    }

    #[test]
    fn zero_signal_gives_zero_spectrogram() {
        let w = Waveform::silence(4096, 16_000);
        let s = stft(&w, 1024, 256).unwrap();
        for f in &s.frames {
            for c in f {
                assert_eq!(c.norm(), 0.0);
            }
        }
    }

    #[test]
    fn sinusoid_at_bin_center_dominates_single_bin() {
        // 16 kHz, window 1024 -> bin spacing 15.625 Hz; pick bin 64 = 1000 Hz.
        let sr = 16_000u32;
        let win = 1024usize;
        let k0 = 64usize;
        let f0 = k0 as f64 * sr as f64 / win as f64;
        let n = 8192;
        let samples: Vec<f64> = (0..n)
            .map(|i| (2.0 * std::f64::consts::PI * f0 * i as f64 / sr as f64).sin())
            .collect();
        let w = Waveform::new(samples, sr).unwrap();
        let s = stft(&w, win, 256).unwrap();

        // oracle: direct DFT of one interior windowed frame
        let frame_idx = 8;
        let winf = hann_periodic(win);
        let start = frame_idx * 256 - stft_pad_left(win, 256);
        let mut oracle = vec![];
        for k in 0..=win / 2 {
            let mut acc = Complex::new(0.0, 0.0);
            for i in 0..win {
                let ang = -2.0 * std::f64::consts::PI * k as f64 * i as f64 / win as f64;
                acc += Complex::new(ang.cos(), ang.sin()) * (w.samples()[start + i] * winf[i]);
            }
            oracle.push(acc);
        }
        for (k, c) in s.frames[frame_idx].iter().enumerate() {
            assert!((c - oracle[k]).norm() < 1e-8);
        }

        // single dominant bin per frame, others <= -60 dB relative
        // (leave out main-lobe neighbors of the Hann window)
        let peak = s.frames[frame_idx][k0].norm();
        for (k, c) in s.frames[frame_idx].iter().enumerate() {
            if (k as i64 - k0 as i64).abs() > 2 {
                let rel = 20.0 * (c.norm() / peak).log10();
                assert!(rel <= -60.0, "bin {k}: {rel} dB");
            }
        }
    }

    #[test]
    fn zeroing_one_bin_removes_its_synthesis_contribution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w = rand_wave(&mut rng, 4096);
        let s = stft(&w, 1024, 256).unwrap();

        let mut modified = s.clone();
        let (fi, ki) = (5usize, 100usize);
        let removed = modified.frames[fi][ki];
        modified.frames[fi][ki] = Complex::new(0.0, 0.0);

        let full = istft(&s).unwrap();
        let without = istft(&modified).unwrap();

        // oracle: subtract the bin's inverse-DFT contribution directly,
        // pushed through the same overlap-add normalization
        let win = hann_periodic(1024);
        let n_frames = s.frames.len();
        let padded_len = (n_frames - 1) * 256 + 1024;
        let pad_left = stft_pad_left(1024, 256);
        let mut wsum = vec![0.0f64; padded_len];
        for f in 0..n_frames {
            for i in 0..1024 {
                wsum[f * 256 + i] += win[i];
            }
        }
        let mut expected = full.samples().to_vec();
        let start = fi * 256;
        for i in 0..1024 {
            let ang = 2.0 * std::f64::consts::PI * ki as f64 * i as f64 / 1024.0;
            // bin ki and its conjugate mirror both contribute
            let contrib = (removed * Complex::new(ang.cos(), ang.sin())).re * 2.0 / 1024.0;
            let padded_idx = start + i;
            if padded_idx >= pad_left && padded_idx - pad_left < expected.len() {
                expected[padded_idx - pad_left] -= contrib / wsum[padded_idx];
            }
        }
        for (a, b) in without.samples().iter().zip(expected.iter()) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn parseval_energy_consistency() {
        // interior samples see a constant Hann^2 overlap of W2/hop
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let win = 1024usize;
        let hop = 256usize;
        let mut samples = vec![0.0f64; win];
        samples.extend((0..8192).map(|_| rng.gen_range(-1.0f64..1.0)));
        samples.extend(vec![0.0f64; win]);
        let signal_energy: f64 = samples.iter().map(|s| s * s).sum();
        let w = Waveform::new(samples, 16_000).unwrap();
        let s = stft(&w, win, hop).unwrap();

        let spectro_energy: f64 = s
            .frames
            .iter()
            .map(|f| {
                f.iter()
                    .enumerate()
                    .map(|(k, c)| {
                        let two_sided = if k == 0 || k == win / 2 { 1.0 } else { 2.0 };
                        two_sided * c.norm_sqr()
                    })
                    .sum::<f64>()
            })
            .sum::<f64>()
            / win as f64;

        let w2: f64 = hann_periodic(win).iter().map(|v| v * v).sum();
        let normalized = spectro_energy / (w2 / hop as f64);
        let rel = (normalized - signal_energy).abs() / signal_energy;
        assert!(rel < 1e-6, "relative error {rel}");
    }

    #[test]
    fn bad_params_rejected() {
        let w = Waveform::silence(2048, 16_000);
        assert!(stft(&w, 1000, 250).is_err());
        assert!(stft(&w, 1024, 300).is_err());
        assert!(stft(&w, 1024, 1024).is_err());
    }
}
