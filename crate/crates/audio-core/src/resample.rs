//! Windowed-sinc resampling (Kaiser window, beta = 8).

use crate::error::AudioError;
use crate::waveform::Waveform;

const KAISER_BETA: f64 = 8.0;
const HALF_TAPS: f64 = 32.0;

/// Modified Bessel function of the first kind, order zero.
fn bessel_i0(x: f64) -> f64 {
    let half = x / 2.0;
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 1..64 {
        term *= (half / k as f64) * (half / k as f64);
        sum += term;
        if term < 1e-14 * sum {
            break;
        }
    }
    sum
}

fn kaiser(frac: f64) -> f64 {
    if frac.abs() >= 1.0 {
        return 0.0;
    }
    bessel_i0(KAISER_BETA * (1.0 - frac * frac).sqrt()) / bessel_i0(KAISER_BETA)
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

/// Resamples to `target_rate_hz` with a Kaiser-windowed sinc kernel. When
/// downsampling, the kernel cutoff and support scale to the output Nyquist.
pub fn resample(w: &Waveform, target_rate_hz: u32) -> Result<Waveform, AudioError> {
    if target_rate_hz == 0 {
        return Err(AudioError::ZeroSampleRate);
    }
    if w.is_empty() {
        return Err(AudioError::EmptyWaveform);
    }
    if w.sample_rate_hz() == target_rate_hz {
        return Ok(w.clone());
    }
    let ratio = target_rate_hz as f64 / w.sample_rate_hz() as f64;
    // cutoff in cycles per input sample (0.5 = input Nyquist)
    let scale = ratio.min(1.0);
    let cutoff = 0.5 * scale * 0.95;
    let half_width = (HALF_TAPS / scale).ceil();

    let x = w.samples();
    let out_len = ((x.len() as f64) * ratio).ceil() as usize;
    let mut out = Vec::with_capacity(out_len);
    for j in 0..out_len {
        let t = j as f64 / ratio;
        let lo = ((t - half_width).ceil() as i64).max(0);
        let hi = ((t + half_width).floor() as i64).min(x.len() as i64 - 1);
        let mut acc = 0.0;
        for i in lo..=hi {
            let d = t - i as f64;
            acc += x[i as usize] * 2.0 * cutoff * sinc(2.0 * cutoff * d) * kaiser(d / half_width);
        }
        out.push(acc);
    }
    Waveform::new(out, target_rate_hz)
}

/// Resamples by an arbitrary rate `factor` (> 1 shortens, < 1 lengthens),
/// keeping the nominal sample rate. Used by the non-formant-preserving
/// pitch-shift path.
pub fn resample_by_factor(w: &Waveform, factor: f64) -> Result<Waveform, AudioError> {
    if w.is_empty() {
        return Err(AudioError::EmptyWaveform);
    }
    if !(factor.is_finite()) || factor <= 0.0 {
        return Err(AudioError::BadStftParams(format!(
            "invalid resample factor {factor}"
        )));
    }
    let ratio = 1.0 / factor;
    let scale = ratio.min(1.0);
    let cutoff = 0.5 * scale * 0.95;
    let half_width = (HALF_TAPS / scale).ceil();
    let x = w.samples();
    let out_len = ((x.len() as f64) * ratio).round().max(1.0) as usize;
    let mut out = Vec::with_capacity(out_len);
    for j in 0..out_len {
        let t = j as f64 * factor;
        let lo = ((t - half_width).ceil() as i64).max(0);
        let hi = ((t + half_width).floor() as i64).min(x.len() as i64 - 1);
        let mut acc = 0.0;
        for i in lo..=hi {
            let d = t - i as f64;
            acc += x[i as usize] * 2.0 * cutoff * sinc(2.0 * cutoff * d) * kaiser(d / half_width);
        }
        out.push(acc);
    }
    Waveform::new(out, w.sample_rate_hz())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tone(freq: f64, sr: u32, secs: f64) -> Waveform {
        let n = (sr as f64 * secs) as usize;
        Waveform::new(
            (0..n)
                .map(|i| (2.0 * std::f64::consts::PI * freq * i as f64 / sr as f64).sin())
                .collect(),
            sr,
        )
        .unwrap()
    }

    /// Dominant frequency via zero-crossing count (oracle independent of FFT).
    fn zero_crossing_freq(w: &Waveform) -> f64 {
        let s = w.samples();
        let crossings = s.windows(2).filter(|p| p[0] < 0.0 && p[1] >= 0.0).count();
        crossings as f64 / w.duration_s()
    }

    #[test]
    fn downsample_preserves_tone_frequency() {
        let w = tone(1000.0, 48_000, 0.5);
        let r = resample(&w, 16_000).unwrap();
        assert_eq!(r.sample_rate_hz(), 16_000);
        let f = zero_crossing_freq(&r);
        assert!((f - 1000.0).abs() < 20.0, "freq {f}");
        // amplitude within 2% away from the edges
        let peak = r.samples()[1000..r.len() - 1000]
            .iter()
            .fold(0.0f64, |m, s| m.max(s.abs()));
        assert!((peak - 1.0).abs() < 0.02, "peak {peak}");
    }

    #[test]
    fn upsample_preserves_tone_frequency() {
        let w = tone(440.0, 8_000, 0.5);
        let r = resample(&w, 16_000).unwrap();
        let f = zero_crossing_freq(&r);
        assert!((f - 440.0).abs() < 10.0, "freq {f}");
    }

    #[test]
    fn factor_resample_scales_length_and_pitch() {
        let w = tone(200.0, 16_000, 0.5);
        let r = resample_by_factor(&w, 2.0).unwrap();
        assert_eq!(r.sample_rate_hz(), 16_000);
        assert!((r.len() as f64 - w.len() as f64 / 2.0).abs() <= 1.0);
        let f = zero_crossing_freq(&r);
        assert!((f - 400.0).abs() < 10.0, "freq {f}");
    }

    #[test]
    fn same_rate_is_identity() {
        let w = tone(100.0, 16_000, 0.1);
        let r = resample(&w, 16_000).unwrap();
        assert_eq!(w, r);
    }
}
