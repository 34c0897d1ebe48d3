//! Deterministic synthetic test signals: tones, harmonic stacks, and
//! speech-like vowel sequences with silent pauses. Used by the operator
//! adaptivity studies and the oracle-backed evaluation corpora.

use crate::waveform::Waveform;
use rand::Rng;

/// Pure sinusoid.
pub fn sine(freq_hz: f64, amplitude: f64, sample_rate_hz: u32, duration_s: f64) -> Waveform {
    let n = (sample_rate_hz as f64 * duration_s).round() as usize;
    let w = 2.0 * std::f64::consts::PI * freq_hz / sample_rate_hz as f64;
    Waveform::new(
        (0..n).map(|i| amplitude * (w * i as f64).sin()).collect(),
        sample_rate_hz,
    )
    .unwrap()
}

/// Harmonic stack with 1/h amplitude rolloff, a vowel-like proxy.
pub fn harmonic_stack(
    f0_hz: f64,
    harmonics: usize,
    amplitude: f64,
    sample_rate_hz: u32,
    duration_s: f64,
) -> Waveform {
    let n = (sample_rate_hz as f64 * duration_s).round() as usize;
    let sr = sample_rate_hz as f64;
    let nyquist = sr / 2.0;
    let mut samples = vec![0.0f64; n];
    let mut norm = 0.0;
    for h in 1..=harmonics {
        let f = f0_hz * h as f64;
        if f >= nyquist * 0.95 {
            break;
        }
        let a = 1.0 / h as f64;
        norm += a;
        let w = 2.0 * std::f64::consts::PI * f / sr;
        for (i, s) in samples.iter_mut().enumerate() {
            *s += a * (w * i as f64).sin();
        }
    }
    if norm > 0.0 {
        let g = amplitude / norm;
        for s in &mut samples {
            *s *= g;
        }
    }
    Waveform::new(samples, sample_rate_hz).unwrap()
}

/// Periodic click train (percussive; used as the anti-harmonic probe).
pub fn impulse_train(period_samples: usize, amplitude: f64, sample_rate_hz: u32, len: usize) -> Waveform {
    let mut samples = vec![0.0f64; len];
    let mut i = 0;
    while i < len {
        samples[i] = amplitude;
        i += period_samples.max(1);
    }
    Waveform::new(samples, sample_rate_hz).unwrap()
}

/// Speech-like clip: leading silence, a vowel segment, a pause, a second
/// vowel, trailing silence. The amplitude envelope has smooth onsets and a
/// slow modulation so the clip is not perfectly stationary.
///
/// The silent stretches are load-bearing for the percentile-based noise
/// floor estimators, which assume some fraction of near-silent frames.
pub fn speech_like(f0_hz: f64, sample_rate_hz: u32, rng: &mut impl Rng) -> Waveform {
    let sr = sample_rate_hz as f64;
    let lead_s = 0.25;
    let v1_s = 0.55 + rng.gen_range(0.0..0.15);
    let gap_s = 0.18;
    let v2_s = 0.45 + rng.gen_range(0.0..0.15);
    let tail_s = 0.22;

    let seg = |dur_s: f64, f0: f64, start_phase_jitter: f64| -> Vec<f64> {
        let n = (sr * dur_s).round() as usize;
        let harmonics = 10usize;
        let mut out = vec![0.0f64; n];
        for h in 1..=harmonics {
            let f = f0 * h as f64;
            if f >= sr / 2.0 * 0.9 {
                break;
            }
            let a = 1.0 / h as f64;
            let w = 2.0 * std::f64::consts::PI * f / sr;
            for (i, s) in out.iter_mut().enumerate() {
                *s += a * (w * i as f64 + start_phase_jitter * h as f64).sin();
            }
        }
        // onset/offset ramps (30 ms) plus a 3 Hz amplitude modulation
        let ramp = (sr * 0.03) as usize;
        for (i, s) in out.iter_mut().enumerate() {
            let mut env = 1.0;
            if i < ramp {
                env *= i as f64 / ramp as f64;
            }
            if i + ramp > n {
                env *= (n - i) as f64 / ramp as f64;
            }
            let t = i as f64 / sr;
            env *= 0.85 + 0.15 * (2.0 * std::f64::consts::PI * 3.0 * t).sin();
            *s *= env;
        }
        out
    };

    let jitter1 = rng.gen_range(0.0..std::f64::consts::TAU);
    let jitter2 = rng.gen_range(0.0..std::f64::consts::TAU);
    let f0_2 = f0_hz * rng.gen_range(0.95..1.05);

    let mut samples = vec![0.0f64; (sr * lead_s) as usize];
    samples.extend(seg(v1_s, f0_hz, jitter1));
    samples.extend(vec![0.0f64; (sr * gap_s) as usize]);
    samples.extend(seg(v2_s, f0_2, jitter2));
    samples.extend(vec![0.0f64; (sr * tail_s) as usize]);

    // normalize peak to 0.6 to leave perturbation headroom
    let peak = samples.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    if peak > 0.0 {
        let g = 0.6 / peak;
        for s in &mut samples {
            *s *= g;
        }
    }
    Waveform::new(samples, sample_rate_hz).unwrap()
}
