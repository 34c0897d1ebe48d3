//! Schroeder-style room impulse response synthesis and convolution reverb.

use crate::error::PerturbError;
use audio_core::fft::fft_convolve;
use audio_core::{AudioError, Waveform};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

const SPEED_OF_SOUND_M_S: f64 = 343.0;

/// Synthesizes a room impulse response: a unit direct-path impulse after a
/// pre-delay of cbrt(volume)/343 seconds, followed by a Gaussian-noise tail
/// with exponential decay `10^(-3 t / RT60)`, truncated at 1.5 * RT60.
///
/// The tail energy is scaled so the direct-to-reverberant ratio falls
/// linearly from +6 dB at 20 m^3 to -2 dB at 200 m^3.
pub fn synth_room_ir(
    rt60_ms: f64,
    room_size_m3: f64,
    sample_rate_hz: u32,
    rng: &mut impl Rng,
) -> Result<Waveform, PerturbError> {
    if !(100.0..=800.0).contains(&rt60_ms) {
        return Err(PerturbError::ParamOutOfRange(format!(
            "rt60_ms {rt60_ms} outside [100, 800]"
        )));
    }
    if !(20.0..=200.0).contains(&room_size_m3) {
        return Err(PerturbError::ParamOutOfRange(format!(
            "room_size_m3 {room_size_m3} outside [20, 200]"
        )));
    }
    let sr = sample_rate_hz as f64;
    let rt60_s = rt60_ms / 1000.0;
    let pre_delay_s = room_size_m3.cbrt() / SPEED_OF_SOUND_M_S;
    let pre_delay = (pre_delay_s * sr).round() as usize;
    let tail_len = (1.5 * rt60_s * sr).round() as usize;

    let mut tail: Vec<f64> = (0..tail_len)
        .map(|i| {
            let t = i as f64 / sr;
            let g: f64 = <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng);
            g * 10f64.powf(-3.0 * t / rt60_s)
        })
        .collect();

    // direct-to-reverberant ratio: +6 dB at 20 m^3 down to -2 dB at 200 m^3
    let drr_db = 6.0 + (room_size_m3 - 20.0) / (200.0 - 20.0) * (-8.0);
    let tail_energy: f64 = tail.iter().map(|s| s * s).sum();
    if tail_energy > 0.0 {
        let target = 10f64.powf(-drr_db / 10.0); // direct energy is 1
        let g = (target / tail_energy).sqrt();
        for s in &mut tail {
            *s *= g;
        }
    }

    let mut ir = vec![0.0f64; pre_delay];
    ir.push(1.0);
    ir.extend(tail);
    Ok(Waveform::new(ir, sample_rate_hz)?)
}

/// Full FFT convolution with the impulse response, peak-normalized back to
/// the input's peak. Output length is `len(x) + len(ir) - 1`.
pub fn apply_reverb(x: &Waveform, ir: &Waveform) -> Result<Waveform, PerturbError> {
    if x.sample_rate_hz() != ir.sample_rate_hz() {
        return Err(PerturbError::Audio(AudioError::SampleRateMismatch(
            x.sample_rate_hz(),
            ir.sample_rate_hz(),
        )));
    }
    let mut out = fft_convolve(x.samples(), ir.samples());
    let in_peak = x.peak();
    let out_peak = out.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    if out_peak > 0.0 && in_peak > 0.0 {
        let g = in_peak / out_peak;
        for s in &mut out {
            *s *= g;
        }
    }
    Ok(Waveform::new(out, x.sample_rate_hz())?)
}

/// Schroeder backward-integration RT60 estimate of an impulse response
/// tail. This is the measurement oracle for `synth_room_ir`.
pub fn schroeder_rt60_ms(ir: &Waveform) -> f64 {
    let s = ir.samples();
    // skip the direct path: start just after the global peak
    let peak_idx = s
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0);
    let tail = &s[peak_idx + 1..];
    if tail.is_empty() {
        return 0.0;
    }
    // backward integral of squared tail
    let mut edc: Vec<f64> = tail.iter().rev().scan(0.0, |acc, s| {
        *acc += s * s;
        Some(*acc)
    }).collect();
    edc.reverse();
    let total = edc[0];
    if total <= 0.0 {
        return 0.0;
    }
    let db: Vec<f64> = edc.iter().map(|e| 10.0 * (e / total).log10()).collect();
    // linear fit between -5 and -25 dB, extrapolated to -60
    let pts: Vec<(f64, f64)> = db
        .iter()
        .enumerate()
        .filter(|(_, d)| **d <= -5.0 && **d >= -25.0)
        .map(|(i, d)| (i as f64, *d))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx); // dB per sample
    if slope >= 0.0 {
        return 0.0;
    }
    let samples_to_minus_60 = -60.0 / slope;
    samples_to_minus_60 / ir.sample_rate_hz() as f64 * 1000.0
}
