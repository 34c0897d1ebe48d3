//! Phase-vocoder time-scale modification.

use crate::error::PerturbError;
use crate::spec::QualityMode;
use audio_core::fft::{fft_forward, fft_inverse};
use audio_core::stft::hann_periodic;
use audio_core::Waveform;
use rustfft::num_complex::Complex;

/// Synthesis hop shared by both quality modes.
pub const SYNTHESIS_HOP: usize = 512;

fn princarg(phase: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    phase - two_pi * (phase / two_pi).round()
}

/// Time-stretches `x` by `factor` (> 1 plays faster, output length
/// ~ len/factor; pitch is preserved). High quality uses a 2048 window with
/// identity phase locking; fast uses 1024 without locking.
pub fn time_stretch(
    x: &Waveform,
    factor: f64,
    quality: QualityMode,
) -> Result<Waveform, PerturbError> {
    if !(0.25..=4.0).contains(&factor) {
        return Err(PerturbError::ParamOutOfRange(format!(
            "stretch factor {factor} outside [0.25, 4]"
        )));
    }
    let window_len = match quality {
        QualityMode::High => 2048,
        QualityMode::Fast => 1024,
    };
    let phase_locking = matches!(quality, QualityMode::High);
    let hs = SYNTHESIS_HOP;
    let out_len = ((x.len() as f64) / factor).round().max(1.0) as usize;
    let n_frames = out_len / hs + 2;
    let bins = window_len / 2 + 1;

    // zero-pad the input so every analysis frame is in range
    let max_analysis = ((n_frames as f64) * hs as f64 * factor).ceil() as usize + window_len + 1;
    let mut input = x.samples().to_vec();
    input.resize(input.len().max(max_analysis), 0.0);

    let win = hann_periodic(window_len);
    let two_pi = 2.0 * std::f64::consts::PI;

    let mut out = vec![0.0f64; n_frames * hs + window_len];
    let mut wsum = vec![0.0f64; out.len()];

    let mut prev_analysis_phase = vec![0.0f64; bins];
    let mut prev_analysis_pos = 0usize;
    let mut prev_energy = 0.0f64;
    let mut syn_phase = vec![0.0f64; bins];
    let mut buf = vec![Complex::new(0.0, 0.0); window_len];

    for f in 0..n_frames {
        let pos = ((f as f64) * (hs as f64) * factor).round() as usize;
        for i in 0..window_len {
            buf[i] = Complex::new(input[pos + i] * win[i], 0.0);
        }
        fft_forward(&mut buf);
        let mags: Vec<f64> = buf[..bins].iter().map(|c| c.norm()).collect();
        let phases: Vec<f64> = buf[..bins].iter().map(|c| c.arg()).collect();
        let energy: f64 = mags.iter().map(|m| m * m).sum();

        // phase reset on onsets: after silence or a sharp energy jump the
        // analysis phases are trustworthy and propagation history is not
        let transient = energy > 8.0 * prev_energy.max(1e-12);
        prev_energy = energy;

        if f == 0 || transient {
            syn_phase.copy_from_slice(&phases);
        } else {
            let dp = (pos - prev_analysis_pos) as f64;
            let propagate = |k: usize, syn_prev: f64| -> f64 {
                let omega = two_pi * k as f64 / window_len as f64;
                let expected = omega * dp;
                let deviation = princarg(phases[k] - prev_analysis_phase[k] - expected);
                let inst_freq = omega + deviation / dp;
                syn_prev + hs as f64 * inst_freq
            };
            if phase_locking {
                // propagate at spectral peaks, lock the rest to the nearest peak
                let mut peaks = Vec::new();
                for k in 2..bins - 2 {
                    if mags[k] > mags[k - 1]
                        && mags[k] > mags[k - 2]
                        && mags[k] >= mags[k + 1]
                        && mags[k] >= mags[k + 2]
                    {
                        peaks.push(k);
                    }
                }
                if peaks.is_empty() {
                    let new_phase: Vec<f64> =
                        (0..bins).map(|k| propagate(k, syn_phase[k])).collect();
                    syn_phase = new_phase;
                } else {
                    let mut new_phase = vec![0.0f64; bins];
                    let mut pi = 0usize;
                    for k in 0..bins {
                        while pi + 1 < peaks.len()
                            && peaks[pi + 1].abs_diff(k) < peaks[pi].abs_diff(k)
                        {
                            pi += 1;
                        }
                        let p = peaks[pi];
                        if k == p {
                            new_phase[k] = propagate(p, syn_phase[p]);
                        } else {
                            new_phase[k] = propagate(p, syn_phase[p]) + (phases[k] - phases[p]);
                        }
                    }
                    syn_phase = new_phase;
                }
            } else {
                let new_phase: Vec<f64> = (0..bins).map(|k| propagate(k, syn_phase[k])).collect();
                syn_phase = new_phase;
            }
        }

        // resynthesize with the modified phases
        for k in 0..bins {
            buf[k] = Complex::from_polar(mags[k], syn_phase[k]);
        }
        for k in bins..window_len {
            buf[k] = buf[window_len - k].conj();
        }
        fft_inverse(&mut buf);
        let start = f * hs;
        for i in 0..window_len {
            out[start + i] += buf[i].re * win[i];
            wsum[start + i] += win[i] * win[i];
        }

        prev_analysis_phase = phases;
        prev_analysis_pos = pos;
    }

    for (o, w) in out.iter_mut().zip(wsum.iter()) {
        if *w > 1e-9 {
            *o /= *w;
        }
    }
    out.truncate(out_len);
    Ok(Waveform::new(out, x.sample_rate_hz())?)
}
