//! Audio-returning operators: enhancement, transformation, and separation.

use crate::error::OperatorError;
use audio_core::{istft, stft, Waveform, DEFAULT_HOP, DEFAULT_WINDOW_LEN};
use perturbations::{pitch_shift, time_stretch, QualityMode};

pub const DEFAULT_OVER_SUBTRACTION: f64 = 1.5;
pub const DEFAULT_TARGET_DBFS: f64 = -23.0;
/// Late-reverb suppression strength applied to the trailing-average
/// estimate.
const DEREVERB_STRENGTH: f64 = 0.8;

fn check_len(x: &Waveform, need: usize) -> Result<(), OperatorError> {
    if x.len() < need {
        return Err(OperatorError::TooShort { got: x.len(), need });
    }
    Ok(())
}

/// Spectral-subtraction denoise. The noise magnitude profile is the
/// per-bin 10th percentile over frames; subtraction is floored at
/// 0.05 * |X| to avoid musical-noise zeroing.
pub fn denoise(x: &Waveform, over_subtraction: f64) -> Result<Waveform, OperatorError> {
    if !(0.0..=5.0).contains(&over_subtraction) {
        return Err(OperatorError::InvalidArgs(format!(
            "over_subtraction {over_subtraction} outside [0, 5]"
        )));
    }
    check_len(x, DEFAULT_WINDOW_LEN)?;
    let mut spec = stft(x, DEFAULT_WINDOW_LEN, DEFAULT_HOP)?;
    let bins = spec.bin_count();
    let n_frames = spec.frame_count();

    let mut profile = vec![0.0f64; bins];
    let mut column = vec![0.0f64; n_frames];
    for (k, p) in profile.iter_mut().enumerate() {
        for (t, c) in column.iter_mut().enumerate() {
            *c = spec.frames[t][k].norm();
        }
        column.sort_by(|a, b| a.partial_cmp(b).unwrap());
        *p = column[n_frames / 10];
    }

    for frame in &mut spec.frames {
        for (k, c) in frame.iter_mut().enumerate() {
            let mag = c.norm();
            let target = (mag - over_subtraction * profile[k]).max(0.05 * mag);
            if mag > 0.0 {
                *c *= target / mag;
            }
        }
    }
    Ok(istft(&spec)?)
}

/// Late-reverberation suppression: per-bin subtraction of an
/// exponentially-weighted trailing magnitude average (weight 0.85, lag 2
/// frames), floored at 0.1 * |X|.
pub fn dereverb(x: &Waveform) -> Result<Waveform, OperatorError> {
    check_len(x, 4 * DEFAULT_WINDOW_LEN)?;
    let mut spec = stft(x, DEFAULT_WINDOW_LEN, DEFAULT_HOP)?;
    let bins = spec.bin_count();
    let n_frames = spec.frame_count();

    let mags: Vec<Vec<f64>> = spec.magnitudes();
    let mut ewma = vec![vec![0.0f64; bins]; n_frames];
    for t in 0..n_frames {
        for k in 0..bins {
            let prev = if t == 0 { mags[0][k] } else { ewma[t - 1][k] };
            ewma[t][k] = 0.85 * prev + 0.15 * mags[t][k];
        }
    }

    for t in 0..n_frames {
        for k in 0..bins {
            let mag = mags[t][k];
            if mag <= 0.0 {
                continue;
            }
            // only the trailing average's excess over the current frame
            // counts as late reverberation; steady tones and onsets leave
            // no excess and pass through untouched
            let est = if t >= 2 {
                (ewma[t - 2][k] - mag).max(0.0)
            } else {
                0.0
            };
            let target = (mag - DEREVERB_STRENGTH * est).max(0.1 * mag);
            spec.frames[t][k] *= target / mag;
        }
    }
    Ok(istft(&spec)?)
}

/// Scalar gain to the target RMS level, hard-clipping anything driven past
/// full scale.
pub fn normalize_loudness(x: &Waveform, target_dbfs: f64) -> Result<Waveform, OperatorError> {
    if !(-80.0..=0.0).contains(&target_dbfs) {
        return Err(OperatorError::InvalidArgs(format!(
            "target_dbfs {target_dbfs} outside [-80, 0]"
        )));
    }
    let rms = x.rms();
    if rms == 0.0 {
        return Err(OperatorError::ZeroPowerInput);
    }
    let gain = 10f64.powf(target_dbfs / 20.0) / rms;
    let samples: Vec<f64> = x
        .samples()
        .iter()
        .map(|s| (s * gain).clamp(-1.0, 1.0))
        .collect();
    Ok(Waveform::new(samples, x.sample_rate_hz())?)
}

/// Formant-preserving corrective pitch shift.
pub fn correct_pitch(x: &Waveform, semitones: f64) -> Result<Waveform, OperatorError> {
    Ok(pitch_shift(x, semitones, true)?.waveform)
}

/// Corrective tempo change. Pass the reciprocal of the stretch that
/// corrupted the audio: output length ~ len(x) / factor.
pub fn restore_tempo(x: &Waveform, factor: f64) -> Result<Waveform, OperatorError> {
    Ok(time_stretch(x, factor, QualityMode::High)?)
}

/// Harmonic/percussive separation returning the harmonic (voice-proxy)
/// component: median filtering across time vs frequency, soft masks with
/// power 2, original phases.
pub fn extract_voice(x: &Waveform) -> Result<Waveform, OperatorError> {
    check_len(x, 8 * DEFAULT_HOP + DEFAULT_WINDOW_LEN)?;
    let mut spec = stft(x, DEFAULT_WINDOW_LEN, DEFAULT_HOP)?;
    let bins = spec.bin_count();
    let n_frames = spec.frame_count();
    let mags = spec.magnitudes();

    const HALF: isize = 8; // 17-tap median filters

    let median = |mut v: Vec<f64>| -> f64 {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v[v.len() / 2]
    };

    // harmonic: median across time per bin; percussive: across frequency
    let mut harm = vec![vec![0.0f64; bins]; n_frames];
    let mut perc = vec![vec![0.0f64; bins]; n_frames];
    for t in 0..n_frames {
        for k in 0..bins {
            let tw: Vec<f64> = (-HALF..=HALF)
                .map(|d| {
                    let i = (t as isize + d).clamp(0, n_frames as isize - 1) as usize;
                    mags[i][k]
                })
                .collect();
            harm[t][k] = median(tw);
            let fw: Vec<f64> = (-HALF..=HALF)
                .map(|d| {
                    let i = (k as isize + d).clamp(0, bins as isize - 1) as usize;
                    mags[t][i]
                })
                .collect();
            perc[t][k] = median(fw);
        }
    }

    for t in 0..n_frames {
        for k in 0..bins {
            let h2 = harm[t][k] * harm[t][k];
            let p2 = perc[t][k] * perc[t][k];
            let mask = if h2 + p2 > 0.0 { h2 / (h2 + p2) } else { 0.0 };
            spec.frames[t][k] *= mask;
        }
    }
    Ok(istft(&spec)?)
}
