//! Pitch shifting: TD-PSOLA when formants should be preserved, otherwise a
//! resample-plus-stretch chain that shifts formants along with the pitch.

use crate::error::PerturbError;
use crate::spec::QualityMode;
use crate::vocoder::time_stretch;
use audio_core::pitch::{track_f0, F0_MAX_HZ, F0_MIN_HZ};
use audio_core::resample::resample_by_factor;
use audio_core::Waveform;

/// Result of a pitch shift. `used_fallback` is set when formant
/// preservation was requested but the signal had no usable pitch contour
/// and the resampling path was taken instead.
#[derive(Debug, Clone)]
pub struct PitchShiftOutput {
    pub waveform: Waveform,
    pub used_fallback: bool,
}

/// Shifts pitch by `semitones` in [-4, 4]. Duration is preserved.
pub fn pitch_shift(
    x: &Waveform,
    semitones: f64,
    formant_preservation: bool,
) -> Result<PitchShiftOutput, PerturbError> {
    if !(-4.0..=4.0).contains(&semitones) {
        return Err(PerturbError::ParamOutOfRange(format!(
            "semitones {semitones} outside [-4, 4]"
        )));
    }
    let ratio = 2f64.powf(semitones / 12.0);
    if (ratio - 1.0).abs() < 1e-9 {
        return Ok(PitchShiftOutput {
            waveform: x.clone(),
            used_fallback: false,
        });
    }
    if formant_preservation {
        if let Some(waveform) = psola_shift(x, ratio) {
            return Ok(PitchShiftOutput {
                waveform,
                used_fallback: false,
            });
        }
        let waveform = resample_shift(x, ratio)?;
        return Ok(PitchShiftOutput {
            waveform,
            used_fallback: true,
        });
    }
    Ok(PitchShiftOutput {
        waveform: resample_shift(x, ratio)?,
        used_fallback: false,
    })
}

/// Resampling path: playback-rate change (pitch and formants move together)
/// followed by a time stretch that restores the original duration.
fn resample_shift(x: &Waveform, ratio: f64) -> Result<Waveform, PerturbError> {
    let sped = resample_by_factor(x, ratio)?;
    let restored = time_stretch(&sped, 1.0 / ratio, QualityMode::High)?;
    Ok(restored.fit_length(x.len()))
}

/// TD-PSOLA: epoch-synchronous grain overlap-add. Returns `None` when the
/// pitch tracker finds too little voicing to place epochs.
fn psola_shift(x: &Waveform, ratio: f64) -> Option<Waveform> {
    let sr = x.sample_rate_hz() as f64;
    let n = x.len();
    let frame_len = (0.025 * sr).round() as usize;
    let hop = (0.010 * sr).round() as usize;
    if n < 2 * frame_len {
        return None;
    }
    let contour = track_f0(x, frame_len, hop);
    let voiced = contour.iter().filter(|f| **f > 0.0).count();
    if voiced < 3 {
        return None;
    }

    // fill unvoiced frames from their nearest voiced neighbors so the
    // period estimate is defined everywhere the marks walk
    let mut f0 = contour.clone();
    let mut last = 0.0;
    for v in f0.iter_mut() {
        if *v > 0.0 {
            last = *v;
        } else if last > 0.0 {
            *v = last;
        }
    }
    let mut next = 0.0;
    for v in f0.iter_mut().rev() {
        if *v > 0.0 {
            next = *v;
        } else if next > 0.0 {
            *v = next;
        }
    }

    let period_at = |pos: f64| -> f64 {
        let idx = ((pos / hop as f64) as usize).min(f0.len() - 1);
        (sr / f0[idx]).clamp(sr / F0_MAX_HZ, sr / F0_MIN_HZ)
    };

    let s = x.samples();
    // analysis epochs: start near the first voiced frame at a local signal
    // maximum, then advance one period at a time with local refinement
    let first_voiced = contour.iter().position(|f| *f > 0.0).unwrap_or(0);
    let start = first_voiced * hop;
    let p0 = period_at(start as f64).round() as usize;
    let mut m = (start..(start + p0.max(1)).min(n))
        .max_by(|a, b| s[*a].partial_cmp(&s[*b]).unwrap())?;
    let mut marks = vec![m];
    loop {
        let p = period_at(m as f64);
        let pred = m + p.round() as usize;
        if pred >= n {
            break;
        }
        let slack = ((p / 5.0).round() as usize).max(1);
        let lo = pred.saturating_sub(slack);
        let hi = (pred + slack).min(n - 1);
        m = (lo..=hi).max_by(|a, b| s[*a].partial_cmp(&s[*b]).unwrap())?;
        if m <= *marks.last().unwrap() {
            m = *marks.last().unwrap() + p.round().max(1.0) as usize;
            if m >= n {
                break;
            }
        }
        marks.push(m);
    }
    if marks.len() < 3 {
        return None;
    }

    // synthesis epochs spaced by period / ratio on the same timeline
    let mut acc = vec![0.0f64; n];
    let mut wsum = vec![0.0f64; n];
    let mut pos = marks[0] as f64;
    while (pos as usize) < n {
        let center = pos.round() as usize;
        // nearest analysis epoch
        let j = match marks.binary_search(&center) {
            Ok(j) => j,
            Err(j) => {
                if j == 0 {
                    0
                } else if j >= marks.len() {
                    marks.len() - 1
                } else if center - marks[j - 1] <= marks[j] - center {
                    j - 1
                } else {
                    j
                }
            }
        };
        let am = marks[j];
        let half = period_at(am as f64).round() as i64;
        for i in -half..=half {
            let src = am as i64 + i;
            let dst = center as i64 + i;
            if src < 0 || src >= n as i64 || dst < 0 || dst >= n as i64 {
                continue;
            }
            let w = 0.5
                - 0.5
                    * (std::f64::consts::PI * (i + half) as f64 / half as f64)
                        .cos();
            acc[dst as usize] += s[src as usize] * w;
            wsum[dst as usize] += w;
        }
        pos += period_at(pos) / ratio;
    }

    let out: Vec<f64> = (0..n)
        .map(|i| {
            if wsum[i] >= 0.25 {
                acc[i] / wsum[i]
            } else {
                s[i]
            }
        })
        .collect();
    Waveform::new(out, x.sample_rate_hz()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use audio_core::pitch::median_voiced_f0;
    use rand::{Rng, SeedableRng};

    fn vowel(f0: f64) -> Waveform {
        let sr = 16_000u32;
        let n = 16_000usize;
        let samples: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / sr as f64;
                let mut v = 0.0;
                for h in 1..=8 {
                    v += (2.0 * std::f64::consts::PI * f0 * h as f64 * t).sin() / h as f64;
                }
                0.3 * v
            })
            .collect();
        Waveform::new(samples, sr).unwrap()
    }

    fn measured_f0(w: &Waveform) -> f64 {
        median_voiced_f0(&track_f0(w, 400, 160))
    }

    #[test]
    fn psola_up_four_semitones() {
        let x = vowel(200.0);
        let out = pitch_shift(&x, 4.0, true).unwrap();
        assert!(!out.used_fallback);
        assert_eq!(out.waveform.len(), x.len());
        let f = measured_f0(&out.waveform);
        let expected = 200.0 * 2f64.powf(4.0 / 12.0); // 251.98 Hz
        assert!((f / expected - 1.0).abs() < 0.02, "f0 {f}, expected {expected}");
    }

    #[test]
    fn psola_down_four_semitones() {
        let x = vowel(200.0);
        let out = pitch_shift(&x, -4.0, true).unwrap();
        assert!(!out.used_fallback);
        assert_eq!(out.waveform.len(), x.len());
        let f = measured_f0(&out.waveform);
        let expected = 200.0 * 2f64.powf(-4.0 / 12.0); // 158.74 Hz
        assert!((f / expected - 1.0).abs() < 0.02, "f0 {f}, expected {expected}");
    }

    #[test]
    fn resample_path_shifts_pitch() {
        let x = vowel(220.0);
        let out = pitch_shift(&x, 3.0, false).unwrap();
        assert!(!out.used_fallback);
        assert_eq!(out.waveform.len(), x.len());
        let f = measured_f0(&out.waveform);
        let expected = 220.0 * 2f64.powf(3.0 / 12.0);
        assert!((f / expected - 1.0).abs() < 0.02, "f0 {f}, expected {expected}");
    }

    #[test]
    fn unvoiced_input_falls_back() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let x = Waveform::new(
            (0..16_000).map(|_| rng.gen_range(-0.3f64..0.3)).collect(),
            16_000,
        )
        .unwrap();
        let out = pitch_shift(&x, 2.0, true).unwrap();
        assert!(out.used_fallback);
        assert_eq!(out.waveform.len(), x.len());
    }

    #[test]
    fn zero_semitones_is_identity() {
        let x = vowel(180.0);
        let out = pitch_shift(&x, 0.0, true).unwrap();
        assert_eq!(out.waveform, x);
        assert!(!out.used_fallback);
    }

    #[test]
    fn out_of_range_rejected() {
        let x = vowel(200.0);
        assert!(pitch_shift(&x, 4.5, true).is_err());
        assert!(pitch_shift(&x, -7.0, false).is_err());
    }
}
