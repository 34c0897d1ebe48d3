//! Numeric feature extraction: the analysis operators return measured
//! values only, no prose.

use crate::error::OperatorError;
use audio_core::pitch;
use audio_core::{stft, Waveform, DEFAULT_HOP, DEFAULT_WINDOW_LEN};
use serde::{Deserialize, Serialize};

/// Measured features of one audio version. `rms_dbfs` is -inf for digital
/// silence; every other field is finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureReport {
    pub estimated_snr_db: f64,
    pub spectral_centroid_hz: f64,
    pub spectral_rolloff_hz: f64,
    pub spectral_flatness: f64,
    pub rms_dbfs: f64,
    pub f0_median_hz: f64,
    pub voiced_fraction: f64,
    pub duration_s: f64,
}

/// Pitch-tracker frame length and hop (25 ms / 10 ms).
pub fn pitch_frame_params(sample_rate_hz: u32) -> (usize, usize) {
    let sr = sample_rate_hz as f64;
    ((0.025 * sr).round() as usize, (0.010 * sr).round() as usize)
}

/// Per-frame f0 contour in Hz, 0 marking unvoiced frames.
pub fn track_pitch(x: &Waveform) -> Result<Vec<f64>, OperatorError> {
    let (frame_len, hop) = pitch_frame_params(x.sample_rate_hz());
    if x.len() < frame_len {
        return Err(OperatorError::TooShort {
            got: x.len(),
            need: frame_len,
        });
    }
    Ok(pitch::track_f0(x, frame_len, hop))
}

/// Computes the full feature report.
///
/// The SNR estimate is alignment-free: mean short-frame power over the
/// 10th-percentile frame power, so a clip with pauses reports how far its
/// noise floor sits below the speech level.
pub fn analyze_spectrum(x: &Waveform) -> Result<FeatureReport, OperatorError> {
    if x.len() < DEFAULT_WINDOW_LEN {
        return Err(OperatorError::TooShort {
            got: x.len(),
            need: DEFAULT_WINDOW_LEN,
        });
    }
    let spec = stft(x, DEFAULT_WINDOW_LEN, DEFAULT_HOP)?;
    let bins = spec.bin_count();
    let mut mean_power = vec![0.0f64; bins];
    for frame in &spec.frames {
        for (k, c) in frame.iter().enumerate() {
            mean_power[k] += c.norm_sqr();
        }
    }
    for p in &mut mean_power {
        *p /= spec.frame_count() as f64;
    }
    let total: f64 = mean_power.iter().skip(1).sum();

    let (centroid, rolloff, flatness) = if total > 0.0 {
        let centroid = mean_power
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, p)| spec.bin_hz(k) * p)
            .sum::<f64>()
            / total;
        let mut cum = 0.0;
        let mut rolloff = spec.bin_hz(bins - 1);
        for (k, p) in mean_power.iter().enumerate().skip(1) {
            cum += p;
            if cum >= 0.85 * total {
                rolloff = spec.bin_hz(k);
                break;
            }
        }
        let n = (bins - 1) as f64;
        let log_mean = mean_power
            .iter()
            .skip(1)
            .map(|p| (p + 1e-30).ln())
            .sum::<f64>()
            / n;
        let flatness = (log_mean.exp() / (total / n + 1e-30)).clamp(0.0, 1.0);
        (centroid, rolloff, flatness)
    } else {
        (0.0, 0.0, 0.0)
    };

    // frame-power SNR: mean power over the 10th-percentile floor
    let (frame_len, hop) = pitch_frame_params(x.sample_rate_hz());
    let s = x.samples();
    let mut frame_powers: Vec<f64> = (0..(s.len() - frame_len) / hop + 1)
        .map(|f| {
            let fr = &s[f * hop..f * hop + frame_len];
            fr.iter().map(|v| v * v).sum::<f64>() / frame_len as f64
        })
        .collect();
    let mean_fp = frame_powers.iter().sum::<f64>() / frame_powers.len() as f64;
    frame_powers.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let floor = frame_powers[frame_powers.len() / 10];
    let estimated_snr_db = if mean_fp > 0.0 {
        let floor = floor.max(mean_fp * 1e-6);
        10.0 * (mean_fp / floor).log10()
    } else {
        0.0
    };

    let contour = pitch::track_f0(x, frame_len, hop);
    let voiced_fraction = if contour.is_empty() {
        0.0
    } else {
        contour.iter().filter(|f| **f > 0.0).count() as f64 / contour.len() as f64
    };

    Ok(FeatureReport {
        estimated_snr_db,
        spectral_centroid_hz: centroid,
        spectral_rolloff_hz: rolloff,
        spectral_flatness: flatness,
        rms_dbfs: x.rms_dbfs(),
        f0_median_hz: pitch::median_voiced_f0(&contour),
        voiced_fraction,
        duration_s: x.duration_s(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use audio_core::synth::{sine, speech_like};
    use perturbations::rng::substream;

    #[test]
    fn pure_tone_centroid_and_flatness() {
        let x = sine(1000.0, 0.5, 16_000, 1.0);
        let r = analyze_spectrum(&x).unwrap();
        assert!((r.spectral_centroid_hz - 1000.0).abs() < 20.0, "{r:?}");
        assert!(r.spectral_flatness < 0.1, "{r:?}");
        assert!((r.duration_s - 1.0).abs() < 1e-9);
    }

    #[test]
    fn white_noise_is_flat() {
        let mut rng = substream(&[80, 3]);
        let x = perturbations::gen_colored_noise(16_000, perturbations::NoiseType::White, &mut rng);
        let r = analyze_spectrum(&x).unwrap();
        assert!(r.spectral_flatness > 0.8, "{}", r.spectral_flatness);
        assert!(r.voiced_fraction < 0.2);
    }

    #[test]
    fn zero_signal_sentinels() {
        let x = Waveform::silence(4000, 16_000);
        let r = analyze_spectrum(&x).unwrap();
        assert_eq!(r.rms_dbfs, f64::NEG_INFINITY);
        assert_eq!(r.f0_median_hz, 0.0);
        assert_eq!(r.voiced_fraction, 0.0);
        assert_eq!(r.spectral_flatness, 0.0);
    }

    #[test]
    fn speech_like_snr_estimate_tracks_added_noise() {
        let mut rng = substream(&[80, 4]);
        let clean = speech_like(140.0, 16_000, &mut rng);
        let clean_snr = analyze_spectrum(&clean).unwrap().estimated_snr_db;
        let noisy = perturbations::add_noise_at_snr(
            &clean,
            &perturbations::AdditiveNoiseParams {
                snr_db: 5.0,
                noise_type: perturbations::NoiseType::White,
                temporal_mask_active: false,
            },
            &mut rng,
        )
        .unwrap();
        let noisy_snr = analyze_spectrum(&noisy).unwrap().estimated_snr_db;
        assert!(
            clean_snr > noisy_snr + 10.0,
            "clean {clean_snr}, noisy {noisy_snr}"
        );
    }

    #[test]
    fn track_pitch_vowel() {
        let mut rng = substream(&[80, 5]);
        let x = speech_like(200.0, 16_000, &mut rng);
        let contour = track_pitch(&x).unwrap();
        let med = audio_core::pitch::median_voiced_f0(&contour);
        assert!((med - 200.0).abs() < 2.0, "median {med}");
    }

    #[test]
    fn too_short_rejected() {
        let x = Waveform::silence(100, 16_000);
        assert!(matches!(
            analyze_spectrum(&x),
            Err(OperatorError::TooShort { .. })
        ));
        assert!(matches!(
            track_pitch(&Waveform::silence(10, 16_000)),
            Err(OperatorError::TooShort { .. })
        ));
    }
}
