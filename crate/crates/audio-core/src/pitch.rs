//! Autocorrelation pitch estimation shared by the analysis operators and
//! the pitch-synchronous synthesis code.

use crate::waveform::Waveform;

/// Search range for adult speech.
pub const F0_MIN_HZ: f64 = 60.0;
pub const F0_MAX_HZ: f64 = 400.0;
/// Normalized autocorrelation peak required to call a frame voiced.
pub const VOICING_THRESHOLD: f64 = 0.5;

/// Per-frame f0 estimate for one analysis frame. Returns `None` when the
/// frame fails the voicing criterion.
///
/// Uses the normalized autocorrelation with parabolic interpolation of the
/// lag peak.
pub fn frame_f0(frame: &[f64], sample_rate_hz: u32) -> Option<f64> {
    let n = frame.len();
    let sr = sample_rate_hz as f64;
    let lag_min = (sr / F0_MAX_HZ).floor() as usize;
    let lag_max = ((sr / F0_MIN_HZ).ceil() as usize).min(n.saturating_sub(1));
    if lag_min < 2 || lag_min >= lag_max {
        return None;
    }
    let mean = frame.iter().sum::<f64>() / n as f64;
    let x: Vec<f64> = frame.iter().map(|s| s - mean).collect();
    let e0: f64 = x.iter().map(|s| s * s).sum();
    if e0 <= 1e-12 {
        return None;
    }

    let mut nacf = vec![0.0f64; lag_max + 1];
    for lag in lag_min..=lag_max {
        let mut num = 0.0;
        let mut e_lag = 0.0;
        for i in 0..n - lag {
            num += x[i] * x[i + lag];
            e_lag += x[i + lag] * x[i + lag];
        }
        let e_head: f64 = x[..n - lag].iter().map(|s| s * s).sum();
        let denom = (e_head * e_lag).sqrt();
        nacf[lag] = if denom > 1e-12 { num / denom } else { 0.0 };
    }

    let mut global_best = lag_min;
    for lag in lag_min..=lag_max {
        if nacf[lag] > nacf[global_best] {
            global_best = lag;
        }
    }
    if nacf[global_best] < VOICING_THRESHOLD {
        return None;
    }
    // prefer the earliest strong local peak over the global maximum, which
    // otherwise lands on period multiples (octave errors)
    let accept = (0.9 * nacf[global_best]).max(VOICING_THRESHOLD);
    let mut best = global_best;
    for lag in lag_min..=lag_max {
        let is_local_peak = (lag == lag_min || nacf[lag] >= nacf[lag - 1])
            && (lag == lag_max || nacf[lag] >= nacf[lag + 1]);
        if is_local_peak && nacf[lag] >= accept {
            best = lag;
            break;
        }
    }

    // parabolic interpolation around the peak
    let lag = if best > lag_min && best < lag_max {
        let (a, b, c) = (nacf[best - 1], nacf[best], nacf[best + 1]);
        let denom = a - 2.0 * b + c;
        let offset = if denom.abs() > 1e-12 {
            (0.5 * (a - c) / denom).clamp(-0.5, 0.5)
        } else {
            0.0
        };
        best as f64 + offset
    } else {
        best as f64
    };
    Some(sr / lag)
}

/// Frame-by-frame f0 contour; 0.0 marks unvoiced frames.
pub fn track_f0(w: &Waveform, frame_len: usize, hop: usize) -> Vec<f64> {
    let s = w.samples();
    if s.len() < frame_len || hop == 0 {
        return Vec::new();
    }
    let n_frames = (s.len() - frame_len) / hop + 1;
    (0..n_frames)
        .map(|f| frame_f0(&s[f * hop..f * hop + frame_len], w.sample_rate_hz()).unwrap_or(0.0))
        .collect()
}

/// Median of the voiced (nonzero) contour values; 0 when everything is
/// unvoiced.
pub fn median_voiced_f0(contour: &[f64]) -> f64 {
    let mut voiced: Vec<f64> = contour.iter().copied().filter(|f| *f > 0.0).collect();
    if voiced.is_empty() {
        return 0.0;
    }
    voiced.sort_by(|a, b| a.partial_cmp(b).unwrap());
    voiced[voiced.len() / 2]
}
