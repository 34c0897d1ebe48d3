//! Colored noise generation and SNR-controlled mixing.

use crate::error::PerturbError;
use crate::spec::NoiseType;
use audio_core::fft::{fft_forward, fft_inverse};
use audio_core::Waveform;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex;

/// Unit-RMS colored noise. White is i.i.d. Gaussian; pink and brown are
/// produced by magnitude-scaling the DFT of a white draw (power 1/f and
/// 1/f^2 respectively), keeping the random phases, zeroing the DC bin, and
/// renormalizing to unit RMS.
pub fn gen_colored_noise(length: usize, noise_type: NoiseType, rng: &mut impl Rng) -> Waveform {
    assert!(length >= 256, "noise length must be >= 256 samples");
    let mut samples: Vec<f64> = (0..length)
        .map(|_| <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng))
        .collect();

    if !matches!(noise_type, NoiseType::White) {
        let n = length;
        let mut buf: Vec<Complex<f64>> = samples.iter().map(|&x| Complex::new(x, 0.0)).collect();
        fft_forward(&mut buf);
        // power exponent: pink 1, brown 2 -> amplitude f^(-exp/2)
        let amp_exp = match noise_type {
            NoiseType::Pink => 0.5,
            NoiseType::Brown => 1.0,
            NoiseType::White => unreachable!(),
        };
        buf[0] = Complex::new(0.0, 0.0);
        for k in 1..n {
            // mirror-symmetric frequency index so conjugate symmetry is kept
            let f = k.min(n - k) as f64;
            buf[k] *= f.powf(-amp_exp);
        }
        fft_inverse(&mut buf);
        samples = buf.into_iter().map(|c| c.re).collect();
    }

    let rms = (samples.iter().map(|s| s * s).sum::<f64>() / length as f64).sqrt();
    if rms > 0.0 {
        for s in &mut samples {
            *s /= rms;
        }
    }
    Waveform::new(samples, 16_000).expect("noise synthesis produced non-finite samples")
}

/// Additive-noise parameters after sampling.
#[derive(Debug, Clone, Copy)]
pub struct AdditiveNoiseParams {
    pub snr_db: f64,
    pub noise_type: NoiseType,
    pub temporal_mask_active: bool,
}

/// Adds colored noise at the requested SNR. When the temporal mask is
/// active the noise is gated to one contiguous segment (length uniform in
/// [20%, 80%] of the clip) and the SNR is measured over the gated region.
pub fn add_noise_at_snr(
    x: &Waveform,
    params: &AdditiveNoiseParams,
    rng: &mut impl Rng,
) -> Result<Waveform, PerturbError> {
    if x.energy() == 0.0 {
        return Err(PerturbError::ZeroPowerInput);
    }
    let n = x.len();
    let noise_full = gen_colored_noise(n.max(256), params.noise_type, rng);
    let mut noise: Vec<f64> = noise_full.samples()[..n].to_vec();

    let (seg_start, seg_len) = if params.temporal_mask_active {
        let frac = rng.gen_range(0.2..=0.8);
        let seg_len = ((n as f64 * frac).round() as usize).clamp(1, n);
        let seg_start = rng.gen_range(0..=n - seg_len);
        for (i, v) in noise.iter_mut().enumerate() {
            if i < seg_start || i >= seg_start + seg_len {
                *v = 0.0;
            }
        }
        (seg_start, seg_len)
    } else {
        (0, n)
    };

    // SNR over the gated region
    let seg = seg_start..seg_start + seg_len;
    let sig_power: f64 = x.samples()[seg.clone()].iter().map(|s| s * s).sum::<f64>()
        / seg_len as f64;
    let noise_power: f64 = noise[seg].iter().map(|s| s * s).sum::<f64>() / seg_len as f64;
    if sig_power == 0.0 || noise_power == 0.0 {
        return Err(PerturbError::ZeroPowerInput);
    }
    let alpha = (sig_power / noise_power).sqrt() / 10f64.powf(params.snr_db / 20.0);

    let samples: Vec<f64> = x
        .samples()
        .iter()
        .zip(noise.iter())
        .map(|(s, v)| s + alpha * v)
        .collect();
    Ok(Waveform::new(samples, x.sample_rate_hz())?)
}
