//! Signal-space norms and ratios used by every other module.

use crate::error::AudioError;
use crate::waveform::Waveform;

/// L2 distance between two waveforms after length alignment.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SignalDistance(f64);

impl SignalDistance {
    pub fn value(&self) -> f64 {
        self.0
    }
}

/// L2 norm of the sample-wise difference. The shorter signal is zero-padded
/// to the longer length, so the metric is total even across length-changing
/// transforms.
pub fn signal_distance(a: &Waveform, b: &Waveform) -> Result<SignalDistance, AudioError> {
    if a.sample_rate_hz() != b.sample_rate_hz() {
        return Err(AudioError::SampleRateMismatch(
            a.sample_rate_hz(),
            b.sample_rate_hz(),
        ));
    }
    let n = a.len().max(b.len());
    let mut acc = 0.0f64;
    for i in 0..n {
        let x = a.samples().get(i).copied().unwrap_or(0.0);
        let y = b.samples().get(i).copied().unwrap_or(0.0);
        let d = x - y;
        acc += d * d;
    }
    Ok(SignalDistance(acc.sqrt()))
}

/// `10 * log10(power(clean) / power(noisy - clean))`. Returns +inf when the
/// residual power is zero.
pub fn measure_snr(clean: &Waveform, noisy: &Waveform) -> Result<f64, AudioError> {
    if clean.sample_rate_hz() != noisy.sample_rate_hz() {
        return Err(AudioError::SampleRateMismatch(
            clean.sample_rate_hz(),
            noisy.sample_rate_hz(),
        ));
    }
    if clean.len() != noisy.len() {
        return Err(AudioError::LengthMismatch(clean.len(), noisy.len()));
    }
    let clean_power = clean.energy();
    if clean_power == 0.0 {
        return Err(AudioError::ZeroPower);
    }
    let residual_power: f64 = clean
        .samples()
        .iter()
        .zip(noisy.samples())
        .map(|(c, n)| {
            let d = n - c;
            d * d
        })
        .sum();
    if residual_power == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (clean_power / residual_power).log10())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn wave(samples: Vec<f64>) -> Waveform {
        Waveform::new(samples, 16_000).unwrap()
    }

    fn rand_wave(rng: &mut ChaCha8Rng, len: usize) -> Waveform {
        wave((0..len).map(|_| rng.gen_range(-1.0..1.0)).collect())
    }

    #[test]
    fn distance_identity_and_negation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = rand_wave(&mut rng, 500);
        assert_eq!(signal_distance(&x, &x).unwrap().value(), 0.0);

        // unit-norm x against -x has distance exactly 2
        let norm = x.energy().sqrt();
        let u = wave(x.samples().iter().map(|s| s / norm).collect());
        let nu = wave(u.samples().iter().map(|s| -s).collect());
        let d = signal_distance(&u, &nu).unwrap().value();
        assert!((d - 2.0).abs() < 1e-12);
    }

    #[test]
    fn distance_of_added_delta_is_delta_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = rand_wave(&mut rng, 300);
        let delta = rand_wave(&mut rng, 300);
        let y = wave(
            x.samples()
                .iter()
                .zip(delta.samples())
                .map(|(a, b)| a + b)
                .collect(),
        );
        let d = signal_distance(&x, &y).unwrap().value();
        assert!((d - delta.energy().sqrt()).abs() < 1e-10);
    }

    #[test]
    fn distance_symmetry_and_triangle_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let la = rng.gen_range(10..400);
            let lb = rng.gen_range(10..400);
            let lc = rng.gen_range(10..400);
            let a = rand_wave(&mut rng, la);
            let b = rand_wave(&mut rng, lb);
            let c = rand_wave(&mut rng, lc);
            let ab = signal_distance(&a, &b).unwrap().value();
            let ba = signal_distance(&b, &a).unwrap().value();
            assert!((ab - ba).abs() < 1e-12);
            let ac = signal_distance(&a, &c).unwrap().value();
            let cb = signal_distance(&c, &b).unwrap().value();
            assert!(ab <= ac + cb + 1e-9);
        }
    }

    #[test]
    fn snr_equal_power_is_zero_db() {
        let sr = 16_000u32;
        let n = 16_000usize;
        let clean: Vec<f64> = (0..n)
            .map(|i| (2.0 * std::f64::consts::PI * 440.0 * i as f64 / sr as f64).sin())
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let noise: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0f64..1.0)).collect();
        // scale the noise to the clean signal's power
        let cp: f64 = clean.iter().map(|s| s * s).sum();
        let np: f64 = noise.iter().map(|s| s * s).sum();
        let g = (cp / np).sqrt();
        let noisy: Vec<f64> = clean.iter().zip(&noise).map(|(c, n)| c + g * n).collect();
        let snr = measure_snr(&wave(clean), &wave(noisy)).unwrap();
        assert!(snr.abs() < 0.01, "snr {snr}");
    }

    #[test]
    fn snr_ten_db_forced_by_definition() {
        let sr = 16_000u32;
        let n = 16_000usize;
        let clean: Vec<f64> = (0..n)
            .map(|i| {
                std::f64::consts::SQRT_2
                    * (2.0 * std::f64::consts::PI * 440.0 * i as f64 / sr as f64).sin()
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let noise: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0f64..1.0)).collect();
        let cp: f64 = clean.iter().map(|s| s * s).sum();
        let np: f64 = noise.iter().map(|s| s * s).sum();
        let g = (cp / (10.0 * np)).sqrt(); // noise at 1/10 of the clean power
        let noisy: Vec<f64> = clean.iter().zip(&noise).map(|(c, n)| c + g * n).collect();
        let snr = measure_snr(&wave(clean), &wave(noisy)).unwrap();
        assert!((snr - 10.0).abs() < 0.1, "snr {snr}");
    }

    #[test]
    fn snr_identical_signals_is_infinite() {
        let x = wave(vec![0.1, -0.2, 0.3]);
        assert_eq!(measure_snr(&x, &x).unwrap(), f64::INFINITY);
    }

    #[test]
    fn snr_errors() {
        let x = wave(vec![0.1, 0.2]);
        let y = wave(vec![0.1, 0.2, 0.3]);
        assert!(matches!(
            measure_snr(&x, &y),
            Err(AudioError::LengthMismatch(2, 3))
        ));
        let z = wave(vec![0.0, 0.0]);
        assert!(matches!(measure_snr(&z, &x), Err(AudioError::ZeroPower)));
    }
}
