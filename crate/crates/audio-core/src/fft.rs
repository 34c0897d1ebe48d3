//! Thin FFT helpers shared by the transform and convolution code.

pub use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// In-place forward complex FFT.
pub fn fft_forward(buf: &mut [Complex<f64>]) {
    FftPlanner::new().plan_fft_forward(buf.len()).process(buf);
}

/// In-place inverse complex FFT, normalized by 1/N.
pub fn fft_inverse(buf: &mut [Complex<f64>]) {
    let n = buf.len();
    FftPlanner::new().plan_fft_inverse(n).process(buf);
    let scale = 1.0 / n as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

pub fn next_pow2(n: usize) -> usize {
    n.next_power_of_two()
}

/// Full linear convolution via FFT: output length a.len() + b.len() - 1.
pub fn fft_convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    let n = next_pow2(out_len);
    let mut fa: Vec<Complex<f64>> = a.iter().map(|&x| Complex::new(x, 0.0)).collect();
    let mut fb: Vec<Complex<f64>> = b.iter().map(|&x| Complex::new(x, 0.0)).collect();
    fa.resize(n, Complex::new(0.0, 0.0));
    fb.resize(n, Complex::new(0.0, 0.0));
    fft_forward(&mut fa);
    fft_forward(&mut fb);
    for (x, y) in fa.iter_mut().zip(fb.iter()) {
        *x *= *y;
    }
    fft_inverse(&mut fa);
    fa[..out_len].iter().map(|c| c.re).collect()
}

/// Direct O(n*m) convolution; the oracle counterpart of `fft_convolve`.
pub fn naive_convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn convolution_matches_naive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let na = rng.gen_range(1..200);
            let nb = rng.gen_range(1..100);
            let a: Vec<f64> = (0..na).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let b: Vec<f64> = (0..nb).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let fast = fft_convolve(&a, &b);
            let slow = naive_convolve(&a, &b);
            assert_eq!(fast.len(), slow.len());
            for (x, y) in fast.iter().zip(slow.iter()) {
                assert!((x - y).abs() < 1e-9, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn impulse_is_identity() {
        let a = vec![0.5, -0.25, 1.0];
        let out = fft_convolve(&a, &[1.0]);
        for (x, y) in a.iter().zip(out.iter()) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
