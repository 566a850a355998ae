//! Oracles shared by the integration tests. Nothing here calls the t-law or
//! marginal-likelihood code paths under test.

#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};

pub fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/ozone_surrogate.csv")
}

/// Uncentred design `[1 | X]`.
pub fn raw_design(x: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, p) = x.shape();
    let mut z = DMatrix::from_element(n, p + 1, 1.0);
    z.view_mut((0, 1), (n, p)).copy_from(x);
    z
}

/// Centred design `[1 | X - mean]`.
pub fn centred_design(x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut z = raw_design(x);
    let n = x.nrows() as f64;
    for j in 1..z.ncols() {
        let m = z.column(j).sum() / n;
        z.column_mut(j).add_scalar_mut(-m);
    }
    z
}

fn log_trapezoid(f: impl Fn(f64) -> f64, lo: f64, hi: f64, h: f64) -> f64 {
    let steps = ((hi - lo) / h).ceil() as usize;
    let h = (hi - lo) / steps as f64;
    let vals: Vec<f64> = (0..=steps)
        .map(|i| {
            let w = if i == 0 || i == steps { 0.5f64.ln() } else { 0.0 };
            f(lo + i as f64 * h) + w
        })
        .collect();
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + vals.iter().map(|v| (v - max).exp()).sum::<f64>().ln() + h.ln()
}

/// `ln ∫₀^∞ (σ²)^{-a} exp(-c/σ²) dσ²/σ²` by the trapezoid rule in `u = ln σ²`.
fn log_sigma_integral(a: f64, c: f64) -> f64 {
    let peak = (c / a).ln();
    log_trapezoid(|u| -a * u - c * (-u).exp(), peak - 40.0, peak + 40.0 / a.min(1.0) + 80.0, 2e-3)
}

/// Normalised log-density of `θ` under the joint `(θ, σ²)` law
/// `∝ σ⁻² · (σ²)^{-n·b/2} exp(-b‖y − Zθ‖² / (2σ²))`, with `σ²` integrated
/// out numerically. The normalising constant integrates `θ` out with the
/// Gaussian integral and `σ²` numerically.
pub fn quadrature_log_density(z: &DMatrix<f64>, y: &[f64], b: f64, theta: &DVector<f64>) -> f64 {
    let n = y.len() as f64;
    let k = z.ncols() as f64;
    let yv = DVector::from_column_slice(y);
    let ztz = z.transpose() * z;
    let theta_hat = ztz.clone().lu().solve(&(z.transpose() * &yv)).unwrap();
    let rss = (&yv - z * &theta_hat).norm_squared();
    let s = (&yv - z * theta).norm_squared();

    let log_unnorm = log_sigma_integral(n * b / 2.0, b * s / 2.0);
    // ∫ exp(-b(rss + Q)/(2σ²)) dθ = exp(-b·rss/(2σ²)) (2πσ²/b)^{k/2} |ZᵀZ|^{-1/2}
    let log_norm = log_sigma_integral((n * b - k) / 2.0, b * rss / 2.0)
        + 0.5 * k * (2.0 * std::f64::consts::PI / b).ln()
        - 0.5 * ztz.determinant().ln();
    log_unnorm - log_norm
}

/// Inclusion probabilities by direct summation over model bitmasks.
pub fn brute_inclusion(probs: &[f64], p: usize) -> Vec<f64> {
    (0..p).map(|j| probs.iter().enumerate().filter(|(bits, _)| (bits >> j) & 1 == 1).map(|(_, &pr)| pr).sum()).collect()
}
