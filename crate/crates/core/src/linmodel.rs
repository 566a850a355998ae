//! Regression sufficient statistics and the closed-form Student-t laws of the
//! coefficient vector.
//!
//! The design for a model is `[1 | X_γ]` with every predictor column centred.
//! Under the reference prior `π(θ, σ²) ∝ σ⁻²` and a likelihood raised to a
//! power `b ∈ (0, 1]`, integrating `σ²` out of the joint leaves a
//! multivariate t on `θ = (α, β)` with
//!
//! * degrees of freedom `n·b − k`,
//! * location `θ̂` (the least-squares estimate, independent of `b`),
//! * scale `rss / (n·b − k) · (ZᵀZ)⁻¹`.
//!
//! `b = 1` is the ordinary posterior; a small `b` gives the fractional prior.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fbf::ModelIndex;
use crate::linalg::{Cholesky, PIVOT_REL_TOL};
use crate::mvt::MvT;

/// Slack when checking `n·b − k ≥ 1`, so `b = (k+1)/n` is accepted despite rounding.
const DF_SLACK: f64 = 1e-9;

/// Least-squares statistics for the centred design `[1 | X_γ]`.
#[derive(Debug, Clone)]
pub struct SuffStats {
    pub xtx: DMatrix<f64>,
    pub xty: DVector<f64>,
    pub theta_hat: DVector<f64>,
    pub rss: f64,
    pub n: usize,
    pub k: usize,
    /// The response is reproduced exactly by the design.
    pub degenerate: bool,
    chol: Cholesky,
}

impl SuffStats {
    /// `ln |ZᵀZ|`.
    pub fn ln_det_xtx(&self) -> f64 {
        self.chol.ln_det()
    }

    /// `(ZᵀZ)⁻¹`.
    pub fn xtx_inverse(&self) -> DMatrix<f64> {
        self.chol.inverse()
    }
}

/// Build the centred design `[1 | X_γ]` for the predictors in `gamma`.
pub fn design_matrix(x: &DMatrix<f64>, gamma: ModelIndex) -> DMatrix<f64> {
    let n = x.nrows();
    let cols = gamma.included();
    let mut z = DMatrix::<f64>::zeros(n, cols.len() + 1);
    z.column_mut(0).fill(1.0);
    for (c, &j) in cols.iter().enumerate() {
        let col = x.column(j);
        let mean = col.sum() / n as f64;
        for i in 0..n {
            z[(i, c + 1)] = col[i] - mean;
        }
    }
    z
}

/// Fit `y` on the centred design `[1 | X_γ]`.
///
/// `x` must be complete in the columns selected by `gamma`.
pub fn fit_sufficient_stats(x: &DMatrix<f64>, y: &[f64], gamma: ModelIndex) -> Result<SuffStats> {
    let n = y.len();
    if x.nrows() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.nrows() });
    }
    if gamma.p() != x.ncols() {
        return Err(Error::DimensionMismatch { expected: x.ncols(), got: gamma.p() });
    }
    let z = design_matrix(x, gamma);
    let k = z.ncols();
    if n <= k {
        return Err(Error::InsufficientRows { rows: n, needed: k + 1 });
    }
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("design contains missing or non-finite cells".into()));
    }
    let yv = DVector::from_column_slice(y);
    let xtx = z.tr_mul(&z);
    let xty = z.tr_mul(&yv);
    let chol =
        Cholesky::new(&xtx, PIVOT_REL_TOL).map_err(|f| Error::RankDeficient { column: f.column, pivot: f.pivot })?;
    let theta_hat = chol.solve(&xty);
    let resid = &yv - &z * &theta_hat;
    let rss = resid.norm_squared();

    let ybar = yv.mean();
    let tss: f64 = yv.iter().map(|v| (v - ybar).powi(2)).sum();
    let degenerate = rss <= 1e-24 * tss.max(f64::MIN_POSITIVE) || rss == 0.0;

    Ok(SuffStats { xtx, xty, theta_hat, rss, n, k, degenerate, chol })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FractionMode {
    Minimal,
    Explicit,
}

/// Likelihood fraction `b ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionConfig {
    pub b: f64,
    pub mode: FractionMode,
}

impl FractionConfig {
    pub fn explicit(b: f64) -> Result<Self> {
        if !(b > 0.0 && b <= 1.0) {
            return Err(Error::InvalidArgument(format!("fraction b = {b} outside (0, 1]")));
        }
        Ok(Self { b, mode: FractionMode::Explicit })
    }

    /// Fractional degrees of freedom `n·b − k`, checked to be at least one.
    pub fn fractional_df(&self, n: usize, k: usize) -> Result<f64> {
        let df = n as f64 * self.b - k as f64;
        if df < 1.0 - DF_SLACK {
            return Err(Error::FractionTooSmall { b: self.b, n, k, df });
        }
        Ok(df)
    }
}

/// The minimal fraction `b = (k + 1) / n`: one training sample's worth of
/// information for `k` regression coefficients plus the error variance.
pub fn minimal_fraction(n: usize, k: usize) -> Result<FractionConfig> {
    if n < k + 2 {
        return Err(Error::InsufficientRows { rows: n, needed: k + 2 });
    }
    Ok(FractionConfig { b: (k + 1) as f64 / n as f64, mode: FractionMode::Minimal })
}

/// Resolve a fraction request against a sample size and full-model size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FractionChoice {
    Minimal,
    Explicit(f64),
}

impl FractionChoice {
    pub fn resolve(self, n: usize, k: usize) -> Result<FractionConfig> {
        match self {
            FractionChoice::Minimal => minimal_fraction(n, k),
            FractionChoice::Explicit(b) => FractionConfig::explicit(b),
        }
    }
}

fn t_law(s: &SuffStats, df: f64) -> Result<MvT> {
    if s.degenerate {
        return Err(Error::DegenerateFit);
    }
    let mut sigma = s.xtx_inverse();
    sigma *= s.rss / df;
    MvT::new(s.theta_hat.clone(), sigma, df)
}

/// Marginal posterior of `θ = (α, β)`.
pub fn posterior_t(s: &SuffStats) -> Result<MvT> {
    if s.n < s.k + 1 {
        return Err(Error::InsufficientRows { rows: s.n, needed: s.k + 1 });
    }
    t_law(s, (s.n - s.k) as f64)
}

/// Marginal fractional prior of `θ`: the posterior with the likelihood raised to `b`.
pub fn fractional_t(s: &SuffStats, f: &FractionConfig) -> Result<MvT> {
    if f.b == 1.0 {
        return posterior_t(s);
    }
    let df = f.fractional_df(s.n, s.k)?;
    t_law(s, df)
}

/// Closed-form `ln m(d^b)` for a model with statistics `s`, under `π ∝ σ⁻²`:
///
/// `−(ν/2) ln π − (k/2) ln b − ½ ln|ZᵀZ| + ln Γ(ν/2) − (ν/2) ln(b·rss)`, `ν = n·b − k`.
pub fn log_fractional_marginal(s: &SuffStats, b: f64) -> Result<f64> {
    let nu = s.n as f64 * b - s.k as f64;
    if nu <= 0.0 {
        return Err(Error::FractionTooSmall { b, n: s.n, k: s.k, df: nu });
    }
    if s.degenerate {
        return Err(Error::DegenerateFit);
    }
    let half = 0.5 * nu;
    Ok(-half * std::f64::consts::PI.ln() - 0.5 * s.k as f64 * b.ln() - 0.5 * s.ln_det_xtx()
        + crate::special::ln_gamma(half)
        - half * (b * s.rss).ln())
}
