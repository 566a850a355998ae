//! Seeded synthetic regression data for tests, benchmarks and the bundled
//! surrogate fixture.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::data::Dataset;

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Independent standard-normal predictors; `y = 0.5·Σx + N(0, 1)`.
pub fn random_complete(n: usize, p: usize, seed: u64) -> (DMatrix<f64>, Vec<f64>) {
    random_regression(n, p, &vec![0.5; p], seed)
}

/// Independent standard-normal predictors; `y = 1 + Xβ + N(0, 1)`.
pub fn random_regression(n: usize, p: usize, beta: &[f64], seed: u64) -> (DMatrix<f64>, Vec<f64>) {
    assert_eq!(beta.len(), p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = DMatrix::from_fn(n, p, |_, _| normal(&mut rng));
    let y = (0..n).map(|i| 1.0 + (0..p).map(|j| x[(i, j)] * beta[j]).sum::<f64>() + normal(&mut rng)).collect();
    (x, y)
}

/// Predictors drawn from `N(0, corr)`; `y = intercept + Xβ + N(0, noise²)`.
pub fn correlated_regression(
    n: usize,
    corr: &DMatrix<f64>,
    beta: &[f64],
    intercept: f64,
    noise: f64,
    seed: u64,
) -> (DMatrix<f64>, Vec<f64>) {
    let p = corr.nrows();
    assert_eq!(beta.len(), p);
    let l = corr.clone().cholesky().expect("correlation matrix must be positive definite").l();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = DMatrix::<f64>::zeros(n, p);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let z = DVector::from_fn(p, |_, _| normal(&mut rng));
        let row = &l * z;
        x.set_row(i, &row.transpose());
        y.push(intercept + row.dot(&DVector::from_column_slice(beta)) + noise * normal(&mut rng));
    }
    (x, y)
}

/// Correlation matrix of the seven-predictor surrogate, variables `x4..x10`.
pub const SURROGATE_CORR: [[f64; 7]; 7] = [
    [1.00, 0.20, 0.10, 0.75, 0.70, -0.50, 0.20],
    [0.20, 1.00, 0.20, 0.10, 0.00, 0.20, 0.30],
    [0.10, 0.20, 1.00, 0.30, 0.35, -0.20, 0.50],
    [0.75, 0.10, 0.30, 1.00, 0.85, -0.60, 0.30],
    [0.70, 0.00, 0.35, 0.85, 1.00, -0.55, 0.35],
    [-0.50, 0.20, -0.20, -0.60, -0.55, 1.00, -0.10],
    [0.20, 0.30, 0.50, 0.30, 0.35, -0.10, 1.00],
];

/// Slopes of the surrogate on standardised predictors.
pub const SURROGATE_BETA: [f64; 7] = [0.0, 0.0, 0.35, 0.6, 0.2, -0.3, 0.0];

pub const SURROGATE_NAMES: [&str; 7] = ["x4", "x5", "x6", "x7", "x8", "x9", "x10"];

/// Ozone-style surrogate: 7 correlated meteorological-like predictors, a
/// mix of strong, weak and null effects. Values are rounded to 4 decimals.
pub fn ozone_surrogate(n: usize, seed: u64) -> Dataset {
    let corr = DMatrix::from_fn(7, 7, |i, j| SURROGATE_CORR[i][j]);
    let (x, y) = correlated_regression(n, &corr, &SURROGATE_BETA, 11.0, 0.7, seed);
    let round = |v: f64| (v * 1e4).round() / 1e4;
    let x = x.map(round);
    let y = y.into_iter().map(round).collect();
    let names = SURROGATE_NAMES.iter().map(|s| s.to_string()).collect();
    Dataset::complete(y, x, names).expect("surrogate is well formed")
}
