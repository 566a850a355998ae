//! Multiple imputation of missing predictor cells by data augmentation.
//!
//! The predictors and the response are modelled jointly as
//! `v = (x₁, …, x_p, y) ~ N(μ, Σ)` under the Jeffreys prior
//! `π(μ, Σ) ∝ |Σ|^{-(p+2)/2}`. Each sweep of the chain
//!
//! 1. draws `Σ ~ IW(n − 1, S)` and `μ | Σ ~ N(v̄, Σ/n)` from the current
//!    completed data, then
//! 2. redraws every missing cell from its Gaussian conditional given the
//!    observed cells of its row.
//!
//! After `burn_in` sweeps one completed copy is kept every `spacing` sweeps.
//!
//! Random numbers come from a single `ChaCha8Rng` seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`; one chain consumes one stream. Callers
//! running several chains derive distinct seeds (see
//! [`crate::harness::derive_seed`]).

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::linalg::symmetrize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GibbsConfig {
    pub burn_in: usize,
    pub spacing: usize,
    pub m: usize,
    pub seed: u64,
}

impl Default for GibbsConfig {
    fn default() -> Self {
        Self { burn_in: 200, spacing: 50, m: 20, seed: 20250101 }
    }
}

impl GibbsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.spacing == 0 {
            return Err(Error::InvalidArgument("spacing must be at least 1".into()));
        }
        if self.m == 0 {
            return Err(Error::InvalidArgument("at least one imputation is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainMeta {
    pub burn_in: usize,
    pub spacing: usize,
    pub seed: u64,
}

/// One completed copy of the data.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletedData {
    pub x: DMatrix<f64>,
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImputationSet {
    pub completed: Vec<CompletedData>,
    pub chain_meta: ChainMeta,
}

impl ImputationSet {
    pub fn m(&self) -> usize {
        self.completed.len()
    }

    /// Wrap already-complete copies, e.g. hand-built test fixtures.
    pub fn from_completed(completed: Vec<CompletedData>) -> Result<Self> {
        if completed.is_empty() {
            return Err(Error::InvalidArgument("imputation set is empty".into()));
        }
        let (n, p) = completed[0].x.shape();
        for c in &completed {
            if c.x.shape() != (n, p) || c.y.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: c.y.len() });
            }
        }
        Ok(Self { completed, chain_meta: ChainMeta { burn_in: 0, spacing: 1, seed: 0 } })
    }
}

/// Rows sharing one missingness pattern.
struct Pattern {
    missing: Vec<usize>,
    observed: Vec<usize>,
    rows: Vec<usize>,
}

fn missing_patterns(d: &Dataset) -> Vec<Pattern> {
    let p = d.p();
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for i in 0..d.n() {
        let miss: Vec<usize> = (0..p).filter(|&j| !d.is_observed(i, j)).collect();
        if !miss.is_empty() {
            groups.entry(miss).or_default().push(i);
        }
    }
    groups
        .into_iter()
        .map(|(missing, rows)| {
            // the response (index p) is always observed
            let observed = (0..=p).filter(|j| !missing.contains(j)).collect();
            Pattern { missing, observed, rows }
        })
        .collect()
}

/// Draw `Σ ~ IW(df, S)` via the Bartlett decomposition.
///
/// With `S = L Lᵀ` and `A` the Bartlett factor of a standard Wishart,
/// `Σ = T Tᵀ` where `T = L A⁻ᵀ`. Returns `(Σ, T)`.
fn draw_inverse_wishart(
    scatter: &DMatrix<f64>,
    df: usize,
    rng: &mut ChaCha8Rng,
) -> Option<(DMatrix<f64>, DMatrix<f64>)> {
    let d = scatter.nrows();
    let l = scatter.clone().cholesky()?.l();
    let mut a = DMatrix::<f64>::zeros(d, d);
    for i in 0..d {
        let chi = ChiSquared::new((df - i) as f64).ok()?;
        a[(i, i)] = chi.sample(rng).sqrt();
        for j in 0..i {
            a[(i, j)] = StandardNormal.sample(rng);
        }
    }
    let a_inv = a.solve_lower_triangular(&DMatrix::identity(d, d))?;
    let t = l * a_inv.transpose();
    let mut sigma = &t * t.transpose();
    symmetrize(&mut sigma);
    Some((sigma, t))
}

fn normal_vec(len: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
    DVector::from_fn(len, |_, _| StandardNormal.sample(rng))
}

/// Run the data-augmentation chain and return `cfg.m` completed copies.
pub fn impute(d: &Dataset, cfg: &GibbsConfig) -> Result<ImputationSet> {
    cfg.validate()?;
    let n = d.n();
    let p = d.p();
    let dim = p + 1;
    if n <= dim {
        return Err(Error::DegenerateCovariance { rows: n, dim });
    }

    // working matrix: predictors then response
    let mut v = DMatrix::<f64>::zeros(n, dim);
    for j in 0..p {
        let observed: Vec<f64> = (0..n).filter(|&i| d.is_observed(i, j)).map(|i| d.x()[(i, j)]).collect();
        if observed.is_empty() {
            return Err(Error::AllMissingColumn(d.names()[j].clone()));
        }
        let mean = observed.iter().sum::<f64>() / observed.len() as f64;
        for i in 0..n {
            v[(i, j)] = if d.is_observed(i, j) { d.x()[(i, j)] } else { mean };
        }
    }
    for i in 0..n {
        v[(i, p)] = d.y()[i];
    }

    let patterns = missing_patterns(d);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let total = cfg.burn_in + cfg.m * cfg.spacing;
    let mut completed = Vec::with_capacity(cfg.m);

    for sweep in 1..=total {
        let mean = DVector::from_fn(dim, |j, _| v.column(j).mean());
        let centred = DMatrix::from_fn(n, dim, |i, j| v[(i, j)] - mean[j]);
        let mut scatter = centred.tr_mul(&centred);
        symmetrize(&mut scatter);
        let (sigma, root) =
            draw_inverse_wishart(&scatter, n - 1, &mut rng).ok_or(Error::DegenerateCovariance { rows: n, dim })?;
        let mu = &mean + &root * normal_vec(dim, &mut rng) / (n as f64).sqrt();

        for pat in &patterns {
            let (mi, oi) = (&pat.missing, &pat.observed);
            let s_oo = sigma.select_rows(oi).select_columns(oi);
            let s_om = sigma.select_rows(oi).select_columns(mi);
            let s_mm = sigma.select_rows(mi).select_columns(mi);
            let chol_oo = s_oo.cholesky().ok_or(Error::DegenerateCovariance { rows: n, dim })?;
            // B = Σ_MO Σ_OO⁻¹
            let b = chol_oo.solve(&s_om).transpose();
            let cond = s_mm - &b * &s_om;
            let cond_l = cond.cholesky().ok_or(Error::DegenerateCovariance { rows: n, dim })?.l();
            let mu_m = DVector::from_fn(mi.len(), |r, _| mu[mi[r]]);
            let mu_o = DVector::from_fn(oi.len(), |r, _| mu[oi[r]]);
            for &i in &pat.rows {
                let v_o = DVector::from_fn(oi.len(), |r, _| v[(i, oi[r])]);
                let draw = &mu_m + &b * (v_o - &mu_o) + &cond_l * normal_vec(mi.len(), &mut rng);
                for (r, &j) in mi.iter().enumerate() {
                    v[(i, j)] = draw[r];
                }
            }
        }

        if sweep > cfg.burn_in && (sweep - cfg.burn_in).is_multiple_of(cfg.spacing) {
            let mut x = d.x().clone();
            for pat in &patterns {
                for &i in &pat.rows {
                    for &j in &pat.missing {
                        x[(i, j)] = v[(i, j)];
                    }
                }
            }
            completed.push(CompletedData { x, y: d.y().to_vec() });
        }
    }

    Ok(ImputationSet {
        completed,
        chain_meta: ChainMeta { burn_in: cfg.burn_in, spacing: cfg.spacing, seed: cfg.seed },
    })
}

/// Keep the rows whose predictors are all observed, in their original order.
pub fn listwise_delete(d: &Dataset) -> Result<Dataset> {
    let rows: Vec<usize> = (0..d.n()).filter(|&i| (0..d.p()).all(|j| d.is_observed(i, j))).collect();
    let k_full = d.p() + 1;
    if rows.len() <= k_full + 1 {
        return Err(Error::InsufficientRows { rows: rows.len(), needed: k_full + 2 });
    }
    d.select_rows(&rows)
}
