//! Fractional Bayes factors for incomplete data.
//!
//! For every model the full-model posterior density and the full-model
//! fractional-prior density of the excluded coefficients at zero are averaged
//! over the same set of imputations, and the log-FBF is the log ratio of the
//! two averages. The fraction is applied to the completed-data likelihood;
//! the imputations themselves always come from the full-data predictive.

use rayon::prelude::*;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::fbf::{enumerate_models, full_model_laws, log_density_at_null, ModelIndex, ModelPrior, SelectionResult};
use crate::impute::{impute, GibbsConfig, ImputationSet};
use crate::linmodel::{FractionChoice, FractionConfig};
use crate::mvt::MvT;
use crate::special::log_mean_exp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityKind {
    Posterior,
    FractionalPrior,
}

/// Log of the imputation-averaged densities at the null point, per model.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragedDensities {
    pub p: usize,
    /// Indexed by model bits.
    pub log_avg_post: Vec<f64>,
    /// Indexed by model bits.
    pub log_avg_prior: Vec<f64>,
    pub m: usize,
}

impl AveragedDensities {
    pub fn log_fbf(&self, gamma: ModelIndex) -> f64 {
        let i = gamma.bits() as usize;
        self.log_avg_post[i] - self.log_avg_prior[i]
    }

    pub fn log_fbfs(&self) -> Vec<f64> {
        self.log_avg_post.iter().zip(&self.log_avg_prior).map(|(a, b)| a - b).collect()
    }
}

/// `ln AVE[exp(v)]` of per-imputation log-densities.
pub fn average_log_densities(per_imputation: &[f64]) -> f64 {
    log_mean_exp(per_imputation)
}

/// Log ratio of the averaged posterior and averaged prior densities.
pub fn ratio_of_averages(log_post: &[f64], log_prior: &[f64]) -> f64 {
    average_log_densities(log_post) - average_log_densities(log_prior)
}

/// Full-model posterior and fractional prior for each completed copy.
fn laws_per_imputation(imps: &ImputationSet, f: &FractionConfig) -> Result<Vec<(MvT, MvT)>> {
    if imps.completed.is_empty() {
        return Err(Error::InvalidArgument("imputation set is empty".into()));
    }
    imps.completed.par_iter().map(|c| full_model_laws(&c.x, &c.y, f)).collect()
}

fn check_p(gamma: ModelIndex, imps: &ImputationSet) -> Result<()> {
    let p = imps.completed.first().map_or(0, |c| c.x.ncols());
    if gamma.p() != p {
        return Err(Error::DimensionMismatch { expected: p, got: gamma.p() });
    }
    Ok(())
}

/// Imputation-averaged log-density of the excluded coefficients at zero.
///
/// Returns `0` for the full model.
pub fn averaged_log_density(
    gamma: ModelIndex,
    imps: &ImputationSet,
    which: DensityKind,
    f: &FractionConfig,
) -> Result<f64> {
    check_p(gamma, imps)?;
    if gamma.is_full() {
        return Ok(0.0);
    }
    let laws = laws_per_imputation(imps, f)?;
    let per: Vec<f64> = laws
        .iter()
        .map(|(post, prior)| match which {
            DensityKind::Posterior => log_density_at_null(gamma, post),
            DensityKind::FractionalPrior => log_density_at_null(gamma, prior),
        })
        .collect::<Result<_>>()?;
    Ok(average_log_densities(&per))
}

/// Log-FBF of `gamma` against the full model for multiply imputed data.
pub fn mi_log_fbf(gamma: ModelIndex, imps: &ImputationSet, f: &FractionConfig) -> Result<f64> {
    check_p(gamma, imps)?;
    if gamma.is_full() {
        return Ok(0.0);
    }
    let laws = laws_per_imputation(imps, f)?;
    let mut post = Vec::with_capacity(laws.len());
    let mut prior = Vec::with_capacity(laws.len());
    for (a, b) in &laws {
        post.push(log_density_at_null(gamma, a)?);
        prior.push(log_density_at_null(gamma, b)?);
    }
    Ok(ratio_of_averages(&post, &prior))
}

/// Averaged densities for all `2^p` models from one pass over the imputations.
pub fn averaged_densities(imps: &ImputationSet, f: &FractionConfig) -> Result<AveragedDensities> {
    let laws = laws_per_imputation(imps, f)?;
    let p = imps.completed[0].x.ncols();
    let models = enumerate_models(p)?;
    // rows: imputations, in order; each row holds (post, prior) per model
    let grid: Vec<Vec<(f64, f64)>> = laws
        .par_iter()
        .map(|(post, prior)| {
            models
                .iter()
                .map(|&g| Ok((log_density_at_null(g, post)?, log_density_at_null(g, prior)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut log_avg_post = Vec::with_capacity(models.len());
    let mut log_avg_prior = Vec::with_capacity(models.len());
    let mut post_col = vec![0.0; laws.len()];
    let mut prior_col = vec![0.0; laws.len()];
    for (gi, g) in models.iter().enumerate() {
        if g.is_full() {
            log_avg_post.push(0.0);
            log_avg_prior.push(0.0);
            continue;
        }
        for (m, row) in grid.iter().enumerate() {
            post_col[m] = row[gi].0;
            prior_col[m] = row[gi].1;
        }
        let (a, b) = (average_log_densities(&post_col), average_log_densities(&prior_col));
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite averaged density for model {g}")));
        }
        log_avg_post.push(a);
        log_avg_prior.push(b);
    }
    Ok(AveragedDensities { p, log_avg_post, log_avg_prior, m: laws.len() })
}

/// Variable selection over an imputation set.
pub fn select_imputed(imps: &ImputationSet, fraction: FractionChoice, prior: ModelPrior) -> Result<SelectionResult> {
    let first = imps.completed.first().ok_or_else(|| Error::InvalidArgument("imputation set is empty".into()))?;
    let (n, p) = first.x.shape();
    let f = fraction.resolve(n, p + 1)?;
    let avg = averaged_densities(imps, &f)?;
    SelectionResult::from_log_fbfs(avg.log_fbfs(), p, prior)
}

/// Impute `d` and select over the imputations.
pub fn impute_select(
    d: &Dataset,
    cfg: &GibbsConfig,
    fraction: FractionChoice,
    prior: ModelPrior,
) -> Result<(SelectionResult, ImputationSet)> {
    let imps = impute(d, cfg)?;
    let sel = select_imputed(&imps, fraction, prior)?;
    Ok((sel, imps))
}
