//! Complete-data fractional Bayes factors against the full model.
//!
//! Every model `γ` is compared with the full model through the Savage-Dickey
//! form: the full-model posterior density of the excluded coefficients at zero,
//! divided by the full-model fractional prior density at zero. The direct
//! route through closed-form fractional marginal likelihoods is kept alongside
//! as an independent check.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linmodel::{
    fit_sufficient_stats, fractional_t, log_fractional_marginal, posterior_t, FractionChoice, FractionConfig,
};
use crate::mvt::{marginal, mvt_logpdf, MvT};
use crate::special::log_sum_exp;

/// Largest number of predictors accepted for exhaustive enumeration.
pub const MAX_PREDICTORS: usize = 25;

/// A subset of the `p` predictors, bit `j` set when predictor `j` is included.
/// The intercept is part of every model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelIndex {
    bits: u32,
    p: u8,
}

impl ModelIndex {
    pub fn new(bits: u32, p: usize) -> Result<Self> {
        if p == 0 || p > MAX_PREDICTORS {
            return Err(Error::TooManyPredictors { p, max: MAX_PREDICTORS });
        }
        if bits >> p != 0 {
            return Err(Error::InvalidArgument(format!("model bits {bits:#b} exceed p = {p}")));
        }
        Ok(Self { bits, p: p as u8 })
    }

    pub fn full(p: usize) -> Self {
        assert!((1..=MAX_PREDICTORS).contains(&p));
        Self { bits: (1u32 << p) - 1, p: p as u8 }
    }

    pub fn null(p: usize) -> Self {
        assert!((1..=MAX_PREDICTORS).contains(&p));
        Self { bits: 0, p: p as u8 }
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn p(self) -> usize {
        self.p as usize
    }

    pub fn contains(self, j: usize) -> bool {
        self.bits >> j & 1 == 1
    }

    pub fn size(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_full(self) -> bool {
        self.size() == self.p()
    }

    /// Included predictor indices, ascending.
    pub fn included(self) -> Vec<usize> {
        (0..self.p()).filter(|&j| self.contains(j)).collect()
    }

    /// Excluded predictor indices, ascending.
    pub fn excluded(self) -> Vec<usize> {
        (0..self.p()).filter(|&j| !self.contains(j)).collect()
    }

    /// Excluded predictors as coordinates of `θ = (α, β)` in the full design.
    pub fn excluded_design_coords(self) -> Vec<usize> {
        self.excluded().into_iter().map(|j| j + 1).collect()
    }
}

impl fmt::Display for ModelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.p() {
            f.write_str(if self.contains(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// All `2^p` models in ascending bit order.
pub fn enumerate_models(p: usize) -> Result<Vec<ModelIndex>> {
    if p == 0 || p > MAX_PREDICTORS {
        return Err(Error::TooManyPredictors { p, max: MAX_PREDICTORS });
    }
    Ok((0..1u32 << p).map(|bits| ModelIndex { bits, p: p as u8 }).collect())
}

/// Log fractional Bayes factor of `gamma` against the full model from the
/// full-model posterior and fractional-prior t laws.
pub fn savage_dickey_log_fbf(gamma: ModelIndex, post: &MvT, fprior: &MvT) -> Result<f64> {
    let k = gamma.p() + 1;
    for t in [post, fprior] {
        if t.dim() != k {
            return Err(Error::DimensionMismatch { expected: k, got: t.dim() });
        }
    }
    Ok(log_density_at_null(gamma, post)? - log_density_at_null(gamma, fprior)?)
}

/// Marginal log-density of the excluded coefficients at zero; `0` for the full model.
pub fn log_density_at_null(gamma: ModelIndex, t: &MvT) -> Result<f64> {
    let excl = gamma.excluded_design_coords();
    if excl.is_empty() {
        return Ok(0.0);
    }
    let m = marginal(t, &excl)?;
    mvt_logpdf(&DVector::zeros(excl.len()), &m)
}

/// `ln[m_γ(d)/m_γ(d^b)] − ln[m_full(d)/m_full(d^b)]` from closed-form marginals.
pub fn direct_log_fbf(gamma: ModelIndex, x: &DMatrix<f64>, y: &[f64], f: &FractionConfig) -> Result<f64> {
    let full = ModelIndex::full(gamma.p());
    if gamma == full || f.b == 1.0 {
        return Ok(0.0);
    }
    let sg = fit_sufficient_stats(x, y, gamma)?;
    let sf = fit_sufficient_stats(x, y, full)?;
    f.fractional_df(sf.n, sf.k)?;
    let ratio = |s| -> Result<f64> { Ok(log_fractional_marginal(s, 1.0)? - log_fractional_marginal(s, f.b)?) };
    Ok(ratio(&sg)? - ratio(&sf)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelPrior {
    #[default]
    Uniform,
    ScottBerger,
}

impl ModelPrior {
    /// `ln w(γ)`, unnormalised for the uniform prior.
    pub fn log_weight(self, gamma: ModelIndex) -> f64 {
        match self {
            ModelPrior::Uniform => 0.0,
            ModelPrior::ScottBerger => {
                let p = gamma.p();
                -((p + 1) as f64).ln() - ln_binomial(p, gamma.size())
            }
        }
    }
}

impl fmt::Display for ModelPrior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelPrior::Uniform => "uniform",
            ModelPrior::ScottBerger => "scott-berger",
        })
    }
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum()
}

/// Posterior model probabilities, indexed by model bits.
pub fn posterior_model_probs(log_fbfs: &[f64], p: usize, prior: ModelPrior) -> Result<Vec<f64>> {
    let models = enumerate_models(p)?;
    if log_fbfs.len() != models.len() {
        return Err(Error::IncompleteModelSet { expected: models.len(), got: log_fbfs.len() });
    }
    let logw: Vec<f64> = models.iter().zip(log_fbfs).map(|(&g, &l)| l + prior.log_weight(g)).collect();
    if logw.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
        return Err(Error::InvalidArgument("non-finite log Bayes factor".into()));
    }
    let norm = log_sum_exp(&logw);
    Ok(logw.iter().map(|v| (v - norm).exp()).collect())
}

/// Marginal inclusion probability of each predictor.
pub fn inclusion_probs(probs: &[f64], p: usize) -> Result<Vec<f64>> {
    let models = enumerate_models(p)?;
    if probs.len() != models.len() {
        return Err(Error::IncompleteModelSet { expected: models.len(), got: probs.len() });
    }
    let mut inc = vec![0.0; p];
    for (g, &pr) in models.iter().zip(probs) {
        for (j, v) in inc.iter_mut().enumerate() {
            if g.contains(j) {
                *v += pr;
            }
        }
    }
    Ok(inc.into_iter().map(|v| v.clamp(0.0, 1.0)).collect())
}

/// Log-FBFs, model probabilities and inclusion probabilities over all models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub p: usize,
    /// `ln B_{γ, full}`, indexed by model bits.
    pub log_fbf: Vec<f64>,
    /// Posterior model probabilities, indexed by model bits.
    pub post_prob: Vec<f64>,
    pub inclusion: Vec<f64>,
    pub model_prior: ModelPrior,
}

impl SelectionResult {
    pub fn from_log_fbfs(log_fbf: Vec<f64>, p: usize, model_prior: ModelPrior) -> Result<Self> {
        let post_prob = posterior_model_probs(&log_fbf, p, model_prior)?;
        let inclusion = inclusion_probs(&post_prob, p)?;
        Ok(Self { p, log_fbf, post_prob, inclusion, model_prior })
    }

    pub fn log_fbf_of(&self, gamma: ModelIndex) -> f64 {
        self.log_fbf[gamma.bits() as usize]
    }

    pub fn prob_of(&self, gamma: ModelIndex) -> f64 {
        self.post_prob[gamma.bits() as usize]
    }

    /// Models sorted by decreasing posterior probability.
    pub fn ranked(&self) -> Vec<(ModelIndex, f64)> {
        let mut v: Vec<_> = enumerate_models(self.p)
            .expect("p validated at construction")
            .into_iter()
            .map(|g| (g, self.prob_of(g)))
            .collect();
        v.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        v
    }
}

/// Savage-Dickey log-FBFs for every model from a single pair of full-model t laws.
pub fn log_fbfs_from_laws(p: usize, post: &MvT, fprior: &MvT) -> Result<Vec<f64>> {
    enumerate_models(p)?.into_par_iter().map(|g| savage_dickey_log_fbf(g, post, fprior)).collect()
}

/// Full-model posterior and fractional prior for complete data.
pub fn full_model_laws(x: &DMatrix<f64>, y: &[f64], f: &FractionConfig) -> Result<(MvT, MvT)> {
    let s = fit_sufficient_stats(x, y, ModelIndex::full(x.ncols()))?;
    Ok((posterior_t(&s)?, fractional_t(&s, f)?))
}

/// Variable selection on complete data.
pub fn select_complete(
    x: &DMatrix<f64>,
    y: &[f64],
    fraction: FractionChoice,
    prior: ModelPrior,
) -> Result<SelectionResult> {
    let p = x.ncols();
    enumerate_models(p)?;
    let f = fraction.resolve(y.len(), p + 1)?;
    let (post, fprior) = full_model_laws(x, y, &f)?;
    let log_fbf = log_fbfs_from_laws(p, &post, &fprior)?;
    SelectionResult::from_log_fbfs(log_fbf, p, prior)
}
