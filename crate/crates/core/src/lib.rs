//! Fractional Bayes factor variable selection for Gaussian linear regression,
//! with Savage-Dickey evaluation against the full model and Rubin-style
//! averaging over multiple imputations when predictors are missing.

pub mod data;
pub mod error;
pub mod fbf;
pub mod harness;
pub mod impute;
pub mod linalg;
pub mod linmodel;
pub mod mifbf;
pub mod mvt;
pub mod special;
pub mod synth;

pub use nalgebra;

pub use data::Dataset;
pub use error::{Error, Result};
pub use fbf::{
    direct_log_fbf, enumerate_models, inclusion_probs, posterior_model_probs, savage_dickey_log_fbf, select_complete,
    ModelIndex, ModelPrior, SelectionResult,
};
pub use impute::{impute, listwise_delete, GibbsConfig, ImputationSet};
pub use linmodel::{
    fit_sufficient_stats, fractional_t, minimal_fraction, posterior_t, FractionChoice, FractionConfig, SuffStats,
};
pub use mifbf::{averaged_log_density, impute_select, mi_log_fbf, select_imputed, DensityKind};
pub use mvt::{marginal, mvt_logpdf, MvT};
