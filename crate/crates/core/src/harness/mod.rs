//! Missingness experiment: oracle, listwise-deletion and imputed selection
//! over repeated MCAR corruptions of a complete dataset.

mod ingest;
mod mcar;
mod output;
mod svg;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::fbf::{select_complete, ModelPrior, SelectionResult};
use crate::impute::{listwise_delete, GibbsConfig};
use crate::linmodel::FractionChoice;
use crate::mifbf::impute_select;

pub use ingest::{ingest_csv, ingest_reader};
pub use mcar::inject_mcar;
pub use output::{
    emit_results, flatten_records, quantile_type7, read_results_csv, read_summary, summarize, write_results_csv,
    write_summary, BoxStats, EmittedFiles, FlatRow, Summary, VariableInfo,
};
pub use svg::{emit_boxplot_svg, render_boxplot_svg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    Listwise,
    Imputed,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Oracle, Method::Listwise, Method::Imputed];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Listwise => "listwise",
            Method::Imputed => "imputed",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub dataset: PathBuf,
    pub response: String,
    /// Empty means every non-response column.
    pub predictors: Vec<String>,
    pub miss_cols: Vec<String>,
    pub rates: Vec<f64>,
    pub reps: usize,
    pub m: usize,
    pub burn_in: usize,
    pub spacing: usize,
    pub seed: u64,
    pub model_prior: ModelPrior,
    pub fraction: FractionChoice,
}

impl ExperimentSpec {
    pub fn gibbs(&self, seed: u64) -> GibbsConfig {
        GibbsConfig { burn_in: self.burn_in, spacing: self.spacing, m: self.m, seed }
    }

    fn validate(&self, d: &Dataset) -> Result<Vec<usize>> {
        if self.rates.is_empty() {
            return Err(Error::InvalidArgument("at least one missingness rate is required".into()));
        }
        if let Some(r) = self.rates.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
            return Err(Error::InvalidArgument(format!("rate {r} outside (0, 1)")));
        }
        if self.reps == 0 {
            return Err(Error::InvalidArgument("reps must be at least 1".into()));
        }
        self.gibbs(0).validate()?;
        let cols = self.miss_cols.iter().map(|c| d.column_index(c)).collect::<Result<Vec<_>>>()?;
        if cols.is_empty() {
            return Err(Error::InvalidArgument("no columns selected for missingness".into()));
        }
        d.complete_x()?;
        Ok(cols)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Selected { inclusion: Vec<f64>, log_fbf: Vec<f64> },
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub rate: f64,
    pub rate_index: usize,
    pub rep: usize,
    pub method: Method,
    pub outcome: Outcome,
    pub wall_time: Duration,
}

impl RunRecord {
    pub fn inclusion(&self) -> Option<&[f64]> {
        match &self.outcome {
            Outcome::Selected { inclusion, .. } => Some(inclusion),
            Outcome::Failed(_) => None,
        }
    }

    pub fn log_fbf(&self) -> Option<&[f64]> {
        match &self.outcome {
            Outcome::Selected { log_fbf, .. } => Some(log_fbf),
            Outcome::Failed(_) => None,
        }
    }

    pub fn error(&self) -> Option<&str> {
        match &self.outcome {
            Outcome::Failed(e) => Some(e),
            Outcome::Selected { .. } => None,
        }
    }
}

/// Records of one experiment plus the variable labels they refer to.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub records: Vec<RunRecord>,
    pub variables: Vec<VariableInfo>,
}

impl Experiment {
    pub fn of_method(&self, method: Method) -> impl Iterator<Item = &RunRecord> {
        self.records.iter().filter(move |r| r.method == method)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one random stream of one `(rate, rep)` cell.
///
/// `stream` 0 drives the missingness mask, 1 the imputation chain.
pub fn derive_seed(base: u64, rate_index: usize, rep: usize, stream: u64) -> u64 {
    let mut s = splitmix64(base);
    s = splitmix64(s ^ rate_index as u64);
    s = splitmix64(s ^ rep as u64);
    splitmix64(s ^ stream)
}

fn timed(f: impl FnOnce() -> Result<SelectionResult>) -> (Outcome, Duration) {
    let start = Instant::now();
    let outcome = match f() {
        Ok(r) => Outcome::Selected { inclusion: r.inclusion, log_fbf: r.log_fbf },
        Err(e) => Outcome::Failed(e.to_string()),
    };
    (outcome, start.elapsed())
}

/// Load the dataset named in `spec` and run the experiment on it.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Experiment> {
    let d = ingest_csv(&spec.dataset, &spec.response, &spec.predictors)?;
    run_experiment_on(spec, &d)
}

/// For every rate and repetition: oracle selection on the complete data,
/// MCAR injection, selection after listwise deletion, and selection over
/// multiple imputations. Failures are recorded per `(rate, rep, method)`.
pub fn run_experiment_on(spec: &ExperimentSpec, d: &Dataset) -> Result<Experiment> {
    let cols = spec.validate(d)?;
    let variables = d
        .names()
        .iter()
        .enumerate()
        .map(|(j, name)| VariableInfo { name: name.clone(), corrupted: cols.contains(&j) })
        .collect();

    let x = d.complete_x()?;
    let (oracle, oracle_time) = timed(|| select_complete(x, d.y(), spec.fraction, spec.model_prior));

    let jobs: Vec<(usize, usize)> =
        (0..spec.rates.len()).flat_map(|ri| (0..spec.reps).map(move |rep| (ri, rep))).collect();

    let records: Vec<RunRecord> = jobs
        .par_iter()
        .map(|&(ri, rep)| {
            let rate = spec.rates[ri];
            let record =
                |method, (outcome, wall_time)| RunRecord { rate, rate_index: ri, rep, method, outcome, wall_time };
            let oracle_rec = record(Method::Oracle, (oracle.clone(), oracle_time));
            let corrupted = match inject_mcar(d, &cols, rate, derive_seed(spec.seed, ri, rep, 0)) {
                Ok(c) => c,
                Err(e) => {
                    let msg = Outcome::Failed(e.to_string());
                    return vec![
                        oracle_rec,
                        record(Method::Listwise, (msg.clone(), Duration::ZERO)),
                        record(Method::Imputed, (msg, Duration::ZERO)),
                    ];
                }
            };
            let listwise = timed(|| {
                let lw = listwise_delete(&corrupted)?;
                select_complete(lw.complete_x()?, lw.y(), spec.fraction, spec.model_prior)
            });
            let imputed = timed(|| {
                let cfg = spec.gibbs(derive_seed(spec.seed, ri, rep, 1));
                Ok(impute_select(&corrupted, &cfg, spec.fraction, spec.model_prior)?.0)
            });
            vec![oracle_rec, record(Method::Listwise, listwise), record(Method::Imputed, imputed)]
        })
        .flatten()
        .collect();

    Ok(Experiment { records, variables })
}
