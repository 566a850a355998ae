use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Method, RunRecord};
use crate::error::{Error, Result};

pub const RESULTS_HEADER: [&str; 5] = ["rate", "rep", "method", "variable", "inclusion_prob"];
const SUMMARY_FORMAT: &str = "fbfsel-boxplot-summary/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableInfo {
    pub name: String,
    /// Whether missingness was injected into this column.
    pub corrupted: bool,
}

/// One line of the results CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatRow {
    pub rate: f64,
    pub rep: usize,
    pub method: Method,
    pub variable: String,
    pub inclusion_prob: f64,
}

/// Five-number summary of one `(rate, method, variable)` group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxStats {
    pub rate: f64,
    pub method: Method,
    pub variable: String,
    pub count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub format: String,
    pub quantile_rule: String,
    pub variables: Vec<VariableInfo>,
    pub rates: Vec<f64>,
    pub groups: Vec<BoxStats>,
}

impl Summary {
    pub fn group(&self, rate: f64, method: Method, variable: &str) -> Option<&BoxStats> {
        self.groups.iter().find(|g| g.rate == rate && g.method == method && g.variable == variable)
    }
}

#[derive(Debug, Clone)]
pub struct EmittedFiles {
    pub results_csv: PathBuf,
    pub summary: PathBuf,
    pub failures_csv: Option<PathBuf>,
}

/// Sample quantile by linear interpolation between order statistics
/// (Hyndman-Fan type 7). `sorted` must be ascending and nonempty.
pub fn quantile_type7(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    assert!(n > 0, "quantile of an empty sample");
    let h = (n - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Successful records as one row per variable, in record order.
pub fn flatten_records(records: &[RunRecord], variables: &[VariableInfo]) -> Vec<FlatRow> {
    records
        .iter()
        .filter_map(|r| r.inclusion().map(|inc| (r, inc)))
        .flat_map(|(r, inc)| {
            variables.iter().zip(inc).map(move |(v, &p)| FlatRow {
                rate: r.rate,
                rep: r.rep,
                method: r.method,
                variable: v.name.clone(),
                inclusion_prob: p,
            })
        })
        .collect()
}

fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_results_csv(rows: &[FlatRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(RESULTS_HEADER)?;
    for r in rows {
        w.write_record([
            r.rate.to_string(),
            r.rep.to_string(),
            r.method.to_string(),
            r.variable.clone(),
            sig17(r.inclusion_prob),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results_csv(path: &Path) -> Result<Vec<FlatRow>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != RESULTS_HEADER {
        return Err(Error::Parse { row: 0, column: String::new(), message: format!("unexpected header {header:?}") });
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        let bad = |col: &str, msg: String| Error::Parse { row, column: col.into(), message: msg };
        let num = |c: usize| rec[c].parse::<f64>().map_err(|e| bad(RESULTS_HEADER[c], e.to_string()));
        rows.push(FlatRow {
            rate: num(0)?,
            rep: rec[1].parse().map_err(|e: std::num::ParseIntError| bad("rep", e.to_string()))?,
            method: rec[2].parse().map_err(|e: Error| bad("method", e.to_string()))?,
            variable: rec[3].to_string(),
            inclusion_prob: num(4)?,
        });
    }
    Ok(rows)
}

/// Five-number summaries per `(rate, method, variable)`.
///
/// Rates ascend, methods follow oracle/listwise/imputed, variables follow
/// `variables`. Groups with no rows are omitted.
pub fn summarize(rows: &[FlatRow], variables: &[VariableInfo]) -> Summary {
    let mut rates: Vec<f64> = rows.iter().map(|r| r.rate).collect();
    rates.sort_by(f64::total_cmp);
    rates.dedup();
    let var_pos: BTreeMap<&str, usize> = variables.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect();

    let mut buckets: BTreeMap<(usize, Method, usize), Vec<f64>> = BTreeMap::new();
    for r in rows {
        let ri = rates.iter().position(|&x| x == r.rate).expect("rate collected above");
        let Some(&vi) = var_pos.get(r.variable.as_str()) else { continue };
        buckets.entry((ri, r.method, vi)).or_default().push(r.inclusion_prob);
    }
    let groups = buckets
        .into_iter()
        .map(|((ri, method, vi), mut vals)| {
            vals.sort_by(f64::total_cmp);
            BoxStats {
                rate: rates[ri],
                method,
                variable: variables[vi].name.clone(),
                count: vals.len(),
                min: vals[0],
                q1: quantile_type7(&vals, 0.25),
                median: quantile_type7(&vals, 0.5),
                q3: quantile_type7(&vals, 0.75),
                max: vals[vals.len() - 1],
            }
        })
        .collect();
    Summary {
        format: SUMMARY_FORMAT.into(),
        quantile_rule: "type-7 linear interpolation".into(),
        variables: variables.to_vec(),
        rates,
        groups,
    }
}

pub fn write_summary(summary: &Summary, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, summary)?;
    f.write_all(b"\n")?;
    Ok(())
}

pub fn read_summary(path: &Path) -> Result<Summary> {
    let s: Summary = serde_json::from_reader(fs::File::open(path)?)?;
    if s.format != SUMMARY_FORMAT {
        return Err(Error::InvalidArgument(format!("unsupported summary format {:?}", s.format)));
    }
    Ok(s)
}

/// Write `results.csv`, `summary.json` and, when any run failed, `failures.csv` into `dir`.
pub fn emit_results(records: &[RunRecord], variables: &[VariableInfo], dir: &Path) -> Result<EmittedFiles> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no records to emit".into()));
    }
    fs::create_dir_all(dir)?;
    let rows = flatten_records(records, variables);
    let results_csv = dir.join("results.csv");
    write_results_csv(&rows, &results_csv)?;
    let summary = dir.join("summary.json");
    write_summary(&summarize(&rows, variables), &summary)?;

    let failed: Vec<&RunRecord> = records.iter().filter(|r| r.error().is_some()).collect();
    let failures_csv = if failed.is_empty() {
        None
    } else {
        let path = dir.join("failures.csv");
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["rate", "rep", "method", "error"])?;
        for r in failed {
            w.write_record([
                r.rate.to_string(),
                r.rep.to_string(),
                r.method.to_string(),
                r.error().unwrap_or_default().to_string(),
            ])?;
        }
        w.flush()?;
        Some(path)
    };
    Ok(EmittedFiles { results_csv, summary, failures_csv })
}
