use std::path::Path;

use nalgebra::DMatrix;

use crate::data::Dataset;
use crate::error::{Error, Result};

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell == "NA"
}

/// Read a comma-separated file with a header row.
///
/// Empty cells and the literal `NA` are missing. When `predictors` is empty
/// every column other than the response is used, in file order. Row numbers
/// in errors count data rows from 1.
pub fn ingest_csv(path: impl AsRef<Path>, response: &str, predictors: &[String]) -> Result<Dataset> {
    let file = std::fs::File::open(path.as_ref())?;
    ingest_reader(file, response, predictors)
}

pub fn ingest_reader<R: std::io::Read>(reader: R, response: &str, predictors: &[String]) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let find =
        |name: &str| headers.iter().position(|h| h == name).ok_or_else(|| Error::UnknownColumn(name.to_string()));
    let y_col = find(response)?;
    let names: Vec<String> = if predictors.is_empty() {
        headers.iter().filter(|h| h.as_str() != response).cloned().collect()
    } else {
        predictors.to_vec()
    };
    if names.is_empty() {
        return Err(Error::InvalidArgument("no predictor columns".into()));
    }
    let x_cols = names.iter().map(|n| find(n)).collect::<Result<Vec<_>>>()?;

    let parse = |cell: &str, row: usize, col: usize| -> Result<f64> {
        cell.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Parse {
            row,
            column: headers[col].clone(),
            message: format!("not a decimal number: {cell:?}"),
        })
    };

    let mut y = Vec::new();
    let mut values = Vec::new();
    let mut observed = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let row = r + 1;
        let rec = rec.map_err(|e| Error::Parse { row, column: String::new(), message: e.to_string() })?;
        let cell = |c: usize| rec.get(c).unwrap_or("");
        let yc = cell(y_col);
        if is_missing(yc) {
            return Err(Error::MissingResponse(row));
        }
        y.push(parse(yc, row, y_col)?);
        for &c in &x_cols {
            let v = cell(c);
            if is_missing(v) {
                values.push(f64::NAN);
                observed.push(false);
            } else {
                values.push(parse(v, row, c)?);
                observed.push(true);
            }
        }
    }
    let n = y.len();
    if n == 0 {
        return Err(Error::InsufficientRows { rows: 0, needed: 1 });
    }
    let p = names.len();
    let x = DMatrix::from_row_slice(n, p, &values);
    let mask = DMatrix::from_row_slice(n, p, &observed);
    Dataset::new(y, x, mask, names)
}
