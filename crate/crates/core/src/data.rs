use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Response, predictors and an observation mask.
///
/// Missing predictor cells hold `NaN`; numeric code consults the mask and
/// never reads them. The response is always fully observed.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    y: Vec<f64>,
    x: DMatrix<f64>,
    mask: DMatrix<bool>,
    names: Vec<String>,
}

impl Dataset {
    pub fn new(y: Vec<f64>, x: DMatrix<f64>, mask: DMatrix<bool>, names: Vec<String>) -> Result<Self> {
        let n = y.len();
        if n == 0 {
            return Err(Error::InsufficientRows { rows: 0, needed: 1 });
        }
        if x.ncols() == 0 {
            return Err(Error::InvalidArgument("dataset needs at least one predictor".into()));
        }
        if x.nrows() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.nrows() });
        }
        if mask.shape() != x.shape() {
            return Err(Error::DimensionMismatch { expected: x.len(), got: mask.len() });
        }
        if names.len() != x.ncols() {
            return Err(Error::DimensionMismatch { expected: x.ncols(), got: names.len() });
        }
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::MissingResponse(i + 1));
        }
        let mut x = x;
        for ((v, &obs), j) in x.iter_mut().zip(mask.iter()).zip(0..) {
            if !obs {
                *v = f64::NAN;
            } else if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite observed value in column {}", names[j / n])));
            }
        }
        Ok(Self { y, x, mask, names })
    }

    /// A fully observed dataset.
    pub fn complete(y: Vec<f64>, x: DMatrix<f64>, names: Vec<String>) -> Result<Self> {
        let mask = DMatrix::from_element(x.nrows(), x.ncols(), true);
        Self::new(y, x, mask, names)
    }

    /// Predictors named `x1..xp`.
    pub fn with_default_names(y: Vec<f64>, x: DMatrix<f64>, mask: DMatrix<bool>) -> Result<Self> {
        let names = (1..=x.ncols()).map(|j| format!("x{j}")).collect();
        Self::new(y, x, mask, names)
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Predictor matrix; masked-out cells are `NaN`.
    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn mask(&self) -> &DMatrix<bool> {
        &self.mask
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    pub fn is_observed(&self, row: usize, col: usize) -> bool {
        self.mask[(row, col)]
    }

    pub fn missing_count(&self) -> usize {
        self.mask.iter().filter(|&&m| !m).count()
    }

    pub fn is_complete(&self) -> bool {
        self.mask.iter().all(|&m| m)
    }

    /// The predictor matrix, or an error naming the first incomplete column.
    pub fn complete_x(&self) -> Result<&DMatrix<f64>> {
        match (0..self.p()).find(|&j| self.mask.column(j).iter().any(|&m| !m)) {
            None => Ok(&self.x),
            Some(j) => Err(Error::InvalidArgument(format!(
                "column {} has missing cells; use imputation or listwise deletion",
                self.names[j]
            ))),
        }
    }

    /// Sub-dataset of the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let y = rows.iter().map(|&i| self.y[i]).collect();
        let x = self.x.select_rows(rows);
        let mask = self.mask.select_rows(rows);
        Self::new(y, x, mask, self.names.clone())
    }

    /// Sub-dataset keeping the given predictor columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        let x = self.x.select_columns(cols);
        let mask = self.mask.select_columns(cols);
        let names = cols.iter().map(|&j| self.names[j].clone()).collect();
        Self::new(self.y.clone(), x, mask, names)
    }

    pub(crate) fn with_mask(&self, mask: DMatrix<bool>) -> Result<Self> {
        Self::new(self.y.clone(), self.x.clone(), mask, self.names.clone())
    }
}
