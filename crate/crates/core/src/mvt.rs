//! Multivariate Student-t density and marginals.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::Cholesky;
use crate::special::ln_gamma;

/// Multivariate t law with location `mu`, scale matrix `sigma` and `nu` degrees of freedom.
#[derive(Debug, Clone, PartialEq)]
pub struct MvT {
    mu: DVector<f64>,
    sigma: DMatrix<f64>,
    nu: f64,
}

impl MvT {
    pub fn new(mu: DVector<f64>, sigma: DMatrix<f64>, nu: f64) -> Result<Self> {
        let q = mu.len();
        if sigma.nrows() != q || sigma.ncols() != q {
            return Err(Error::DimensionMismatch { expected: q, got: sigma.nrows() });
        }
        if nu.is_nan() || nu <= 0.0 {
            return Err(Error::InvalidArgument(format!("degrees of freedom {nu} must be positive")));
        }
        if q > 0 && Cholesky::new(&sigma, 0.0).is_err() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self { mu, sigma, nu })
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.mu
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn logpdf(&self, x: &DVector<f64>) -> Result<f64> {
        mvt_logpdf(x, self)
    }

    pub fn marginal(&self, keep: &[usize]) -> Result<MvT> {
        marginal(self, keep)
    }
}

/// `ln f(x)` for the multivariate t, via a Cholesky factor of the scale matrix.
pub fn mvt_logpdf(x: &DVector<f64>, t: &MvT) -> Result<f64> {
    let q = t.dim();
    if x.len() != q {
        return Err(Error::DimensionMismatch { expected: q, got: x.len() });
    }
    let chol = Cholesky::new(&t.sigma, 0.0).map_err(|_| Error::NotPositiveDefinite)?;
    let diff = x - &t.mu;
    let delta = chol.inv_quad(&diff);
    let qf = q as f64;
    let nu = t.nu;
    Ok(ln_gamma(0.5 * (nu + qf))
        - ln_gamma(0.5 * nu)
        - 0.5 * qf * (nu * PI).ln()
        - 0.5 * chol.ln_det()
        - 0.5 * (nu + qf) * (delta / nu).ln_1p())
}

/// Marginal law of the coordinates in `keep`, in the order given.
pub fn marginal(t: &MvT, keep: &[usize]) -> Result<MvT> {
    if keep.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let q = t.dim();
    for (i, &k) in keep.iter().enumerate() {
        if k >= q {
            return Err(Error::IndexOutOfRange { index: k, dim: q });
        }
        if keep[..i].contains(&k) {
            return Err(Error::DuplicateIndex(k));
        }
    }
    let mu = DVector::from_iterator(keep.len(), keep.iter().map(|&i| t.mu[i]));
    let sigma = DMatrix::from_fn(keep.len(), keep.len(), |r, c| t.sigma[(keep[r], keep[c])]);
    Ok(MvT { mu, sigma, nu: t.nu })
}
