//! Small dense Cholesky helpers.
//!
//! nalgebra's own `Cholesky` only rejects non-positive pivots. The routines
//! here reject any pivot below `rel_tol * max(diag)` so that near-singular
//! designs fail deterministically instead of producing huge, noisy inverses.

use nalgebra::{DMatrix, DVector};

/// Pivot tolerance for design cross-product matrices, relative to the
/// largest diagonal entry.
pub const PIVOT_REL_TOL: f64 = 1e-10;

/// Lower-triangular Cholesky factor `L` with `A = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: DMatrix<f64>,
}

/// Failure of [`Cholesky::new`]: the column and the offending pivot.
#[derive(Debug, Clone, Copy)]
pub struct PivotFailure {
    pub column: usize,
    pub pivot: f64,
}

impl Cholesky {
    /// Factor a symmetric matrix, reading only its lower triangle.
    pub fn new(a: &DMatrix<f64>, rel_tol: f64) -> Result<Self, PivotFailure> {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "Cholesky of a non-square matrix");
        let max_diag = (0..n).map(|i| a[(i, i)]).fold(0.0_f64, f64::max);
        let floor = rel_tol * max_diag;
        let mut l = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let mut d = a[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if !d.is_finite() || d <= floor {
                return Err(PivotFailure { column: j, pivot: d });
            }
            let ljj = d.sqrt();
            l[(j, j)] = ljj;
            for i in (j + 1)..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(Self { l })
    }

    pub fn dim(&self) -> usize {
        self.l.nrows()
    }

    pub fn l(&self) -> &DMatrix<f64> {
        &self.l
    }

    pub fn ln_det(&self) -> f64 {
        2.0 * (0..self.dim()).map(|i| self.l[(i, i)].ln()).sum::<f64>()
    }

    /// Solve `L z = b`.
    pub fn solve_lower(&self, b: &DVector<f64>) -> DVector<f64> {
        let n = self.dim();
        let mut z = b.clone();
        for i in 0..n {
            let mut s = z[i];
            for k in 0..i {
                s -= self.l[(i, k)] * z[k];
            }
            z[i] = s / self.l[(i, i)];
        }
        z
    }

    /// Solve `Lᵀ x = z`.
    pub fn solve_upper(&self, z: &DVector<f64>) -> DVector<f64> {
        let n = self.dim();
        let mut x = z.clone();
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in (i + 1)..n {
                s -= self.l[(k, i)] * x[k];
            }
            x[i] = s / self.l[(i, i)];
        }
        x
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        self.solve_upper(&self.solve_lower(b))
    }

    /// Quadratic form `bᵀ A⁻¹ b`.
    pub fn inv_quad(&self, b: &DVector<f64>) -> f64 {
        self.solve_lower(b).norm_squared()
    }

    /// `A⁻¹`, assembled column by column from triangular solves.
    pub fn inverse(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut inv = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let mut e = DVector::<f64>::zeros(n);
            e[j] = 1.0;
            inv.set_column(j, &self.solve(&e));
        }
        symmetrize(&mut inv);
        inv
    }
}

/// Overwrite both triangles with their average.
pub fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_and_solve() {
        let a = DMatrix::from_row_slice(3, 3, &[4.0, 2.0, 0.6, 2.0, 5.0, 1.0, 0.6, 1.0, 3.0]);
        let c = Cholesky::new(&a, PIVOT_REL_TOL).unwrap();
        let rebuilt = c.l() * c.l().transpose();
        assert!((rebuilt - &a).abs().max() < 1e-14);
        let b = DVector::from_vec(vec![1.0, -2.0, 0.5]);
        let x = c.solve(&b);
        assert!((&a * x - b).abs().max() < 1e-14);
        let inv_lu = a.clone().try_inverse().unwrap();
        assert!((c.inverse() - inv_lu).abs().max() < 1e-14);
        assert!((c.ln_det() - a.determinant().ln()).abs() < 1e-13);
    }

    #[test]
    fn singular_is_rejected() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let err = Cholesky::new(&a, PIVOT_REL_TOL).unwrap_err();
        assert_eq!(err.column, 1);
    }

    #[test]
    fn relative_tolerance_applies() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-12]);
        assert!(Cholesky::new(&a, PIVOT_REL_TOL).is_err());
        assert!(Cholesky::new(&a, 0.0).is_ok());
    }
}
