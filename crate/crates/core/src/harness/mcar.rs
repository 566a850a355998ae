use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::Dataset;
use crate::error::{Error, Result};

/// Mark each cell of the given predictor columns missing independently with
/// probability `rate`.
///
/// One uniform draw is consumed per cell, rows outer and columns inner in the
/// order given, so the mask depends only on `(n, cols, rate, seed)`.
pub fn inject_mcar(d: &Dataset, cols: &[usize], rate: f64, seed: u64) -> Result<Dataset> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidArgument(format!("missingness rate {rate} outside (0, 1)")));
    }
    for &j in cols {
        if j >= d.p() {
            return Err(Error::IndexOutOfRange { index: j, dim: d.p() });
        }
        if (0..d.n()).any(|i| !d.is_observed(i, j)) {
            return Err(Error::AlreadyMissing { column: d.names()[j].clone() });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mask = d.mask().clone();
    for i in 0..d.n() {
        for &j in cols {
            if rng.random::<f64>() < rate {
                mask[(i, j)] = false;
            }
        }
    }
    d.with_mask(mask)
}
