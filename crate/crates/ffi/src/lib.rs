//! C ABI for `fbfsel`.
//!
//! Every entry point returns an [`FbfStatus`]. On failure a message for the
//! calling thread is available from [`fbf_last_error_message`]. Handles are
//! opaque and must be released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fbfsel::nalgebra::DMatrix;
use fbfsel::{
    impute_select, select_complete, Dataset, Error, FractionChoice, GibbsConfig, ModelPrior, SelectionResult,
};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerical = 3,
    Io = 4,
    Panic = 5,
}

/// Uniform prior over models.
pub const FBF_PRIOR_UNIFORM: u32 = 0;
/// Beta-binomial(1, 1) prior over model size.
pub const FBF_PRIOR_SCOTT_BERGER: u32 = 1;

/// A regression dataset. Missing predictor cells are NaN.
pub struct FbfDataset(Dataset);

/// Model log-FBFs, posterior probabilities and inclusion probabilities.
pub struct FbfSelection(SelectionResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn fail(status: FbfStatus, msg: impl Into<String>) -> FbfStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> FbfStatus {
    let status = match e.exit_code() {
        3 => FbfStatus::Numerical,
        4 => FbfStatus::Io,
        _ => FbfStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> FbfStatus) -> FbfStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(FbfStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

fn model_prior(code: u32) -> Option<ModelPrior> {
    match code {
        FBF_PRIOR_UNIFORM => Some(ModelPrior::Uniform),
        FBF_PRIOR_SCOTT_BERGER => Some(ModelPrior::ScottBerger),
        _ => None,
    }
}

fn fraction_choice(b: f64) -> Result<FractionChoice, FbfStatus> {
    if b.is_nan() || b > 1.0 {
        Err(fail(FbfStatus::InvalidArgument, format!("fraction must be <= 0 (minimal) or in (0, 1], got {b}")))
    } else if b <= 0.0 {
        Ok(FractionChoice::Minimal)
    } else {
        Ok(FractionChoice::Explicit(b))
    }
}

/// Message describing the last failure on this thread, or an empty string.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn fbf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates a dataset from `n` responses and an `n × p` row-major predictor
/// matrix. NaN predictor cells are treated as missing.
///
/// # Safety
/// `y` must point to `n` doubles, `x` to `n * p` doubles and `out` to
/// writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn fbf_dataset_new(
    y: *const f64,
    x: *const f64,
    n: usize,
    p: usize,
    out: *mut *mut FbfDataset,
) -> FbfStatus {
    guard(|| {
        if y.is_null() || x.is_null() || out.is_null() {
            return fail(FbfStatus::NullPointer, "null pointer argument");
        }
        *out = ptr::null_mut();
        let Some(len) = n.checked_mul(p) else {
            return fail(FbfStatus::InvalidArgument, "n * p overflows");
        };
        let y = std::slice::from_raw_parts(y, n).to_vec();
        let x = DMatrix::from_row_slice(n, p, std::slice::from_raw_parts(x, len));
        let mask = x.map(|v| !v.is_nan());
        match Dataset::with_default_names(y, x, mask) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(FbfDataset(d)));
                FbfStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Releases a dataset. Null is ignored.
///
/// # Safety
/// `ds` must be null or a handle from [`fbf_dataset_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fbf_dataset_free(ds: *mut FbfDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

unsafe fn finish(out: *mut *mut FbfSelection, r: fbfsel::Result<SelectionResult>) -> FbfStatus {
    match r {
        Ok(r) => {
            *out = Box::into_raw(Box::new(FbfSelection(r)));
            FbfStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Evaluates every model on a complete dataset. `fraction <= 0` selects the
/// minimal training fraction.
///
/// # Safety
/// `ds` must be a live dataset handle and `out` writable storage for one
/// handle.
#[no_mangle]
pub unsafe extern "C" fn fbf_select(
    ds: *const FbfDataset,
    prior: u32,
    fraction: f64,
    out: *mut *mut FbfSelection,
) -> FbfStatus {
    guard(|| {
        if ds.is_null() || out.is_null() {
            return fail(FbfStatus::NullPointer, "null pointer argument");
        }
        *out = ptr::null_mut();
        let Some(prior) = model_prior(prior) else {
            return fail(FbfStatus::InvalidArgument, format!("unknown model prior {prior}"));
        };
        let fraction = match fraction_choice(fraction) {
            Ok(f) => f,
            Err(s) => return s,
        };
        let d = &(*ds).0;
        let x = match d.complete_x() {
            Ok(x) => x,
            Err(e) => return from_error(e),
        };
        finish(out, select_complete(x, d.y(), fraction, prior))
    })
}

/// Imputes the missing predictor cells `m` times and evaluates every model
/// on the averaged densities.
///
/// # Safety
/// As for [`fbf_select`].
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn fbf_impute_select(
    ds: *const FbfDataset,
    prior: u32,
    fraction: f64,
    m: usize,
    burn_in: usize,
    spacing: usize,
    seed: u64,
    out: *mut *mut FbfSelection,
) -> FbfStatus {
    guard(|| {
        if ds.is_null() || out.is_null() {
            return fail(FbfStatus::NullPointer, "null pointer argument");
        }
        *out = ptr::null_mut();
        let Some(prior) = model_prior(prior) else {
            return fail(FbfStatus::InvalidArgument, format!("unknown model prior {prior}"));
        };
        let fraction = match fraction_choice(fraction) {
            Ok(f) => f,
            Err(s) => return s,
        };
        let cfg = GibbsConfig { burn_in, spacing, m, seed };
        finish(out, impute_select(&(*ds).0, &cfg, fraction, prior).map(|(r, _)| r))
    })
}

/// Releases a selection. Null is ignored.
///
/// # Safety
/// `sel` must be null or a handle from a select call not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fbf_selection_free(sel: *mut FbfSelection) {
    if !sel.is_null() {
        drop(Box::from_raw(sel));
    }
}

/// Number of predictors, or 0 for a null handle.
///
/// # Safety
/// `sel` must be null or a live selection handle.
#[no_mangle]
pub unsafe extern "C" fn fbf_selection_num_predictors(sel: *const FbfSelection) -> usize {
    sel.as_ref().map_or(0, |s| s.0.p)
}

/// Number of models (`2^p`), or 0 for a null handle.
///
/// # Safety
/// `sel` must be null or a live selection handle.
#[no_mangle]
pub unsafe extern "C" fn fbf_selection_num_models(sel: *const FbfSelection) -> usize {
    sel.as_ref().map_or(0, |s| s.0.log_fbf.len())
}

unsafe fn copy_out(
    sel: *const FbfSelection,
    out: *mut f64,
    len: usize,
    field: impl FnOnce(&SelectionResult) -> &[f64],
) -> FbfStatus {
    guard(|| {
        if sel.is_null() || out.is_null() {
            return fail(FbfStatus::NullPointer, "null pointer argument");
        }
        let src = field(&(*sel).0);
        if len < src.len() {
            return fail(FbfStatus::InvalidArgument, format!("buffer holds {len} values, need {}", src.len()));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
        FbfStatus::Ok
    })
}

/// Copies the `p` inclusion probabilities into `out`.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fbf_selection_inclusion(sel: *const FbfSelection, out: *mut f64, len: usize) -> FbfStatus {
    copy_out(sel, out, len, |r| &r.inclusion)
}

/// Copies `ln FBF(γ, full)` for every model into `out`, indexed by the
/// model bitmask (bit `j` set when predictor `j` is included).
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fbf_selection_log_fbf(sel: *const FbfSelection, out: *mut f64, len: usize) -> FbfStatus {
    copy_out(sel, out, len, |r| &r.log_fbf)
}

/// Copies the posterior model probabilities into `out`, indexed as for
/// [`fbf_selection_log_fbf`].
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fbf_selection_post_prob(sel: *const FbfSelection, out: *mut f64, len: usize) -> FbfStatus {
    copy_out(sel, out, len, |r| &r.post_prob)
}

/// Minimal training fraction `(k + 1) / n` for a full model with `p`
/// predictors. Writes it to `out`.
///
/// # Safety
/// `out` must point to one writable double.
#[no_mangle]
pub unsafe extern "C" fn fbf_minimal_fraction(n: usize, p: usize, out: *mut f64) -> FbfStatus {
    guard(|| {
        if out.is_null() {
            return fail(FbfStatus::NullPointer, "null pointer argument");
        }
        match fbfsel::minimal_fraction(n, p + 1) {
            Ok(f) => {
                *out = f.b;
                FbfStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
