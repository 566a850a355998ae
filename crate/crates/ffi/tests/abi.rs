use std::ffi::CStr;
use std::ptr;

use fbfsel::nalgebra::DMatrix;
use fbfsel::synth::random_regression;
use fbfsel::{select_complete, FractionChoice, ModelPrior};
use fbfsel_ffi::*;

fn row_major(x: &DMatrix<f64>) -> Vec<f64> {
    x.transpose().as_slice().to_vec()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(fbf_last_error_message()) }.to_string_lossy().into_owned()
}

fn dataset(y: &[f64], x: &[f64], n: usize, p: usize) -> (FbfStatus, *mut FbfDataset) {
    let mut ds = ptr::null_mut();
    let s = unsafe { fbf_dataset_new(y.as_ptr(), x.as_ptr(), n, p, &mut ds) };
    (s, ds)
}

#[test]
fn select_matches_the_library() {
    let (x, y) = random_regression(40, 3, &[1.0, 0.0, -0.5], 9);
    let (s, ds) = dataset(&y, &row_major(&x), 40, 3);
    assert_eq!(s, FbfStatus::Ok);

    let mut sel = ptr::null_mut();
    assert_eq!(unsafe { fbf_select(ds, FBF_PRIOR_SCOTT_BERGER, 0.0, &mut sel) }, FbfStatus::Ok);
    assert_eq!(unsafe { fbf_selection_num_predictors(sel) }, 3);
    assert_eq!(unsafe { fbf_selection_num_models(sel) }, 8);

    let expected = select_complete(&x, &y, FractionChoice::Minimal, ModelPrior::ScottBerger).unwrap();
    let mut inc = [0.0; 3];
    let mut logs = [0.0; 8];
    let mut probs = [0.0; 8];
    unsafe {
        assert_eq!(fbf_selection_inclusion(sel, inc.as_mut_ptr(), 3), FbfStatus::Ok);
        assert_eq!(fbf_selection_log_fbf(sel, logs.as_mut_ptr(), 8), FbfStatus::Ok);
        assert_eq!(fbf_selection_post_prob(sel, probs.as_mut_ptr(), 8), FbfStatus::Ok);
    }
    assert_eq!(inc.as_slice(), expected.inclusion.as_slice());
    assert_eq!(logs.as_slice(), expected.log_fbf.as_slice());
    assert_eq!(probs.as_slice(), expected.post_prob.as_slice());

    unsafe {
        fbf_selection_free(sel);
        fbf_dataset_free(ds);
    }
}

#[test]
fn explicit_fraction_is_used() {
    let (x, y) = random_regression(30, 2, &[0.7, 0.0], 4);
    let (_, ds) = dataset(&y, &row_major(&x), 30, 2);
    let mut sel = ptr::null_mut();
    assert_eq!(unsafe { fbf_select(ds, FBF_PRIOR_UNIFORM, 0.5, &mut sel) }, FbfStatus::Ok);
    let expected = select_complete(&x, &y, FractionChoice::Explicit(0.5), ModelPrior::Uniform).unwrap();
    let mut logs = [0.0; 4];
    unsafe { fbf_selection_log_fbf(sel, logs.as_mut_ptr(), 4) };
    assert_eq!(logs.as_slice(), expected.log_fbf.as_slice());
    unsafe {
        fbf_selection_free(sel);
        fbf_dataset_free(ds);
    }
}

#[test]
fn impute_select_with_nan_cells() {
    let (x, y) = random_regression(60, 2, &[1.0, 0.3], 5);
    let mut flat = row_major(&x);
    for i in (0..60).step_by(7) {
        flat[2 * i + (i % 2)] = f64::NAN;
    }
    let (s, ds) = dataset(&y, &flat, 60, 2);
    assert_eq!(s, FbfStatus::Ok);

    let mut sel = ptr::null_mut();
    assert_eq!(unsafe { fbf_select(ds, FBF_PRIOR_UNIFORM, 0.0, &mut sel) }, FbfStatus::InvalidArgument);
    assert!(sel.is_null());
    assert!(!last_error().is_empty());

    let status = unsafe { fbf_impute_select(ds, FBF_PRIOR_UNIFORM, 0.0, 5, 20, 2, 7, &mut sel) };
    assert_eq!(status, FbfStatus::Ok, "{}", last_error());
    let mut probs = [0.0; 4];
    unsafe { fbf_selection_post_prob(sel, probs.as_mut_ptr(), 4) };
    assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert_eq!(last_error(), "");

    let mut again = ptr::null_mut();
    unsafe { fbf_impute_select(ds, FBF_PRIOR_UNIFORM, 0.0, 5, 20, 2, 7, &mut again) };
    let mut probs2 = [0.0; 4];
    unsafe { fbf_selection_post_prob(again, probs2.as_mut_ptr(), 4) };
    assert_eq!(probs, probs2);
    unsafe {
        fbf_selection_free(sel);
        fbf_selection_free(again);
        fbf_dataset_free(ds);
    }
}

#[test]
fn error_codes() {
    let y = [1.0, 2.0, 3.0, 5.0, 4.0, 6.0];
    let x = [1.0, 2.0, 2.0, 4.0, 3.0, 6.0, 4.0, 8.0, 5.0, 10.0, 6.0, 12.0];
    let (_, ds) = dataset(&y, &x, 6, 2);
    let mut sel = ptr::null_mut();
    unsafe {
        assert_eq!(fbf_select(ds, FBF_PRIOR_UNIFORM, 0.0, &mut sel), FbfStatus::Numerical);
        assert_eq!(fbf_select(ds, 7, 0.0, &mut sel), FbfStatus::InvalidArgument);
        assert!(last_error().contains("prior"));
        assert_eq!(fbf_select(ds, FBF_PRIOR_UNIFORM, 1.5, &mut sel), FbfStatus::InvalidArgument);
        assert_eq!(fbf_select(ds, FBF_PRIOR_UNIFORM, f64::NAN, &mut sel), FbfStatus::InvalidArgument);
        assert_eq!(fbf_select(ptr::null(), FBF_PRIOR_UNIFORM, 0.0, &mut sel), FbfStatus::NullPointer);
        assert_eq!(fbf_select(ds, FBF_PRIOR_UNIFORM, 0.0, ptr::null_mut()), FbfStatus::NullPointer);
        fbf_dataset_free(ds);
    }

    // NaN response is rejected
    let (s, ds) = dataset(&[1.0, f64::NAN], &[1.0, 2.0], 2, 1);
    assert_eq!(s, FbfStatus::InvalidArgument);
    assert!(ds.is_null());

    let (s, _) = dataset(&[1.0], &[1.0], 1, 0);
    assert_eq!(s, FbfStatus::InvalidArgument);
}

#[test]
fn short_buffer_is_rejected() {
    let (x, y) = random_regression(20, 2, &[1.0, 1.0], 1);
    let (_, ds) = dataset(&y, &row_major(&x), 20, 2);
    let mut sel = ptr::null_mut();
    let mut buf = [0.0; 3];
    unsafe {
        fbf_select(ds, FBF_PRIOR_UNIFORM, 0.0, &mut sel);
        assert_eq!(fbf_selection_log_fbf(sel, buf.as_mut_ptr(), 3), FbfStatus::InvalidArgument);
        assert_eq!(fbf_selection_inclusion(sel, ptr::null_mut(), 2), FbfStatus::NullPointer);
        assert_eq!(fbf_selection_num_models(ptr::null()), 0);
        fbf_selection_free(sel);
        fbf_dataset_free(ds);
        fbf_selection_free(ptr::null_mut());
        fbf_dataset_free(ptr::null_mut());
    }
}

#[test]
fn minimal_fraction() {
    let mut b = 0.0;
    assert_eq!(unsafe { fbf_minimal_fraction(178, 7, &mut b) }, FbfStatus::Ok);
    assert_eq!(b, 9.0 / 178.0);
    assert_eq!(unsafe { fbf_minimal_fraction(5, 7, &mut b) }, FbfStatus::Numerical);
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/fbfsel.h")).unwrap();
    for sym in [
        "fbf_last_error_message",
        "fbf_dataset_new",
        "fbf_dataset_free",
        "fbf_select",
        "fbf_impute_select",
        "fbf_selection_free",
        "fbf_selection_num_predictors",
        "fbf_selection_num_models",
        "fbf_selection_inclusion",
        "fbf_selection_log_fbf",
        "fbf_selection_post_prob",
        "fbf_minimal_fraction",
        "typedef struct FbfDataset FbfDataset",
        "FBF_STATUS_NUMERICAL = 3",
        "FBF_PRIOR_SCOTT_BERGER 1",
    ] {
        assert!(header.contains(sym), "{sym}");
    }
}
