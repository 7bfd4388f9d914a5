use std::ffi::{c_char, CStr};
use std::path::Path;
use std::process::Command;
use std::ptr;

use cslgeom_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    let len = unsafe { csl_last_error(buf.as_mut_ptr(), buf.len()) };
    assert!(len > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn family(kind: CslFamilyKind, n: usize, params: &[f64]) -> *mut CslFamily {
    let mut out = ptr::null_mut();
    let status = unsafe { csl_family_new(kind, n, params.as_ptr(), params.len(), &mut out) };
    assert_eq!(status, CslStatus::Ok, "{}", last_error());
    assert!(!out.is_null());
    out
}

#[test]
fn minimal_torus_through_the_c_abi() {
    let r1 = (6.0f64).sqrt() / 3.0;
    let fam = family(CslFamilyKind::CalabiTorus, 2, &[r1, f64::NAN, std::f64::consts::FRAC_1_SQRT_2]);
    let mut info = CslPointInfo::default();
    let u = [0.3, 1.7];
    let status = unsafe { csl_family_eval(fam, u.as_ptr(), u.len(), &mut info) };
    assert_eq!(status, CslStatus::Ok);
    assert_eq!(info.n, 2);
    assert!((info.norm_b2 - 2.0).abs() < 1e-10);
    assert!(info.norm_h2 < 1e-10);
    assert!(info.gauss_curv.abs() < 1e-10);
    assert!(info.legendrian_residual < 1e-12);
    unsafe { csl_family_free(fam) };
}

#[test]
fn sigma_buffer() {
    let fam = family(CslFamilyKind::CalabiProduct, 3, &[0.6]);
    assert_eq!(unsafe { csl_family_dim(fam) }, 3);
    let u = [0.2, 1.0, 2.0];
    let mut small = [0.0; 8];
    let status = unsafe { csl_family_sigma(fam, u.as_ptr(), 3, small.as_mut_ptr(), small.len()) };
    assert_eq!(status, CslStatus::BufferTooSmall);
    assert!(last_error().contains("27"));

    let mut buf = [0.0; 27];
    let status = unsafe { csl_family_sigma(fam, u.as_ptr(), 3, buf.as_mut_ptr(), buf.len()) };
    assert_eq!(status, CslStatus::Ok);
    let (r1, r2) = (0.6, 0.8);
    assert!((buf[0] - (r2 / r1 - r1 / r2)).abs() < 1e-10);
    // σ_{0,1,1} and its permutations
    for idx in [4, 10, 12] {
        assert!((buf[idx] - r2 / r1).abs() < 1e-10);
    }
    unsafe { csl_family_free(fam) };
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    let bad = [0.6, 0.7, 0.6, 0.8];
    let status = unsafe { csl_family_new(CslFamilyKind::CalabiTorus, 2, bad.as_ptr(), 4, &mut out) };
    assert_eq!(status, CslStatus::InvalidParams);
    assert!(out.is_null());
    assert!(last_error().contains("r1² + r2² = 1"));

    let status = unsafe { csl_family_new(CslFamilyKind::TotallyGeodesic, 2, ptr::null(), 0, ptr::null_mut()) };
    assert_eq!(status, CslStatus::NullPointer);

    let fam = family(CslFamilyKind::TotallyGeodesic, 2, &[]);
    let mut info = CslPointInfo::default();
    let u = [0.5];
    let status = unsafe { csl_family_eval(fam, u.as_ptr(), 1, &mut info) };
    assert_eq!(status, CslStatus::DimensionMismatch);
    let pole = [0.0, 0.5];
    let status = unsafe { csl_family_eval(fam, pole.as_ptr(), 2, &mut info) };
    assert_eq!(status, CslStatus::DegenerateMetric);
    let status = unsafe { csl_family_eval(ptr::null(), pole.as_ptr(), 2, &mut info) };
    assert_eq!(status, CslStatus::NullPointer);
    unsafe { csl_family_free(fam) };
    unsafe { csl_family_free(ptr::null_mut()) };
}

#[test]
fn thresholds() {
    let mut v = 0.0;
    assert_eq!(unsafe { csl_threshold(CslThreshold::Main3, 17, 0.0, &mut v) }, CslStatus::Ok);
    assert_eq!(v, 12.0);
    assert_eq!(unsafe { csl_threshold(CslThreshold::Main, 3, 0.0, &mut v) }, CslStatus::Ok);
    assert!((v - 8.0 / 3.0).abs() < 1e-15);
    assert_eq!(unsafe { csl_threshold(CslThreshold::Main1, 2, 0.0, &mut v) }, CslStatus::InvalidParams);
    let mut e = 0.0;
    assert_eq!(unsafe { csl_threshold_eps(4, 1.0, 1.0, &mut e) }, CslStatus::Ok);
    assert_eq!(unsafe { csl_threshold(CslThreshold::Main, 4, 1.0, &mut v) }, CslStatus::Ok);
    assert_eq!(e, v);
    assert_eq!(unsafe { csl_threshold_eps(4, 1.0, 0.0, &mut e) }, CslStatus::NonpositiveEpsilon);
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(csl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/cslgeom.h");
    assert!(header.exists());
    let Ok(status) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(status.success());
}
