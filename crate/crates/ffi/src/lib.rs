//! C ABI for `cslgeom`.
//!
//! Families are opaque `CslFamily` handles created by [`csl_family_new`] and
//! released with [`csl_family_free`]. Every fallible call returns a
//! [`CslStatus`]; the message of the last failure on the calling thread is
//! available through [`csl_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use cslgeom::geom::ric_jh;
use cslgeom::pinch::{self, Threshold};
use cslgeom::sample::evaluate;
use cslgeom::{contact, Error, FamilyKind, FamilySpec, ImmersionFamily};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CslStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    DegenerateMetric = 3,
    DimensionMismatch = 4,
    BufferTooSmall = 5,
    NonpositiveEpsilon = 6,
    OffSphere = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CslFamilyKind {
    TotallyGeodesic = 0,
    CalabiTorus = 1,
    CalabiProduct = 2,
    CliffordTorus = 3,
}

impl From<CslFamilyKind> for FamilyKind {
    fn from(k: CslFamilyKind) -> Self {
        match k {
            CslFamilyKind::TotallyGeodesic => FamilyKind::TotallyGeodesic,
            CslFamilyKind::CalabiTorus => FamilyKind::CalabiTorus,
            CslFamilyKind::CalabiProduct => FamilyKind::CalabiProduct,
            CslFamilyKind::CliffordTorus => FamilyKind::CliffordTorus,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CslThreshold {
    Basic = 0,
    Main = 1,
    Main1 = 2,
    Main3 = 3,
    Tg = 4,
}

impl From<CslThreshold> for Threshold {
    fn from(t: CslThreshold) -> Self {
        match t {
            CslThreshold::Basic => Threshold::Basic,
            CslThreshold::Main => Threshold::Main,
            CslThreshold::Main1 => Threshold::Main1,
            CslThreshold::Main3 => Threshold::Main3,
            CslThreshold::Tg => Threshold::Tg,
        }
    }
}

/// Opaque handle to a built family.
pub struct CslFamily {
    inner: ImmersionFamily,
}

/// Invariants at one chart point. `gauss_curv` is NaN unless `n == 2`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CslPointInfo {
    pub n: usize,
    pub norm_b2: f64,
    pub norm_h2: f64,
    pub gauss_curv: f64,
    pub ric_jh: f64,
    pub legendrian_residual: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> CslStatus {
    match err {
        Error::InvalidParams(_) | Error::Usage(_) | Error::NoOracle(_) => CslStatus::InvalidParams,
        Error::DegenerateMetric { .. } => CslStatus::DegenerateMetric,
        Error::ChartDimMismatch { .. }
        | Error::WrongDimension { .. }
        | Error::ShapeMismatch(_)
        | Error::IndexOutOfRange { .. } => CslStatus::DimensionMismatch,
        Error::NonpositiveEpsilon(_) => CslStatus::NonpositiveEpsilon,
        Error::OffSphere { .. } => CslStatus::OffSphere,
        Error::ZeroMeanCurvature { .. } | Error::EmptySampleSet | Error::Io(_) => CslStatus::Internal,
    }
}

enum Failure {
    Lib(Error),
    Status(CslStatus, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Run `f`, recording failures and containing panics.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CslStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CslStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_last_error(msg);
            s
        }
        Err(_) => {
            set_last_error("internal panic".into());
            CslStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(CslStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `ptr` must be null or valid for `len` reads.
unsafe fn input<'a>(ptr: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(ptr, len))
}

fn family_ref<'a>(family: *const CslFamily) -> Result<&'a CslFamily, Failure> {
    // SAFETY: non-null handles come from csl_family_new and are live until freed
    unsafe { family.as_ref() }.ok_or_else(|| null("family"))
}

/// Build a family. `params` lists values in the family's order (`r1, r2, r3, r4`
/// for the Calabi torus, `r1, r2` for the Calabi product); NaN leaves a value
/// unset, and a missing partner radius is completed to `r² + r'² = 1`.
///
/// # Safety
/// `params` must be valid for `params_len` reads and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn csl_family_new(
    kind: CslFamilyKind,
    n: usize,
    params: *const f64,
    params_len: usize,
    out: *mut *mut CslFamily,
) -> CslStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let values = input(params, params_len, "params")?;
        let kind = FamilyKind::from(kind);
        let names = kind.param_names();
        if values.len() > names.len() {
            return Err(Failure::Status(
                CslStatus::InvalidParams,
                format!("{kind} takes at most {} parameters, got {}", names.len(), values.len()),
            ));
        }
        let mut spec = FamilySpec::new(kind, n);
        for (name, v) in names.iter().zip(values) {
            if !v.is_nan() {
                spec = spec.with(name, *v);
            }
        }
        let inner = spec.build()?;
        *out = Box::into_raw(Box::new(CslFamily { inner }));
        Ok(())
    })
}

/// Release a family. Null is ignored.
///
/// # Safety
/// `family` must be null or a handle from [`csl_family_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn csl_family_free(family: *mut CslFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Intrinsic dimension of the family, or 0 for a null handle.
///
/// # Safety
/// `family` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn csl_family_dim(family: *const CslFamily) -> usize {
    family.as_ref().map_or(0, |f| f.inner.n())
}

/// Evaluate invariants at the chart point `u` (length `n`).
///
/// # Safety
/// `u` must be valid for `u_len` reads and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn csl_family_eval(
    family: *const CslFamily,
    u: *const f64,
    u_len: usize,
    out: *mut CslPointInfo,
) -> CslStatus {
    guard(|| {
        let fam = family_ref(family)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let u = input(u, u_len, "u")?;
        let pd = evaluate(&fam.inner, u)?;
        *out = CslPointInfo {
            n: pd.fund.n,
            norm_b2: pd.fund.norm_b2,
            norm_h2: pd.fund.norm_h2,
            gauss_curv: pd.fund.gauss_curv.unwrap_or(f64::NAN),
            ric_jh: ric_jh(&pd.fund),
            legendrian_residual: contact::legendrian_residual(&pd.jet),
        };
        Ok(())
    })
}

/// Write the cubic form at `u` as a dense row-major `n × n × n` array.
/// Fails with `BufferTooSmall` when `buf_len < n³`.
///
/// # Safety
/// `u` must be valid for `u_len` reads and `buf` valid for `buf_len` writes.
#[no_mangle]
pub unsafe extern "C" fn csl_family_sigma(
    family: *const CslFamily,
    u: *const f64,
    u_len: usize,
    buf: *mut f64,
    buf_len: usize,
) -> CslStatus {
    guard(|| {
        let fam = family_ref(family)?;
        let n = fam.inner.n();
        let need = n * n * n;
        if buf_len < need {
            return Err(Failure::Status(
                CslStatus::BufferTooSmall,
                format!("sigma needs {need} entries, buffer holds {buf_len}"),
            ));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        let u = input(u, u_len, "u")?;
        let sigma = evaluate(&fam.inner, u)?.fund.sigma.to_dense();
        slice::from_raw_parts_mut(buf, need).copy_from_slice(sigma.as_slice());
        Ok(())
    })
}

/// Value of a pinching threshold at `(n, |H|²)`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn csl_threshold(which: CslThreshold, n: usize, h2: f64, out: *mut f64) -> CslStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let t = Threshold::from(which);
        if !t.applies(n) {
            return Err(Failure::Status(
                CslStatus::InvalidParams,
                format!("threshold {} is stated for n >= {}, got {n}", t.name(), t.min_dim()),
            ));
        }
        *out = t.value(n, h2);
        Ok(())
    })
}

/// The relaxed threshold for a given `eps > 0`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn csl_threshold_eps(n: usize, h2: f64, eps: f64, out: *mut f64) -> CslStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = pinch::threshold_eps(n, h2, eps)?;
        Ok(())
    })
}

/// Copy the last error message of this thread into `buf` (NUL-terminated,
/// truncated to fit) and return the full message length including the NUL.
/// Returns 0 when no error has occurred.
///
/// # Safety
/// `buf` must be null or valid for `buf_len` writes.
#[no_mangle]
pub unsafe extern "C" fn csl_last_error(buf: *mut c_char, buf_len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            return 0;
        };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && buf_len > 0 {
            let n = bytes.len().min(buf_len);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n - 1) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn csl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
