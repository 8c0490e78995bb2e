//! C ABI over the `sphole` library.
//!
//! Every function returns a [`SpholeStatus`]; results go through out
//! pointers. Configurations and bound evaluators are opaque heap handles
//! released with their `_free` function. After a failure,
//! [`sphole_last_error`] describes it on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sphole::bounds::{required_intensity, BoundEvaluator, BoundResult, CaseLabel};
use sphole::{classify, estimate, rips_threshold, Error, MCEstimate, NetworkConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpholeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidConfig = 2,
    Domain = 3,
    Unreachable = 4,
    Internal = 5,
    Panic = 6,
}

/// Network configuration handle.
pub struct SpholeConfig {
    inner: NetworkConfig,
}

/// Quadrature tables for one geometry; evaluates many intensities cheaply.
pub struct SpholeEvaluator {
    inner: BoundEvaluator,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SpholeBounds {
    /// 1, 2 or 3.
    pub case_label: i32,
    pub lower: f64,
    pub upper: f64,
    pub second_case: f64,
    pub quad_error: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SpholeEstimate {
    pub trials: u64,
    pub hits: u64,
    pub p_hat: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SpholeStatus {
    match e {
        Error::InvalidConfig(_) | Error::Parse(_) => SpholeStatus::InvalidConfig,
        Error::Domain(_) | Error::NoIntersection(_) => SpholeStatus::Domain,
        Error::Unreachable { .. } => SpholeStatus::Unreachable,
        Error::VertexMismatch { .. } => SpholeStatus::Internal,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (SpholeStatus, String)>) -> SpholeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SpholeStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SpholeStatus::Panic
        }
    }
}

fn lift<T>(r: sphole::Result<T>) -> Result<T, (SpholeStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (SpholeStatus, String) {
    (SpholeStatus::NullPointer, format!("null pointer: {what}"))
}

fn case_code(c: CaseLabel) -> i32 {
    match c {
        CaseLabel::Case1 => 1,
        CaseLabel::Case2 => 2,
        CaseLabel::Case3 => 3,
    }
}

fn bounds_out(b: &BoundResult) -> SpholeBounds {
    SpholeBounds {
        case_label: case_code(b.case),
        lower: b.lower,
        upper: b.upper,
        second_case: b.second_case_term,
        quad_error: b.quad_error,
    }
}

fn estimate_out(e: &MCEstimate) -> SpholeEstimate {
    SpholeEstimate {
        trials: e.trials,
        hits: e.hits,
        p_hat: e.p_hat,
        std_error: e.stderr,
        ci_low: e.ci95.0,
        ci_high: e.ci95.1,
    }
}

/// # Safety
/// `cfg` must be null or a live handle from [`sphole_config_new`].
unsafe fn config_ref<'a>(cfg: *const SpholeConfig) -> Result<&'a NetworkConfig, (SpholeStatus, String)> {
    cfg.as_ref().map(|c| &c.inner).ok_or_else(|| null("config"))
}

/// Message for the last failed call on this thread; empty after success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sphole_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sphole_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => c"",
    };
    VERSION.as_ptr()
}

/// Creates a configuration: sphere radius, sensing and communication radii,
/// node intensity per unit area.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn sphole_config_new(
    radius: f64,
    sensing_radius: f64,
    comm_radius: f64,
    intensity: f64,
    out: *mut *mut SpholeConfig,
) -> SpholeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = lift(NetworkConfig::new(radius, sensing_radius, comm_radius, intensity))?;
        *out = Box::into_raw(Box::new(SpholeConfig { inner }));
        Ok(())
    })
}

/// # Safety
/// `cfg` must be null or a handle from [`sphole_config_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sphole_config_free(cfg: *mut SpholeConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// # Safety
/// `cfg` must be null or a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn sphole_config_set_intensity(cfg: *mut SpholeConfig, intensity: f64) -> SpholeStatus {
    guard(|| {
        let c = cfg.as_mut().ok_or_else(|| null("config"))?;
        let next = c.inner.with_intensity(intensity);
        lift(next.validate())?;
        c.inner = next;
        Ok(())
    })
}

/// Writes 1, 2 or 3 to `out_case`.
///
/// # Safety
/// `cfg` must be a live handle; `out_case` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn sphole_classify(cfg: *const SpholeConfig, out_case: *mut i32) -> SpholeStatus {
    guard(|| {
        let c = config_ref(cfg)?;
        let out = out_case.as_mut().ok_or_else(|| null("out_case"))?;
        *out = case_code(lift(classify(c))?);
        Ok(())
    })
}

/// Largest communication radius for which the Rips complex has no holes.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn sphole_rips_threshold(sensing_radius: f64, radius: f64, out: *mut f64) -> SpholeStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = lift(rips_threshold(sensing_radius, radius))?;
        Ok(())
    })
}

/// Bounds at the configuration's intensity, `order` Gauss-Legendre nodes
/// per level (refined at twice that).
///
/// # Safety
/// `cfg` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn sphole_bounds(
    cfg: *const SpholeConfig,
    second_case: f64,
    order: u32,
    out: *mut SpholeBounds,
) -> SpholeStatus {
    guard(|| {
        let c = config_ref(cfg)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let eval = lift(BoundEvaluator::new(c, checked_order(order)?))?;
        *out = bounds_out(&lift(eval.evaluate(c.intensity, second_case))?);
        Ok(())
    })
}

fn checked_order(order: u32) -> Result<usize, (SpholeStatus, String)> {
    if order < 4 {
        return Err((SpholeStatus::Domain, format!("quadrature order must be at least 4, got {order}")));
    }
    Ok(order as usize)
}

/// Builds reusable quadrature tables for the geometry of `cfg`.
///
/// # Safety
/// `cfg` must be a live handle; `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn sphole_evaluator_new(
    cfg: *const SpholeConfig,
    order: u32,
    out: *mut *mut SpholeEvaluator,
) -> SpholeStatus {
    guard(|| {
        let c = config_ref(cfg)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = lift(BoundEvaluator::new(c, checked_order(order)?))?;
        *out = Box::into_raw(Box::new(SpholeEvaluator { inner }));
        Ok(())
    })
}

/// # Safety
/// `eval` must be a live evaluator handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn sphole_evaluator_eval(
    eval: *const SpholeEvaluator,
    intensity: f64,
    second_case: f64,
    out: *mut SpholeBounds,
) -> SpholeStatus {
    guard(|| {
        let e = eval.as_ref().ok_or_else(|| null("evaluator"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = bounds_out(&lift(e.inner.evaluate(intensity, second_case))?);
        Ok(())
    })
}

/// # Safety
/// `eval` must be null or a handle from [`sphole_evaluator_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sphole_evaluator_free(eval: *mut SpholeEvaluator) {
    if !eval.is_null() {
        drop(Box::from_raw(eval));
    }
}

/// Monte Carlo estimates of the hole and second-case probabilities.
/// Either output pointer may be null.
///
/// # Safety
/// `cfg` must be a live handle; non-null outputs valid for writing.
#[no_mangle]
pub unsafe extern "C" fn sphole_estimate(
    cfg: *const SpholeConfig,
    trials: u64,
    seed: u64,
    hole: *mut SpholeEstimate,
    second_case: *mut SpholeEstimate,
) -> SpholeStatus {
    guard(|| {
        let c = config_ref(cfg)?;
        let e = lift(estimate(c, trials, seed))?;
        if let Some(h) = hole.as_mut() {
            *h = estimate_out(&e.hole);
        }
        if let Some(s) = second_case.as_mut() {
            *s = estimate_out(&e.second_case);
        }
        Ok(())
    })
}

/// Smallest intensity whose upper bound keeps the uncovered fraction at or
/// below `1 - coverage_target`. `out_upper` may be null.
///
/// # Safety
/// `cfg` must be a live handle; `out_intensity` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn sphole_required_intensity(
    cfg: *const SpholeConfig,
    coverage_target: f64,
    second_case: f64,
    order: u32,
    out_intensity: *mut f64,
    out_upper: *mut f64,
) -> SpholeStatus {
    guard(|| {
        let c = config_ref(cfg)?;
        let out = out_intensity.as_mut().ok_or_else(|| null("out_intensity"))?;
        let plan = lift(required_intensity(c, coverage_target, second_case, checked_order(order)?))?;
        *out = plan.intensity;
        if let Some(u) = out_upper.as_mut() {
            *u = plan.upper;
        }
        Ok(())
    })
}
