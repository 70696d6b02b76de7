//! C ABI over `subset-metric`.
//!
//! Workspaces are opaque handles created by [`sm_workspace_parse`] and released
//! with [`sm_workspace_free`]. Every fallible call returns an [`SmStatus`]; on
//! failure [`sm_last_error`] describes the error for the calling thread.
//! Strings returned to the caller must be released with [`sm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use subset_metric::cli::{self, MetricKind};
use subset_metric::comparison::ComparisonKind;
use subset_metric::{solve_assignment, CostMatrix, Error, Workspace};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    Domain = 5,
    Size = 6,
    UnknownSet = 7,
    Usage = 8,
    Condition2 = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Which set distance to compute.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmMetric {
    Subset = 0,
    Hausdorff = 1,
    SumMin = 2,
    Surjective = 3,
    FairSurjective = 4,
    Link = 5,
}

impl From<SmMetric> for MetricKind {
    fn from(m: SmMetric) -> Self {
        match m {
            SmMetric::Subset => MetricKind::Subset,
            SmMetric::Hausdorff => MetricKind::Comparison(ComparisonKind::Hausdorff),
            SmMetric::SumMin => MetricKind::Comparison(ComparisonKind::SumMin),
            SmMetric::Surjective => MetricKind::Comparison(ComparisonKind::Surjective),
            SmMetric::FairSurjective => MetricKind::Comparison(ComparisonKind::FairSurjective),
            SmMetric::Link => MetricKind::Comparison(ComparisonKind::Link),
        }
    }
}

/// Opaque workspace handle.
pub struct SmWorkspace {
    inner: Workspace,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> SmStatus {
    match err {
        Error::Validation(_) => SmStatus::Validation,
        Error::Domain(_) => SmStatus::Domain,
        Error::Size { .. } => SmStatus::Size,
        Error::Condition2(_) => SmStatus::Condition2,
        Error::Parse { .. } => SmStatus::Parse,
        Error::UnknownSet(_) => SmStatus::UnknownSet,
        Error::Usage(_) => SmStatus::Usage,
    }
}

struct Failure(SmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            SmStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            SmStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(SmStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SmStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn ws_arg<'a>(ws: *const SmWorkspace) -> Result<&'a Workspace, Failure> {
    ws.as_ref().map(|w| &w.inner).ok_or_else(|| null("workspace"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior NULs removed").into_raw()
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a workspace from JSON or from the plain-text sequence form.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_workspace_parse(text: *const c_char, out: *mut *mut SmWorkspace) -> SmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = str_arg(text, "text")?;
        let inner = Workspace::parse(text)?;
        *out = Box::into_raw(Box::new(SmWorkspace { inner }));
        Ok(())
    })
}

/// Releases a workspace. Passing null is a no-op.
///
/// # Safety
/// `ws` must come from [`sm_workspace_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sm_workspace_free(ws: *mut SmWorkspace) {
    if !ws.is_null() {
        drop(Box::from_raw(ws));
    }
}

/// Replaces the workspace's M function: `constant:<v>`, `diameter` or
/// `eccentricity`.
///
/// # Safety
/// `ws` must be a live handle and `spec` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sm_workspace_set_m(ws: *mut SmWorkspace, spec: *const c_char) -> SmStatus {
    guard(|| {
        let ws = ws.as_mut().ok_or_else(|| null("workspace"))?;
        let spec = str_arg(spec, "spec")?.parse()?;
        ws.inner.override_m(&spec)?;
        Ok(())
    })
}

/// Number of named sets.
///
/// # Safety
/// `ws` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_workspace_set_count(ws: *const SmWorkspace, out: *mut usize) -> SmStatus {
    guard(|| {
        let ws = ws_arg(ws)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ws.sets.len();
        Ok(())
    })
}

/// Name of the set at `index` (file order). Release with [`sm_string_free`].
///
/// # Safety
/// `ws` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_workspace_set_name(
    ws: *const SmWorkspace,
    index: usize,
    out: *mut *mut c_char,
) -> SmStatus {
    guard(|| {
        let ws = ws_arg(ws)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let (name, _) = ws.sets.get(index).ok_or_else(|| {
            Failure(SmStatus::Usage, format!("set index {index} out of range"))
        })?;
        *out = into_c_string(name.clone());
        Ok(())
    })
}

/// The workspace serialized to JSON. Release with [`sm_string_free`].
///
/// # Safety
/// `ws` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_workspace_to_json(ws: *const SmWorkspace, out: *mut *mut c_char) -> SmStatus {
    guard(|| {
        let ws = ws_arg(ws)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = into_c_string(ws.to_json());
        Ok(())
    })
}

/// Releases a string returned by this library. Passing null is a no-op.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Distance between two named sets.
///
/// # Safety
/// `ws` must be a live handle, the names NUL-terminated strings and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_distance(
    ws: *const SmWorkspace,
    set_a: *const c_char,
    set_b: *const c_char,
    metric: SmMetric,
    out: *mut f64,
) -> SmStatus {
    guard(|| {
        let ws = ws_arg(ws)?;
        let a = str_arg(set_a, "set_a")?;
        let b = str_arg(set_b, "set_b")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = cli::cmd_dist(ws, a, b, metric.into(), false)?.value;
        Ok(())
    })
}

/// Subset distance by exhaustive enumeration of injections (sets of at most 7
/// elements).
///
/// # Safety
/// As for [`sm_distance`].
#[no_mangle]
pub unsafe extern "C" fn sm_distance_oracle(
    ws: *const SmWorkspace,
    set_a: *const c_char,
    set_b: *const c_char,
    out: *mut f64,
) -> SmStatus {
    guard(|| {
        let ws = ws_arg(ws)?;
        let a = ws.set(str_arg(set_a, "set_a")?)?;
        let b = ws.set(str_arg(set_b, "set_b")?)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ws.metric()?.brute_force(a, b)?.value;
        Ok(())
    })
}

/// All-pairs distances, row-major, into `out[0 .. n*n]` where `n` is the set
/// count. `len` is the capacity of `out`.
///
/// # Safety
/// `ws` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn sm_matrix(
    ws: *const SmWorkspace,
    metric: SmMetric,
    out: *mut f64,
    len: usize,
) -> SmStatus {
    guard(|| {
        let ws = ws_arg(ws)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let n = ws.sets.len();
        if len < n * n {
            return Err(Failure(
                SmStatus::BufferTooSmall,
                format!("matrix needs {} slots, buffer has {len}", n * n),
            ));
        }
        let report = cli::cmd_matrix(ws, metric.into())?;
        let dst = std::slice::from_raw_parts_mut(out, n * n);
        for (slot, v) in dst.iter_mut().zip(report.matrix.iter().flatten()) {
            *slot = *v;
        }
        Ok(())
    })
}

/// Runs the boundary-weight condition and metric-axiom checks; `*passed` is 1 when all pass.
///
/// # Safety
/// `ws` must be a live handle and `passed` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_validate(
    ws: *const SmWorkspace,
    samples: usize,
    seed: u64,
    passed: *mut c_int,
) -> SmStatus {
    guard(|| {
        let ws = ws_arg(ws)?;
        let passed = passed.as_mut().ok_or_else(|| null("passed"))?;
        *passed = c_int::from(cli::cmd_validate(ws, samples, seed)?.passed());
        Ok(())
    })
}

/// Minimum-cost assignment on an `n x n` row-major cost matrix. Row `i` is
/// assigned to column `permutation[i]`.
///
/// # Safety
/// `costs` must be valid for `n*n` reads and `permutation` for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn sm_solve_assignment(
    costs: *const f64,
    n: usize,
    permutation: *mut usize,
    total_cost: *mut f64,
) -> SmStatus {
    guard(|| {
        if costs.is_null() || permutation.is_null() || total_cost.is_null() {
            return Err(null("argument"));
        }
        let entries = std::slice::from_raw_parts(costs, n * n).to_vec();
        let result = solve_assignment(&CostMatrix::new(n, entries)?);
        std::slice::from_raw_parts_mut(permutation, n).copy_from_slice(&result.permutation);
        *total_cost = result.total_cost;
        Ok(())
    })
}
