//! C interface. Every function returns a [`FracfkStatus`]; on failure the
//! message is available from [`fracfk_last_error`]. Strings returned by the
//! library are released with [`fracfk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fracfk::bench::{parse_config, run_study, RunConfig, StudyReport};
use fracfk::fem::Mesh1D;
use fracfk::scheme::{run, Variant};
use fracfk::weights::{correction_coeffs, cq_weights};
use fracfk::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FracfkStatus {
    Ok = 0,
    InvalidArgument = 1,
    ConfigError = 2,
    NumericalError = 3,
    NullPointer = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FracfkVariant {
    Corrected = 0,
    Uncorrected = 1,
    ComparisonInitial = 2,
    ComparisonSource = 3,
}

impl From<FracfkVariant> for Variant {
    fn from(v: FracfkVariant) -> Self {
        match v {
            FracfkVariant::Corrected => Variant::Corrected,
            FracfkVariant::Uncorrected => Variant::Uncorrected,
            FracfkVariant::ComparisonInitial => Variant::ComparisonInitial,
            FracfkVariant::ComparisonSource => Variant::ComparisonSource,
        }
    }
}

/// Parsed study configuration and, after [`fracfk_study_run`], its report.
pub struct FracfkStudy {
    config: RunConfig,
    report: Option<StudyReport>,
}

/// Nodal values of a solution at the final time level, boundary nodes included.
pub struct FracfkSolution {
    re: Vec<f64>,
    im: Vec<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: FracfkStatus, msg: impl Into<String>) -> FracfkStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> FracfkStatus {
    let status = if matches!(e, Error::InvalidArgument(_) | Error::UnsupportedOrder(_) | Error::NonPositiveTau(_)) {
        FracfkStatus::InvalidArgument
    } else if e.is_config_error() {
        FracfkStatus::ConfigError
    } else {
        FracfkStatus::NumericalError
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> FracfkStatus) -> FracfkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(FracfkStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, FracfkStatus> {
    if p.is_null() {
        return Err(fail(FracfkStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(FracfkStatus::InvalidArgument, "string is not valid UTF-8"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message of the most recent failure on this thread, or NULL. The caller
/// owns the returned string.
#[no_mangle]
pub extern "C" fn fracfk_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map(|s| s.clone().into_raw()).unwrap_or(ptr::null_mut()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fracfk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes the convolution weights d_0..d_n of BDF-`k` for exponent `gamma`
/// into `out`, which must hold `n + 1` values.
///
/// # Safety
/// `out` must be valid for `out_len` writes.
#[no_mangle]
pub unsafe extern "C" fn fracfk_cq_weights(
    k: usize,
    gamma: f64,
    tau: f64,
    n: usize,
    out: *mut f64,
    out_len: usize,
) -> FracfkStatus {
    guard(|| {
        if out.is_null() {
            return fail(FracfkStatus::NullPointer, "null output buffer");
        }
        if out_len < n + 1 {
            return fail(FracfkStatus::BufferTooSmall, format!("need {} values, got {out_len}", n + 1));
        }
        match cq_weights::<f64>(k, gamma, tau, n) {
            Ok(w) => {
                std::slice::from_raw_parts_mut(out, n + 1).copy_from_slice(&w.d);
                FracfkStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Sizes of the starting-correction tables of BDF-`k`: `k - 1` values of a
/// and `(k - 2) * (k - 1)` values of b (row l, column j).
///
/// # Safety
/// Both pointers must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fracfk_correction_sizes(k: usize, a_len: *mut usize, b_len: *mut usize) -> FracfkStatus {
    guard(|| {
        if a_len.is_null() || b_len.is_null() {
            return fail(FracfkStatus::NullPointer, "null output pointer");
        }
        match correction_coeffs(k) {
            Ok(c) => {
                *a_len = c.a.len();
                *b_len = c.b.iter().map(Vec::len).sum();
                FracfkStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Writes the correction coefficients a_j and, row-major, b_{l,j}.
///
/// # Safety
/// `a` and `b` must be valid for `a_len` and `b_len` writes; `b` may be NULL
/// when `b_len` is zero.
#[no_mangle]
pub unsafe extern "C" fn fracfk_correction_coeffs(
    k: usize,
    a: *mut f64,
    a_len: usize,
    b: *mut f64,
    b_len: usize,
) -> FracfkStatus {
    guard(|| {
        let c = match correction_coeffs(k) {
            Ok(c) => c,
            Err(e) => return from_error(e),
        };
        let av: Vec<f64> = c.a_as();
        let bv: Vec<f64> = c.b_as::<f64>().into_iter().flatten().collect();
        if a_len < av.len() || b_len < bv.len() {
            return fail(FracfkStatus::BufferTooSmall, format!("need {} and {} values", av.len(), bv.len()));
        }
        if (a.is_null() && !av.is_empty()) || (b.is_null() && !bv.is_empty()) {
            return fail(FracfkStatus::NullPointer, "null output buffer");
        }
        if !av.is_empty() {
            std::slice::from_raw_parts_mut(a, av.len()).copy_from_slice(&av);
        }
        if !bv.is_empty() {
            std::slice::from_raw_parts_mut(b, bv.len()).copy_from_slice(&bv);
        }
        FracfkStatus::Ok
    })
}

/// Parses a JSON study configuration.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fracfk_study_new(json: *const c_char, out: *mut *mut FracfkStudy) -> FracfkStatus {
    guard(|| {
        if out.is_null() {
            return fail(FracfkStatus::NullPointer, "null output handle");
        }
        *out = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_config(text) {
            Ok(config) => {
                *out = Box::into_raw(Box::new(FracfkStudy { config, report: None }));
                FracfkStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Runs every cell. Returns `NumericalError` if any cell failed; the report
/// is kept either way.
///
/// # Safety
/// `study` must be a live handle from [`fracfk_study_new`].
#[no_mangle]
pub unsafe extern "C" fn fracfk_study_run(study: *mut FracfkStudy) -> FracfkStatus {
    guard(|| {
        let Some(s) = study.as_mut() else {
            return fail(FracfkStatus::NullPointer, "null study handle");
        };
        let report = run_study(&s.config);
        let failures = report.failures.len();
        s.report = Some(report);
        if failures == 0 {
            FracfkStatus::Ok
        } else {
            fail(FracfkStatus::NumericalError, format!("{failures} cell(s) failed"))
        }
    })
}

/// CSV of a study that has been run, or NULL. The caller owns the string.
///
/// # Safety
/// `study` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fracfk_study_csv(study: *const FracfkStudy) -> *mut c_char {
    match study.as_ref() {
        Some(FracfkStudy { config, report: Some(r) }) => into_c_string(r.csv(config)),
        Some(_) => {
            set_error("study has not been run");
            ptr::null_mut()
        }
        None => {
            set_error("null study handle");
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `study` must be NULL or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn fracfk_study_free(study: *mut FracfkStudy) {
    if !study.is_null() {
        drop(Box::from_raw(study));
    }
}

/// Solves the problem of a JSON configuration (its `problem`, `rho` and `T`)
/// in binary64 for one `alpha`, order, step count and mesh.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fracfk_solve(
    json: *const c_char,
    alpha: f64,
    k: usize,
    n_steps: usize,
    n_elems: usize,
    variant: FracfkVariant,
    out: *mut *mut FracfkSolution,
) -> FracfkStatus {
    guard(|| {
        if out.is_null() {
            return fail(FracfkStatus::NullPointer, "null output handle");
        }
        *out = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let cfg = match parse_config(text) {
            Ok(c) => c,
            Err(e) => return from_error(e),
        };
        if !(alpha > 0.0 && alpha < 1.0) {
            return from_error(Error::AlphaOutOfRange(alpha));
        }
        let p = cfg.problem.build::<f64>(alpha, cfg.t_final);
        let result = Mesh1D::unit(n_elems).and_then(|m| run(&p, k, n_steps, &m, variant.into()));
        match result {
            Ok(traj) => {
                let last = traj.last();
                let sol = FracfkSolution {
                    re: last.values.iter().map(|v| v.re).collect(),
                    im: last.values.iter().map(|v| v.im).collect(),
                };
                *out = Box::into_raw(Box::new(sol));
                FracfkStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Number of nodal values, `n_elems + 1`.
///
/// # Safety
/// `sol` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fracfk_solution_len(sol: *const FracfkSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.re.len())
}

/// Copies the real and imaginary parts of the final-time nodal values.
///
/// # Safety
/// `re` and `im` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn fracfk_solution_values(
    sol: *const FracfkSolution,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> FracfkStatus {
    guard(|| {
        let Some(s) = sol.as_ref() else {
            return fail(FracfkStatus::NullPointer, "null solution handle");
        };
        if re.is_null() || im.is_null() {
            return fail(FracfkStatus::NullPointer, "null output buffer");
        }
        if len < s.re.len() {
            return fail(FracfkStatus::BufferTooSmall, format!("need {} values, got {len}", s.re.len()));
        }
        std::slice::from_raw_parts_mut(re, s.re.len()).copy_from_slice(&s.re);
        std::slice::from_raw_parts_mut(im, s.im.len()).copy_from_slice(&s.im);
        FracfkStatus::Ok
    })
}

/// # Safety
/// `sol` must be NULL or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn fracfk_solution_free(sol: *mut FracfkSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}
