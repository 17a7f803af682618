//! C interface to `wellsum`.
//!
//! Every function returns a [`WellsumStatus`]. On failure the message is kept
//! per thread and can be read with [`wellsum_last_error`]. Handles are opaque
//! and must be released with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wellsum::decimal::scientific;
use wellsum::formulas::{closed_form, SeriesFamily};
use wellsum::specfun::PrecisionContext;
use wellsum::spectral::{coeffs, CoeffRoute, WaveState};
use wellsum::verifier::{identity24_check, render_results, verify_family, Format, SumResult, Verdict, MIN_TERMS};
use wellsum::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WellsumStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 64,
    Domain = 65,
    Numeric = 70,
    Io = 74,
    Panic = 99,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WellsumVerdict {
    Pass = 0,
    Fail = 1,
    NoExact = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WellsumRoute {
    Bessel = 0,
    Hyper = 1,
    Quad = 2,
}

/// Precision and term count for numerical work.
pub struct WellsumContext {
    ctx: PrecisionContext,
    terms: usize,
}

/// One certification result.
pub struct WellsumReport {
    result: SumResult,
    numeric: CString,
    exact: Option<CString>,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> WellsumStatus {
    match e {
        Error::Parse(_) => WellsumStatus::Parse,
        Error::Domain(_) | Error::Route(_) | Error::Range(_) | Error::Unsupported(_) => WellsumStatus::Domain,
        Error::Algebra(_) | Error::Convergence(_) => WellsumStatus::Numeric,
        Error::Io(_) => WellsumStatus::Io,
    }
}

fn fail(status: WellsumStatus, msg: impl Into<String>) -> WellsumStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, turning errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), WellsumStatus>) -> WellsumStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            WellsumStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => fail(WellsumStatus::Panic, "internal panic"),
    }
}

fn lib<T>(r: wellsum::Result<T>) -> Result<T, WellsumStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, WellsumStatus> {
    if p.is_null() {
        return Err(fail(WellsumStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(WellsumStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

fn c_string(s: String) -> CString {
    CString::new(s).expect("library strings contain no nul")
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn wellsum_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates a context. `bits` ≥ 64, `terms` ≥ 8.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn wellsum_context_new(bits: u32, terms: usize, out: *mut *mut WellsumContext) -> WellsumStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(WellsumStatus::NullPointer, "out is null"));
        }
        if terms < MIN_TERMS {
            return Err(fail(WellsumStatus::Domain, format!("terms must be at least {MIN_TERMS}")));
        }
        let ctx = lib(PrecisionContext::new(bits))?;
        *out = Box::into_raw(Box::new(WellsumContext { ctx, terms }));
        Ok(())
    })
}

/// # Safety
/// `ctx` must be null or a handle from [`wellsum_context_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wellsum_context_free(ctx: *mut WellsumContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Certifies a series given in the family grammar, or `"identity24"`.
///
/// # Safety
/// `ctx` must be a live context, `family` a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wellsum_verify(
    ctx: *const WellsumContext,
    family: *const c_char,
    out: *mut *mut WellsumReport,
) -> WellsumStatus {
    guard(|| {
        if ctx.is_null() || out.is_null() {
            return Err(fail(WellsumStatus::NullPointer, "null handle"));
        }
        let c = &*ctx;
        let spec = text(family)?;
        let result = if spec.trim() == "identity24" {
            lib(identity24_check(c.terms, &c.ctx))?
        } else {
            let f: SeriesFamily = lib(spec.parse())?;
            lib(verify_family(&f, c.terms, &c.ctx))?
        };
        let digits = c.ctx.decimal_digits();
        let report = WellsumReport {
            numeric: c_string(scientific(&result.numeric, digits)),
            exact: result.exact.as_ref().map(|e| c_string(e.to_string())),
            json: c_string(render_results(std::slice::from_ref(&result), Format::Json, digits)),
            result,
        };
        *out = Box::into_raw(Box::new(report));
        Ok(())
    })
}

/// # Safety
/// `report` must be a live report.
#[no_mangle]
pub unsafe extern "C" fn wellsum_report_verdict(report: *const WellsumReport) -> WellsumVerdict {
    match (*report).result.verdict {
        Verdict::Pass => WellsumVerdict::Pass,
        Verdict::Fail => WellsumVerdict::Fail,
        Verdict::NoExact => WellsumVerdict::NoExact,
    }
}

/// The numeric sum as a decimal string, owned by the report.
///
/// # Safety
/// `report` must be a live report.
#[no_mangle]
pub unsafe extern "C" fn wellsum_report_numeric(report: *const WellsumReport) -> *const c_char {
    (*report).numeric.as_ptr()
}

/// The exact value, e.g. `8π⁴/155925`, or null when none is known. Owned by the report.
///
/// # Safety
/// `report` must be a live report.
#[no_mangle]
pub unsafe extern "C" fn wellsum_report_exact(report: *const WellsumReport) -> *const c_char {
    (*report).exact.as_ref().map_or(ptr::null(), |c| c.as_ptr())
}

/// The full report as JSON, owned by the report.
///
/// # Safety
/// `report` must be a live report.
#[no_mangle]
pub unsafe extern "C" fn wellsum_report_json(report: *const WellsumReport) -> *const c_char {
    (*report).json.as_ptr()
}

/// # Safety
/// `report` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn wellsum_report_free(report: *mut WellsumReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Closed form of a series as text. `*out` is null when none is known;
/// otherwise release it with [`wellsum_string_free`].
///
/// # Safety
/// `family` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wellsum_closed_form(family: *const c_char, out: *mut *mut c_char) -> WellsumStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(WellsumStatus::NullPointer, "out is null"));
        }
        let f: SeriesFamily = lib(text(family)?.parse())?;
        *out = match lib(closed_form(&f))? {
            Some(v) => c_string(v.to_string()).into_raw(),
            None => ptr::null_mut(),
        };
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn wellsum_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes `C_1 … C_n_max` of the state `(alpha, beta)` as doubles into `out`.
/// `alpha` and `beta` are strings such as `"5/2"`.
///
/// # Safety
/// `ctx` must be live, `alpha` and `beta` nul-terminated, and `out` must hold `n_max` doubles.
#[no_mangle]
pub unsafe extern "C" fn wellsum_coeffs(
    ctx: *const WellsumContext,
    alpha: *const c_char,
    beta: *const c_char,
    route: WellsumRoute,
    n_max: usize,
    out: *mut f64,
) -> WellsumStatus {
    guard(|| {
        if ctx.is_null() || (out.is_null() && n_max > 0) {
            return Err(fail(WellsumStatus::NullPointer, "null handle or buffer"));
        }
        let a = lib(text(alpha)?.parse::<rug::Rational>().map_err(|_| Error::Parse("alpha: expected an integer or p/q".into())))?;
        let b = lib(text(beta)?.parse::<rug::Rational>().map_err(|_| Error::Parse("beta: expected an integer or p/q".into())))?;
        let s = lib(WaveState::new(a, b))?;
        let r = match route {
            WellsumRoute::Bessel => CoeffRoute::BesselEqual,
            WellsumRoute::Hyper => CoeffRoute::Hypergeometric,
            WellsumRoute::Quad => CoeffRoute::Quadrature,
        };
        let values = lib(coeffs(&s, n_max, r, &(*ctx).ctx))?;
        for (i, v) in values.iter().enumerate() {
            *out.add(i) = v.to_f64();
        }
        Ok(())
    })
}
