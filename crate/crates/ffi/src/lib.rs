//! C ABI over `boundary_pick`.
//!
//! Products and verdicts are opaque handles released with their `_free`
//! function. Every entry point returns a [`BpStatus`]; on failure the message
//! is available from [`bp_last_error_message`] on the same thread. Arrays are
//! written into caller buffers: the required length is always stored, and
//! `BP_STATUS_BUFFER_TOO_SMALL` is returned when the capacity is short.
//! Strings returned through `char **` are released with [`bp_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Instant;

use boundary_pick::blaschke::BlaschkeProduct;
use boundary_pick::cli::{self, ProblemFile, Report, EXIT_INVALID};
use boundary_pick::error::Error;
use boundary_pick::hermitian::Tolerances;
use boundary_pick::schwarz_pick::{boundary_jets, sp_boundary_structured};
use boundary_pick::uniqueness::{self, ContactProblem, DecideOptions, Verdict};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpStatus {
    Ok = 0,
    NullPointer = 1,
    /// Input failed validation: zero outside the disk, point off the circle, bad JSON.
    InvalidInput = 2,
    /// A numerical routine failed or contradicted an expected rank.
    Numerical = 3,
    BufferTooSmall = 4,
    /// A panic was caught at the boundary; the message holds its payload.
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpComplex {
    pub re: f64,
    pub im: f64,
}

impl From<BpComplex> for Complex64 {
    fn from(z: BpComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for BpComplex {
    fn from(z: Complex64) -> Self {
        BpComplex { re: z.re, im: z.im }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpTolerances {
    /// Rank cutoff relative to `max(1, lambda_max)`.
    pub rank: f64,
    /// Positive-definiteness threshold relative to `max(1, lambda_max)`.
    pub pd: f64,
}

/// Finite Blaschke product.
pub struct BpBlaschke(BlaschkeProduct);

/// Outcome of a uniqueness decision.
pub struct BpVerdict(Verdict);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(BpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if cli::exit_code_for(&e) == EXIT_INVALID {
            BpStatus::InvalidInput
        } else {
            BpStatus::Numerical
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(BpStatus::NullPointer, format!("{what} is null"))
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> BpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BpStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let detail = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_default();
            set_error(format!("internal panic: {detail}"));
            BpStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(null(what))
    } else {
        Ok(std::slice::from_raw_parts(p, len))
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(BpStatus::InvalidInput, format!("{what} is not UTF-8: {e}")))
}

/// Stores `values.len()` in `out_len` and copies into `out` when it fits.
unsafe fn write_buffer(
    values: &[BpComplex],
    out: *mut BpComplex,
    capacity: usize,
    out_len: *mut usize,
) -> Result<(), Failure> {
    *self::out(out_len, "out_len")? = values.len();
    if capacity < values.len() {
        return Err(Failure(
            BpStatus::BufferTooSmall,
            format!("buffer holds {capacity} values, {} required", values.len()),
        ));
    }
    if !values.is_empty() {
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    }
    Ok(())
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| Failure(BpStatus::Panic, e.to_string()))
}

fn points_of(points: &[BpComplex]) -> Vec<Complex64> {
    points.iter().map(|&z| z.into()).collect()
}

/// Message of the last failed call on this thread, or NULL after a success.
/// Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn bp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn bp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn bp_tolerances_default() -> BpTolerances {
    let t = Tolerances::default();
    BpTolerances { rank: t.rank, pd: t.pd }
}

/// Product with zeros `zeros[0..degree]` and unimodular constant `u`.
#[no_mangle]
pub unsafe extern "C" fn bp_blaschke_new(
    zeros: *const BpComplex,
    degree: usize,
    u: BpComplex,
    out_handle: *mut *mut BpBlaschke,
) -> BpStatus {
    guard(|| {
        let out_handle = out(out_handle, "out_handle")?;
        let b = BlaschkeProduct::new(points_of(slice(zeros, degree, "zeros")?), u.into())?;
        *out_handle = Box::into_raw(Box::new(BpBlaschke(b)));
        Ok(())
    })
}

/// Product from `{"zeros": [[re, im], ...], "u": [re, im]}`.
#[no_mangle]
pub unsafe extern "C" fn bp_blaschke_from_json(json: *const c_char, out_handle: *mut *mut BpBlaschke) -> BpStatus {
    guard(|| {
        let out_handle = out(out_handle, "out_handle")?;
        let b: BlaschkeProduct =
            serde_json::from_str(str_arg(json, "json")?).map_err(|e| Failure(BpStatus::InvalidInput, e.to_string()))?;
        *out_handle = Box::into_raw(Box::new(BpBlaschke(b)));
        Ok(())
    })
}

/// Releases a product. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn bp_blaschke_free(b: *mut BpBlaschke) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

#[no_mangle]
pub unsafe extern "C" fn bp_blaschke_degree(b: *const BpBlaschke, out_degree: *mut usize) -> BpStatus {
    guard(|| {
        *out(out_degree, "out_degree")? = handle(b, "b")?.0.degree();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn bp_blaschke_eval(b: *const BpBlaschke, z: BpComplex, out_value: *mut BpComplex) -> BpStatus {
    guard(|| {
        let out_value = out(out_value, "out_value")?;
        *out_value = handle(b, "b")?.0.eval(z.into())?.into();
        Ok(())
    })
}

/// Taylor coefficients `b_0..b_order` at `z0`; needs `order + 1` slots.
#[no_mangle]
pub unsafe extern "C" fn bp_blaschke_taylor_jet(
    b: *const BpBlaschke,
    z0: BpComplex,
    order: usize,
    out: *mut BpComplex,
    capacity: usize,
    out_len: *mut usize,
) -> BpStatus {
    guard(|| {
        let jet = handle(b, "b")?.0.taylor_jet(z0.into(), order)?;
        let values: Vec<BpComplex> = jet.coefficients.iter().map(|&c| c.into()).collect();
        write_buffer(&values, out, capacity, out_len)
    })
}

/// The `degree` solutions of `b(z) = tau` for unimodular `tau`.
#[no_mangle]
pub unsafe extern "C" fn bp_blaschke_level_set(
    b: *const BpBlaschke,
    tau: BpComplex,
    out: *mut BpComplex,
    capacity: usize,
    out_len: *mut usize,
) -> BpStatus {
    guard(|| {
        let roots = handle(b, "b")?.0.level_set(tau.into())?;
        let values: Vec<BpComplex> = roots.into_iter().map(Into::into).collect();
        write_buffer(&values, out, capacity, out_len)
    })
}

/// Boundary Schwarz-Pick matrix at `points[0..n]` with orders `orders[0..n]`,
/// row-major, side `sum(orders)`, stored in `out_dim`.
#[no_mangle]
pub unsafe extern "C" fn bp_boundary_schwarz_pick(
    b: *const BpBlaschke,
    points: *const BpComplex,
    orders: *const usize,
    n: usize,
    out: *mut BpComplex,
    capacity: usize,
    out_dim: *mut usize,
) -> BpStatus {
    guard(|| {
        let b = &handle(b, "b")?.0;
        let points = points_of(slice(points, n, "points")?);
        let orders = slice(orders, n, "orders")?;
        let m = sp_boundary_structured(&boundary_jets(b, &points, orders)?, orders)?.flat;
        let dim = m.nrows();
        *self::out(out_dim, "out_dim")? = dim;
        let values: Vec<BpComplex> = (0..dim * dim).map(|i| m[(i / dim, i % dim)].into()).collect();
        let mut len = 0;
        write_buffer(&values, out, capacity, &mut len)
    })
}

/// Whether contact orders `m[0..n]` force uniqueness for degree `d`:
/// 1 if so, 0 if not.
#[no_mangle]
pub unsafe extern "C" fn bp_criterion(m: *const usize, n: usize, d: usize, out_unique: *mut i32) -> BpStatus {
    guard(|| {
        *out(out_unique, "out_unique")? = uniqueness::criterion(slice(m, n, "m")?, d) as i32;
        Ok(())
    })
}

/// Decides whether `b` is the only product of its degree with contact orders
/// `m[0..n]` at `points[0..n]`. `tolerances` may be NULL for the defaults.
#[no_mangle]
pub unsafe extern "C" fn bp_decide(
    b: *const BpBlaschke,
    points: *const BpComplex,
    m: *const usize,
    n: usize,
    tolerances: *const BpTolerances,
    out_verdict: *mut *mut BpVerdict,
) -> BpStatus {
    guard(|| {
        let out_verdict = out(out_verdict, "out_verdict")?;
        let b = handle(b, "b")?.0.clone();
        let problem = ContactProblem::new(b, points_of(slice(points, n, "points")?), slice(m, n, "m")?.to_vec())?;
        let mut options = DecideOptions::default();
        if let Some(t) = tolerances.as_ref() {
            options.tolerances = cli::resolve_tolerances(None, Some(t.rank), Some(t.pd))?;
        }
        let verdict = uniqueness::decide(&problem, &options)?;
        *out_verdict = Box::into_raw(Box::new(BpVerdict(verdict)));
        Ok(())
    })
}

/// Releases a verdict. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn bp_verdict_free(v: *mut BpVerdict) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// 1 for unique, 0 for non-unique.
#[no_mangle]
pub unsafe extern "C" fn bp_verdict_is_unique(v: *const BpVerdict, out_unique: *mut i32) -> BpStatus {
    guard(|| {
        *out(out_unique, "out_unique")? = handle(v, "v")?.0.is_unique() as i32;
        Ok(())
    })
}

/// Total half order `sum(k_i)`, the side of the Pick matrix.
#[no_mangle]
pub unsafe extern "C" fn bp_verdict_k_total(v: *const BpVerdict, out_k_total: *mut usize) -> BpStatus {
    guard(|| {
        *out(out_k_total, "out_k_total")? = handle(v, "v")?.0.k_total;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn bp_verdict_degree(v: *const BpVerdict, out_degree: *mut usize) -> BpStatus {
    guard(|| {
        *out(out_degree, "out_degree")? = handle(v, "v")?.0.degree;
        Ok(())
    })
}

/// Certificate round-trip residual; 0 for a uniqueness verdict.
#[no_mangle]
pub unsafe extern "C" fn bp_verdict_residual(v: *const BpVerdict, out_residual: *mut f64) -> BpStatus {
    guard(|| {
        *out(out_residual, "out_residual")? = handle(v, "v")?.0.residual();
        Ok(())
    })
}

/// Verdict with its certificate as JSON; release with `bp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn bp_verdict_to_json(v: *const BpVerdict, out_json: *mut *mut c_char) -> BpStatus {
    guard(|| {
        let out_json = out(out_json, "out_json")?;
        let text =
            serde_json::to_string(&handle(v, "v")?.0).map_err(|e| Failure(BpStatus::Numerical, e.to_string()))?;
        *out_json = to_c_string(text)?;
        Ok(())
    })
}

/// Runs `analyze` on a problem file given as JSON text and returns the same
/// schema-versioned report the command line prints with `--format json`.
#[no_mangle]
pub unsafe extern "C" fn bp_analyze_json(problem_json: *const c_char, out_json: *mut *mut c_char) -> BpStatus {
    guard(|| {
        let out_json = out(out_json, "out_json")?;
        let start = Instant::now();
        let file = ProblemFile::parse(str_arg(problem_json, "problem_json")?)?;
        let tolerances = cli::resolve_tolerances(file.tolerances.as_ref(), None, None)?;
        let mut report = Report::new("analyze");
        report.analyze = Some(cli::analyze(&file, tolerances)?);
        report.wall_time_seconds = start.elapsed().as_secs_f64();
        let text = serde_json::to_string(&report).map_err(|e| Failure(BpStatus::Numerical, e.to_string()))?;
        *out_json = to_c_string(text)?;
        Ok(())
    })
}
