//! C ABI over `umm-core`.
//!
//! Every function returns a [`UmmStatus`]; on failure the message is kept per
//! thread and read back with [`umm_last_error`]. Handles are opaque and owned
//! by the caller, who releases them with the matching `_free` function.
//! Strings returned through `out` parameters are freed with [`umm_string_free`].
//! Exact results are JSON, with rationals as `[numerator, denominator]` strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use serde_json::json;
use umm_core::cli::{run, Command, ConstantsConfig, RunConfig};
use umm_core::hurwitz::{monotone_count, HurwitzConvention, Partition};
use umm_core::masterfield::MasterField;
use umm_core::ncpoly::{format_polynomial, parse_polynomial, Alphabet, Polynomial, TraceData};
use umm_core::toprec::Correlators;

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UmmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Config = 4,
    Compute = 5,
    Panic = 6,
}

/// Unitary count, constant generators and their trace data.
pub struct UmmContext {
    alphabet: Alphabet,
    data: Arc<dyn TraceData>,
}

/// A polynomial parsed against a context.
pub struct UmmPolynomial {
    poly: Polynomial,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(UmmStatus, String);

impl Failure {
    fn new(status: UmmStatus, message: impl ToString) -> Self {
        Self(status, message.to_string())
    }
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

/// Runs `body`, recording its error and turning panics into a status.
fn guard<F: FnOnce() -> Result<(), Failure>>(body: F) -> UmmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => UmmStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal error: {message}"));
            UmmStatus::Panic
        }
    }
}

/// # Safety
/// `text` is NULL or a NUL-terminated string valid for the call.
unsafe fn read_str<'a>(text: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if text.is_null() {
        return Err(Failure::new(UmmStatus::NullPointer, format!("{name} is NULL")));
    }
    CStr::from_ptr(text).to_str().map_err(|e| Failure::new(UmmStatus::InvalidUtf8, format!("{name}: {e}")))
}

/// # Safety
/// `p` is NULL or points to a live `T`.
unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(UmmStatus::NullPointer, format!("{name} is NULL")))
}

fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(UmmStatus::NullPointer, "out is NULL"));
    }
    Ok(())
}

fn compute(e: impl ToString) -> Failure {
    Failure::new(UmmStatus::Compute, e)
}

/// # Safety
/// `out` is a valid, writable pointer.
unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    let c = CString::new(text).map_err(|e| Failure::new(UmmStatus::Compute, e))?;
    *out = c.into_raw();
    Ok(())
}

/// The most recent error on this thread, or NULL after a successful call.
/// Valid until the next call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn umm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn umm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` is NULL or came from this library and has not been freed.
#[no_mangle]
pub unsafe extern "C" fn umm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates a context with `unitaries` unitaries. `constants_json` is NULL for
/// no constants, or an object such as
/// `{"kind": "spectra", "generators": ["x"], "values": [[1, "1/2"]]}`.
///
/// # Safety
/// `constants_json` is NULL or a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn umm_context_new(
    unitaries: usize,
    constants_json: *const c_char,
    out: *mut *mut UmmContext,
) -> UmmStatus {
    guard(|| {
        check_out(out)?;
        let mut config = RunConfig::new(Command::MasterField);
        config.unitaries = unitaries;
        if !constants_json.is_null() {
            let text = read_str(constants_json, "constants_json")?;
            let constants: ConstantsConfig =
                serde_json::from_str(text).map_err(|e| Failure::new(UmmStatus::Config, format!("constants: {e}")))?;
            config.constants = Some(constants);
        }
        let prepared = config.prepare().map_err(|e| Failure::new(UmmStatus::Config, e))?;
        let context = UmmContext { alphabet: prepared.alphabet, data: prepared.constants.trace_data() };
        *out = Box::into_raw(Box::new(context));
        Ok(())
    })
}

/// # Safety
/// `ctx` is NULL or came from [`umm_context_new`] and has not been freed.
#[no_mangle]
pub unsafe extern "C" fn umm_context_free(ctx: *mut UmmContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Parses `text` in the context's alphabet, e.g. `"x u1 y u1^-1 - 1/2*u2"`.
///
/// # Safety
/// `ctx` is live, `text` is NUL-terminated and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn umm_polynomial_parse(
    ctx: *const UmmContext,
    text: *const c_char,
    out: *mut *mut UmmPolynomial,
) -> UmmStatus {
    guard(|| {
        check_out(out)?;
        let ctx = deref(ctx, "ctx")?;
        let text = read_str(text, "text")?;
        let poly = parse_polynomial(text, &ctx.alphabet).map_err(|e| Failure::new(UmmStatus::Parse, e))?;
        *out = Box::into_raw(Box::new(UmmPolynomial { poly }));
        Ok(())
    })
}

/// # Safety
/// `p` is NULL or came from [`umm_polynomial_parse`] and has not been freed.
#[no_mangle]
pub unsafe extern "C" fn umm_polynomial_free(p: *mut UmmPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Canonical text of `p`; free with [`umm_string_free`].
///
/// # Safety
/// `ctx` and `p` are live and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn umm_polynomial_format(
    ctx: *const UmmContext,
    p: *const UmmPolynomial,
    out: *mut *mut c_char,
) -> UmmStatus {
    guard(|| {
        check_out(out)?;
        let (ctx, p) = (deref(ctx, "ctx")?, deref(p, "p")?);
        write_string(out, format_polynomial(&p.poly, &ctx.alphabet))
    })
}

/// Coefficients of `t^0..t^order` of the master field on `p` for the
/// potential `v` (NULL for Haar), as a JSON array.
///
/// # Safety
/// `ctx` and `p` are live, `v` is NULL or live, and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn umm_master_field_json(
    ctx: *const UmmContext,
    p: *const UmmPolynomial,
    v: *const UmmPolynomial,
    order: usize,
    out: *mut *mut c_char,
) -> UmmStatus {
    guard(|| {
        check_out(out)?;
        let (ctx, p) = (deref(ctx, "ctx")?, deref(p, "p")?);
        let potential = v.as_ref().map_or_else(Polynomial::zero, |v| v.poly.clone());
        let tau = MasterField::perturbative(ctx.data.clone(), &potential, order).map_err(compute)?;
        let series = tau.eval(&p.poly).map_err(compute)?;
        write_string(out, json!(series.coeffs()).to_string())
    })
}

/// Coefficients of `τ_kg(args[0], ..., args[k-1])` through `t^order` for the
/// potential `v` (NULL for Haar), as a JSON array.
///
/// # Safety
/// `ctx` is live, `args` holds `k` live polynomials, `v` is NULL or live and
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn umm_tau_kg_json(
    ctx: *const UmmContext,
    args: *const *const UmmPolynomial,
    k: usize,
    genus: usize,
    v: *const UmmPolynomial,
    order: usize,
    out: *mut *mut c_char,
) -> UmmStatus {
    guard(|| {
        check_out(out)?;
        let ctx = deref(ctx, "ctx")?;
        if args.is_null() {
            return Err(Failure::new(UmmStatus::NullPointer, "args is NULL"));
        }
        let polys = std::slice::from_raw_parts(args, k)
            .iter()
            .enumerate()
            .map(|(j, &a)| deref(a, &format!("args[{j}]")).map(|a| a.poly.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let potential = v.as_ref().map_or_else(Polynomial::zero, |v| v.poly.clone());
        let correlators = Correlators::new(ctx.data.clone(), &potential, order).map_err(compute)?;
        let series = correlators.tau_kg(genus, &polys).map_err(compute)?;
        write_string(out, json!(series.coeffs()).to_string())
    })
}

/// Monotone double Hurwitz number of genus `genus` for partitions `alpha`
/// and `beta` of the same size, under the calibrated convention.
///
/// # Safety
/// `alpha` and `beta` hold `alpha_len` and `beta_len` entries; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn umm_hurwitz_count(
    genus: usize,
    alpha: *const usize,
    alpha_len: usize,
    beta: *const usize,
    beta_len: usize,
    out: *mut u64,
) -> UmmStatus {
    guard(|| {
        check_out(out)?;
        if alpha.is_null() || beta.is_null() {
            return Err(Failure::new(UmmStatus::NullPointer, "partition is NULL"));
        }
        let partition = |p: *const usize, len: usize| {
            Partition::new(std::slice::from_raw_parts(p, len).to_vec()).map_err(|e| Failure::new(UmmStatus::Config, e))
        };
        let (a, b) = (partition(alpha, alpha_len)?, partition(beta, beta_len)?);
        *out = monotone_count(genus, &a, &b, HurwitzConvention::CALIBRATED).map_err(compute)?;
        Ok(())
    })
}

/// Runs a full command from a JSON run config (the CLI's config format) and
/// returns the JSON report. Failed checks still return `UMM_STATUS_OK`; read
/// `checks` in the report.
///
/// # Safety
/// `config_json` is NUL-terminated and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn umm_run_json(config_json: *const c_char, out: *mut *mut c_char) -> UmmStatus {
    guard(|| {
        check_out(out)?;
        let text = read_str(config_json, "config_json")?;
        let config = RunConfig::from_json(text, "config_json").map_err(|e| Failure::new(UmmStatus::Config, e))?;
        let report = run(&config).map_err(compute)?;
        write_string(out, report.to_json())
    })
}
