//! C ABI over `cominv`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Strings returned through `char **`
//! out-parameters are NUL-terminated UTF-8 and released with
//! [`cominv_string_free`]. Every fallible call returns a [`CominvStatus`];
//! on anything other than `COMINV_STATUS_OK` the message is available from
//! [`cominv_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use serde_json::{Map, Value};

use cominv::parse::{parse_expression, parse_polynomial};
use cominv::poly::{Family, Polynomial};
use cominv::rings::RingConfig;
use cominv::traceinv::{
    eval_diagonal, eval_generic, express_in_t_basis, multilinear_dim, reduce_traces,
    TraceExpression,
};
use cominv::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CominvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Panic = 5,
}

/// Variable family of a polynomial.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CominvFamily {
    Generic = 0,
    Diagonal = 1,
    Abstract = 2,
}

impl From<CominvFamily> for Family {
    fn from(f: CominvFamily) -> Self {
        match f {
            CominvFamily::Generic => Family::Generic,
            CominvFamily::Diagonal => Family::Diagonal,
            CominvFamily::Abstract => Family::Abstract,
        }
    }
}

/// A linear combination of products of traces.
pub struct CominvExpr(TraceExpression);

/// An exact rational polynomial.
pub struct CominvPoly(Polynomial);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(CominvStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } => CominvStatus::Parse,
            _ => CominvStatus::Domain,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CominvStatus::NullPointer, format!("{what} is null"))
}

fn guarded(body: impl FnOnce() -> Result<(), Failure>) -> CominvStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CominvStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CominvStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(CominvStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap().into_raw()
}

fn config(n: usize, m: usize) -> Result<RingConfig, Failure> {
    Ok(RingConfig::new(n, m)?)
}

/// Message for the most recent failure on this thread, or null after a
/// success. The pointer stays valid until the next call into this library.
#[no_mangle]
pub extern "C" fn cominv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cominv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a trace expression such as `tr(X1*X2) - 1/2*tr(X1)*tr(X2)`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cominv_expr_parse(
    text: *const c_char,
    out: *mut *mut CominvExpr,
) -> CominvStatus {
    guarded(|| {
        let e = parse_expression(read_str(text, "text")?)?;
        write_out(out, Box::into_raw(Box::new(CominvExpr(e))))
    })
}

/// # Safety
/// `e` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cominv_expr_free(e: *mut CominvExpr) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// # Safety
/// `e` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cominv_expr_render(
    e: *const CominvExpr,
    out: *mut *mut c_char,
) -> CominvStatus {
    guarded(|| {
        let e = deref(e, "expression")?;
        write_out(out, to_c_string(e.0.to_string()))
    })
}

/// Rewrites `e` so that no product has more than `n` trace factors, using
/// the `n×n` trace identity.
///
/// # Safety
/// `e` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cominv_expr_reduce(
    e: *const CominvExpr,
    n: usize,
    out: *mut *mut CominvExpr,
) -> CominvStatus {
    guarded(|| {
        let e = deref(e, "expression")?;
        let r = reduce_traces(&e.0, n)?;
        write_out(out, Box::into_raw(Box::new(CominvExpr(r))))
    })
}

/// Evaluates `e` on `m` generic `n×n` matrices.
///
/// # Safety
/// `e` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cominv_expr_eval_generic(
    e: *const CominvExpr,
    n: usize,
    m: usize,
    out: *mut *mut CominvPoly,
) -> CominvStatus {
    guarded(|| {
        let e = deref(e, "expression")?;
        let p = eval_generic(&e.0, &config(n, m)?)?;
        write_out(out, Box::into_raw(Box::new(CominvPoly(p))))
    })
}

/// Evaluates `e` on `m` diagonal `n×n` matrices.
///
/// # Safety
/// `e` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cominv_expr_eval_diagonal(
    e: *const CominvExpr,
    n: usize,
    m: usize,
    out: *mut *mut CominvPoly,
) -> CominvStatus {
    guarded(|| {
        let e = deref(e, "expression")?;
        let p = eval_diagonal(&e.0, &config(n, m)?)?;
        write_out(out, Box::into_raw(Box::new(CominvPoly(p))))
    })
}

/// Parses a polynomial in the given family, e.g. `x[1,1]*x[2,2] + 3`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cominv_poly_parse(
    text: *const c_char,
    family: CominvFamily,
    out: *mut *mut CominvPoly,
) -> CominvStatus {
    guarded(|| {
        let p = parse_polynomial(read_str(text, "text")?, family.into())?;
        write_out(out, Box::into_raw(Box::new(CominvPoly(p))))
    })
}

/// # Safety
/// `p` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cominv_poly_free(p: *mut CominvPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cominv_poly_render(
    p: *const CominvPoly,
    out: *mut *mut c_char,
) -> CominvStatus {
    guarded(|| {
        let p = deref(p, "polynomial")?;
        write_out(out, to_c_string(p.0.to_string()))
    })
}

/// 1 if `p` is the zero polynomial, 0 if not, -1 if `p` is null.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cominv_poly_is_zero(p: *const CominvPoly) -> c_int {
    match p.as_ref() {
        Some(p) => c_int::from(p.0.is_zero()),
        None => -1,
    }
}

/// Coefficients of a multilinear multisymmetric diagonal polynomial in the
/// `t_Λ` basis, as a JSON object from partition to rational string.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cominv_poly_express(
    p: *const CominvPoly,
    n: usize,
    m: usize,
    out: *mut *mut c_char,
) -> CominvStatus {
    guarded(|| {
        let p = deref(p, "polynomial")?;
        let coeffs = express_in_t_basis(&p.0, &config(n, m)?)?;
        let obj: Map<String, Value> = coeffs
            .iter()
            .map(|(lambda, c)| (lambda.to_string(), Value::String(c.to_string())))
            .collect();
        write_out(out, to_c_string(Value::Object(obj).to_string()))
    })
}

/// Dimension of the multilinear slice for `m` matrices of size `n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cominv_multilinear_dim(n: usize, m: usize, out: *mut u64) -> CominvStatus {
    guarded(|| {
        config(n, m)?;
        let d = multilinear_dim(n, m)
            .to_u64()
            .ok_or_else(|| Failure(CominvStatus::Domain, "dimension exceeds u64".into()))?;
        write_out(out, d)
    })
}

/// Runs the command line `argv[0..argc]` (program name first) and returns
/// the JSON report with the process exit code it would produce. Argument
/// errors (and `--help`) return `COMINV_STATUS_PARSE` with a null report and
/// the usage text as the last error.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings; `json` and `exit_code`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn cominv_run(
    argc: c_int,
    argv: *const *const c_char,
    json: *mut *mut c_char,
    exit_code: *mut c_int,
) -> CominvStatus {
    guarded(|| {
        if argv.is_null() {
            return Err(null("argv"));
        }
        if json.is_null() || exit_code.is_null() {
            return Err(null("output pointer"));
        }
        let mut args = Vec::with_capacity(argc.max(0) as usize);
        for i in 0..argc.max(0) as usize {
            args.push(read_str(*argv.add(i), "argument")?.to_owned());
        }
        match cominv::cli::run_args(args) {
            Ok((report, pretty)) => {
                write_out(json, to_c_string(report.to_json(pretty)))?;
                write_out(exit_code, report.exit_code())
            }
            Err(e) => {
                write_out(json, ptr::null_mut())?;
                write_out(exit_code, e.exit_code())?;
                Err(Failure(CominvStatus::Parse, e.render().to_string()))
            }
        }
    })
}
