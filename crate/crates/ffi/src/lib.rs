//! C ABI for the sonine library.
//!
//! All entry points return a [`SonineStatus`]. Details of the last failure are
//! kept in the [`SonineContext`] passed to the call and can be read with
//! [`sonine_last_error`]. Rational parameters are passed as numerator and
//! denominator pairs. Panics never cross the boundary; they surface as
//! `SONINE_STATUS_PANIC`.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigInt;
use num_complex::Complex64;
use sonine::hyper::{bessel_1d, bessel_a, bessel_b, EvalResult, MultiplicityB, TruncationPolicy};
use sonine::jack::{binomial, jack_eval};
use sonine::laguerre::{connection_coefficients, laguerre_normalized, ConnectionTable, LaguerreParams};
use sonine::scalar::rational_string;
use sonine::{Error, Partition, Rational};


/// Status codes returned by every function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SonineStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    Pole = 3,
    NonConvergence = 4,
    Singular = 5,
    Domain = 6,
    Panic = 7,
    BufferTooSmall = 8,
}

/// A complex number.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SonineComplex {
    pub re: f64,
    pub im: f64,
}

/// A truncated series value.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SonineEval {
    pub value: SonineComplex,
    pub degree_used: u32,
    pub tail_bound: f64,
}

/// Truncation policy and last error message.
pub struct SonineContext {
    policy: TruncationPolicy,
    last_error: CString,
}

/// An exact table of connection coefficients.
pub struct SonineConnectionTable {
    n: usize,
    entries: Vec<(Vec<u32>, f64, CString)>,
}

fn status_of(e: &Error) -> SonineStatus {
    match e {
        Error::Pole { .. } => SonineStatus::Pole,
        Error::NonConvergence { .. } => SonineStatus::NonConvergence,
        Error::Singular(_) => SonineStatus::Singular,
        Error::Domain(_) | Error::NotContained { .. } => SonineStatus::Domain,
        _ => SonineStatus::InvalidArgument,
    }
}

fn set_error(ctx: &mut SonineContext, msg: &str) {
    ctx.last_error = CString::new(msg.replace('\0', " ")).unwrap_or_default();
}

/// Runs `f` with the context, converting errors and panics to status codes.
fn guarded<F>(ctx: *mut SonineContext, f: F) -> SonineStatus
where
    F: FnOnce(&mut SonineContext) -> Result<(), (SonineStatus, String)>,
{
    if ctx.is_null() {
        return SonineStatus::NullPointer;
    }
    // SAFETY: non-null and created by sonine_context_new per the API contract.
    let ctx = unsafe { &mut *ctx };
    match catch_unwind(AssertUnwindSafe(|| f(ctx))) {
        Ok(Ok(())) => {
            set_error(ctx, "");
            SonineStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(ctx, &msg);
            status
        }
        Err(_) => {
            set_error(ctx, "internal panic");
            SonineStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (SonineStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_err(what: &str) -> (SonineStatus, String) {
    (SonineStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: &str) -> (SonineStatus, String) {
    (SonineStatus::InvalidArgument, msg.to_string())
}

/// Reads `len` items from a C array.
///
/// # Safety
/// `p` must be null or point to `len` readable values.
unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], (SonineStatus, String)> {
    if p.is_null() {
        return Err(null_err(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn ratio(num: i64, den: i64, what: &str) -> Result<Rational, (SonineStatus, String)> {
    if den == 0 {
        return Err(invalid(&format!("{what}: zero denominator")));
    }
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}

fn partition(parts: &[u32], what: &str) -> Result<Partition, (SonineStatus, String)> {
    Partition::new(parts.to_vec()).map_err(|e| invalid(&format!("{what}: {e}")))
}

fn complexes(v: &[SonineComplex]) -> Vec<Complex64> {
    v.iter().map(|c| Complex64::new(c.re, c.im)).collect()
}

fn write_eval(out: *mut SonineEval, r: EvalResult) -> Result<(), (SonineStatus, String)> {
    if out.is_null() {
        return Err(null_err("out"));
    }
    // SAFETY: checked non-null; caller provides writable storage.
    unsafe {
        *out = SonineEval {
            value: SonineComplex { re: r.value.re, im: r.value.im },
            degree_used: r.degree_used,
            tail_bound: r.tail_bound,
        };
    }
    Ok(())
}

/// Copies `s` with a terminating NUL into `buf`; `needed` receives the size
/// including the NUL.
///
/// # Safety
/// `buf` must have room for `len` bytes; `needed` may be null.
unsafe fn write_string(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> Result<(), (SonineStatus, String)> {
    let bytes = s.as_bytes();
    if !needed.is_null() {
        *needed = bytes.len() + 1;
    }
    if buf.is_null() {
        return Err(null_err("buf"));
    }
    if len < bytes.len() + 1 {
        return Err((SonineStatus::BufferTooSmall, format!("need {} bytes", bytes.len() + 1)));
    }
    ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, bytes.len());
    *buf.add(bytes.len()) = 0;
    Ok(())
}

/// New context with the default truncation policy (degree 30, 1e-12, 3).
#[no_mangle]
pub extern "C" fn sonine_context_new() -> *mut SonineContext {
    Box::into_raw(Box::new(SonineContext { policy: TruncationPolicy::default(), last_error: CString::default() }))
}

/// # Safety
/// `ctx` must be null or come from [`sonine_context_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn sonine_context_free(ctx: *mut SonineContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Message of the last failed call on `ctx`; empty after a success. The
/// pointer stays valid until the next call with the same context.
///
/// # Safety
/// `ctx` must be null or a live context.
#[no_mangle]
pub unsafe extern "C" fn sonine_last_error(ctx: *const SonineContext) -> *const c_char {
    static NULL_CTX: &CStr = c"context is null";
    if ctx.is_null() {
        return NULL_CTX.as_ptr();
    }
    (*ctx).last_error.as_ptr()
}

/// Replaces the truncation policy used by the series evaluators.
///
/// # Safety
/// `ctx` must be null or a live context.
#[no_mangle]
pub unsafe extern "C" fn sonine_set_policy(
    ctx: *mut SonineContext,
    max_degree: u32,
    rel_tol: f64,
    consecutive_small: u32,
) -> SonineStatus {
    guarded(ctx, |ctx| {
        let p = TruncationPolicy { max_degree, rel_tol, consecutive_small };
        p.validate().map_err(lib_err)?;
        ctx.policy = p;
        Ok(())
    })
}

/// J_k^B(x, y) for k = (k1, k2) and complex vectors of length n.
///
/// # Safety
/// `x` and `y` must point to `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sonine_bessel_b(
    ctx: *mut SonineContext,
    n: usize,
    k1: f64,
    k2: f64,
    x: *const SonineComplex,
    y: *const SonineComplex,
    out: *mut SonineEval,
) -> SonineStatus {
    guarded(ctx, |ctx| {
        let x = complexes(slice(x, n, "x")?);
        let y = complexes(slice(y, n, "y")?);
        let k = MultiplicityB::new(n, k1, k2).map_err(lib_err)?;
        write_eval(out, bessel_b(&k, &x, &y, &ctx.policy).map_err(lib_err)?)
    })
}

/// J_{k2}^A(x, y), n ≥ 2.
///
/// # Safety
/// `x` and `y` must point to `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sonine_bessel_a(
    ctx: *mut SonineContext,
    n: usize,
    k2: f64,
    x: *const SonineComplex,
    y: *const SonineComplex,
    out: *mut SonineEval,
) -> SonineStatus {
    guarded(ctx, |ctx| {
        let x = complexes(slice(x, n, "x")?);
        let y = complexes(slice(y, n, "y")?);
        write_eval(out, bessel_a(k2, &x, &y, &ctx.policy).map_err(lib_err)?)
    })
}

/// The normalized one-variable Bessel function j_alpha(z).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sonine_bessel_1d(
    ctx: *mut SonineContext,
    alpha: f64,
    z: SonineComplex,
    out: *mut SonineComplex,
) -> SonineStatus {
    guarded(ctx, |_| {
        let v = bessel_1d(alpha, Complex64::new(z.re, z.im)).map_err(lib_err)?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        *out = SonineComplex { re: v.re, im: v.im };
        Ok(())
    })
}

/// C_λ^α(x) for a partition with n parts (zeros allowed) and n variables.
///
/// # Safety
/// `parts` and `x` must point to `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sonine_jack_eval(
    ctx: *mut SonineContext,
    parts: *const u32,
    n: usize,
    alpha_num: i64,
    alpha_den: i64,
    x: *const SonineComplex,
    out: *mut SonineComplex,
) -> SonineStatus {
    guarded(ctx, |_| {
        let lambda = partition(slice(parts, n, "parts")?, "parts")?;
        let x = complexes(slice(x, n, "x")?);
        let v = jack_eval(&lambda, &ratio(alpha_num, alpha_den, "alpha")?, &x).map_err(lib_err)?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        *out = SonineComplex { re: v.re, im: v.im };
        Ok(())
    })
}

/// The generalized binomial (κ choose λ) as the string "p/q".
///
/// # Safety
/// `kappa` and `lambda` must point to `n` values; `buf` must hold `buf_len`
/// bytes; `needed` may be null.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn sonine_binomial(
    ctx: *mut SonineContext,
    kappa: *const u32,
    lambda: *const u32,
    n: usize,
    alpha_num: i64,
    alpha_den: i64,
    buf: *mut c_char,
    buf_len: usize,
    needed: *mut usize,
) -> SonineStatus {
    guarded(ctx, |_| {
        let k = partition(slice(kappa, n, "kappa")?, "kappa")?;
        let l = partition(slice(lambda, n, "lambda")?, "lambda")?;
        let v = binomial(&k, &l, &ratio(alpha_num, alpha_den, "alpha")?).map_err(lib_err)?;
        write_string(&rational_string(&v), buf, buf_len, needed)
    })
}

/// The normalized Laguerre polynomial L̃_κ^a(x; α) at a real point.
///
/// # Safety
/// `kappa` and `x` must point to `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sonine_laguerre_normalized(
    ctx: *mut SonineContext,
    kappa: *const u32,
    n: usize,
    a: f64,
    alpha: f64,
    x: *const f64,
    out: *mut SonineEval,
) -> SonineStatus {
    guarded(ctx, |ctx| {
        let k = partition(slice(kappa, n, "kappa")?, "kappa")?;
        let x = slice(x, n, "x")?;
        let p = LaguerreParams::new(n, a, alpha).map_err(lib_err)?;
        write_eval(out, laguerre_normalized(&k, &p, x, &ctx.policy).map_err(lib_err)?)
    })
}

/// Exact connection coefficients for κ at rational (a, α, h). On failure
/// `*table` is set to null.
///
/// # Safety
/// `kappa` must point to `n` values; `table` must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn sonine_connection_new(
    ctx: *mut SonineContext,
    kappa: *const u32,
    n: usize,
    a_num: i64,
    a_den: i64,
    alpha_num: i64,
    alpha_den: i64,
    h_num: i64,
    h_den: i64,
    table: *mut *mut SonineConnectionTable,
) -> SonineStatus {
    guarded(ctx, |_| {
        if table.is_null() {
            return Err(null_err("table"));
        }
        *table = ptr::null_mut();
        let k = partition(slice(kappa, n, "kappa")?, "kappa")?;
        let p = LaguerreParams::new(n, ratio(a_num, a_den, "a")?, ratio(alpha_num, alpha_den, "alpha")?)
            .map_err(lib_err)?;
        let t: ConnectionTable<Rational> = connection_coefficients(&k, &p, &ratio(h_num, h_den, "h")?).map_err(lib_err)?;
        let entries = t
            .entries
            .iter()
            .map(|(l, v)| {
                let s = CString::new(rational_string(v)).expect("digits contain no NUL");
                (l.parts().to_vec(), sonine::Scalar::to_f64(v), s)
            })
            .collect();
        *table = Box::into_raw(Box::new(SonineConnectionTable { n, entries }));
        Ok(())
    })
}

/// Number of entries (sub-partitions of κ); 0 for a null table.
///
/// # Safety
/// `table` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn sonine_connection_len(table: *const SonineConnectionTable) -> usize {
    if table.is_null() {
        0
    } else {
        (*table).entries.len()
    }
}

/// Entry `index`: λ into `lambda` (n values), value as a double and as the
/// NUL-terminated string "p/q" owned by the table.
///
/// # Safety
/// `table` must be live; `lambda` must hold n values; `value` and `exact` may
/// be null.
#[no_mangle]
pub unsafe extern "C" fn sonine_connection_entry(
    table: *const SonineConnectionTable,
    index: usize,
    lambda: *mut u32,
    value: *mut f64,
    exact: *mut *const c_char,
) -> SonineStatus {
    if table.is_null() || lambda.is_null() {
        return SonineStatus::NullPointer;
    }
    let t = &*table;
    let Some((parts, v, s)) = t.entries.get(index) else {
        return SonineStatus::InvalidArgument;
    };
    ptr::copy_nonoverlapping(parts.as_ptr(), lambda, t.n);
    if !value.is_null() {
        *value = *v;
    }
    if !exact.is_null() {
        *exact = s.as_ptr();
    }
    SonineStatus::Ok
}

/// # Safety
/// `table` must be null or come from [`sonine_connection_new`] and not be
/// used again.
#[no_mangle]
pub unsafe extern "C" fn sonine_connection_free(table: *mut SonineConnectionTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}
