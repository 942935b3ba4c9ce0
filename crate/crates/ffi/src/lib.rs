//! C ABI over `lpbounds`.
//!
//! Objects cross the boundary as opaque heap handles created by `lp_*_new`
//! and released by the matching `lp_*_free`. Every fallible call returns an
//! [`LpStatus`]; on failure `lp_last_error_message` describes the error for
//! the calling thread. Matrices are passed as two row-major `double` arrays
//! (real and imaginary parts); a null imaginary pointer means all zeros.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lpbounds::bounds::{self, BoundKind, Operands};
use lpbounds::mub::{verify_mub, MubFamily};
use lpbounds::quantum::{self, EffectSet};
use lpbounds::separability::{separability_statistic, Verdict};
use lpbounds::{ComplexMatrix, Effect, Error, State, C64};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Ok = 0,
    NullPointer = 1,
    /// Matrix is malformed, not Hermitian, or out of the allowed spectrum.
    InvalidInput = 2,
    DimMismatch = 3,
    /// Dimension without a supported MUB construction.
    Unsupported = 4,
    /// Eigensolver failure or a degenerate intermediate.
    Numerical = 5,
    /// JSON could not be parsed or produced.
    Json = 6,
    /// Internal panic caught at the boundary.
    Panic = 7,
}

/// Opaque effect handle.
pub struct LpEffect {
    inner: Effect,
}

/// Opaque density-matrix handle.
pub struct LpState {
    inner: State,
}

/// Opaque MUB family handle.
pub struct LpMub {
    inner: MubFamily,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LpStatus {
    match e {
        Error::DimMismatch { .. } => LpStatus::DimMismatch,
        Error::BadDim(_) | Error::NotOddPrime(_) => LpStatus::Unsupported,
        Error::NoConvergence { .. } | Error::NullProjection(_) | Error::NullVector => LpStatus::Numerical,
        Error::Json(_) => LpStatus::Json,
        _ => LpStatus::InvalidInput,
    }
}

/// Runs `f`, translating errors and panics into a status and the thread's last error.
fn guard<F: FnOnce() -> Result<(), LpStatus>>(f: F) -> LpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LpStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal panic: {msg}"));
            LpStatus::Panic
        }
    }
}

fn lift<T>(r: lpbounds::Result<T>) -> Result<T, LpStatus> {
    r.map_err(|e| {
        set_last_error(e.to_string());
        status_of(&e)
    })
}

fn null_err(what: &str) -> LpStatus {
    set_last_error(format!("null pointer: {what}"));
    LpStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, LpStatus> {
    p.as_ref().ok_or_else(|| null_err(what))
}

unsafe fn read_matrix(re: *const f64, im: *const f64, dim: usize) -> Result<ComplexMatrix, LpStatus> {
    if re.is_null() {
        return Err(null_err("re"));
    }
    if dim == 0 {
        set_last_error("dimension must be positive".into());
        return Err(LpStatus::InvalidInput);
    }
    let n = dim.checked_mul(dim).ok_or_else(|| {
        set_last_error("dimension overflow".into());
        LpStatus::InvalidInput
    })?;
    let re = std::slice::from_raw_parts(re, n);
    let data = if im.is_null() {
        re.iter().map(|&x| C64::new(x, 0.0)).collect()
    } else {
        let im = std::slice::from_raw_parts(im, n);
        re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect()
    };
    lift(ComplexMatrix::new(dim, dim, data))
}

unsafe fn effect_slice(effects: *const *const LpEffect, count: usize) -> Result<Vec<Effect>, LpStatus> {
    if effects.is_null() {
        return Err(null_err("effects"));
    }
    std::slice::from_raw_parts(effects, count)
        .iter()
        .map(|&p| deref(p, "effect").map(|e| e.inner.clone()))
        .collect()
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), LpStatus> {
    if out.is_null() {
        return Err(null_err("out"));
    }
    *out = value;
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn lp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates an effect `0 <= A <= 1` from a `dim x dim` row-major matrix.
///
/// # Safety
/// `re` (and `im` if non-null) must point to `dim * dim` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_effect_new(re: *const f64, im: *const f64, dim: usize, out: *mut *mut LpEffect) -> LpStatus {
    guard(|| {
        let m = read_matrix(re, im, dim)?;
        let e = lift(Effect::new(m))?;
        write_out(out, Box::into_raw(Box::new(LpEffect { inner: e })))
    })
}

/// # Safety
/// `e` must come from `lp_effect_new` and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lp_effect_free(e: *mut LpEffect) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Creates a density matrix (Hermitian, PSD, unit trace).
///
/// # Safety
/// As for [`lp_effect_new`].
#[no_mangle]
pub unsafe extern "C" fn lp_state_new(re: *const f64, im: *const f64, dim: usize, out: *mut *mut LpState) -> LpStatus {
    guard(|| {
        let m = read_matrix(re, im, dim)?;
        let s = lift(State::new(m))?;
        write_out(out, Box::into_raw(Box::new(LpState { inner: s })))
    })
}

/// # Safety
/// `s` must come from `lp_state_new` or `lp_max_sum_oracle` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lp_state_free(s: *mut LpState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// `tr(rho A)`
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_probability(effect: *const LpEffect, state: *const LpState, out: *mut f64) -> LpStatus {
    guard(|| {
        let e = deref(effect, "effect")?;
        let s = deref(state, "state")?;
        let p = lift(quantum::probability(&e.inner, &s.inner))?;
        write_out(out, p)
    })
}

/// `1 + ||A^{1/2} B^{1/2}||`
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_pair_bound(a: *const LpEffect, b: *const LpEffect, out: *mut f64) -> LpStatus {
    guard(|| {
        let a = deref(a, "a")?;
        let b = deref(b, "b")?;
        write_out(out, lift(bounds::pair_bound(&a.inner, &b.inner))?)
    })
}

/// Multi-effect bound over `count` effects.
///
/// # Safety
/// `effects` must point to `count` live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_multi_bound(effects: *const *const LpEffect, count: usize, out: *mut f64) -> LpStatus {
    guard(|| {
        let effects = effect_slice(effects, count)?;
        write_out(out, lift(bounds::multi_bound(&effects))?)
    })
}

/// Exact `max_rho sum_i tr(rho A_i)`. `maximizer` may be null; otherwise it
/// receives a new state handle owned by the caller.
///
/// # Safety
/// `effects` must point to `count` live handles; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_max_sum_oracle(
    effects: *const *const LpEffect,
    count: usize,
    value: *mut f64,
    maximizer: *mut *mut LpState,
) -> LpStatus {
    guard(|| {
        let effects = effect_slice(effects, count)?;
        let (v, rho) = lift(quantum::max_sum_oracle(&effects))?;
        write_out(value, v)?;
        if !maximizer.is_null() {
            *maximizer = Box::into_raw(Box::new(LpState { inner: rho }));
        }
        Ok(())
    })
}

/// `1 + sqrt(D + 1)`; needs no handle.
#[no_mangle]
pub extern "C" fn lp_mub_bound(dim: usize) -> f64 {
    bounds::mub_bound(dim)
}

/// Pairwise combination of the weak bound over all `D + 1` bases.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_trivial_combination_bound(dim: usize, out: *mut f64) -> LpStatus {
    guard(|| write_out(out, lift(bounds::trivial_combination_bound(dim))?))
}

/// Builds the MUB family for `dim` (2 or an odd prime).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_mub_new(dim: usize, out: *mut *mut LpMub) -> LpStatus {
    guard(|| {
        let f = lift(MubFamily::for_dim(dim))?;
        write_out(out, Box::into_raw(Box::new(LpMub { inner: f })))
    })
}

/// # Safety
/// `m` must come from `lp_mub_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lp_mub_free(m: *mut LpMub) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of bases, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn lp_mub_num_bases(m: *const LpMub) -> usize {
    m.as_ref().map_or(0, |m| m.inner.num_bases())
}

/// Largest deviation of a cross-basis overlap from `1/sqrt(D)`.
///
/// # Safety
/// `m` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_mub_verify(m: *const LpMub, out: *mut f64) -> LpStatus {
    guard(|| {
        let m = deref(m, "mub")?;
        write_out(out, verify_mub(&m.inner))
    })
}

/// Separability statistic of a `D^2`-dimensional state. `entangled` receives 1
/// when the statistic exceeds `1 + sqrt(D + 1)`, else 0.
///
/// # Safety
/// Handles must be live; `lhs` and `entangled` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_separability_statistic(
    state: *const LpState,
    mub: *const LpMub,
    lhs: *mut f64,
    entangled: *mut i32,
) -> LpStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let m = deref(mub, "mub")?;
        let r = lift(separability_statistic(&s.inner, &m.inner))?;
        write_out(lhs, r.lhs)?;
        write_out(entangled, i32::from(r.verdict == Verdict::EntangledDetected))
    })
}

/// Evaluates the multi-effect bound from JSON. `effects_json` holds
/// `{"effects": [...]}`; `state_json` may be null, in which case the bound is
/// evaluated at the oracle maximizer. The report string written to `out` must
/// be released with `lp_string_free`.
///
/// # Safety
/// String arguments must be NUL-terminated UTF-8; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_evaluate_multi_json(
    effects_json: *const c_char,
    state_json: *const c_char,
    out: *mut *mut c_char,
) -> LpStatus {
    guard(|| {
        let text = |p: *const c_char, what: &str| -> Result<String, LpStatus> {
            let s = deref(p, what)?;
            CStr::from_ptr(s).to_str().map(str::to_owned).map_err(|e| {
                set_last_error(format!("{what} is not UTF-8: {e}"));
                LpStatus::InvalidInput
            })
        };
        let set: EffectSet = lift(serde_json::from_str(&text(effects_json, "effects_json")?).map_err(Error::from))?;
        let rho = if state_json.is_null() {
            lift(quantum::max_sum_oracle(&set.effects))?.1
        } else {
            lift(serde_json::from_str::<State>(&text(state_json, "state_json")?).map_err(Error::from))?
        };
        let report = lift(bounds::evaluate(BoundKind::Multi, &Operands::Effects { effects: set.effects }, &rho))?;
        let json = lift(serde_json::to_string(&report).map_err(Error::from))?;
        let c = CString::new(json).map_err(|_| LpStatus::Json)?;
        write_out(out, c.into_raw())
    })
}

/// # Safety
/// `s` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
