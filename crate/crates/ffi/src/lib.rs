//! C ABI over `affinity-discord`.
//!
//! States live behind an opaque [`AdState`] handle. Every fallible call
//! returns an [`AdStatus`] and writes results through out-pointers; on failure
//! the message is kept per thread and can be read with
//! [`ad_last_error_message`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use affinity_discord::families::{self, Family};
use affinity_discord::measures::{optimize_discord, pure_discord};
use affinity_discord::{correlation, states, BipartiteState, ComplexMatrix, Error, Measure, OptimizeOptions, Strategy, Tolerances, C64};

/// Opaque handle to a validated bipartite density matrix.
pub struct AdState {
    inner: BipartiteState,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdStatus {
    Ok = 0,
    NullPointer = 1,
    /// The matrix is not a density matrix (shape, Hermiticity, positivity, trace).
    InvalidState = 2,
    /// The operation does not support this dimension.
    Unsupported = 3,
    InvalidArgument = 4,
    Io = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdMeasure {
    Affinity = 0,
    HilbertSchmidt = 1,
    Remedied = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdStrategy {
    Grid = 0,
    Multistart = 1,
    Hybrid = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_last_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> AdStatus {
    match e {
        Error::NonSquare { .. }
        | Error::NonHermitian { .. }
        | Error::NotPsd { .. }
        | Error::NotUnitTrace { .. }
        | Error::DimensionMismatch { .. } => AdStatus::InvalidState,
        Error::WrongDimension { .. } | Error::UnsupportedDimension(_) => AdStatus::Unsupported,
        Error::Io(_) => AdStatus::Io,
        _ => AdStatus::InvalidArgument,
    }
}

/// Runs `f`, recording any error or panic.
fn guard<F: FnOnce() -> Result<(), (AdStatus, String)>>(f: F) -> AdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error(String::new());
            AdStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            AdStatus::Panic
        }
    }
}

fn lib<T>(r: affinity_discord::Result<T>) -> Result<T, (AdStatus, String)> {
    r.map_err(|e| (status_of(&e), format!("{}: {e}", e.kind())))
}

fn null(what: &str) -> (AdStatus, String) {
    (AdStatus::NullPointer, format!("null pointer: {what}"))
}

unsafe fn state_ref<'a>(s: *const AdState) -> Result<&'a BipartiteState, (AdStatus, String)> {
    // SAFETY: caller passes a handle from this library or null.
    unsafe { s.as_ref() }.map(|s| &s.inner).ok_or_else(|| null("state"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), (AdStatus, String)> {
    if out.is_null() {
        return Err(null("output"));
    }
    // SAFETY: non-null, caller guarantees it points to writable storage.
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (AdStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null, caller guarantees a NUL-terminated string.
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| (AdStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn emit_state(out: *mut *mut AdState, state: BipartiteState) -> Result<(), (AdStatus, String)> {
    if out.is_null() {
        return Err(null("output"));
    }
    // SAFETY: checked non-null above.
    unsafe { out.write(Box::into_raw(Box::new(AdState { inner: state }))) };
    Ok(())
}

/// Builds a state from row-major real and imaginary parts of the
/// (dim_a·dim_b)² density matrix. `im` may be null for a real matrix.
///
/// # Safety
/// `re` (and `im` when non-null) must point to (dim_a·dim_b)² doubles;
/// `out` must be writable. Free the result with [`ad_state_free`].
#[no_mangle]
pub unsafe extern "C" fn ad_state_from_parts(
    dim_a: usize,
    dim_b: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut AdState,
) -> AdStatus {
    guard(|| {
        if re.is_null() {
            return Err(null("re"));
        }
        let n = dim_a.checked_mul(dim_b).and_then(|d| d.checked_mul(d)).ok_or_else(|| {
            (AdStatus::InvalidArgument, "dimension overflow".to_string())
        })?;
        // SAFETY: caller guarantees n readable doubles.
        let re = unsafe { std::slice::from_raw_parts(re, n) };
        let im = if im.is_null() { None } else { Some(unsafe { std::slice::from_raw_parts(im, n) }) };
        let data = (0..n).map(|k| C64::new(re[k], im.map_or(0.0, |im| im[k]))).collect();
        let d = dim_a * dim_b;
        let rho = lib(ComplexMatrix::from_vec(d, d, data))?;
        let state = lib(BipartiteState::validate(rho, dim_a, dim_b))?;
        unsafe { emit_state(out, state) }
    })
}

/// Reads a JSON state file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ad_state_from_json_file(path: *const c_char, out: *mut *mut AdState) -> AdStatus {
    guard(|| {
        let path = unsafe { c_str(path, "path") }?;
        let state = lib(states::read_state_file(Path::new(path), &Tolerances::default()))?;
        unsafe { emit_state(out, state) }
    })
}

/// Builds a family member: `family` is "werner2", "belldiag" (direction
/// (1, 1, 1) scaled by `param`), "werner" or "isotropic" (local dimension `m`).
///
/// # Safety
/// `family` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ad_state_family(family: *const c_char, m: usize, param: f64, out: *mut *mut AdState) -> AdStatus {
    guard(|| {
        let tag = unsafe { c_str(family, "family") }?;
        let family = lib(Family::parse(tag, m, [1.0, 1.0, 1.0]))?;
        let state = lib(family.state(param))?;
        unsafe { emit_state(out, state) }
    })
}

/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ad_state_free(state: *mut AdState) {
    if !state.is_null() {
        // SAFETY: created by Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Local dimension of A, or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ad_state_dim_a(state: *const AdState) -> usize {
    unsafe { state.as_ref() }.map_or(0, |s| s.inner.dim_a())
}

/// Local dimension of B, or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ad_state_dim_b(state: *const AdState) -> usize {
    unsafe { state.as_ref() }.map_or(0, |s| s.inner.dim_b())
}

/// Exact affinity discord of a 2 × n state.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ad_closed_form_2xn(state: *const AdState, out: *mut f64) -> AdStatus {
    guard(|| {
        let s = unsafe { state_ref(state) }?;
        let v = lib(correlation::closed_form_2xn(s))?.value;
        unsafe { write(out, v) }
    })
}

/// Spectral lower bound on the affinity discord (any dimension).
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ad_lower_bound(state: *const AdState, out: *mut f64) -> AdStatus {
    guard(|| {
        let s = unsafe { state_ref(state) }?;
        let v = lib(correlation::lower_bound(s))?.value;
        unsafe { write(out, v) }
    })
}

/// 1 − Σ s_i² for a pure state; `AD_STATUS_INVALID_ARGUMENT` if the state is mixed.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ad_pure_discord(state: *const AdState, out: *mut f64) -> AdStatus {
    guard(|| {
        let s = unsafe { state_ref(state) }?;
        let psi = s
            .as_pure(1e-10)
            .ok_or_else(|| (AdStatus::InvalidArgument, format!("state is not pure (purity {})", s.purity())))?;
        unsafe { write(out, pure_discord(&psi).value) }
    })
}

/// Minimizes the chosen measure over projective measurements on A.
/// A `budget` of 0 selects the default.
///
/// # Safety
/// `state` must be a live handle; `out` and `evaluations` (if non-null) must be writable.
#[no_mangle]
pub unsafe extern "C" fn ad_optimize(
    state: *const AdState,
    measure: AdMeasure,
    strategy: AdStrategy,
    budget: usize,
    seed: u64,
    out: *mut f64,
    evaluations: *mut usize,
) -> AdStatus {
    guard(|| {
        let s = unsafe { state_ref(state) }?;
        let measure = match measure {
            AdMeasure::Affinity => Measure::Affinity,
            AdMeasure::HilbertSchmidt => Measure::HilbertSchmidt,
            AdMeasure::Remedied => Measure::Remedied,
        };
        let strategy = match strategy {
            AdStrategy::Grid => Strategy::Grid,
            AdStrategy::Multistart => Strategy::MultistartLocal,
            AdStrategy::Hybrid => Strategy::Hybrid,
        };
        let mut opts = OptimizeOptions { strategy, seed, ..Default::default() };
        if budget > 0 {
            opts.budget = budget;
        }
        let r = lib(optimize_discord(s, measure, &opts))?;
        if !evaluations.is_null() {
            unsafe { evaluations.write(r.evaluations) };
        }
        unsafe { write(out, r.value) }
    })
}

unsafe fn write_pair(pair: affinity_discord::Result<(f64, f64)>, affinity: *mut f64, hs: *mut f64) -> Result<(), (AdStatus, String)> {
    let (a, h) = lib(pair)?;
    unsafe {
        write(affinity, a)?;
        write(hs, h)
    }
}

/// Closed-form affinity and Hilbert–Schmidt discord of the two-qubit Werner state.
///
/// # Safety
/// `affinity` and `hs` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ad_werner_two_qubit(p: f64, affinity: *mut f64, hs: *mut f64) -> AdStatus {
    guard(|| unsafe { write_pair(families::werner_two_qubit_discords(p), affinity, hs) })
}

/// Closed forms for the m × m Werner state.
///
/// # Safety
/// `affinity` and `hs` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ad_werner(m: usize, x: f64, affinity: *mut f64, hs: *mut f64) -> AdStatus {
    guard(|| unsafe { write_pair(families::werner_general_discords(m, x), affinity, hs) })
}

/// Closed forms for the m × m isotropic state.
///
/// # Safety
/// `affinity` and `hs` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ad_isotropic(m: usize, x: f64, affinity: *mut f64, hs: *mut f64) -> AdStatus {
    guard(|| unsafe { write_pair(families::isotropic_discords(m, x), affinity, hs) })
}

/// Closed forms for the Bell-diagonal state with correlation triple (c1, c2, c3).
///
/// # Safety
/// `affinity` and `hs` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ad_bell_diagonal(c1: f64, c2: f64, c3: f64, affinity: *mut f64, hs: *mut f64) -> AdStatus {
    guard(|| {
        let pair = families::bell_diagonal_discord(c1, c2, c3)
            .and_then(|a| families::bell_diagonal_hs_discord(c1, c2, c3).map(|h| (a, h)));
        unsafe { write_pair(pair, affinity, hs) }
    })
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length plus one, so a call
/// with `len = 0` sizes the buffer.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ad_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            // SAFETY: caller guarantees len writable bytes; n + 1 <= len.
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                buf.add(n).write(0);
            }
        }
        bytes.len() + 1
    })
}
