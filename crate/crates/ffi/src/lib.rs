//! C interface to `tangleforge`.
//!
//! States are opaque heap handles released with the matching `*_free`
//! function. Every fallible call returns a [`TfStatus`] and writes its result
//! through an out-pointer; the message of the last failure on the calling
//! thread is available from [`tf_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nalgebra::DMatrix;
use tangleforge::cli::{resolve, Input};
use tangleforge::measures;
use tangleforge::qstate::{partial_trace, DensityFile, DensityMatrix, PureState, StateFile};
use tangleforge::roof::{roof_minimize, RoofMeasure, RoofProblem};
use tangleforge::{analytic, Error, C64};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidState = 3,
    Parse = 4,
    Numerical = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfRoofMeasure {
    Tau3 = 0,
    OneTangleA = 1,
}

/// Normalized pure state.
pub struct TfPureState {
    inner: PureState,
}

/// Validated density matrix.
pub struct TfDensity {
    inner: DensityMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> TfStatus {
    match e {
        Error::Parse(_) => TfStatus::Parse,
        Error::ZeroVector
        | Error::BadLength(_)
        | Error::NotNormalized(_)
        | Error::InvalidDensity(_)
        | Error::InvalidEnsemble(_)
        | Error::NotAState(_)
        | Error::OutsideSubspace(_)
        | Error::MixedDimensions
        | Error::WrongSize { .. } => TfStatus::InvalidState,
        Error::ZeroResult => TfStatus::Numerical,
        _ => TfStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), (TfStatus, String)>>(f: F) -> TfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TfStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TfStatus::Panic
        }
    }
}

fn lib<T>(r: tangleforge::Result<T>) -> Result<T, (TfStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (TfStatus, String) {
    (TfStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (TfStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), (TfStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn c_str<'a>(s: *const c_char) -> Result<&'a str, (TfStatus, String)> {
    if s.is_null() {
        return Err(null("string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (TfStatus::Parse, "string is not UTF-8".into()))
}

unsafe fn complex_slice(re: *const f64, im: *const f64, len: usize) -> Result<Vec<C64>, (TfStatus, String)> {
    if re.is_null() {
        return Err(null("real parts"));
    }
    let re = std::slice::from_raw_parts(re, len);
    let im = if im.is_null() { None } else { Some(std::slice::from_raw_parts(im, len)) };
    Ok((0..len).map(|k| C64::new(re[k], im.map_or(0.0, |v| v[k]))).collect())
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len - 1` bytes) and returns the full message length.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn tf_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Builds a state from `len` amplitudes (`im` may be null for real input).
/// With `normalize` false the vector must already have unit norm.
///
/// # Safety
/// `re` (and `im` if non-null) must be valid for `len` reads; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn tf_pure_from_amplitudes(re: *const f64, im: *const f64, len: usize, normalize: bool, out: *mut *mut TfPureState) -> TfStatus {
    guard(|| {
        let amps = complex_slice(re, im, len)?;
        let state = lib(PureState::new(amps, normalize))?;
        write(out, Box::into_raw(Box::new(TfPureState { inner: state })), "out")
    })
}

/// Built-in pure state by name, such as `"ghz"`, `"w"`, `"psi5"` or `"j:pi/3,2pi/3"`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_pure_named(name: *const c_char, out: *mut *mut TfPureState) -> TfStatus {
    guard(|| {
        let name = c_str(name)?;
        match lib(resolve(name))? {
            Input::Pure { state, .. } => write(out, Box::into_raw(Box::new(TfPureState { inner: state })), "out"),
            Input::Mixed { .. } => Err((TfStatus::InvalidArgument, format!("{name} is not a pure state"))),
        }
    })
}

/// Pure state from `{"n_qubits": n, "amplitudes": [[re, im], ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_pure_from_json(json: *const c_char, out: *mut *mut TfPureState) -> TfStatus {
    guard(|| {
        let state = lib(StateFile::from_json(c_str(json)?).and_then(StateFile::into_state))?;
        write(out, Box::into_raw(Box::new(TfPureState { inner: state })), "out")
    })
}

/// # Safety
/// `state` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tf_pure_free(state: *mut TfPureState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of qubits, or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tf_pure_n_qubits(state: *const TfPureState) -> usize {
    state.as_ref().map_or(0, |s| s.inner.n_qubits())
}

/// Copies the amplitudes into `re` and `im`, each of length `len`, which must
/// equal `2^n`.
///
/// # Safety
/// `state` must be a live handle; `re` and `im` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn tf_pure_amplitudes(state: *const TfPureState, re: *mut f64, im: *mut f64, len: usize) -> TfStatus {
    guard(|| {
        let s = deref(state, "state")?;
        if re.is_null() || im.is_null() {
            return Err(null("output buffer"));
        }
        if len != s.inner.dim() {
            return Err((TfStatus::InvalidArgument, format!("buffer length {len}, state dimension {}", s.inner.dim())));
        }
        for (k, a) in s.inner.amplitudes().iter().enumerate() {
            *re.add(k) = a.re;
            *im.add(k) = a.im;
        }
        Ok(())
    })
}

/// `|ψ⟩⟨ψ|` as a new density handle.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_pure_to_density(state: *const TfPureState, out: *mut *mut TfDensity) -> TfStatus {
    guard(|| {
        let s = deref(state, "state")?;
        write(out, Box::into_raw(Box::new(TfDensity { inner: s.inner.projector() })), "out")
    })
}

/// Density matrix from row-major `dim × dim` real and imaginary parts (`im`
/// may be null).
///
/// # Safety
/// `re` (and `im` if non-null) must be valid for `dim * dim` reads; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_density_from_matrix(re: *const f64, im: *const f64, dim: usize, out: *mut *mut TfDensity) -> TfStatus {
    guard(|| {
        let n = dim.checked_mul(dim).ok_or((TfStatus::InvalidArgument, "dimension overflow".to_string()))?;
        let entries = complex_slice(re, im, n)?;
        let rho = lib(DensityMatrix::new(DMatrix::from_row_slice(dim, dim, &entries)))?;
        write(out, Box::into_raw(Box::new(TfDensity { inner: rho })), "out")
    })
}

/// Any built-in state by name; pure names give their projector.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_density_named(name: *const c_char, out: *mut *mut TfDensity) -> TfStatus {
    guard(|| {
        let rho = lib(resolve(c_str(name)?))?.density();
        write(out, Box::into_raw(Box::new(TfDensity { inner: rho })), "out")
    })
}

/// Density matrix from `{"dim": d, "matrix": [[[re, im], ...], ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_density_from_json(json: *const c_char, out: *mut *mut TfDensity) -> TfStatus {
    guard(|| {
        let rho = lib(DensityFile::from_json(c_str(json)?).and_then(DensityFile::into_density))?;
        write(out, Box::into_raw(Box::new(TfDensity { inner: rho })), "out")
    })
}

/// # Safety
/// `rho` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tf_density_free(rho: *mut TfDensity) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}

/// Matrix dimension, or 0 for a null handle.
///
/// # Safety
/// `rho` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tf_density_dim(rho: *const TfDensity) -> usize {
    rho.as_ref().map_or(0, |r| r.inner.dim())
}

/// Three-tangle of a three-qubit pure state.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_three_tangle(state: *const TfPureState, out: *mut f64) -> TfStatus {
    guard(|| {
        let v = lib(measures::three_tangle_pure(&deref(state, "state")?.inner))?;
        write(out, v, "out")
    })
}

/// One-tangle `4·det ρ_q` of qubit `qubit` of a pure state.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_one_tangle(state: *const TfPureState, qubit: usize, out: *mut f64) -> TfStatus {
    guard(|| {
        let v = lib(measures::one_tangle_pure(&deref(state, "state")?.inner, qubit))?;
        write(out, v, "out")
    })
}

/// Multipartite measure `E_ms` of a three to five qubit pure state.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_e_ms(state: *const TfPureState, out: *mut f64) -> TfStatus {
    guard(|| {
        let v = lib(measures::e_ms(&deref(state, "state")?.inner))?;
        write(out, v, "out")
    })
}

/// Wootters concurrence of qubits `a < b` of `rho`; a two-qubit `rho` with
/// `a = 0, b = 1` is used as is.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_concurrence(rho: *const TfDensity, a: usize, b: usize, out: *mut f64) -> TfStatus {
    guard(|| {
        let r = &deref(rho, "rho")?.inner;
        let v = if r.dim() == 4 && (a, b) == (0, 1) {
            lib(measures::concurrence_two_qubit(r))?
        } else {
            lib(partial_trace(r, &[a, b]).and_then(|p| measures::concurrence_two_qubit(&p)))?
        };
        write(out, v, "out")
    })
}

/// Negativity of `rho` across qubit `qubit` versus the rest.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_negativity(rho: *const TfDensity, qubit: usize, out: *mut f64) -> TfStatus {
    guard(|| {
        let v = lib(measures::negativity(&deref(rho, "rho")?.inner, &[qubit]))?;
        write(out, v, "out")
    })
}

/// π-tangle of a three-qubit state.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_pi_tangle(rho: *const TfDensity, out: *mut f64) -> TfStatus {
    guard(|| {
        let v = lib(measures::pi_tangle(&deref(rho, "rho")?.inner))?;
        write(out, v, "out")
    })
}

/// Closed-form three-tangle of the GHZ mixture `σ(x)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_tau_sigma(x: f64, out: *mut f64) -> TfStatus {
    guard(|| write(out, lib(analytic::tau_sigma(x))?, "out"))
}

/// Numerical convex roof of `measure` on `rho`. `restarts` of 0 selects the
/// default; `converged` may be null.
///
/// # Safety
/// `rho` must be a live handle; `value` must be writable; `converged` must be
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn tf_roof_minimize(
    rho: *const TfDensity,
    measure: TfRoofMeasure,
    restarts: usize,
    seed: u64,
    value: *mut f64,
    converged: *mut bool,
) -> TfStatus {
    guard(|| {
        let r = deref(rho, "rho")?;
        let m = match measure {
            TfRoofMeasure::Tau3 => RoofMeasure::Tau3,
            TfRoofMeasure::OneTangleA => RoofMeasure::OneTangleA,
        };
        let restarts = if restarts == 0 { RoofProblem::DEFAULT_RESTARTS } else { restarts };
        let result = lib(roof_minimize(&RoofProblem::new(r.inner.clone(), m).restarts(restarts).seed(seed)))?;
        write(value, result.value, "value")?;
        if !converged.is_null() {
            converged.write(result.converged);
        }
        Ok(())
    })
}
