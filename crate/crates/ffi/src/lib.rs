//! C ABI over `coherence_bath`.
//!
//! Every function returns a [`CbStatus`] and writes results through out
//! pointers. On failure, [`cb_last_error_message`] describes the error for
//! the calling thread. Density matrices cross the boundary as opaque
//! [`CbDensityMatrix`] handles released with [`cb_density_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, UnwindSafe};

use coherence_bath::boundary::{self, Geometry, PolarizationWeights};
use coherence_bath::measures;
use coherence_bath::qmath::DensityMatrix;
use coherence_bath::single_qubit::{self, EvolutionParams, InitialAngles};
use coherence_bath::two_qubit::{self, BellDiagonalParams, OneSidedChannel};
use coherence_bath::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unphysical = 3,
    Numerical = 4,
    Panic = 5,
}

/// Field environment. `mirror = false` ignores `u`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CbEnvironment {
    pub mirror: bool,
    pub u: f64,
    pub ax: f64,
    pub ay: f64,
    pub az: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CbRates {
    pub a_coeff: f64,
    pub b_coeff: f64,
    pub gamma_eff: f64,
}

/// Opaque handle to a validated 2x2 or 4x4 density matrix.
pub struct CbDensityMatrix(DensityMatrix);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CbStatus {
    match e {
        Error::NonHermitian { .. }
        | Error::TraceNotUnit { .. }
        | Error::NotPositive { .. }
        | Error::UnphysicalBloch { .. }
        | Error::UnphysicalBellDiagonal { .. }
        | Error::NotCompletelyPositive { .. }
        | Error::NegativeRate(_) => CbStatus::Unphysical,
        Error::Instability { .. } => CbStatus::Numerical,
        _ => CbStatus::InvalidArgument,
    }
}

fn guarded(f: impl FnOnce() -> Result<(), CbStatus> + UnwindSafe) -> CbStatus {
    match catch_unwind(f) {
        Ok(Ok(())) => {
            set_error("");
            CbStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            CbStatus::Panic
        }
    }
}

fn lift<T>(r: coherence_bath::Result<T>) -> Result<T, CbStatus> {
    r.map_err(|e| {
        set_error(&e.to_string());
        status_of(&e)
    })
}

fn null() -> CbStatus {
    set_error("null pointer argument");
    CbStatus::NullPointer
}

/// # Safety
/// `out` must be null or valid for a write of `T`.
unsafe fn write<T>(out: *mut T, value: T) -> Result<(), CbStatus> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

/// # Safety
/// `env` must be null or point to a readable `CbEnvironment`.
unsafe fn environment(env: *const CbEnvironment) -> Result<(Geometry, PolarizationWeights), CbStatus> {
    let env = env.as_ref().ok_or_else(null)?;
    let geometry = if env.mirror {
        lift(Geometry::mirror(env.u))?
    } else {
        Geometry::Unbounded
    };
    let pol = lift(PolarizationWeights::new(env.ax, env.ay, env.az))?;
    Ok((geometry, pol))
}

/// # Safety
/// `rho` must be null or a live handle from this library.
unsafe fn handle<'a>(rho: *const CbDensityMatrix) -> Result<&'a DensityMatrix, CbStatus> {
    rho.as_ref().map(|h| &h.0).ok_or_else(null)
}

fn boxed(rho: DensityMatrix) -> *mut CbDensityMatrix {
    Box::into_raw(Box::new(CbDensityMatrix(rho)))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn cb_f_parallel(u: f64, out: *mut f64) -> CbStatus {
    guarded(|| write(out, lift(boundary::f_parallel(u))?))
}

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn cb_f_perpendicular(u: f64, out: *mut f64) -> CbStatus {
    guarded(|| write(out, lift(boundary::f_perpendicular(u))?))
}

/// # Safety
/// `env` must point to a readable `CbEnvironment`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_rate_coefficients(
    env: *const CbEnvironment,
    out: *mut CbRates,
) -> CbStatus {
    guarded(|| {
        let (g, p) = environment(env)?;
        let r = lift(boundary::rate_coefficients(&g, &p))?;
        write(
            out,
            CbRates {
                a_coeff: r.a_coeff,
                b_coeff: r.b_coeff,
                gamma_eff: r.gamma_eff,
            },
        )
    })
}

/// Evolved single-atom state at noise parameter `q`. `omega` is `Omega / gamma0`.
///
/// # Safety
/// `env` must point to a readable `CbEnvironment`; `out` must be writable.
/// The returned handle must be released with `cb_density_free`.
#[no_mangle]
pub unsafe extern "C" fn cb_single_evolve(
    theta: f64,
    phi: f64,
    q: f64,
    omega: f64,
    env: *const CbEnvironment,
    out: *mut *mut CbDensityMatrix,
) -> CbStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null());
        }
        let (geometry, polarization) = environment(env)?;
        let angles = lift(InitialAngles::new(theta, phi))?;
        let params = EvolutionParams {
            geometry,
            polarization,
            omega_ratio: 1.0,
            omega0_time_scale: omega,
        };
        let rho = lift(single_qubit::evolve_closed_form(&angles, q, &params))?;
        write(out, boxed(rho))
    })
}

/// # Safety
/// `out` must be writable. Release the handle with `cb_density_free`.
#[no_mangle]
pub unsafe extern "C" fn cb_bd_density(
    c1: f64,
    c2: f64,
    c3: f64,
    out: *mut *mut CbDensityMatrix,
) -> CbStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null());
        }
        let c = lift(BellDiagonalParams::new(c1, c2, c3))?;
        write(out, boxed(two_qubit::bd_density(&c)))
    })
}

/// Applies the one-sided channel to a 4x4 handle, returning a new handle.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_apply_one_sided_channel(
    rho: *const CbDensityMatrix,
    damping: f64,
    phase: f64,
    out: *mut *mut CbDensityMatrix,
) -> CbStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null());
        }
        let rho = handle(rho)?;
        let ch = lift(OneSidedChannel::new(damping, phase))?;
        let evolved = lift(two_qubit::apply_one_sided_channel(rho, &ch))?;
        write(out, boxed(evolved))
    })
}

/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_density_dim(rho: *const CbDensityMatrix, out: *mut usize) -> CbStatus {
    guarded(|| write(out, handle(rho)?.dim()))
}

/// Entry `(i, j)` as real and imaginary parts.
///
/// # Safety
/// `rho` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_density_get(
    rho: *const CbDensityMatrix,
    i: usize,
    j: usize,
    re: *mut f64,
    im: *mut f64,
) -> CbStatus {
    guarded(|| {
        let rho = handle(rho)?;
        if i >= rho.dim() || j >= rho.dim() {
            set_error("index out of range");
            return Err(CbStatus::InvalidArgument);
        }
        let z = rho.get(i, j);
        write(re, z.re)?;
        write(im, z.im)
    })
}

/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_c_l1(rho: *const CbDensityMatrix, out: *mut f64) -> CbStatus {
    guarded(|| write(out, measures::c_l1(handle(rho)?)))
}

/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_c_re(rho: *const CbDensityMatrix, out: *mut f64) -> CbStatus {
    guarded(|| write(out, lift(measures::c_re(handle(rho)?))?))
}

/// # Safety
/// `env` must point to a readable `CbEnvironment`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_c_l1_trajectory(
    theta: f64,
    q: f64,
    env: *const CbEnvironment,
    out: *mut f64,
) -> CbStatus {
    guarded(|| {
        let (g, p) = environment(env)?;
        write(out, lift(single_qubit::c_l1_trajectory(theta, q, &g, &p))?)
    })
}

/// # Safety
/// `env` must point to a readable `CbEnvironment`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_c_re_trajectory(
    theta: f64,
    q: f64,
    env: *const CbEnvironment,
    out: *mut f64,
) -> CbStatus {
    guarded(|| {
        let (g, p) = environment(env)?;
        write(out, lift(single_qubit::c_re_trajectory(theta, q, &g, &p))?)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_c_l1_bd(c1: f64, c2: f64, c3: f64, q_prime: f64, out: *mut f64) -> CbStatus {
    guarded(|| {
        let c = lift(BellDiagonalParams::new(c1, c2, c3))?;
        check_damping(q_prime)?;
        write(out, two_qubit::c_l1_bd(&c, q_prime))
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_c_re_bd(c1: f64, c2: f64, c3: f64, q_prime: f64, out: *mut f64) -> CbStatus {
    guarded(|| {
        let c = lift(BellDiagonalParams::new(c1, c2, c3))?;
        check_damping(q_prime)?;
        write(out, two_qubit::c_re_bd(&c, q_prime))
    })
}

fn check_damping(q_prime: f64) -> Result<(), CbStatus> {
    lift(OneSidedChannel::new(q_prime, 0.0)).map(|_| ())
}

/// Releases a handle. Null is a no-op.
///
/// # Safety
/// `rho` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cb_density_free(rho: *mut CbDensityMatrix) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}
