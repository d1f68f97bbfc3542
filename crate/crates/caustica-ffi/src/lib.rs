//! C ABI for the caustica library.
//!
//! All entry points return a [`CausticaStatus`]; results come back through
//! out-parameters. Heap objects (profiles, fundamental pairs) are opaque
//! handles released with the matching `_free` function. The most recent
//! error message is kept per thread and retrieved with
//! [`caustica_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use caustica::classical::{self, ActionQuadraticForm, FundamentalPair, SolverSettings};
use caustica::slit::{self, SlitSetup};
use caustica::spectral;
use caustica::timefun::CoefficientProfile;
use caustica::Error;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

/// Result codes for every FFI entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausticaStatus {
    Ok = 0,
    /// Null pointer or otherwise invalid argument.
    InvalidArgument = 1,
    /// Profile text failed to parse or validate.
    ParseError = 2,
    /// The potential is critical; the regular-branch quantity is undefined.
    Critical = 3,
    /// The potential is not critical; the critical-branch quantity is undefined.
    NotCritical = 4,
    /// Numerical failure (integrator, eigensolver, boundary leak, ...).
    NumericError = 5,
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_for(err: &Error) -> CausticaStatus {
    match err {
        Error::Parse(_) | Error::InvalidProfile(_) | Error::Config(_) => CausticaStatus::ParseError,
        Error::CriticalPotential | Error::InfiniteConcentration => CausticaStatus::Critical,
        Error::NotCritical => CausticaStatus::NotCritical,
        Error::OutOfDomain { .. } | Error::InvalidInput(_) => CausticaStatus::InvalidArgument,
        _ => CausticaStatus::NumericError,
    }
}

fn fail(err: Error) -> CausticaStatus {
    let status = status_for(&err);
    set_error(&err.to_string());
    status
}

/// Opaque coefficient profile handle.
pub struct CausticaProfile(CoefficientProfile);

/// Opaque fundamental-pair handle.
pub struct CausticaPair(FundamentalPair);

/// Caustic diagnostics (flattened [`classical::CausticReport`]).
#[repr(C)]
pub struct CausticaCausticReport {
    pub critical: bool,
    pub u_t: f64,
    pub caustic_residual: f64,
    /// Stretching factor; NaN when non-critical.
    pub k: f64,
    /// Focal intercept s(T); NaN when non-critical.
    pub focal_intercept: f64,
    pub morse_index: u32,
}

/// Coefficients of `I(b,T;a,0) = A a^2 + B ab + C b^2 + D a + E b + F`.
#[repr(C)]
pub struct CausticaActionForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

/// Final Gaussian packet of the slit experiment.
#[repr(C)]
pub struct CausticaSlitResult {
    pub center: f64,
    pub sigma: f64,
    pub variance: f64,
    pub norm: f64,
}

/// Susceptibility output.
#[repr(C)]
pub struct CausticaSusceptibility {
    pub s: f64,
    pub jacobi_abs: f64,
    pub finite_difference: f64,
    pub purely_quantum: bool,
}

/// Copy the last error message for the calling thread into `buffer`
/// (always NUL-terminated when `capacity > 0`); returns the full message
/// length in bytes, excluding the terminator.
#[no_mangle]
pub extern "C" fn caustica_last_error(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let borrow = slot.borrow();
        let Some(message) = borrow.as_ref() else {
            if !buffer.is_null() && capacity > 0 {
                unsafe { *buffer = 0 };
            }
            return 0;
        };
        let bytes = message.as_bytes();
        if !buffer.is_null() && capacity > 0 {
            let n = bytes.len().min(capacity - 1);
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buffer, n);
                *buffer.add(n) = 0;
            }
        }
        bytes.len()
    })
}

/// Report schema version of the library (static string, do not free).
#[no_mangle]
pub extern "C" fn caustica_schema_version() -> *const c_char {
    static VERSION: &[u8] = b"1.0.0\0";
    VERSION.as_ptr() as *const c_char
}

/// Parse a JSON coefficient profile (see the repo docs for the schema).
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn caustica_profile_parse(
    json: *const c_char,
    out: *mut *mut CausticaProfile,
) -> CausticaStatus {
    if json.is_null() || out.is_null() {
        set_error("null pointer");
        return CausticaStatus::InvalidArgument;
    }
    let Ok(text) = CStr::from_ptr(json).to_str() else {
        set_error("profile text is not valid UTF-8");
        return CausticaStatus::ParseError;
    };
    match CoefficientProfile::parse(text) {
        Ok(profile) => {
            *out = Box::into_raw(Box::new(CausticaProfile(profile)));
            CausticaStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Build a constant profile.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn caustica_profile_constant(
    value: f64,
    horizon: f64,
    out: *mut *mut CausticaProfile,
) -> CausticaStatus {
    if out.is_null() {
        set_error("null pointer");
        return CausticaStatus::InvalidArgument;
    }
    match CoefficientProfile::new(
        caustica::timefun::ProfileKind::Constant { value },
        horizon,
    ) {
        Ok(profile) => {
            *out = Box::into_raw(Box::new(CausticaProfile(profile)));
            CausticaStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Evaluate a profile at time `t`.
///
/// # Safety
/// `profile` must come from a `caustica_profile_*` constructor; `out` must
/// be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn caustica_profile_eval(
    profile: *const CausticaProfile,
    t: f64,
    out: *mut f64,
) -> CausticaStatus {
    let (Some(profile), false) = (profile.as_ref(), out.is_null()) else {
        set_error("null pointer");
        return CausticaStatus::InvalidArgument;
    };
    match profile.0.eval(t) {
        Ok(v) => {
            *out = v;
            CausticaStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Release a profile handle.
///
/// # Safety
/// `profile` must come from a `caustica_profile_*` constructor (or be null).
#[no_mangle]
pub unsafe extern "C" fn caustica_profile_free(profile: *mut CausticaProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// Integrate the fundamental pair (u, v) and special solution s over [0, T].
///
/// # Safety
/// `lambda` and `mu` must be live profile handles; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn caustica_solve_fundamental(
    lambda: *const CausticaProfile,
    mu: *const CausticaProfile,
    steps: usize,
    out: *mut *mut CausticaPair,
) -> CausticaStatus {
    let (Some(lambda), Some(mu), false) = (lambda.as_ref(), mu.as_ref(), out.is_null()) else {
        set_error("null pointer");
        return CausticaStatus::InvalidArgument;
    };
    let settings = SolverSettings {
        steps,
        ..SolverSettings::default()
    };
    match classical::solve_fundamental(&lambda.0, &mu.0, &settings) {
        Ok(pair) => {
            *out = Box::into_raw(Box::new(CausticaPair(pair)));
            CausticaStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Release a fundamental-pair handle.
///
/// # Safety
/// `pair` must come from `caustica_solve_fundamental` (or be null).
#[no_mangle]
pub unsafe extern "C" fn caustica_pair_free(pair: *mut CausticaPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Caustic diagnostics for a solved pair.
///
/// # Safety
/// `pair` must be a live pair handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn caustica_caustic_report(
    pair: *const CausticaPair,
    eps_caustic: f64,
    out: *mut CausticaCausticReport,
) -> CausticaStatus {
    let (Some(pair), false) = (pair.as_ref(), out.is_null()) else {
        set_error("null pointer");
        return CausticaStatus::InvalidArgument;
    };
    match classical::caustic_report(&pair.0, eps_caustic) {
        Ok(report) => {
            *out = CausticaCausticReport {
                critical: report.critical,
                u_t: report.u_t,
                caustic_residual: report.caustic_residual,
                k: report.k.unwrap_or(f64::NAN),
                focal_intercept: report.focal_intercept.unwrap_or(f64::NAN),
                morse_index: report.morse_index as u32,
            };
            CausticaStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Quadratic-form coefficients of the boundary-value action (non-critical).
///
/// # Safety
/// `pair` must be a live pair handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn caustica_action_coefficients(
    pair: *const CausticaPair,
    eps_caustic: f64,
    out: *mut CausticaActionForm,
) -> CausticaStatus {
    let (Some(pair), false) = (pair.as_ref(), out.is_null()) else {
        set_error("null pointer");
        return CausticaStatus::InvalidArgument;
    };
    match classical::action_coefficients(&pair.0, eps_caustic) {
        Ok(form) => {
            *out = CausticaActionForm {
                a: form.a,
                b: form.b,
                c: form.c,
                d: form.d,
                e: form.e,
                f: form.f,
            };
            CausticaStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Lowest `n_max` Dirichlet eigenvalues of `-[d^2/dt^2 + lambda(t)]` at `n`
/// interior points, written into `eigenvalues` (capacity `n_max`). The
/// extended index (modes with `E <= 0`) lands in `index`.
///
/// # Safety
/// `lambda` must be a live profile handle; `eigenvalues` must point to at
/// least `n_max` doubles; `index` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn caustica_spectrum(
    lambda: *const CausticaProfile,
    n_max: usize,
    n: usize,
    eigenvalues: *mut f64,
    index: *mut u32,
) -> CausticaStatus {
    let (Some(lambda), false, false) = (lambda.as_ref(), eigenvalues.is_null(), index.is_null())
    else {
        set_error("null pointer");
        return CausticaStatus::InvalidArgument;
    };
    match spectral::sturm_liouville_spectrum(&lambda.0, n_max, n) {
        Ok(report) => {
            ptr::copy_nonoverlapping(report.eigenvalues.as_ptr(), eigenvalues, n_max);
            *index = report.index as u32;
            CausticaStatus::Ok
        }
        Err(e) => fail(e),
    }
}

fn form_from(form: &CausticaActionForm) -> ActionQuadraticForm {
    ActionQuadraticForm {
        a: form.a,
        b: form.b,
        c: form.c,
        d: form.d,
        e: form.e,
        f: form.f,
    }
}

fn setup_from(a: f64, sigma0: f64, p: f64, hbar: f64) -> caustica::Result<SlitSetup> {
    if a != 0.0 {
        SlitSetup::with_momentum(a, sigma0, p, hbar)
    } else {
        // a = 0: an unchirped packet carrying momentum p.
        let mut setup = SlitSetup::new(0.0, sigma0, 1.0, hbar)?;
        setup.p = p;
        setup.tau = f64::INFINITY;
        Ok(setup)
    }
}

/// Evolve the slit state through the regular kernel in closed form.
///
/// # Safety
/// `form` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn caustica_slit_evolve(
    form: *const CausticaActionForm,
    a: f64,
    sigma0: f64,
    p: f64,
    hbar: f64,
    morse_index: u32,
    out: *mut CausticaSlitResult,
) -> CausticaStatus {
    let (Some(form), false) = (form.as_ref(), out.is_null()) else {
        set_error("null pointer");
        return CausticaStatus::InvalidArgument;
    };
    let setup = match setup_from(a, sigma0, p, hbar) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    match slit::evolve(&setup, &form_from(form), morse_index as usize) {
        Ok(state) => {
            *out = CausticaSlitResult {
                center: state.center,
                sigma: state.sigma(),
                variance: state.variance,
                norm: state.norm,
            };
            CausticaStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Momentum susceptibility of the final spread.
///
/// # Safety
/// `form` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn caustica_susceptibility(
    form: *const CausticaActionForm,
    a: f64,
    sigma0: f64,
    p: f64,
    hbar: f64,
    out: *mut CausticaSusceptibility,
) -> CausticaStatus {
    let (Some(form), false) = (form.as_ref(), out.is_null()) else {
        set_error("null pointer");
        return CausticaStatus::InvalidArgument;
    };
    let setup = match setup_from(a, sigma0, p, hbar) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    match slit::susceptibility(&setup, &form_from(form)) {
        Ok(result) => {
            *out = CausticaSusceptibility {
                s: result.s,
                jacobi_abs: result.jacobi_abs,
                finite_difference: result.finite_difference,
                purely_quantum: result.purely_quantum,
            };
            CausticaStatus::Ok
        }
        Err(e) => fail(e),
    }
}
