//! C interface to `dilaton-gme`.
//!
//! Every function returns a [`DgStatus`]; results come back through out
//! pointers. Densities are opaque [`DgDensity`] handles released with
//! [`dg_density_free`]. Strings returned by the library are released with
//! [`dg_string_free`]. Panics never cross the boundary: they surface as
//! `DG_STATUS_INTERNAL`.

use std::ffi::{c_char, c_int, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use dilaton_gme::analytic::{e_general, peak_dilaton};
use dilaton_gme::gme::gme_xstate;
use dilaton_gme::modes_state::scenario_density;
use dilaton_gme::verify::{full_suite, GridSize};
use dilaton_gme::xstate::{extract_xstate, DEFAULT_TOL};
use dilaton_gme::{BlackHoleParams, Error, ScenarioSpec, SparseDensity};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    DegenerateCoefficient = 3,
    InvalidSpec = 4,
    ScaleCap = 5,
    NotXState = 6,
    InvalidDensity = 7,
    OutOfRange = 8,
    Internal = 9,
}

impl From<&Error> for DgStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidParams(_) => DgStatus::InvalidParams,
            Error::DegenerateCoefficient => DgStatus::DegenerateCoefficient,
            Error::InvalidSpec(_) | Error::UnknownMode(_) | Error::OddN(_) => DgStatus::InvalidSpec,
            Error::ScaleCap { .. } => DgStatus::ScaleCap,
            Error::NotXState { .. } => DgStatus::NotXState,
            Error::InvalidDensity(_) | Error::InvalidPartition(_) => DgStatus::InvalidDensity,
        }
    }
}

/// Reduced density of one scenario.
pub struct DgDensity {
    rho: SparseDensity,
    entries: Vec<((u64, u64), f64)>,
}

fn guard(f: impl FnOnce() -> Result<(), DgStatus>) -> DgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DgStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => DgStatus::Internal,
    }
}

fn lift<T>(r: dilaton_gme::Result<T>) -> Result<T, DgStatus> {
    r.map_err(|e| DgStatus::from(&e))
}

/// # Safety
/// `ptr` must be null or valid for writes of `T`.
unsafe fn put<T>(ptr: *mut T, value: T) -> Result<(), DgStatus> {
    if ptr.is_null() {
        return Err(DgStatus::NullPointer);
    }
    ptr.write(value);
    Ok(())
}

/// Static description of a status code; never free the result.
#[no_mangle]
pub extern "C" fn dg_status_message(status: DgStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        DgStatus::Ok => b"ok\0",
        DgStatus::NullPointer => b"null pointer argument\0",
        DgStatus::InvalidParams => b"invalid black-hole parameters\0",
        DgStatus::DegenerateCoefficient => b"beta vanishes but a positive power was requested\0",
        DgStatus::InvalidSpec => b"invalid scenario\0",
        DgStatus::ScaleCap => b"scenario exceeds the explicit-state size cap\0",
        DgStatus::NotXState => b"density is not an X state\0",
        DgStatus::InvalidDensity => b"invalid density\0",
        DgStatus::OutOfRange => b"index out of range\0",
        DgStatus::Internal => b"internal error\0",
    };
    s.as_ptr().cast()
}

/// Bogoliubov coefficients for `(mass, dilaton, omega)`.
///
/// # Safety
/// `alpha` and `beta` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dg_bogoliubov(
    mass: f64,
    dilaton: f64,
    omega: f64,
    alpha: *mut f64,
    beta: *mut f64,
) -> DgStatus {
    guard(|| {
        let pair = lift(BlackHoleParams::new(mass, dilaton, omega))?.bogoliubov();
        put(alpha, pair.alpha())?;
        put(beta, pair.beta())
    })
}

/// Closed-form entanglement with `p` accessible and `q` inaccessible
/// horizon modes.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dg_e_general(
    theta: f64,
    mass: f64,
    dilaton: f64,
    omega: f64,
    p: u32,
    q: u32,
    out: *mut f64,
) -> DgStatus {
    guard(|| {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(DgStatus::InvalidParams);
        }
        let pair = lift(BlackHoleParams::new(mass, dilaton, omega))?.bogoliubov();
        put(out, e_general(theta, &pair, p, q))
    })
}

/// Interior maximiser in `D`. `*has_peak` is 0 when the curve is monotonic,
/// in which case `*d_star` is left untouched.
///
/// # Safety
/// `d_star` and `has_peak` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dg_peak_dilaton(
    mass: f64,
    omega: f64,
    p: u32,
    q: u32,
    d_star: *mut f64,
    has_peak: *mut c_int,
) -> DgStatus {
    guard(|| {
        if d_star.is_null() {
            return Err(DgStatus::NullPointer);
        }
        match lift(peak_dilaton(mass, omega, p, q))? {
            Some(d) => {
                put(has_peak, 1)?;
                put(d_star, d)
            }
            None => put(has_peak, 0),
        }
    })
}

/// Builds the reduced density of a scenario by explicit expansion and trace.
///
/// # Safety
/// `out` must be valid for writes; on success it receives a handle owned by
/// the caller.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn dg_density_new(
    n_parties: usize,
    n_horizon: usize,
    p: usize,
    q: usize,
    theta: f64,
    mass: f64,
    dilaton: f64,
    omega: f64,
    out: *mut *mut DgDensity,
) -> DgStatus {
    guard(|| {
        if out.is_null() {
            return Err(DgStatus::NullPointer);
        }
        let pair = lift(BlackHoleParams::new(mass, dilaton, omega))?.bogoliubov();
        let spec = lift(ScenarioSpec::new(n_parties, n_horizon, p, q, theta))?;
        let rho = lift(scenario_density(&spec, &pair))?;
        let entries = rho.entries().collect();
        put(out, Box::into_raw(Box::new(DgDensity { rho, entries })))
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `handle` must come from [`dg_density_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dg_density_free(handle: *mut DgDensity) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// `handle` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dg_density_n_modes(handle: *const DgDensity, out: *mut usize) -> DgStatus {
    guard(|| {
        let d = handle.as_ref().ok_or(DgStatus::NullPointer)?;
        put(out, d.rho.n_modes())
    })
}

/// Number of stored nonzero entries (both triangles).
///
/// # Safety
/// `handle` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dg_density_nnz(handle: *const DgDensity, out: *mut usize) -> DgStatus {
    guard(|| {
        let d = handle.as_ref().ok_or(DgStatus::NullPointer)?;
        put(out, d.entries.len())
    })
}

/// Entry `index` in row-major label order. Labels put the first mode in
/// the most significant bit.
///
/// # Safety
/// `handle` must be a live handle; the out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dg_density_entry(
    handle: *const DgDensity,
    index: usize,
    row: *mut u64,
    col: *mut u64,
    value: *mut f64,
) -> DgStatus {
    guard(|| {
        let d = handle.as_ref().ok_or(DgStatus::NullPointer)?;
        if row.is_null() || col.is_null() || value.is_null() {
            return Err(DgStatus::NullPointer);
        }
        let &((r, c), v) = d.entries.get(index).ok_or(DgStatus::OutOfRange)?;
        put(row, r)?;
        put(col, c)?;
        put(value, v)
    })
}

/// Genuine multipartite entanglement of the handle's X state.
///
/// # Safety
/// `handle` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dg_density_gme(handle: *const DgDensity, out: *mut f64) -> DgStatus {
    guard(|| {
        let d = handle.as_ref().ok_or(DgStatus::NullPointer)?;
        let x = lift(extract_xstate(&d.rho, DEFAULT_TOL))?;
        put(out, gme_xstate(&x))
    })
}

/// Runs the verification suite (`small != 0` selects the reduced grid) and
/// returns the JSON report. `*passed` is 1 iff every check passed.
///
/// # Safety
/// `json` and `passed` must be valid for writes; free `*json` with
/// [`dg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn dg_verify_json(
    small: c_int,
    json: *mut *mut c_char,
    passed: *mut c_int,
) -> DgStatus {
    guard(|| {
        if json.is_null() || passed.is_null() {
            return Err(DgStatus::NullPointer);
        }
        let size = if small != 0 {
            GridSize::Small
        } else {
            GridSize::Default
        };
        let report = lift(full_suite(size))?;
        let text = CString::new(report.to_json()).map_err(|_| DgStatus::Internal)?;
        put(passed, c_int::from(report.passed()))?;
        put(json, text.into_raw())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn dg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
