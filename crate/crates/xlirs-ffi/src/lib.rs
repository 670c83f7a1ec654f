//! C ABI for the near-field XL-IRS SNR models.
//!
//! The surface is a classic opaque-handle design: build a scenario once,
//! query models against it, free it. Every fallible call returns an
//! [`XlirsStatus`]; on failure the out-parameters are left untouched and a
//! human-readable message is kept in thread-local storage, retrievable with
//! [`xlirs_last_error_message`].
//!
//! The matching header (`include/xlirs.h`) is generated by cbindgen at build
//! time. All SNR values cross the boundary in linear scale; convert with
//! [`xlirs_db_from_linear`] as needed.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use xlirs::{channel, models, BoresightSnr, Error, IrsGeometry, NodePosition, Scenario, UpwConfig};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XlirsStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Inputs failed validation (geometry, angles, ranges, power).
    InvalidInput = 2,
    /// The requested model's preconditions do not hold for this scenario.
    NotApplicable = 3,
    /// Adaptive quadrature did not reach its tolerance.
    NoConvergence = 4,
    /// A special-function argument left its real domain.
    DomainError = 5,
}

/// Single-valued SNR models addressable through [`xlirs_snr`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XlirsModel {
    /// Exact element-wise double sum.
    ExactSum = 0,
    /// Continuum integral over the aperture rectangle.
    Integral = 1,
    /// Infinite-aperture boresight limit.
    Asymptotic = 2,
    /// Single-column integral form.
    UlaIntegral = 3,
    /// Single-column closed form in the subtended angles.
    UlaClosed = 4,
    /// Infinite-column limit.
    UlaAsymptotic = 5,
    /// Plane-wave baseline with the aperture-matched reference gain.
    Upw = 6,
}

/// Opaque scenario handle (geometry, both endpoints, transmit SNR).
pub struct XlirsScenario {
    inner: Scenario,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> XlirsStatus {
    match err {
        Error::NotApplicable(_) => XlirsStatus::NotApplicable,
        Error::QuadratureNonConvergence { .. } => XlirsStatus::NoConvergence,
        Error::Domain(_) => XlirsStatus::DomainError,
        _ => XlirsStatus::InvalidInput,
    }
}

fn fail(err: Error) -> XlirsStatus {
    let status = status_of(&err);
    set_last_error(&err.to_string());
    status
}

/// Writes a computed value through an out-pointer, guarding against null.
unsafe fn write_out(out: *mut f64, value: f64) -> XlirsStatus {
    if out.is_null() {
        set_last_error("output pointer is null");
        return XlirsStatus::NullPointer;
    }
    unsafe { *out = value };
    XlirsStatus::Ok
}

/// Builds a scenario handle.
///
/// Element counts must be odd; `spacing_m <= wavelength_m / 2`;
/// `sqrt(element_area_m2) <= spacing_m`; zenith angles in (0, pi), azimuth
/// angles in (-pi/2, pi/2); ranges and `transmit_snr_linear` positive.
///
/// On success writes a handle the caller must release with
/// [`xlirs_scenario_free`].
///
/// # Safety
/// `out_scenario` must be a valid pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn xlirs_scenario_new(
    m_y: u32,
    m_z: u32,
    spacing_m: f64,
    element_area_m2: f64,
    wavelength_m: f64,
    tx_range_m: f64,
    tx_zenith_rad: f64,
    tx_azimuth_rad: f64,
    rx_range_m: f64,
    rx_zenith_rad: f64,
    rx_azimuth_rad: f64,
    transmit_snr_linear: f64,
    out_scenario: *mut *mut XlirsScenario,
) -> XlirsStatus {
    if out_scenario.is_null() {
        set_last_error("output pointer is null");
        return XlirsStatus::NullPointer;
    }
    let build = || -> Result<Scenario, Error> {
        let geom = IrsGeometry::new(m_y, m_z, spacing_m, element_area_m2, wavelength_m)?;
        let tx = NodePosition::new(tx_range_m, tx_zenith_rad, tx_azimuth_rad)?;
        let rx = NodePosition::new(rx_range_m, rx_zenith_rad, rx_azimuth_rad)?;
        Scenario::new(geom, tx, rx, transmit_snr_linear)
    };
    match build() {
        Ok(inner) => {
            let handle = Box::new(XlirsScenario { inner });
            unsafe { *out_scenario = Box::into_raw(handle) };
            XlirsStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Releases a scenario handle. Null is a no-op.
///
/// # Safety
/// `scenario` must be null or a handle obtained from
/// [`xlirs_scenario_new`] that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn xlirs_scenario_free(scenario: *mut XlirsScenario) {
    if !scenario.is_null() {
        drop(unsafe { Box::from_raw(scenario) });
    }
}

unsafe fn deref_scenario<'a>(handle: *const XlirsScenario) -> Option<&'a Scenario> {
    if handle.is_null() {
        set_last_error("scenario handle is null");
        return None;
    }
    Some(unsafe { &(*handle).inner })
}

/// Evaluates one single-valued SNR model; the result is linear scale.
/// `model` takes an [`XlirsModel`] value; anything else yields
/// `INVALID_INPUT` (the parameter is a plain integer so that a stray value
/// from C stays a checked error).
///
/// # Safety
/// `scenario` must be a live handle from [`xlirs_scenario_new`];
/// `out_snr_linear` must point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn xlirs_snr(
    scenario: *const XlirsScenario,
    model: u32,
    out_snr_linear: *mut f64,
) -> XlirsStatus {
    let Some(sc) = (unsafe { deref_scenario(scenario) }) else {
        return XlirsStatus::NullPointer;
    };
    let value = match model {
        m if m == XlirsModel::ExactSum as u32 => Ok(channel::snr_exact_sum(sc)),
        m if m == XlirsModel::Integral as u32 => models::snr_integral_upa(sc),
        m if m == XlirsModel::Asymptotic as u32 => models::snr_asymptotic_upa(sc),
        m if m == XlirsModel::UlaIntegral as u32 => models::snr_ula_integral(sc),
        m if m == XlirsModel::UlaClosed as u32 => models::snr_ula_closed(sc),
        m if m == XlirsModel::UlaAsymptotic as u32 => models::snr_ula_asymptotic(sc),
        m if m == XlirsModel::Upw as u32 => Ok(models::snr_upw(sc)),
        other => {
            set_last_error(&format!("unknown model selector {other}"));
            return XlirsStatus::InvalidInput;
        }
    };
    match value {
        Ok(est) => unsafe { write_out(out_snr_linear, est.value()) },
        Err(e) => fail(e),
    }
}

/// Inscribed/circumscribed-disk bounds on the aperture integral
/// (polar quadrature). Both outputs are linear scale.
///
/// # Safety
/// As for [`xlirs_snr`]; both out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn xlirs_snr_bounds(
    scenario: *const XlirsScenario,
    out_lower_linear: *mut f64,
    out_upper_linear: *mut f64,
) -> XlirsStatus {
    let Some(sc) = (unsafe { deref_scenario(scenario) }) else {
        return XlirsStatus::NullPointer;
    };
    if out_lower_linear.is_null() || out_upper_linear.is_null() {
        set_last_error("output pointer is null");
        return XlirsStatus::NullPointer;
    }
    match models::snr_bounds_general(sc) {
        Ok(pair) => {
            unsafe { write_out(out_lower_linear, pair.lower.value()) };
            unsafe { write_out(out_upper_linear, pair.upper.value()) }
        }
        Err(e) => fail(e),
    }
}

/// Closed-form boresight bounds (elliptic integrals). For equidistant
/// endpoints both outputs carry the exact closed-form value.
///
/// # Safety
/// As for [`xlirs_snr_bounds`].
#[no_mangle]
pub unsafe extern "C" fn xlirs_snr_boresight(
    scenario: *const XlirsScenario,
    out_lower_linear: *mut f64,
    out_upper_linear: *mut f64,
) -> XlirsStatus {
    let Some(sc) = (unsafe { deref_scenario(scenario) }) else {
        return XlirsStatus::NullPointer;
    };
    if out_lower_linear.is_null() || out_upper_linear.is_null() {
        set_last_error("output pointer is null");
        return XlirsStatus::NullPointer;
    }
    match models::snr_boresight(sc) {
        Ok(BoresightSnr::Bounds(pair)) => {
            unsafe { write_out(out_lower_linear, pair.lower.value()) };
            unsafe { write_out(out_upper_linear, pair.upper.value()) }
        }
        Ok(BoresightSnr::Exact(est)) => {
            unsafe { write_out(out_lower_linear, est.value()) };
            unsafe { write_out(out_upper_linear, est.value()) }
        }
        Err(e) => fail(e),
    }
}

/// Plane-wave baseline with an explicit reference gain.
/// `beta0_squared_m4 <= 0` selects the aperture-matched default.
///
/// # Safety
/// As for [`xlirs_snr`].
#[no_mangle]
pub unsafe extern "C" fn xlirs_snr_upw(
    scenario: *const XlirsScenario,
    beta0_squared_m4: f64,
    out_snr_linear: *mut f64,
) -> XlirsStatus {
    let Some(sc) = (unsafe { deref_scenario(scenario) }) else {
        return XlirsStatus::NullPointer;
    };
    let config = if beta0_squared_m4 <= 0.0 {
        UpwConfig::aperture_matched(sc)
    } else {
        match UpwConfig::new(beta0_squared_m4) {
            Ok(cfg) => cfg,
            Err(e) => return fail(e),
        }
    };
    unsafe { write_out(out_snr_linear, models::snr_upw_with(sc, &config).value()) }
}

/// Incomplete elliptic integral of the first kind, parameter convention:
/// `F(theta | k) = integral_0^theta dbeta / sqrt(1 - k sin^2 beta)`.
///
/// # Safety
/// `out_value` must point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn xlirs_ellip_f(theta: f64, k: f64, out_value: *mut f64) -> XlirsStatus {
    match xlirs::elliptic::ellip_f(theta, k) {
        Ok(v) => unsafe { write_out(out_value, v) },
        Err(e) => fail(e),
    }
}

/// Complete elliptic integral of the first kind, parameter in [0, 1).
///
/// # Safety
/// `out_value` must point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn xlirs_ellip_k(m: f64, out_value: *mut f64) -> XlirsStatus {
    match xlirs::elliptic::ellip_k_complete(m) {
        Ok(v) => unsafe { write_out(out_value, v) },
        Err(e) => fail(e),
    }
}

/// 10 log10(x); presentation helper.
#[no_mangle]
pub extern "C" fn xlirs_db_from_linear(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn xlirs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static null-terminated string.
#[no_mangle]
pub extern "C" fn xlirs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
