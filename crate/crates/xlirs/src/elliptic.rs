//! Incomplete and complete elliptic integrals of the first kind.
//!
//! The incomplete integral uses the *parameter* convention
//!
//! ```text
//! F(theta | k) = integral_0^theta  d beta / sqrt(1 - k sin^2 beta)
//! ```
//!
//! where `k` multiplies `sin^2` directly. This differs from the *modulus*
//! convention (where the second argument would be squared); the two are easy
//! to confuse, and `k = 2` only makes sense in the parameter convention,
//! where the integrand stays real for `theta <= arcsin(1/sqrt(2)) = pi/4`.
//!
//! Interior arguments are evaluated through the Carlson symmetric form, which
//! is numerically robust away from the domain boundary. For `k > 1` the
//! boundary `theta = arcsin(1/sqrt(k))` is an integrable singularity of the
//! integrand; within a narrow band of it the evaluation switches to the
//! reciprocal-modulus reduction
//!
//! ```text
//! F(theta | k) = F(theta' | 1/k) / sqrt(k),   sin(theta') = sqrt(k) sin(theta)
//! ```
//!
//! which is regular up to and including the endpoint, where it collapses to
//! the complete integral `K(1/k) / sqrt(k)`.

use crate::error::{Error, Result};
use std::f64::consts::{FRAC_PI_2, PI};

/// Relative accuracy target of the Carlson iteration; the truncation error of
/// the fifth-order tail scales like ERRTOL^6.
const RF_ERRTOL: f64 = 0.0025;

/// Amplitude band around the `k > 1` endpoint that routes through the
/// reciprocal-modulus reduction instead of the Carlson form.
const ENDPOINT_BAND: f64 = 1e-9;

/// Carlson symmetric integral R_F(x, y, z), arguments nonnegative with at
/// most one zero.
pub(crate) fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z >= 0.0);
    let (mut xt, mut yt, mut zt) = (x, y, z);
    for _ in 0..200 {
        let sx = xt.sqrt();
        let sy = yt.sqrt();
        let sz = zt.sqrt();
        let lambda = sx * (sy + sz) + sy * sz;
        xt = 0.25 * (xt + lambda);
        yt = 0.25 * (yt + lambda);
        zt = 0.25 * (zt + lambda);
        let ave = (xt + yt + zt) / 3.0;
        let dx = (ave - xt) / ave;
        let dy = (ave - yt) / ave;
        let dz = (ave - zt) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < RF_ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / ave.sqrt();
        }
    }
    // unreachable for valid arguments; the duplication contracts geometrically
    let ave = (xt + yt + zt) / 3.0;
    1.0 / ave.sqrt()
}

/// Complete elliptic integral of the first kind, parameter convention,
/// via arithmetic-geometric-mean iteration:
///
/// ```text
/// K(m) = pi / (2 * AGM(1, sqrt(1 - m))),   0 <= m < 1
/// ```
pub fn ellip_k_complete(m: f64) -> Result<f64> {
    if !m.is_finite() || !(0.0..1.0).contains(&m) {
        return Err(Error::Domain(format!(
            "complete integral parameter must lie in [0, 1), got {m}"
        )));
    }
    if m == 0.0 {
        return Ok(FRAC_PI_2);
    }
    let mut a = 1.0f64;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..60 {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let a1 = 0.5 * (a + b);
        let b1 = (a * b).sqrt();
        a = a1;
        b = b1;
    }
    Ok(PI / (2.0 * a))
}

/// Incomplete elliptic integral of the first kind `F(theta | k)` in the
/// parameter convention, `theta >= 0`.
///
/// For `k > 1` the amplitude must satisfy `k sin^2(theta) <= 1`; for
/// `0 <= k < 1` any amplitude is accepted (periodic continuation through
/// `F(theta + n pi | k) = F(theta | k) + 2 n K(k)`).
pub fn ellip_f(theta: f64, k: f64) -> Result<f64> {
    if !theta.is_finite() || theta < 0.0 {
        return Err(Error::Domain(format!(
            "amplitude must be finite and nonnegative, got {theta}"
        )));
    }
    if !k.is_finite() {
        return Err(Error::Domain(format!("parameter must be finite, got {k}")));
    }
    if theta == 0.0 {
        return Ok(0.0);
    }
    if k == 0.0 {
        return Ok(theta);
    }

    if k > 1.0 {
        if theta > FRAC_PI_2 {
            return Err(Error::Domain(format!(
                "amplitude {theta} outside the real domain for parameter {k}"
            )));
        }
        let s = theta.sin();
        let y = 1.0 - k * s * s;
        if y < -8.0 * f64::EPSILON * k {
            return Err(Error::Domain(format!(
                "1 - k sin^2(theta) = {y:e} < 0 for theta = {theta}, k = {k}"
            )));
        }
        if y < ENDPOINT_BAND {
            // near or at the singular endpoint: reciprocal-modulus reduction
            let s_reduced = (k.sqrt() * s).min(1.0);
            let theta_reduced = s_reduced.asin();
            return Ok(incomplete_param_lt1(theta_reduced, 1.0 / k)? / k.sqrt());
        }
        let c2 = 1.0 - s * s;
        return Ok(s * carlson_rf(c2, y, 1.0));
    }

    incomplete_param_lt1(theta, k)
}

/// F(theta | k) for 0 < k <= 1, reducing the amplitude into [-pi/2, pi/2]
/// before applying the Carlson form.
fn incomplete_param_lt1(theta: f64, k: f64) -> Result<f64> {
    let periods = (theta / PI).round();
    let r = theta - periods * PI;
    let base = if r == 0.0 {
        0.0
    } else {
        let abs_r = r.abs();
        if k == 1.0 && abs_r >= FRAC_PI_2 {
            return Err(Error::Domain(
                "F(theta | 1) diverges at theta = \u{3c0}/2".to_string(),
            ));
        }
        let s = abs_r.sin();
        let y = (1.0 - k * s * s).max(0.0);
        (s * carlson_rf(1.0 - s * s, y, 1.0)).copysign(r)
    };
    if periods == 0.0 {
        Ok(base)
    } else {
        Ok(2.0 * periods * ellip_k_complete(k)? + base)
    }
}
