//! Analytical SNR models: the continuum integral approximation, disk bounds,
//! boresight closed forms, large-aperture limits, the line-aperture family,
//! and the conventional uniform-plane-wave baseline.
//!
//! Every model consumes a [`Scenario`] and returns linear-scale
//! [`SnrEstimate`]s. Models parameterized by the range ratio normalize the
//! scenario first (the underlying expressions are symmetric under endpoint
//! exchange), so `rho = r_near / r_far` always lies in (0, 1].

use crate::channel::{snr_prefactor, Scenario, SnrEstimate, SnrModel};
use crate::elliptic::ellip_f;
use crate::error::{Error, Result};
use crate::geometry::NodePosition;
use crate::quadrature::{integrate_1d, integrate_disk_polar, integrate_rect_2d, QuadSpec};
use std::f64::consts::{FRAC_PI_4, PI};

/// Boresight applicability: the off-axis direction cosines may use up at
/// most this fraction of r / L.
const BORESIGHT_MARGIN: f64 = 0.1;

/// Spacing-to-range ratio beyond which the continuum approximation gets a
/// diagnostic warning.
const SPACING_RATIO_WARN: f64 = 1e-2;

/// Relative range difference below which the endpoints count as equidistant.
const EQUAL_RANGE_REL_TOL: f64 = 1e-9;

/// Range ratios in (1 - this, 1) get an ill-conditioning warning: the
/// rho/(1 - rho^2) factor blows up while the elliptic difference vanishes.
const NEAR_EQUAL_WARN_BAND: f64 = 1e-3;

/// Line-aperture closed form: hard applicability limit on r_near / r_far.
const ULA_RATIO_ERROR: f64 = 0.1;

/// Line-aperture closed form: warning threshold on r_near / r_far.
const ULA_RATIO_WARN: f64 = 0.01;

/// Lower and upper SNR estimates from the inscribed and circumscribed disks
/// of the aperture rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsPair {
    pub lower: SnrEstimate,
    pub upper: SnrEstimate,
    /// Inscribed-disk radius min(L_y, L_z) / 2.
    pub inner_radius: f64,
    /// Circumscribed-disk radius sqrt(L_y^2 + L_z^2) / 2.
    pub outer_radius: f64,
}

/// Result of the boresight closed forms: bounds for distinct ranges, an
/// exact value for equidistant endpoints.
#[derive(Debug, Clone, PartialEq)]
pub enum BoresightSnr {
    Bounds(BoundsPair),
    Exact(SnrEstimate),
}

impl BoresightSnr {
    pub fn lower(&self) -> &SnrEstimate {
        match self {
            BoresightSnr::Bounds(pair) => &pair.lower,
            BoresightSnr::Exact(est) => est,
        }
    }

    pub fn upper(&self) -> &SnrEstimate {
        match self {
            BoresightSnr::Bounds(pair) => &pair.upper,
            BoresightSnr::Exact(est) => est,
        }
    }
}

/// Reference channel power gain at 1 m for the uniform-plane-wave baseline.
///
/// `beta0_squared` carries units of m^4 so that
/// `beta0_squared / (r_tx^2 r_rx^2)` is dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpwConfig {
    beta0_squared: f64,
}

impl UpwConfig {
    pub fn new(beta0_squared: f64) -> Result<Self> {
        if !beta0_squared.is_finite() || beta0_squared <= 0.0 {
            return Err(Error::Validation(format!(
                "beta0_squared must be finite and positive, got {beta0_squared}"
            )));
        }
        Ok(Self { beta0_squared })
    }

    /// Default: matches the element-aperture gains of the exact model, so the
    /// baseline coincides with the exact sum in the far field:
    /// `beta0^2 = A^2 dir_x_tx dir_x_rx / (16 pi^2)`.
    pub fn aperture_matched(scenario: &Scenario) -> Self {
        let a = scenario.geometry().element_area();
        Self {
            beta0_squared: a * a * scenario.tx().dir_x() * scenario.rx().dir_x() / (16.0 * PI * PI),
        }
    }

    /// Conventional isotropic-element reference: the free-space gain at 1 m,
    /// `beta0 = (lambda / 4 pi)^2` (about -40 dB at lambda = 0.125 m). This
    /// is the textbook choice for plane-wave link budgets; it does not match
    /// the aperture-element gains, so the baseline sits above the exact
    /// model even in the far field.
    pub fn isotropic_reference(wavelength: f64) -> Self {
        let beta0 = wavelength * wavelength / (16.0 * PI * PI);
        Self {
            beta0_squared: beta0 * beta0,
        }
    }

    pub fn beta0_squared(&self) -> f64 {
        self.beta0_squared
    }
}

// ---------------------------------------------------------------------------
// Continuum kernels
// ---------------------------------------------------------------------------

/// Squared distance ratio to the aperture point (y, z), the continuum limit
/// of the element distance factor. Bounded below by dir_x^2 > 0.
#[inline]
fn planar_factor(node: &NodePosition, y: f64, z: f64) -> f64 {
    let r = node.range();
    1.0 - 2.0 * (y * node.dir_y() + z * node.dir_z()) / r + (y * y + z * z) / (r * r)
}

/// Same factor at polar aperture coordinates (radius, angle).
#[inline]
fn polar_factor(node: &NodePosition, radius: f64, zeta: f64) -> f64 {
    let r = node.range();
    let (s, c) = zeta.sin_cos();
    1.0 - 2.0 * radius * (node.dir_y() * c + node.dir_z() * s) / r + radius * radius / (r * r)
}

// ---------------------------------------------------------------------------
// Planar-aperture models
// ---------------------------------------------------------------------------

/// Continuum approximation of the exact sum: the aperture integral over
/// `[-L_y/2, L_y/2] x [-L_z/2, L_z/2]`, accurate when the element spacing is
/// small against both ranges.
pub fn snr_integral_upa(scenario: &Scenario) -> Result<SnrEstimate> {
    snr_integral_upa_with(scenario, &QuadSpec::default())
}

pub fn snr_integral_upa_with(scenario: &Scenario, spec: &QuadSpec) -> Result<SnrEstimate> {
    let geom = scenario.geometry();
    let (tx, rx) = (scenario.tx(), scenario.rx());
    let integral = integrate_rect_2d(
        |y, z| (planar_factor(tx, y, z) * planar_factor(rx, y, z)).powf(-0.75),
        (-geom.len_y() / 2.0, geom.len_y() / 2.0),
        (-geom.len_z() / 2.0, geom.len_z() / 2.0),
        spec,
    )?;
    let d = geom.spacing();
    let value = snr_prefactor(scenario) / (d * d * d * d) * integral.value * integral.value;
    let mut est = SnrEstimate::new(SnrModel::IntegralUpa, value);
    push_spacing_warnings(scenario, &mut est);
    Ok(est)
}

fn push_spacing_warnings(scenario: &Scenario, est: &mut SnrEstimate) {
    let geom = scenario.geometry();
    for (label, node) in [("tx", scenario.tx()), ("rx", scenario.rx())] {
        let eps = node.spacing_ratio(geom);
        if eps > SPACING_RATIO_WARN {
            est.push_diagnostic(format!(
                "continuum approximation degrades: d/r_{label} = {eps:.3e} > {SPACING_RATIO_WARN:e}"
            ));
        }
    }
}

/// One disk integral of the bound function, shared by both radii.
pub(crate) fn disk_bound_value(scenario: &Scenario, radius: f64, spec: &QuadSpec) -> Result<f64> {
    let (tx, rx) = (scenario.tx(), scenario.rx());
    let integral = integrate_disk_polar(
        |r, zeta| (polar_factor(tx, r, zeta) * polar_factor(rx, r, zeta)).powf(-0.75),
        radius,
        spec,
    )?;
    let d = scenario.geometry().spacing();
    Ok(snr_prefactor(scenario) / (d * d * d * d) * integral.value * integral.value)
}

/// Sandwich of the aperture integral between its inscribed-disk and
/// circumscribed-disk counterparts, evaluated in polar coordinates.
pub fn snr_bounds_general(scenario: &Scenario) -> Result<BoundsPair> {
    snr_bounds_general_with(scenario, &QuadSpec::default())
}

pub fn snr_bounds_general_with(scenario: &Scenario, spec: &QuadSpec) -> Result<BoundsPair> {
    let geom = scenario.geometry();
    let inner_radius = 0.5 * geom.len_y().min(geom.len_z());
    let outer_radius = 0.5 * geom.len_y().hypot(geom.len_z());
    let lower = disk_bound_value(scenario, inner_radius, spec)?;
    let upper = disk_bound_value(scenario, outer_radius, spec)?;
    Ok(BoundsPair {
        lower: SnrEstimate::new(SnrModel::BoundLower, lower),
        upper: SnrEstimate::new(SnrModel::BoundUpper, upper),
        inner_radius,
        outer_radius,
    })
}

// ---------------------------------------------------------------------------
// Boresight closed forms
// ---------------------------------------------------------------------------

/// Checks the boresight applicability margins on the normalized scenario and
/// returns the used fractions (off-axis cosine over the allowed bound).
fn boresight_margins(scenario: &Scenario) -> Result<(f64, f64)> {
    let geom = scenario.geometry();
    let r_near = scenario.tx().range();
    let max_dir_y = scenario.tx().dir_y().abs().max(scenario.rx().dir_y().abs());
    let max_dir_z = scenario.tx().dir_z().abs().max(scenario.rx().dir_z().abs());
    let used_y = max_dir_y * geom.len_y() / r_near;
    let used_z = max_dir_z * geom.len_z() / r_near;
    if used_y >= BORESIGHT_MARGIN {
        return Err(Error::NotApplicable(format!(
            "boresight margin violated: max|dir_y| = {max_dir_y:.3e} >= \
             {BORESIGHT_MARGIN} r/L_y = {:.3e}",
            BORESIGHT_MARGIN * r_near / geom.len_y()
        )));
    }
    if used_z >= BORESIGHT_MARGIN {
        return Err(Error::NotApplicable(format!(
            "boresight margin violated: max|dir_z| = {max_dir_z:.3e} >= \
             {BORESIGHT_MARGIN} r/L_z = {:.3e}",
            BORESIGHT_MARGIN * r_near / geom.len_z()
        )));
    }
    Ok((used_y, used_z))
}

fn margin_note(used_y: f64, used_z: f64) -> String {
    format!("boresight margins used: y {used_y:.2e} z {used_z:.2e} (limit {BORESIGHT_MARGIN})")
}

/// The squared elliptic-integral difference entering the boresight bounds:
///
/// ```text
/// G(R) = [ F(atan(x)/2 | 2) - F(atan(x cos(atan(R/r_near)))/2 | 2) ]^2,
/// x = sqrt(1 - rho^2) / rho
/// ```
///
/// Evaluated through the difference of the two incomplete integrals; near
/// rho = 1 the difference vanishes while the outer 1/(1 - rho^2) factor
/// blows up, and their product stays finite.
fn boresight_elliptic_g(rho: f64, radius_over_near: f64) -> Result<f64> {
    let x = (1.0 - rho * rho).sqrt() / rho;
    let amp_full = 0.5 * x.atan();
    let amp_cut = 0.5 * (x * radius_over_near.atan().cos()).atan();
    let diff = ellip_f(amp_full, 2.0)? - ellip_f(amp_cut, 2.0)?;
    Ok(diff * diff)
}

fn equal_ranges(scenario: &Scenario) -> bool {
    let (near, far) = (scenario.tx().range(), scenario.rx().range());
    (far - near) / far < EQUAL_RANGE_REL_TOL
}

/// Closed-form boresight SNR: elliptic-integral bounds for distinct ranges,
/// the exact arctangent form for equidistant endpoints. Requires both nodes
/// within the boresight margins.
pub fn snr_boresight(scenario: &Scenario) -> Result<BoresightSnr> {
    let sc = scenario.normalized();
    let (used_y, used_z) = boresight_margins(&sc)?;
    let geom = sc.geometry();
    let xi = geom.occupation_ratio();
    let pbar = sc.transmit_snr();
    let r_near = sc.tx().range();

    if equal_ranges(&sc) {
        let a = geom.len_y() / (2.0 * r_near);
        let b = geom.len_z() / (2.0 * r_near);
        let angle = (a * b / (a * a + b * b + 1.0).sqrt()).atan();
        let value = xi * xi * pbar / (PI * PI) * angle * angle;
        let mut est = SnrEstimate::new(SnrModel::BoresightClosed, value);
        est.push_diagnostic(margin_note(used_y, used_z));
        return Ok(BoresightSnr::Exact(est));
    }

    let rho = sc.distance_ratio();
    let factor = rho / (1.0 - rho * rho) * xi * xi * pbar;
    let inner_radius = 0.5 * geom.len_y().min(geom.len_z());
    let outer_radius = 0.5 * geom.len_y().hypot(geom.len_z());
    let lower = factor * boresight_elliptic_g(rho, inner_radius / r_near)?;
    let upper = factor * boresight_elliptic_g(rho, outer_radius / r_near)?;
    let mut lower = SnrEstimate::new(SnrModel::BoundLower, lower);
    let mut upper = SnrEstimate::new(SnrModel::BoundUpper, upper);
    for est in [&mut lower, &mut upper] {
        est.push_diagnostic(margin_note(used_y, used_z));
        if rho > 1.0 - NEAR_EQUAL_WARN_BAND {
            est.push_diagnostic(format!(
                "near-equal ranges (rho = {rho:.9}): bound is a product of an \
                 ill-conditioned factor and a vanishing elliptic difference"
            ));
        }
    }
    Ok(BoresightSnr::Bounds(BoundsPair {
        lower,
        upper,
        inner_radius,
        outer_radius,
    }))
}

/// Infinite-aperture boresight limit: the value both disk bounds approach as
/// the aperture grows without bound.
pub fn snr_asymptotic_upa(scenario: &Scenario) -> Result<SnrEstimate> {
    let sc = scenario.normalized();
    let (used_y, used_z) = boresight_margins(&sc)?;
    let xi = sc.geometry().occupation_ratio();
    let pbar = sc.transmit_snr();
    let value = if equal_ranges(&sc) {
        xi * xi * pbar / 4.0
    } else {
        let rho = sc.distance_ratio();
        let amp = 0.5 * ((1.0 - rho * rho).sqrt() / rho).atan();
        let f = ellip_f(amp, 2.0)?;
        rho / (1.0 - rho * rho) * xi * xi * pbar * f * f
    };
    let mut est = SnrEstimate::new(SnrModel::AsymptoticUpa, value);
    est.push_diagnostic(margin_note(used_y, used_z));
    Ok(est)
}

// ---------------------------------------------------------------------------
// Line-aperture (single-column) models
// ---------------------------------------------------------------------------

fn require_ula(scenario: &Scenario) -> Result<()> {
    if scenario.geometry().m_y() != 1 {
        return Err(Error::NotApplicable("requires m_y = 1".to_string()));
    }
    Ok(())
}

/// Line-aperture form of the continuum approximation: a single integral
/// along the column, with the off-column coordinate collapsed to one element
/// spacing. The kernel depends on the z direction cosines only.
pub fn snr_ula_integral(scenario: &Scenario) -> Result<SnrEstimate> {
    snr_ula_integral_with(scenario, &QuadSpec::default())
}

pub fn snr_ula_integral_with(scenario: &Scenario, spec: &QuadSpec) -> Result<SnrEstimate> {
    require_ula(scenario)?;
    let geom = scenario.geometry();
    let (tx, rx) = (scenario.tx(), scenario.rx());
    let line_factor = |node: &NodePosition, z: f64| {
        let r = node.range();
        1.0 - 2.0 * z * node.dir_z() / r + z * z / (r * r)
    };
    let integral = integrate_1d(
        |z| (line_factor(tx, z) * line_factor(rx, z)).powf(-0.75),
        -geom.len_z() / 2.0,
        geom.len_z() / 2.0,
        spec,
    )?;
    let d = geom.spacing();
    let value = snr_prefactor(scenario) / (d * d) * integral.value * integral.value;
    Ok(SnrEstimate::new(SnrModel::UlaIntegral, value))
}

/// Ratio check shared by the line-aperture closed form and its limit; both
/// require the near node much closer than the far one.
fn ula_ratio_check(sc: &Scenario, est_warnings: &mut Vec<String>) -> Result<()> {
    let rho = sc.distance_ratio();
    if rho > ULA_RATIO_ERROR * (1.0 + 1e-12) {
        return Err(Error::NotApplicable(format!(
            "requires a near/far range ratio <= {ULA_RATIO_ERROR} (got {rho:.4})"
        )));
    }
    if rho > ULA_RATIO_WARN {
        est_warnings.push(format!(
            "range ratio {rho:.4} above {ULA_RATIO_WARN}: closed form is a \
             leading-order approximation in the ratio"
        ));
    }
    Ok(())
}

/// Closed form for the line aperture when the near node is much closer than
/// the far one. The aperture enters only through the two angles subtended at
/// the near node by the column ends:
///
/// ```text
/// alpha_1 = atan((L_z/2 + r cos(theta)) / (r sin(theta)))
/// alpha_2 = atan((L_z/2 - r cos(theta)) / (r sin(theta)))
/// ```
pub fn snr_ula_closed(scenario: &Scenario) -> Result<SnrEstimate> {
    require_ula(scenario)?;
    let sc = scenario.normalized();
    let mut warnings = Vec::new();
    ula_ratio_check(&sc, &mut warnings)?;
    let geom = sc.geometry();
    let (near, far) = (sc.tx(), sc.rx());
    let half_len = geom.len_z() / 2.0;
    let along = near.range() * near.dir_z();
    let across = near.range() * near.zenith().sin();
    let alpha_1 = ((half_len + along) / across).atan();
    let alpha_2 = ((half_len - along) / across).atan();
    let f_sum = ellip_f2_odd(alpha_1 / 2.0)? + ellip_f2_odd(alpha_2 / 2.0)?;
    let a = geom.element_area();
    let d = geom.spacing();
    let value = a * a * sc.transmit_snr() * far.dir_x() * near.azimuth().cos()
        / (4.0 * PI * PI * d * d * far.range() * far.range())
        * f_sum
        * f_sum;
    let mut est = SnrEstimate::new(SnrModel::UlaClosed, value);
    for w in warnings {
        est.push_diagnostic(w);
    }
    Ok(est)
}

/// Infinite line-aperture limit: both subtended angles reach pi/2 and the
/// closed form collapses to a constant times `[F(pi/4 | 2)]^2 = 1.7188`.
pub fn snr_ula_asymptotic(scenario: &Scenario) -> Result<SnrEstimate> {
    require_ula(scenario)?;
    let sc = scenario.normalized();
    let mut warnings = Vec::new();
    ula_ratio_check(&sc, &mut warnings)?;
    let geom = sc.geometry();
    let (near, far) = (sc.tx(), sc.rx());
    let f = ellip_f(FRAC_PI_4, 2.0)?;
    let a = geom.element_area();
    let d = geom.spacing();
    let value = a * a * sc.transmit_snr() * far.dir_x() * near.azimuth().cos()
        / (PI * PI * d * d * far.range() * far.range())
        * f
        * f;
    let mut est = SnrEstimate::new(SnrModel::UlaAsymptotic, value);
    for w in warnings {
        est.push_diagnostic(w);
    }
    Ok(est)
}

/// Odd extension of F(. | 2) for signed subtended angles (a column shorter
/// than the node's axial offset makes one angle negative).
fn ellip_f2_odd(amplitude: f64) -> Result<f64> {
    if amplitude < 0.0 {
        Ok(-ellip_f(-amplitude, 2.0)?)
    } else {
        ellip_f(amplitude, 2.0)
    }
}

// ---------------------------------------------------------------------------
// Uniform-plane-wave baseline
// ---------------------------------------------------------------------------

/// Conventional plane-wave baseline with the aperture-matched reference gain:
/// `beta0^2 pbar M^2 / (r_tx^2 r_rx^2)`. Scales with the square of the
/// element count, without bound.
pub fn snr_upw(scenario: &Scenario) -> SnrEstimate {
    snr_upw_with(scenario, &UpwConfig::aperture_matched(scenario))
}

pub fn snr_upw_with(scenario: &Scenario, config: &UpwConfig) -> SnrEstimate {
    let m = scenario.geometry().element_count() as f64;
    let (r_tx, r_rx) = (scenario.tx().range(), scenario.rx().range());
    let value =
        config.beta0_squared() * scenario.transmit_snr() * m * m / (r_tx * r_tx * r_rx * r_rx);
    SnrEstimate::new(SnrModel::Upw, value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::snr_exact_sum;
    use crate::geometry::IrsGeometry;
    use std::f64::consts::FRAC_PI_2;

    fn assert_rel(actual: f64, expected: f64, tol: f64) {
        let denom = expected.abs().max(1e-300);
        assert!(
            ((actual - expected) / denom).abs() < tol,
            "expected {expected}, got {actual}"
        );
    }

    fn fig_geom(m_y: u32, m_z: u32) -> IrsGeometry {
        let lambda = 0.125;
        let d = lambda / 5.0;
        IrsGeometry::new(m_y, m_z, d, (d / 2.0) * (d / 2.0), lambda).unwrap()
    }

    fn boresight_scenario(m: u32, r_tx: f64, r_rx: f64, pbar: f64) -> Scenario {
        Scenario::new(
            fig_geom(m, m),
            NodePosition::boresight(r_tx).unwrap(),
            NodePosition::boresight(r_rx).unwrap(),
            pbar,
        )
        .unwrap()
    }

    #[test]
    fn integral_tracks_exact_sum_when_spacing_small() {
        // element spacing 2.5e-3 of the near range
        let sc = boresight_scenario(201, 10.0, 100.0, 1e9);
        let exact = snr_exact_sum(&sc).value();
        let integral = snr_integral_upa(&sc).unwrap();
        assert_rel(integral.value(), exact, 1e-3);
        assert!(integral.diagnostics().is_empty());
    }

    #[test]
    fn integral_single_element_limit() {
        let sc = boresight_scenario(1, 10.0, 100.0, 1e9);
        let exact = snr_exact_sum(&sc).value();
        let integral = snr_integral_upa(&sc).unwrap().value();
        assert_rel(integral, exact, 1e-2);
    }

    #[test]
    fn integral_swap_invariance() {
        let sc = Scenario::new(
            fig_geom(41, 21),
            NodePosition::new(30.0, 1.2, 0.4).unwrap(),
            NodePosition::new(80.0, 1.8, -0.5).unwrap(),
            1e8,
        )
        .unwrap();
        let a = snr_integral_upa(&sc).unwrap().value();
        let b = snr_integral_upa(&sc.swapped()).unwrap().value();
        assert_rel(a, b, 1e-12);
    }

    #[test]
    fn integral_warns_on_coarse_spacing() {
        let sc = boresight_scenario(21, 1.0, 100.0, 1e9); // d/r_tx = 0.025
        let est = snr_integral_upa(&sc).unwrap();
        assert!(est.diagnostics().iter().any(|d| d.contains("d/r_tx")));
    }

    #[test]
    fn bounds_radii_and_sandwich() {
        let sc = boresight_scenario(201, 10.0, 100.0, 1e9);
        let pair = snr_bounds_general(&sc).unwrap();
        assert_rel(pair.outer_radius / pair.inner_radius, 2f64.sqrt(), 1e-12);
        let exact = snr_exact_sum(&sc).value();
        assert!(pair.lower.value() < exact && exact < pair.upper.value());
        let integral = snr_integral_upa(&sc).unwrap().value();
        assert!(pair.lower.value() <= integral && integral <= pair.upper.value());
    }

    #[test]
    fn equal_radii_give_equal_bounds() {
        let sc = boresight_scenario(41, 10.0, 100.0, 1e9);
        let spec = QuadSpec::default();
        let a = disk_bound_value(&sc, 1.7, &spec).unwrap();
        let b = disk_bound_value(&sc, 1.7, &spec).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn boresight_equal_ranges_arctan_form() {
        // L_y = L_z = 2 r: atan(1/sqrt(3)) = pi/6, so snr = xi^2 pbar / 36
        let lambda = 0.125;
        let d = lambda / 5.0;
        let m = 801u32;
        let r = m as f64 * d / 2.0;
        let geom = fig_geom(m, m);
        let sc = Scenario::new(
            geom,
            NodePosition::boresight(r).unwrap(),
            NodePosition::boresight(r).unwrap(),
            1e9,
        )
        .unwrap();
        match snr_boresight(&sc).unwrap() {
            BoresightSnr::Exact(est) => {
                let xi = geom.occupation_ratio();
                assert_rel(est.value(), xi * xi * 1e9 / 36.0, 1e-12);
            }
            other => panic!("expected exact closed form, got {other:?}"),
        }
    }

    #[test]
    fn boresight_bounds_match_disk_quadrature_exactly_on_axis() {
        // on exact boresight the polar integral and the elliptic closed form
        // describe the same disk
        let sc = boresight_scenario(201, 10.0, 100.0, 1e9);
        let closed = match snr_boresight(&sc).unwrap() {
            BoresightSnr::Bounds(pair) => pair,
            other => panic!("expected bounds, got {other:?}"),
        };
        let quad = snr_bounds_general(&sc).unwrap();
        assert_rel(closed.lower.value(), quad.lower.value(), 1e-7);
        assert_rel(closed.upper.value(), quad.upper.value(), 1e-7);
    }

    #[test]
    fn asymptote_frozen_value_and_bracket() {
        // rho = 0.1, xi = 1/4, pbar = 1e9: high-precision reference
        // 6243670.1289386852 (67.954 dB)
        let sc = boresight_scenario(201, 10.0, 100.0, 1e9);
        let asym = snr_asymptotic_upa(&sc).unwrap();
        assert_rel(asym.value(), 6_243_670.128_938_685, 1e-10);
        // growing apertures approach the limit from below
        let mut prev = 0.0;
        for m in [201u32, 801, 2001] {
            let sc = boresight_scenario(m, 10.0, 100.0, 1e9);
            let pair = match snr_boresight(&sc).unwrap() {
                BoresightSnr::Bounds(pair) => pair,
                other => panic!("unexpected {other:?}"),
            };
            assert!(pair.lower.value() > prev);
            assert!(pair.upper.value() < asym.value() * (1.0 + 1e-9));
            prev = pair.lower.value();
        }
    }

    #[test]
    fn asymptote_equal_ranges() {
        let sc = boresight_scenario(201, 50.0, 50.0, 1e9);
        let est = snr_asymptotic_upa(&sc).unwrap();
        let xi = sc.geometry().occupation_ratio();
        assert_rel(est.value(), xi * xi * 1e9 / 4.0, 1e-12);
    }

    #[test]
    fn boresight_rejects_off_axis_nodes() {
        let sc = Scenario::new(
            fig_geom(801, 801), // L = 20 m
            NodePosition::new(10.0, FRAC_PI_2, 0.5).unwrap(),
            NodePosition::boresight(100.0).unwrap(),
            1e9,
        )
        .unwrap();
        match snr_boresight(&sc) {
            Err(Error::NotApplicable(msg)) => assert!(msg.contains("boresight margin")),
            other => panic!("expected margin violation, got {other:?}"),
        }
        assert!(snr_asymptotic_upa(&sc).is_err());
    }

    #[test]
    fn near_equal_ranges_are_warned_and_continuous() {
        let exact_sc = boresight_scenario(201, 50.0, 50.0, 1e9);
        let exact = match snr_boresight(&exact_sc).unwrap() {
            BoresightSnr::Exact(est) => est.value(),
            other => panic!("unexpected {other:?}"),
        };
        let near_sc = boresight_scenario(201, 50.0, 50.0 * (1.0 + 1e-5), 1e9);
        let pair = match snr_boresight(&near_sc).unwrap() {
            BoresightSnr::Bounds(pair) => pair,
            other => panic!("unexpected {other:?}"),
        };
        assert!(pair
            .lower
            .diagnostics()
            .iter()
            .any(|d| d.contains("near-equal ranges")));
        // the product form stays finite and close to the equal-range value
        assert!(pair.lower.value() <= exact * 1.01);
        assert!(pair.upper.value() >= exact * 0.5);
    }

    #[test]
    fn ula_requires_single_column() {
        let sc = boresight_scenario(3, 10.0, 1000.0, 1e9);
        for result in [
            snr_ula_integral(&sc).err(),
            snr_ula_closed(&sc).err(),
            snr_ula_asymptotic(&sc).err(),
        ] {
            match result {
                Some(Error::NotApplicable(msg)) => assert!(msg.contains("requires m_y = 1")),
                other => panic!("expected NotApplicable, got {other:?}"),
            }
        }
    }

    fn fig5_ula(m_z: u32, r_rx: f64, pbar: f64) -> Scenario {
        Scenario::new(
            fig_geom(1, m_z),
            NodePosition::new(10.0, PI / 3.0, PI / 6.0).unwrap(),
            NodePosition::new(r_rx, 3.0 * PI / 4.0, -PI / 5.0).unwrap(),
            pbar,
        )
        .unwrap()
    }

    #[test]
    fn ula_integral_tracks_exact_sum() {
        let sc = fig5_ula(101, 100.0, 1e12);
        let exact = snr_exact_sum(&sc).value();
        let integral = snr_ula_integral(&sc).unwrap().value();
        assert_rel(integral, exact, 1e-3);
        // single-element limit
        let sc1 = fig5_ula(1, 100.0, 1e12);
        assert_rel(
            snr_ula_integral(&sc1).unwrap().value(),
            snr_exact_sum(&sc1).value(),
            1e-2,
        );
    }

    #[test]
    fn ula_integral_swap_invariance() {
        let sc = fig5_ula(201, 100.0, 1e12);
        let a = snr_ula_integral(&sc).unwrap().value();
        let b = snr_ula_integral(&sc.swapped()).unwrap().value();
        assert_rel(a, b, 1e-12);
    }

    #[test]
    fn ula_closed_matches_integral_at_small_ratio() {
        let sc = fig5_ula(101, 1000.0, 1e12);
        let closed = snr_ula_closed(&sc).unwrap().value();
        let integral = snr_ula_integral(&sc).unwrap().value();
        assert_rel(closed, integral, 1e-3);
    }

    #[test]
    fn ula_symmetric_geometry_collapses_angles() {
        // boresight tx, column of length 2 r: alpha_1 = alpha_2 = pi/4
        let lambda = 0.125;
        let d = lambda / 5.0;
        let m_z = 801u32;
        let r_tx = m_z as f64 * d / 2.0;
        let sc = Scenario::new(
            fig_geom(1, m_z),
            NodePosition::boresight(r_tx).unwrap(),
            NodePosition::boresight(2000.0 * r_tx).unwrap(),
            1e9,
        )
        .unwrap();
        let est = snr_ula_closed(&sc).unwrap();
        let geom = sc.geometry();
        let a = geom.element_area();
        let f = ellip_f(PI / 8.0, 2.0).unwrap();
        let r_rx = sc.rx().range();
        let expected = a * a * 1e9 / (4.0 * PI * PI * geom.spacing().powi(2) * r_rx * r_rx)
            * (2.0 * f)
            * (2.0 * f);
        assert_rel(est.value(), expected, 1e-12);
    }

    #[test]
    fn ula_ratio_gate() {
        // ratio 0.1 passes (with no warning below 0.01 only), 0.2 errors
        let ok = fig5_ula(101, 100.0, 1e12);
        assert!(snr_ula_closed(&ok).is_ok());
        let warned = snr_ula_closed(&fig5_ula(101, 500.0, 1e12)).unwrap();
        assert!(warned
            .diagnostics()
            .iter()
            .any(|d| d.contains("range ratio")));
        let bad = fig5_ula(101, 40.0, 1e12);
        assert!(matches!(snr_ula_closed(&bad), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn ula_closed_approaches_asymptote_from_below() {
        let asym = snr_ula_asymptotic(&fig5_ula(101, 1000.0, 1e12))
            .unwrap()
            .value();
        let mut prev = 0.0;
        for m_z in [101u32, 1001, 10001] {
            let v = snr_ula_closed(&fig5_ula(m_z, 1000.0, 1e12))
                .unwrap()
                .value();
            assert!(v > prev && v < asym);
            prev = v;
        }
    }

    #[test]
    fn ula_asymptote_frozen_value() {
        // infinite-column constant for the 100 m far node, pbar = 1e12:
        // high-precision reference 337.021817942 (25.277 dB)
        let sc = fig5_ula(101, 100.0, 1e12);
        let est = snr_ula_asymptotic(&sc).unwrap();
        assert_rel(est.value(), 337.021_817_942, 1e-9);
    }

    #[test]
    fn upw_square_scaling() {
        // odd-by-odd grids cannot double M exactly, so check the square law
        // through the ratio of two unequal counts
        let sc1 = boresight_scenario(201, 10.0, 100.0, 1e9);
        let sc2 = boresight_scenario(403, 10.0, 100.0, 1e9);
        let v1 = snr_upw(&sc1).value();
        let v2 = snr_upw(&sc2).value();
        let m1 = sc1.geometry().element_count() as f64;
        let m2 = sc2.geometry().element_count() as f64;
        assert_rel(v2 / v1, (m2 / m1) * (m2 / m1), 1e-12);
    }

    #[test]
    fn upw_matches_exact_sum_for_single_element() {
        let sc = boresight_scenario(1, 10.0, 100.0, 1e9);
        assert_rel(snr_upw(&sc).value(), snr_exact_sum(&sc).value(), 1e-12);
    }

    #[test]
    fn upw_isotropic_reference_value() {
        // (lambda/4pi)^2 at 0.125 m is 9.8946e-5, about -40 dB
        let cfg = UpwConfig::isotropic_reference(0.125);
        assert_rel(cfg.beta0_squared(), 9.790_403_608_974_78e-9, 1e-12);
        assert!(UpwConfig::new(-1.0).is_err());
    }
}
