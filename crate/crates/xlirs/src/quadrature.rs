//! Deterministic adaptive numerical integration.
//!
//! Three backends share one engine:
//!
//! - [`integrate_1d`]: adaptive bisection of Gauss-Legendre panels,
//! - [`integrate_rect_2d`]: tensor-product panels over a rectangle, split
//!   along the longer side,
//! - [`integrate_disk_polar`]: uniform trapezoid in the angle (periodic, so
//!   spectrally accurate) times adaptive Gauss-Legendre in the radius,
//!   including the jacobian factor `r`.
//!
//! Per-panel error is estimated by comparing the base rule against an
//! embedded lower-order rule on the same panel. Panel contributions are
//! accumulated with compensated summation in a fixed traversal order, so
//! identical inputs give bit-identical outputs.
//!
//! The tolerance is relative to the integral's own scale; for integrands
//! with near-total cancellation the scale falls back to a small multiple of
//! the total absolute mass, so an integral that is zero by symmetry
//! converges instead of chasing round-off.

use crate::error::{Error, Result};
use crate::summation::CompensatedSum;
use std::f64::consts::{PI, TAU};

/// Tuning knobs for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    /// Relative tolerance on the integral value, in (0, 1e-3].
    pub relative_tolerance: f64,
    /// Maximum panel bisection depth below the initial subdivision.
    pub max_refinement_levels: u32,
    /// Gauss-Legendre points of the base rule per panel.
    pub base_points_per_panel: u32,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-9,
            max_refinement_levels: 20,
            base_points_per_panel: 15,
        }
    }
}

impl QuadSpec {
    pub fn new(
        relative_tolerance: f64,
        max_refinement_levels: u32,
        base_points_per_panel: u32,
    ) -> Result<Self> {
        let spec = Self {
            relative_tolerance,
            max_refinement_levels,
            base_points_per_panel,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !self.relative_tolerance.is_finite()
            || self.relative_tolerance <= 0.0
            || self.relative_tolerance > 1e-3
        {
            return Err(Error::Validation(format!(
                "quadrature tolerance must lie in (0, 1e-3], got {}",
                self.relative_tolerance
            )));
        }
        if self.max_refinement_levels < 1 {
            return Err(Error::Validation(
                "quadrature refinement levels must be >= 1".to_string(),
            ));
        }
        if !(2..=64).contains(&self.base_points_per_panel) {
            return Err(Error::Validation(format!(
                "base points per panel must lie in [2, 64], got {}",
                self.base_points_per_panel
            )));
        }
        Ok(())
    }
}

/// Integral estimate plus the accumulated per-panel error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
}

// ---------------------------------------------------------------------------
// Gauss-Legendre rules
// ---------------------------------------------------------------------------

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Legendre polynomial P_n and its derivative at x, by recurrence.
fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Nodes and weights on [-1, 1] by Newton iteration from the Chebyshev guess.
fn gauss_legendre_rule(n: usize) -> Rule {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_deriv(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

// ---------------------------------------------------------------------------
// 1D engine
// ---------------------------------------------------------------------------

/// Sampled integrand: signed value plus a nonnegative magnitude channel used
/// for the cancellation-aware scale.
type Sample = (f64, f64);

struct PanelEval {
    hi: f64,
    lo: f64,
    mass: f64,
}

fn eval_panel<F: Fn(f64) -> Sample>(f: &F, hi: &Rule, lo: &Rule, a: f64, b: f64) -> PanelEval {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s_hi = CompensatedSum::new();
    let mut s_mass = CompensatedSum::new();
    for (x, w) in hi.nodes.iter().zip(&hi.weights) {
        let (v, m) = f(c + h * x);
        s_hi.add(w * v);
        s_mass.add(w * m);
    }
    let mut s_lo = CompensatedSum::new();
    for (x, w) in lo.nodes.iter().zip(&lo.weights) {
        let (v, _) = f(c + h * x);
        s_lo.add(w * v);
    }
    PanelEval {
        hi: h * s_hi.value(),
        lo: h * s_lo.value(),
        mass: h * s_mass.value(),
    }
}

struct Accum {
    value: CompensatedSum,
    error: CompensatedSum,
    mass: CompensatedSum,
    depth_exhausted: bool,
}

impl Accum {
    fn new() -> Self {
        Self {
            value: CompensatedSum::new(),
            error: CompensatedSum::new(),
            mass: CompensatedSum::new(),
            depth_exhausted: false,
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn refine_1d<F: Fn(f64) -> Sample>(
    f: &F,
    hi: &Rule,
    lo: &Rule,
    a: f64,
    b: f64,
    depth: u32,
    eval: PanelEval,
    budget: f64,
    width_total: f64,
    max_depth: u32,
    acc: &mut Accum,
) {
    let err = (eval.hi - eval.lo).abs();
    let share = budget * (b - a) / width_total;
    let floor = (b - a) <= width_total * 1e-14;
    if err <= share || floor {
        acc.value.add(eval.hi);
        acc.error.add(err);
        acc.mass.add(eval.mass);
    } else if depth >= max_depth {
        acc.value.add(eval.hi);
        acc.error.add(err);
        acc.mass.add(eval.mass);
        acc.depth_exhausted = true;
    } else {
        let mid = 0.5 * (a + b);
        let left = eval_panel(f, hi, lo, a, mid);
        let right = eval_panel(f, hi, lo, mid, b);
        refine_1d(
            f,
            hi,
            lo,
            a,
            mid,
            depth + 1,
            left,
            budget,
            width_total,
            max_depth,
            acc,
        );
        refine_1d(
            f,
            hi,
            lo,
            mid,
            b,
            depth + 1,
            right,
            budget,
            width_total,
            max_depth,
            acc,
        );
    }
}

const PILOT_PANELS_1D: usize = 8;

/// Core adaptive driver; returns (value, error estimate, absolute mass).
fn adaptive_1d<F: Fn(f64) -> Sample>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadSpec,
) -> Result<(f64, f64, f64)> {
    spec.validate()?;
    if a > b {
        return Err(Error::Validation(format!(
            "integration bounds out of order: {a} > {b}"
        )));
    }
    if a == b {
        return Ok((0.0, 0.0, 0.0));
    }
    let hi = gauss_legendre_rule(spec.base_points_per_panel as usize);
    let lo = gauss_legendre_rule(((spec.base_points_per_panel as usize) / 2).max(2));
    let width = b - a;

    let mut pilots = Vec::with_capacity(PILOT_PANELS_1D);
    let mut pilot_value = CompensatedSum::new();
    let mut pilot_mass = CompensatedSum::new();
    for i in 0..PILOT_PANELS_1D {
        let pa = a + width * i as f64 / PILOT_PANELS_1D as f64;
        let pb = a + width * (i + 1) as f64 / PILOT_PANELS_1D as f64;
        let eval = eval_panel(f, &hi, &lo, pa, pb);
        pilot_value.add(eval.hi);
        pilot_mass.add(eval.mass);
        pilots.push((pa, pb, eval));
    }
    let scale = pilot_value.value().abs().max(1e-3 * pilot_mass.value());
    let budget = spec.relative_tolerance * scale;

    let mut acc = Accum::new();
    for (pa, pb, eval) in pilots {
        refine_1d(
            f,
            &hi,
            &lo,
            pa,
            pb,
            0,
            eval,
            budget,
            width,
            spec.max_refinement_levels,
            &mut acc,
        );
    }
    let value = acc.value.value();
    let error = acc.error.value();
    if acc.depth_exhausted && error > budget.max(spec.relative_tolerance * value.abs()) {
        return Err(Error::QuadratureNonConvergence {
            estimate: value,
            error_bound: error,
        });
    }
    Ok((value, error, acc.mass.value()))
}

/// Adaptive Gauss-Legendre integral of `f` over `[a, b]`.
pub fn integrate_1d<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    let sample = |x: f64| {
        let v = f(x);
        (v, v.abs())
    };
    let (value, error_estimate, _) = adaptive_1d(&sample, a, b, spec)?;
    Ok(QuadResult {
        value,
        error_estimate,
    })
}

// ---------------------------------------------------------------------------
// 2D tensor-product engine
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct Rect {
    ya: f64,
    yb: f64,
    za: f64,
    zb: f64,
}

impl Rect {
    fn area(&self) -> f64 {
        (self.yb - self.ya) * (self.zb - self.za)
    }
}

fn eval_rect<F: Fn(f64, f64) -> f64>(f: &F, hi: &Rule, lo: &Rule, r: &Rect) -> PanelEval {
    let cy = 0.5 * (r.ya + r.yb);
    let hy = 0.5 * (r.yb - r.ya);
    let cz = 0.5 * (r.za + r.zb);
    let hz = 0.5 * (r.zb - r.za);
    let tensor = |rule: &Rule, with_mass: bool| {
        let mut s = CompensatedSum::new();
        let mut m = CompensatedSum::new();
        for (y, wy) in rule.nodes.iter().zip(&rule.weights) {
            for (z, wz) in rule.nodes.iter().zip(&rule.weights) {
                let v = f(cy + hy * y, cz + hz * z);
                s.add(wy * wz * v);
                if with_mass {
                    m.add(wy * wz * v.abs());
                }
            }
        }
        (hy * hz * s.value(), hy * hz * m.value())
    };
    let (hi_v, mass) = tensor(hi, true);
    let (lo_v, _) = tensor(lo, false);
    PanelEval {
        hi: hi_v,
        lo: lo_v,
        mass,
    }
}

#[allow(clippy::too_many_arguments)]
fn refine_rect<F: Fn(f64, f64) -> f64>(
    f: &F,
    hi: &Rule,
    lo: &Rule,
    rect: Rect,
    depth: u32,
    eval: PanelEval,
    budget: f64,
    area_total: f64,
    max_depth: u32,
    acc: &mut Accum,
) {
    let err = (eval.hi - eval.lo).abs();
    let share = budget * rect.area() / area_total;
    let wy = rect.yb - rect.ya;
    let wz = rect.zb - rect.za;
    let floor = rect.area() <= area_total * 1e-14;
    if err <= share || floor {
        acc.value.add(eval.hi);
        acc.error.add(err);
        acc.mass.add(eval.mass);
    } else if depth >= max_depth {
        acc.value.add(eval.hi);
        acc.error.add(err);
        acc.mass.add(eval.mass);
        acc.depth_exhausted = true;
    } else {
        // bisect the longer side; ties split y
        let (left, right) = if wy >= wz {
            let mid = 0.5 * (rect.ya + rect.yb);
            (Rect { yb: mid, ..rect }, Rect { ya: mid, ..rect })
        } else {
            let mid = 0.5 * (rect.za + rect.zb);
            (Rect { zb: mid, ..rect }, Rect { za: mid, ..rect })
        };
        let le = eval_rect(f, hi, lo, &left);
        let re = eval_rect(f, hi, lo, &right);
        refine_rect(
            f,
            hi,
            lo,
            left,
            depth + 1,
            le,
            budget,
            area_total,
            max_depth,
            acc,
        );
        refine_rect(
            f,
            hi,
            lo,
            right,
            depth + 1,
            re,
            budget,
            area_total,
            max_depth,
            acc,
        );
    }
}

/// Adaptive tensor-product integral of `f(y, z)` over a rectangle.
pub fn integrate_rect_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    y_range: (f64, f64),
    z_range: (f64, f64),
    spec: &QuadSpec,
) -> Result<QuadResult> {
    spec.validate()?;
    let (ya, yb) = y_range;
    let (za, zb) = z_range;
    if ya > yb || za > zb {
        return Err(Error::Validation(format!(
            "integration rectangle out of order: [{ya}, {yb}] x [{za}, {zb}]"
        )));
    }
    if ya == yb || za == zb {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
        });
    }
    let hi = gauss_legendre_rule(spec.base_points_per_panel as usize);
    let lo = gauss_legendre_rule(((spec.base_points_per_panel as usize) / 2).max(2));
    let area_total = (yb - ya) * (zb - za);

    const PILOT: usize = 4;
    let mut pilots = Vec::with_capacity(PILOT * PILOT);
    let mut pilot_value = CompensatedSum::new();
    let mut pilot_mass = CompensatedSum::new();
    for i in 0..PILOT {
        for j in 0..PILOT {
            let rect = Rect {
                ya: ya + (yb - ya) * i as f64 / PILOT as f64,
                yb: ya + (yb - ya) * (i + 1) as f64 / PILOT as f64,
                za: za + (zb - za) * j as f64 / PILOT as f64,
                zb: za + (zb - za) * (j + 1) as f64 / PILOT as f64,
            };
            let eval = eval_rect(&f, &hi, &lo, &rect);
            pilot_value.add(eval.hi);
            pilot_mass.add(eval.mass);
            pilots.push((rect, eval));
        }
    }
    let scale = pilot_value.value().abs().max(1e-3 * pilot_mass.value());
    let budget = spec.relative_tolerance * scale;

    let mut acc = Accum::new();
    for (rect, eval) in pilots {
        refine_rect(
            &f,
            &hi,
            &lo,
            rect,
            0,
            eval,
            budget,
            area_total,
            spec.max_refinement_levels,
            &mut acc,
        );
    }
    let value = acc.value.value();
    let error = acc.error.value();
    if acc.depth_exhausted && error > budget.max(spec.relative_tolerance * value.abs()) {
        return Err(Error::QuadratureNonConvergence {
            estimate: value,
            error_bound: error,
        });
    }
    Ok(QuadResult {
        value,
        error_estimate: error,
    })
}

// ---------------------------------------------------------------------------
// Polar disk
// ---------------------------------------------------------------------------

/// Integral of `f(r, zeta)` over the disk of the given radius, i.e.
/// `int_0^{2 pi} d zeta int_0^R f(r, zeta) r dr` (the jacobian `r` is
/// supplied here, not by the integrand).
///
/// The angular direction uses the uniform trapezoid rule, doubled until the
/// result is stable at the requested tolerance; for a 2-pi-periodic smooth
/// integrand this converges spectrally fast.
pub fn integrate_disk_polar<F: Fn(f64, f64) -> f64>(
    f: F,
    radius: f64,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    spec.validate()?;
    if !radius.is_finite() || radius < 0.0 {
        return Err(Error::Validation(format!(
            "disk radius must be finite and nonnegative, got {radius}"
        )));
    }
    if radius == 0.0 {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
        });
    }
    let inner = QuadSpec {
        relative_tolerance: (spec.relative_tolerance * 0.25).max(1e-13),
        ..*spec
    };
    let mut n_angles = 16usize;
    let mut prev: Option<(f64, f64)> = None;
    let mut last_diff = f64::INFINITY;
    while n_angles <= 4096 {
        let radial = |r: f64| -> Sample {
            let mut s = CompensatedSum::new();
            let mut m = CompensatedSum::new();
            for j in 0..n_angles {
                let zeta = TAU * j as f64 / n_angles as f64;
                let v = f(r, zeta);
                s.add(v);
                m.add(v.abs());
            }
            let w = TAU / n_angles as f64 * r;
            (w * s.value(), w * m.value())
        };
        let (value, error, mass) = adaptive_1d(&radial, 0.0, radius, &inner)?;
        if let Some((prev_value, _)) = prev {
            last_diff = (value - prev_value).abs();
            let scale = value.abs().max(1e-3 * mass);
            if last_diff <= 0.5 * spec.relative_tolerance * scale {
                return Ok(QuadResult {
                    value,
                    error_estimate: error + last_diff,
                });
            }
        }
        prev = Some((value, error));
        n_angles *= 2;
    }
    let (estimate, error) = prev.unwrap();
    Err(Error::QuadratureNonConvergence {
        estimate,
        error_bound: error + last_diff,
    })
}
