//! Element-wise channel gains, phase-shift profiles, and the exact
//! discrete-sum SNR.
//!
//! The per-element power gain combines free-space pathloss with the
//! projected aperture of the element:
//!
//! ```text
//! gain = A * dir_x / (4 pi r^2 * factor^{3/2})
//! ```
//!
//! where `factor` is the squared element-distance ratio of
//! [`crate::geometry`]. The same expression serves both the transmitter and
//! receiver sides. With the surface applying its optimal phase profile, the
//! maximum received SNR is
//!
//! ```text
//! snr = (sum_elements |h| |g|)^2 * pbar
//! ```
//!
//! evaluated in an expanded form that factors the gains' common prefactor
//! out of the sum. Sums run over the element grid in row-major order
//! (`i_z` outer, `i_y` inner) with deterministic chunked compensation, so
//! results are bit-stable across runs and thread counts.

use crate::error::{Error, Result};
use crate::geometry::{
    self, distance_factor_sq, IrsGeometry, NodePosition, MATERIALIZED_ELEMENT_CAP,
};
use crate::summation::{sum_indexed, sum_indexed_pair};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// Which analytical model produced an SNR value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnrModel {
    /// Exact element-wise double sum.
    ExactSum,
    /// Continuum (integral) approximation over the aperture rectangle.
    IntegralUpa,
    /// Inscribed-disk lower bound.
    BoundLower,
    /// Circumscribed-disk upper bound.
    BoundUpper,
    /// Closed form for equidistant boresight endpoints.
    BoresightClosed,
    /// Infinite-aperture boresight limit.
    AsymptoticUpa,
    /// Line-aperture (single column) integral form.
    UlaIntegral,
    /// Line-aperture closed form in the subtended angles.
    UlaClosed,
    /// Infinite line-aperture limit.
    UlaAsymptotic,
    /// Conventional uniform-plane-wave baseline.
    Upw,
}

impl SnrModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            SnrModel::ExactSum => "exact-sum",
            SnrModel::IntegralUpa => "integral",
            SnrModel::BoundLower => "bound-lower",
            SnrModel::BoundUpper => "bound-upper",
            SnrModel::BoresightClosed => "boresight-closed",
            SnrModel::AsymptoticUpa => "asymptotic",
            SnrModel::UlaIntegral => "ula-integral",
            SnrModel::UlaClosed => "ula-closed",
            SnrModel::UlaAsymptotic => "ula-asymptotic",
            SnrModel::Upw => "upw",
        }
    }
}

/// A linear-scale SNR value tagged with the model that produced it and any
/// applicability notes gathered along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrEstimate {
    value: f64,
    model: SnrModel,
    diagnostics: Vec<String>,
}

impl SnrEstimate {
    pub(crate) fn new(model: SnrModel, value: f64) -> Self {
        debug_assert!(value >= 0.0);
        Self {
            value,
            model,
            diagnostics: Vec::new(),
        }
    }

    pub(crate) fn push_diagnostic(&mut self, note: String) {
        self.diagnostics.push(note);
    }

    /// Linear-scale SNR (dimensionless, >= 0).
    pub fn value(&self) -> f64 {
        self.value
    }

    /// dB view: 10 log10(value).
    pub fn db(&self) -> f64 {
        10.0 * self.value.log10()
    }

    pub fn model(&self) -> SnrModel {
        self.model
    }

    pub fn diagnostics(&self) -> &[String] {
        &self.diagnostics
    }
}

/// Geometry plus both link endpoints plus the transmit SNR `pbar = P/sigma^2`.
/// The unit of work for every SNR model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    geom: IrsGeometry,
    tx: NodePosition,
    rx: NodePosition,
    transmit_snr: f64,
}

impl Scenario {
    pub fn new(
        geom: IrsGeometry,
        tx: NodePosition,
        rx: NodePosition,
        transmit_snr_pbar: f64,
    ) -> Result<Self> {
        if !transmit_snr_pbar.is_finite() || transmit_snr_pbar <= 0.0 {
            return Err(Error::Validation(format!(
                "transmit SNR must be finite and positive, got {transmit_snr_pbar}"
            )));
        }
        Ok(Self {
            geom,
            tx,
            rx,
            transmit_snr: transmit_snr_pbar,
        })
    }

    pub fn geometry(&self) -> &IrsGeometry {
        &self.geom
    }

    pub fn tx(&self) -> &NodePosition {
        &self.tx
    }

    pub fn rx(&self) -> &NodePosition {
        &self.rx
    }

    pub fn transmit_snr(&self) -> f64 {
        self.transmit_snr
    }

    /// Range ratio min(r_tx, r_rx) / max(r_tx, r_rx), in (0, 1].
    pub fn distance_ratio(&self) -> f64 {
        let (a, b) = (self.tx.range(), self.rx.range());
        a.min(b) / a.max(b)
    }

    /// Same link with the endpoints exchanged.
    pub fn swapped(&self) -> Scenario {
        Scenario {
            geom: self.geom,
            tx: self.rx,
            rx: self.tx,
            transmit_snr: self.transmit_snr,
        }
    }

    /// The scenario with endpoints ordered so the near node comes first;
    /// every SNR expression here is symmetric under the exchange.
    pub(crate) fn normalized(&self) -> Scenario {
        if self.tx.range() <= self.rx.range() {
            *self
        } else {
            self.swapped()
        }
    }
}

/// Per-element phase shifts applied by the surface, indexed like the element
/// grid in row-major order (`i_z` outer, `i_y` inner). Values are stored
/// reduced into [0, 2 pi).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    m_y: u32,
    m_z: u32,
    phases: Vec<f64>,
}

impl PhaseProfile {
    pub fn new(geom: &IrsGeometry, phases: Vec<f64>) -> Result<Self> {
        if phases.len() as u64 != geom.element_count() {
            return Err(Error::DimensionMismatch(format!(
                "phase profile has {} entries, geometry has {} elements",
                phases.len(),
                geom.element_count()
            )));
        }
        Ok(Self {
            m_y: geom.m_y(),
            m_z: geom.m_z(),
            phases: phases.into_iter().map(|p| p.rem_euclid(TAU)).collect(),
        })
    }

    pub fn uniform(geom: &IrsGeometry, phase: f64) -> Result<Self> {
        check_materializable(geom)?;
        Self::new(
            geom,
            vec![phase.rem_euclid(TAU); geom.element_count() as usize],
        )
    }

    pub fn m_y(&self) -> u32 {
        self.m_y
    }

    pub fn m_z(&self) -> u32 {
        self.m_z
    }

    /// Phase of element `(i_y, i_z)`.
    pub fn get(&self, i_y: i64, i_z: i64) -> Option<f64> {
        let hy = (self.m_y as i64 - 1) / 2;
        let hz = (self.m_z as i64 - 1) / 2;
        if i_y.abs() > hy || i_z.abs() > hz {
            return None;
        }
        let idx = (i_z + hz) as usize * self.m_y as usize + (i_y + hy) as usize;
        Some(self.phases[idx])
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }
}

fn check_materializable(geom: &IrsGeometry) -> Result<()> {
    if geom.element_count() > MATERIALIZED_ELEMENT_CAP {
        return Err(Error::Validation(format!(
            "per-element vectors are materialized only up to {MATERIALIZED_ELEMENT_CAP} \
             elements, geometry has {}; use the summation paths instead",
            geom.element_count()
        )));
    }
    Ok(())
}

/// Channel power gain between a node and element `(i_y, i_z)`:
/// `A * dir_x / (4 pi r^2 factor^{3/2})`. Strictly positive.
pub fn element_gain(node: &NodePosition, geom: &IrsGeometry, i_y: i64, i_z: i64) -> Result<f64> {
    geom.check_index(i_y, i_z)?;
    let eps = node.spacing_ratio(geom);
    let factor = distance_factor_sq(eps, node.dir_y(), node.dir_z(), i_y as f64, i_z as f64);
    Ok(geom.element_area() * node.dir_x()
        / (4.0 * PI * node.range() * node.range())
        / factor.powf(1.5))
}

/// Complex channel vector between a node and the whole surface, row-major
/// (`i_z` outer, `i_y` inner): magnitude `sqrt(element_gain)`, phase
/// `-(2 pi / lambda) * element_distance`, reduced mod 2 pi.
///
/// Materializes all M entries; limited to M <= 10^6.
pub fn channel_vector(node: &NodePosition, geom: &IrsGeometry) -> Result<Vec<Complex64>> {
    check_materializable(geom)?;
    let wavenumber = TAU / geom.wavelength();
    let mut out = Vec::with_capacity(geom.element_count() as usize);
    for i_z in -geom.half_extent_z()..=geom.half_extent_z() {
        for i_y in -geom.half_extent_y()..=geom.half_extent_y() {
            let gain = element_gain(node, geom, i_y, i_z)?;
            let dist = geometry::element_distance(node, geom, i_y, i_z)?;
            let phase = (-(wavenumber * dist)).rem_euclid(TAU);
            out.push(Complex64::from_polar(gain.sqrt(), phase));
        }
    }
    Ok(out)
}

/// The phase profile that aligns every reflected path:
/// `theta = (2 pi / lambda) (r_tx_elem + r_rx_elem)` per element, mod 2 pi.
/// Swapping the endpoints yields an identical profile.
pub fn optimal_phases(scenario: &Scenario) -> Result<PhaseProfile> {
    let geom = scenario.geometry();
    check_materializable(geom)?;
    let wavenumber = TAU / geom.wavelength();
    let mut phases = Vec::with_capacity(geom.element_count() as usize);
    for i_z in -geom.half_extent_z()..=geom.half_extent_z() {
        for i_y in -geom.half_extent_y()..=geom.half_extent_y() {
            let d_tx = geometry::element_distance(scenario.tx(), geom, i_y, i_z)?;
            let d_rx = geometry::element_distance(scenario.rx(), geom, i_y, i_z)?;
            phases.push((wavenumber * (d_tx + d_rx)).rem_euclid(TAU));
        }
    }
    PhaseProfile::new(geom, phases)
}

/// Common factor of every element product |h||g| with the transmit SNR
/// folded in: `A^2 pbar dir_x_tx dir_x_rx / (16 pi^2 r_tx^2 r_rx^2)`.
pub(crate) fn snr_prefactor(scenario: &Scenario) -> f64 {
    let a = scenario.geometry().element_area();
    let tx = scenario.tx();
    let rx = scenario.rx();
    a * a * scenario.transmit_snr() * tx.dir_x() * rx.dir_x()
        / (16.0 * PI * PI * tx.range() * tx.range() * rx.range() * rx.range())
}

struct GridIter {
    m_y: u64,
    hy: i64,
    hz: i64,
    eps_tx: f64,
    eps_rx: f64,
}

impl GridIter {
    fn new(scenario: &Scenario) -> Self {
        let geom = scenario.geometry();
        Self {
            m_y: geom.m_y() as u64,
            hy: geom.half_extent_y(),
            hz: geom.half_extent_z(),
            eps_tx: scenario.tx().spacing_ratio(geom),
            eps_rx: scenario.rx().spacing_ratio(geom),
        }
    }

    /// Signed grid indices for a row-major linear index.
    #[inline]
    fn split(&self, idx: u64) -> (f64, f64) {
        let i_z = (idx / self.m_y) as i64 - self.hz;
        let i_y = (idx % self.m_y) as i64 - self.hy;
        (i_y as f64, i_z as f64)
    }
}

/// Maximum received SNR under the optimal phase profile, as the exact
/// element-wise double sum. Lazy per-element evaluation, no materialized
/// vectors, deterministic chunked compensated accumulation.
pub fn snr_exact_sum(scenario: &Scenario) -> SnrEstimate {
    let grid = GridIter::new(scenario);
    let tx = scenario.tx();
    let rx = scenario.rx();
    let (ty, tz) = (tx.dir_y(), tx.dir_z());
    let (ry, rz) = (rx.dir_y(), rx.dir_z());
    let sum = sum_indexed(scenario.geometry().element_count(), |idx| {
        let (i_y, i_z) = grid.split(idx);
        let f_tx = distance_factor_sq(grid.eps_tx, ty, tz, i_y, i_z);
        let f_rx = distance_factor_sq(grid.eps_rx, ry, rz, i_y, i_z);
        (f_tx * f_rx).powf(-0.75)
    });
    SnrEstimate::new(SnrModel::ExactSum, snr_prefactor(scenario) * sum * sum)
}

/// Received SNR under an arbitrary phase profile: `|sum g e^{j theta} h|^2
/// pbar`. Never exceeds [`snr_exact_sum`], with equality when the composite
/// phases align.
pub fn snr_with_phases(scenario: &Scenario, phases: &PhaseProfile) -> Result<SnrEstimate> {
    let geom = scenario.geometry();
    if phases.m_y() != geom.m_y() || phases.m_z() != geom.m_z() {
        return Err(Error::DimensionMismatch(format!(
            "phase profile is {}x{}, geometry is {}x{}",
            phases.m_y(),
            phases.m_z(),
            geom.m_y(),
            geom.m_z()
        )));
    }
    let grid = GridIter::new(scenario);
    let tx = scenario.tx();
    let rx = scenario.rx();
    let (ty, tz) = (tx.dir_y(), tx.dir_z());
    let (ry, rz) = (rx.dir_y(), rx.dir_z());
    let wavenumber = TAU / geom.wavelength();
    let (r_tx, r_rx) = (tx.range(), rx.range());
    let table = phases.phases();
    let (re, im) = sum_indexed_pair(geom.element_count(), |idx| {
        let (i_y, i_z) = grid.split(idx);
        let f_tx = distance_factor_sq(grid.eps_tx, ty, tz, i_y, i_z);
        let f_rx = distance_factor_sq(grid.eps_rx, ry, rz, i_y, i_z);
        let amplitude = (f_tx * f_rx).powf(-0.75);
        let path_phase = (wavenumber * (r_tx * f_tx.sqrt() + r_rx * f_rx.sqrt())).rem_euclid(TAU);
        let composite = table[idx as usize] - path_phase;
        let (s, c) = composite.sin_cos();
        (amplitude * c, amplitude * s)
    });
    Ok(SnrEstimate::new(
        SnrModel::ExactSum,
        snr_prefactor(scenario) * (re * re + im * im),
    ))
}
