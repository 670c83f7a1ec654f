//! Surface geometry and exact node-to-element distances.
//!
//! The reflecting surface is a uniform planar array on the y-z plane, centered
//! at the origin, with the surface normal along +x. Elements sit on a square
//! grid with odd counts per axis, so signed indices `(i_y, i_z)` run over
//! `-(m-1)/2 ..= (m-1)/2` with the center element at `(0, 0)`.
//!
//! All lengths are meters and all angles radians throughout the crate.

use crate::error::{Error, Result};

/// Cap on explicitly materialized per-element vectors (channel vectors, phase
/// profiles). Larger surfaces are handled lazily by the summation paths.
pub const MATERIALIZED_ELEMENT_CAP: u64 = 1_000_000;

/// Uniform planar array of reflecting elements on the y-z plane.
///
/// Element counts must be odd so the grid is symmetric about the origin;
/// even counts are rejected rather than silently shifting every element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrsGeometry {
    m_y: u32,
    m_z: u32,
    spacing_d: f64,
    element_area: f64,
    wavelength: f64,
}

impl IrsGeometry {
    /// Validates and builds a surface. Requires odd positive counts,
    /// `sqrt(A) <= d` (elements fit in their cells) and `d <= wavelength/2`
    /// (sub-wavelength spacing).
    pub fn new(
        m_y: u32,
        m_z: u32,
        spacing_d: f64,
        element_area: f64,
        wavelength: f64,
    ) -> Result<Self> {
        if m_y == 0 || m_y.is_multiple_of(2) {
            return Err(Error::Validation(format!(
                "element count m_y must be a positive odd integer, got {m_y}"
            )));
        }
        if m_z == 0 || m_z.is_multiple_of(2) {
            return Err(Error::Validation(format!(
                "element count m_z must be a positive odd integer, got {m_z}"
            )));
        }
        for (name, v) in [
            ("spacing_d", spacing_d),
            ("element_area", element_area),
            ("wavelength", wavelength),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Validation(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        if element_area.sqrt() > spacing_d {
            return Err(Error::Validation(format!(
                "element side sqrt(A) = {} exceeds spacing d = {}",
                element_area.sqrt(),
                spacing_d
            )));
        }
        if spacing_d > wavelength / 2.0 {
            return Err(Error::Validation(format!(
                "spacing d = {spacing_d} exceeds half the wavelength {wavelength}"
            )));
        }
        Ok(Self {
            m_y,
            m_z,
            spacing_d,
            element_area,
            wavelength,
        })
    }

    /// Uniform linear array along the z axis (`m_y = 1`).
    pub fn ula(m_z: u32, spacing_d: f64, element_area: f64, wavelength: f64) -> Result<Self> {
        Self::new(1, m_z, spacing_d, element_area, wavelength)
    }

    pub fn m_y(&self) -> u32 {
        self.m_y
    }

    pub fn m_z(&self) -> u32 {
        self.m_z
    }

    /// Total element count M = m_y * m_z.
    pub fn element_count(&self) -> u64 {
        self.m_y as u64 * self.m_z as u64
    }

    pub fn spacing(&self) -> f64 {
        self.spacing_d
    }

    pub fn element_area(&self) -> f64 {
        self.element_area
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Physical aperture extent along y: L_y = m_y * d.
    pub fn len_y(&self) -> f64 {
        self.m_y as f64 * self.spacing_d
    }

    /// Physical aperture extent along z: L_z = m_z * d.
    pub fn len_z(&self) -> f64 {
        self.m_z as f64 * self.spacing_d
    }

    /// Array occupation ratio A/d^2, in (0, 1].
    pub fn occupation_ratio(&self) -> f64 {
        self.element_area / (self.spacing_d * self.spacing_d)
    }

    /// Largest valid |i_y|.
    pub fn half_extent_y(&self) -> i64 {
        (self.m_y as i64 - 1) / 2
    }

    /// Largest valid |i_z|.
    pub fn half_extent_z(&self) -> i64 {
        (self.m_z as i64 - 1) / 2
    }

    pub(crate) fn check_index(&self, i_y: i64, i_z: i64) -> Result<()> {
        if i_y.abs() > self.half_extent_y() || i_z.abs() > self.half_extent_z() {
            return Err(Error::IndexOutOfRange {
                i_y,
                i_z,
                m_y: self.m_y,
                m_z: self.m_z,
            });
        }
        Ok(())
    }
}

/// A transmitter or receiver location in spherical form, strictly in front of
/// the surface.
///
/// The zenith angle is measured from the +z axis and the azimuth from the +x
/// axis in the x-y plane, so the cartesian position is
/// `r * (dir_x, dir_y, dir_z)` with direction cosines
/// `dir_x = sin(theta)cos(phi)`, `dir_y = sin(theta)sin(phi)`,
/// `dir_z = cos(theta)`.
///
/// `theta in {0, pi}` and `|phi| = pi/2` are rejected at construction: they
/// put the node in the surface plane (`dir_x = 0`), where the projected
/// aperture vanishes and every element gain degenerates to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodePosition {
    range_r: f64,
    zenith_theta: f64,
    azimuth_phi: f64,
    dir_x: f64,
    dir_y: f64,
    dir_z: f64,
}

impl NodePosition {
    pub fn new(range_r: f64, zenith_theta: f64, azimuth_phi: f64) -> Result<Self> {
        if !range_r.is_finite() || range_r <= 0.0 {
            return Err(Error::Validation(format!(
                "range must be finite and positive, got {range_r}"
            )));
        }
        if !zenith_theta.is_finite() || zenith_theta <= 0.0 || zenith_theta >= std::f64::consts::PI
        {
            return Err(Error::Validation(
                "zenith angle must lie in (0, \u{3c0})".to_string(),
            ));
        }
        if !azimuth_phi.is_finite() || azimuth_phi.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::Validation(
                "azimuth angle must lie in (-\u{3c0}/2, \u{3c0}/2)".to_string(),
            ));
        }
        let (sin_t, cos_t) = zenith_theta.sin_cos();
        let (sin_p, cos_p) = azimuth_phi.sin_cos();
        let node = Self {
            range_r,
            zenith_theta,
            azimuth_phi,
            dir_x: sin_t * cos_p,
            dir_y: sin_t * sin_p,
            dir_z: cos_t,
        };
        debug_assert!(node.dir_x > 0.0);
        Ok(node)
    }

    /// Node on the surface normal (boresight) at the given range.
    pub fn boresight(range_r: f64) -> Result<Self> {
        Self::new(range_r, std::f64::consts::FRAC_PI_2, 0.0)
    }

    pub fn range(&self) -> f64 {
        self.range_r
    }

    pub fn zenith(&self) -> f64 {
        self.zenith_theta
    }

    pub fn azimuth(&self) -> f64 {
        self.azimuth_phi
    }

    /// Direction cosine onto the surface normal (+x). Always positive.
    pub fn dir_x(&self) -> f64 {
        self.dir_x
    }

    /// Direction cosine onto the y axis.
    pub fn dir_y(&self) -> f64 {
        self.dir_y
    }

    /// Direction cosine onto the z axis.
    pub fn dir_z(&self) -> f64 {
        self.dir_z
    }

    /// Spacing-to-range ratio d/r for a given surface.
    pub fn spacing_ratio(&self, geom: &IrsGeometry) -> f64 {
        geom.spacing() / self.range_r
    }
}

/// Cartesian point, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn distance_to(&self, other: &Point3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Cartesian position of a node: `r * (dir_x, dir_y, dir_z)`.
pub fn spherical_to_cartesian(node: &NodePosition) -> Point3 {
    Point3::new(
        node.range() * node.dir_x(),
        node.range() * node.dir_y(),
        node.range() * node.dir_z(),
    )
}

/// Center of element `(i_y, i_z)`: `(0, i_y * d, i_z * d)`.
pub fn element_position(geom: &IrsGeometry, i_y: i64, i_z: i64) -> Result<Point3> {
    geom.check_index(i_y, i_z)?;
    Ok(Point3::new(
        0.0,
        i_y as f64 * geom.spacing(),
        i_z as f64 * geom.spacing(),
    ))
}

/// Squared node-to-element distance divided by the node range squared:
///
/// ```text
/// 1 - 2 i_y e dir_y - 2 i_z e dir_z + (i_y^2 + i_z^2) e^2,   e = d/r
/// ```
///
/// Always positive for a valid node (it is bounded below by `dir_x^2`).
#[inline]
pub(crate) fn distance_factor_sq(eps: f64, dir_y: f64, dir_z: f64, i_y: f64, i_z: f64) -> f64 {
    1.0 - 2.0 * i_y * eps * dir_y - 2.0 * i_z * eps * dir_z + (i_y * i_y + i_z * i_z) * (eps * eps)
}

/// Exact distance from a node to element `(i_y, i_z)`.
///
/// Evaluated in the closed form `r * sqrt(distance factor)`, which equals the
/// direct euclidean norm of the separation vector to working precision.
pub fn element_distance(
    node: &NodePosition,
    geom: &IrsGeometry,
    i_y: i64,
    i_z: i64,
) -> Result<f64> {
    geom.check_index(i_y, i_z)?;
    let eps = node.spacing_ratio(geom);
    let factor = distance_factor_sq(eps, node.dir_y(), node.dir_z(), i_y as f64, i_z as f64);
    Ok(node.range() * factor.sqrt())
}
