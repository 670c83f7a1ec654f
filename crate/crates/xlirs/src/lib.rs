//! Near-field SNR modelling for wireless links assisted by an extremely
//! large-scale intelligent reflecting surface (XL-IRS).
//!
//! When a reflecting surface grows to many thousands of wavelengths, the
//! usual plane-wave link budget stops being valid: amplitude, projected
//! aperture, and wavefront curvature all vary across the elements. This
//! crate models the received SNR of such a link element by element and
//! provides the matching family of analytical approximations:
//!
//! - [`channel::snr_exact_sum`]: the exact element-wise double sum, with
//!   deterministic compensated accumulation that scales to tens of millions
//!   of elements,
//! - [`models::snr_integral_upa`]: the continuum (integral) approximation
//!   over the aperture rectangle,
//! - [`models::snr_bounds_general`]: inscribed/circumscribed-disk lower and
//!   upper bounds evaluated in polar coordinates,
//! - [`models::snr_boresight`] and [`models::snr_asymptotic_upa`]: closed
//!   forms and the saturation limit for near-axis links, built on incomplete
//!   elliptic integrals of the first kind,
//! - [`models::snr_ula_integral`], [`models::snr_ula_closed`],
//!   [`models::snr_ula_asymptotic`]: the single-column (linear array)
//!   family,
//! - [`models::snr_upw`]: the conventional uniform-plane-wave baseline with
//!   its square power-scaling law.
//!
//! The [`harness`] module adds scenario config files, parameter sweeps with
//! CSV output and gnuplot script emission, and a cross-model validation
//! suite; the `xlirs` binary exposes them on the command line.
//!
//! Units are meters, radians, and linear power ratios throughout; decibel
//! conversion happens only at presentation time.

pub mod channel;
pub mod elliptic;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod models;
pub mod quadrature;
pub mod summation;

pub use channel::{PhaseProfile, Scenario, SnrEstimate, SnrModel};
pub use error::{Error, Result};
pub use geometry::{IrsGeometry, NodePosition, Point3};
pub use models::{BoresightSnr, BoundsPair, UpwConfig};
pub use quadrature::{QuadResult, QuadSpec};
