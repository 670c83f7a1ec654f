//! Flat key-value scenario configs.
//!
//! A config is plain text, one `key = value` per line, `#` starts a comment.
//! The key set is fixed: the handful of scalars that define a scenario.
//!
//! ```text
//! # link geometry
//! wavelength_m            = 0.125
//! spacing_over_wavelength = 0.2
//! element_area_over_d2    = 0.25
//! my                      = 201
//! mz                      = 201
//! tx.r_m                  = 10.0
//! tx.theta_rad            = 1.5707963267948966
//! tx.phi_rad              = 0.0
//! rx.r_m                  = 100.0
//! rx.theta_rad            = 1.5707963267948966
//! rx.phi_rad              = 0.0
//! pbar_db                 = 90.0
//! ```
//!
//! All angles are radians (the library never parses degrees), lengths meters,
//! and `pbar_db` is the transmit SNR in dB.

use crate::channel::Scenario;
use crate::error::{Error, Result};
use crate::geometry::{IrsGeometry, NodePosition};
use std::path::Path;

pub const CONFIG_KEYS: [&str; 12] = [
    "wavelength_m",
    "spacing_over_wavelength",
    "element_area_over_d2",
    "my",
    "mz",
    "tx.r_m",
    "tx.theta_rad",
    "tx.phi_rad",
    "rx.r_m",
    "rx.theta_rad",
    "rx.phi_rad",
    "pbar_db",
];

/// Parsed scenario config; still unvalidated against the model invariants
/// until [`ScenarioConfig::to_scenario`] runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    pub wavelength_m: f64,
    pub spacing_over_wavelength: f64,
    pub element_area_over_d2: f64,
    pub my: u32,
    pub mz: u32,
    pub tx_r_m: f64,
    pub tx_theta_rad: f64,
    pub tx_phi_rad: f64,
    pub rx_r_m: f64,
    pub rx_theta_rad: f64,
    pub rx_phi_rad: f64,
    pub pbar_db: f64,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut seen: Vec<(&str, usize, f64)> = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::ConfigParse {
                    line: line_no,
                    message: format!("expected `key = value`, got `{line}`"),
                });
            };
            let key = key.trim();
            let value = value.trim();
            if !CONFIG_KEYS.contains(&key) {
                return Err(Error::ConfigParse {
                    line: line_no,
                    message: format!("unknown key `{key}`"),
                });
            }
            if let Some((_, first_line, _)) = seen.iter().find(|(k, _, _)| *k == key) {
                return Err(Error::ConfigParse {
                    line: line_no,
                    message: format!("duplicate key `{key}` (first set on line {first_line})"),
                });
            }
            let parsed: f64 = value.parse().map_err(|_| Error::ConfigParse {
                line: line_no,
                message: format!("invalid number `{value}` for key `{key}`"),
            })?;
            let key_static = CONFIG_KEYS.iter().find(|k| **k == key).unwrap();
            seen.push((key_static, line_no, parsed));
        }

        let lookup = |key: &str| -> Result<f64> {
            seen.iter()
                .find(|(k, _, _)| *k == key)
                .map(|(_, _, v)| *v)
                .ok_or_else(|| Error::Validation(format!("missing config key `{key}`")))
        };
        let count = |key: &str| -> Result<u32> {
            let v = lookup(key)?;
            if v.fract() != 0.0 || v < 1.0 || v > u32::MAX as f64 {
                return Err(Error::Validation(format!(
                    "config key `{key}` must be a positive integer, got {v}"
                )));
            }
            Ok(v as u32)
        };

        Ok(Self {
            wavelength_m: lookup("wavelength_m")?,
            spacing_over_wavelength: lookup("spacing_over_wavelength")?,
            element_area_over_d2: lookup("element_area_over_d2")?,
            my: count("my")?,
            mz: count("mz")?,
            tx_r_m: lookup("tx.r_m")?,
            tx_theta_rad: lookup("tx.theta_rad")?,
            tx_phi_rad: lookup("tx.phi_rad")?,
            rx_r_m: lookup("rx.r_m")?,
            rx_theta_rad: lookup("rx.theta_rad")?,
            rx_phi_rad: lookup("rx.phi_rad")?,
            pbar_db: lookup("pbar_db")?,
        })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Element spacing in meters.
    pub fn spacing_m(&self) -> f64 {
        self.wavelength_m * self.spacing_over_wavelength
    }

    /// Validates the scalars into a ready scenario.
    pub fn to_scenario(&self) -> Result<Scenario> {
        let d = self.spacing_m();
        let area = self.element_area_over_d2 * d * d;
        let geom = IrsGeometry::new(self.my, self.mz, d, area, self.wavelength_m)?;
        let tx = NodePosition::new(self.tx_r_m, self.tx_theta_rad, self.tx_phi_rad)?;
        let rx = NodePosition::new(self.rx_r_m, self.rx_theta_rad, self.rx_phi_rad)?;
        Scenario::new(geom, tx, rx, 10f64.powf(self.pbar_db / 10.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG3: &str = "\
# surface
wavelength_m = 0.125
spacing_over_wavelength = 0.2
element_area_over_d2 = 0.25
my = 201
mz = 201
# endpoints
tx.r_m = 10.0
tx.theta_rad = 1.5707963267948966
tx.phi_rad = 0.0
rx.r_m = 100.0
rx.theta_rad = 1.5707963267948966
rx.phi_rad = 0.0
pbar_db = 90.0
";

    #[test]
    fn parses_reference_config() {
        let cfg = ScenarioConfig::parse(FIG3).unwrap();
        assert_eq!(cfg.my, 201);
        assert_eq!(cfg.spacing_m(), 0.025);
        let sc = cfg.to_scenario().unwrap();
        assert!((sc.transmit_snr() - 1e9).abs() < 1.0);
        assert!((sc.geometry().occupation_ratio() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn unknown_key_names_line() {
        let text = format!("{FIG3}bogus_key = 1.0\n");
        match ScenarioConfig::parse(&text) {
            Err(Error::ConfigParse { line, message }) => {
                assert_eq!(line, 15);
                assert!(message.contains("bogus_key"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_and_malformed_lines() {
        let text = format!("{FIG3}my = 7\n");
        assert!(matches!(
            ScenarioConfig::parse(&text),
            Err(Error::ConfigParse { line: 15, .. })
        ));
        assert!(matches!(
            ScenarioConfig::parse("wavelength_m 0.125\n"),
            Err(Error::ConfigParse { line: 1, .. })
        ));
        assert!(matches!(
            ScenarioConfig::parse("my = 2.5\n"),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn missing_key_is_validation_error() {
        let text = FIG3.replace("pbar_db = 90.0\n", "");
        match ScenarioConfig::parse(&text) {
            Err(Error::Validation(msg)) => assert!(msg.contains("pbar_db")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn zenith_validation_propagates() {
        let text = FIG3.replace("tx.theta_rad = 1.5707963267948966", "tx.theta_rad = 0.0");
        let cfg = ScenarioConfig::parse(&text).unwrap();
        match cfg.to_scenario() {
            Err(Error::Validation(msg)) => {
                assert!(msg.contains("zenith angle must lie in (0,"));
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }
}
