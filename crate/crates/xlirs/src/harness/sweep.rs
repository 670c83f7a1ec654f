//! Parameter sweeps and per-scenario model reports.
//!
//! Rows are computed independently (in parallel via rayon) and assembled in
//! grid order; every model evaluation is a pure function, so the table
//! content never depends on the worker count.

use super::config::ScenarioConfig;
use crate::channel::{snr_exact_sum, Scenario, SnrEstimate};
use crate::error::{Error, Result};
use crate::models::{
    snr_asymptotic_upa, snr_boresight, snr_bounds_general, snr_integral_upa, snr_ula_asymptotic,
    snr_ula_closed, snr_ula_integral, snr_upw_with, BoresightSnr, UpwConfig,
};
use rayon::prelude::*;
use std::path::Path;

/// Which scenario scalar a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    /// Square surface side L (sets both element counts).
    SurfaceSize,
    /// Column length L_z (sets the z element count only).
    UlaLength,
    /// Transmitter range r_q.
    TxRange,
}

impl SweepVar {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "L" => Ok(SweepVar::SurfaceSize),
            "Lz" => Ok(SweepVar::UlaLength),
            "rq" => Ok(SweepVar::TxRange),
            other => Err(Error::Validation(format!(
                "unknown sweep variable `{other}` (expected L, Lz, or rq)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SweepVar::SurfaceSize => "L",
            SweepVar::UlaLength => "Lz",
            SweepVar::TxRange => "rq",
        }
    }

    /// Axis label for plot scripts.
    pub fn axis_label(&self) -> &'static str {
        match self {
            SweepVar::SurfaceSize => "L (m)",
            SweepVar::UlaLength => "L_z (m)",
            SweepVar::TxRange => "r_q (m)",
        }
    }

    /// Size-like sweeps are plotted on a log axis.
    pub fn log_axis(&self) -> bool {
        matches!(self, SweepVar::SurfaceSize | SweepVar::UlaLength)
    }
}

/// Model selection tags as they appear on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelTag {
    ExactSum,
    Integral,
    Bounds,
    Boresight,
    Asymptotic,
    UlaIntegral,
    UlaClosed,
    UlaAsymptotic,
    Upw,
}

impl ModelTag {
    pub const ALL: [ModelTag; 9] = [
        ModelTag::ExactSum,
        ModelTag::Integral,
        ModelTag::Bounds,
        ModelTag::Boresight,
        ModelTag::Asymptotic,
        ModelTag::UlaIntegral,
        ModelTag::UlaClosed,
        ModelTag::UlaAsymptotic,
        ModelTag::Upw,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| {
                Error::Validation(format!(
                    "unknown model tag `{s}` (expected one of: {})",
                    Self::ALL.map(|t| t.as_str()).join(", ")
                ))
            })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelTag::ExactSum => "exact-sum",
            ModelTag::Integral => "integral",
            ModelTag::Bounds => "bounds",
            ModelTag::Boresight => "boresight",
            ModelTag::Asymptotic => "asymptotic",
            ModelTag::UlaIntegral => "ula-integral",
            ModelTag::UlaClosed => "ula-closed",
            ModelTag::UlaAsymptotic => "ula-asymptotic",
            ModelTag::Upw => "upw",
        }
    }

    /// CSV column names this tag produces (bounds-style tags produce two).
    pub fn columns(&self) -> &'static [&'static str] {
        match self {
            ModelTag::ExactSum => &["exact_sum_db"],
            ModelTag::Integral => &["integral_db"],
            ModelTag::Bounds => &["bound_lower_db", "bound_upper_db"],
            ModelTag::Boresight => &["boresight_lower_db", "boresight_upper_db"],
            ModelTag::Asymptotic => &["asymptotic_db"],
            ModelTag::UlaIntegral => &["ula_integral_db"],
            ModelTag::UlaClosed => &["ula_closed_db"],
            ModelTag::UlaAsymptotic => &["ula_asymptotic_db"],
            ModelTag::Upw => &["upw_db"],
        }
    }

    /// Default model set for a sweep variable, mirroring the usual
    /// size-sweep, range-sweep, and column-sweep comparisons.
    pub fn defaults_for(var: SweepVar) -> Vec<ModelTag> {
        match var {
            SweepVar::SurfaceSize => vec![
                ModelTag::ExactSum,
                ModelTag::Bounds,
                ModelTag::Asymptotic,
                ModelTag::Upw,
            ],
            SweepVar::UlaLength => vec![
                ModelTag::ExactSum,
                ModelTag::UlaClosed,
                ModelTag::UlaAsymptotic,
                ModelTag::Upw,
            ],
            SweepVar::TxRange => vec![ModelTag::ExactSum, ModelTag::Bounds, ModelTag::Upw],
        }
    }
}

/// One model evaluation destined for one CSV column: the linear-scale value,
/// or the reason it was skipped.
pub type CellOutcome = std::result::Result<SnrEstimate, String>;

/// Evaluates one model tag against a scenario, returning one outcome per
/// column. Precondition violations and quadrature failures surface as the
/// skip reason, never as a panic or an abort.
pub fn evaluate_model(
    tag: ModelTag,
    scenario: &Scenario,
    upw: Option<&UpwConfig>,
) -> Vec<CellOutcome> {
    let stringify = |e: Error| e.to_string();
    match tag {
        ModelTag::ExactSum => vec![Ok(snr_exact_sum(scenario))],
        ModelTag::Integral => vec![snr_integral_upa(scenario).map_err(stringify)],
        ModelTag::Bounds => match snr_bounds_general(scenario) {
            Ok(pair) => vec![Ok(pair.lower), Ok(pair.upper)],
            Err(e) => {
                let msg = e.to_string();
                vec![Err(msg.clone()), Err(msg)]
            }
        },
        ModelTag::Boresight => match snr_boresight(scenario) {
            Ok(BoresightSnr::Bounds(pair)) => vec![Ok(pair.lower), Ok(pair.upper)],
            Ok(BoresightSnr::Exact(est)) => vec![Ok(est.clone()), Ok(est)],
            Err(e) => {
                let msg = e.to_string();
                vec![Err(msg.clone()), Err(msg)]
            }
        },
        ModelTag::Asymptotic => vec![snr_asymptotic_upa(scenario).map_err(stringify)],
        ModelTag::UlaIntegral => vec![snr_ula_integral(scenario).map_err(stringify)],
        ModelTag::UlaClosed => vec![snr_ula_closed(scenario).map_err(stringify)],
        ModelTag::UlaAsymptotic => vec![snr_ula_asymptotic(scenario).map_err(stringify)],
        ModelTag::Upw => {
            let cfg = upw
                .copied()
                .unwrap_or_else(|| UpwConfig::aperture_matched(scenario));
            vec![Ok(snr_upw_with(scenario, &cfg))]
        }
    }
}

/// A sweep definition: base scenario, the varied scalar, its grid, and the
/// models to evaluate.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: ScenarioConfig,
    pub variable: SweepVar,
    pub grid: Vec<f64>,
    pub models: Vec<ModelTag>,
    /// Optional reference-gain override for the plane-wave baseline.
    pub upw: Option<UpwConfig>,
}

impl SweepSpec {
    pub fn new(
        base: ScenarioConfig,
        variable: SweepVar,
        grid: Vec<f64>,
        models: Vec<ModelTag>,
    ) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::Validation("sweep grid must be nonempty".to_string()));
        }
        if grid.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::Validation(
                "sweep grid values must be finite and positive".to_string(),
            ));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Validation(
                "sweep grid must be strictly increasing".to_string(),
            ));
        }
        if models.is_empty() {
            return Err(Error::Validation(
                "sweep model list must be nonempty".to_string(),
            ));
        }
        Ok(Self {
            base,
            variable,
            grid,
            models,
            upw: None,
        })
    }

    pub fn with_upw(mut self, upw: UpwConfig) -> Self {
        self.upw = Some(upw);
        self
    }
}

/// One table row: the requested grid value, the linear SNR per column
/// (`None` when skipped), and the realized-geometry plus per-model notes.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub cells: Vec<Option<f64>>,
    pub diagnostics: String,
}

/// Sweep output: column names (dB per model) plus one row per grid value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub variable: SweepVar,
    pub columns: Vec<&'static str>,
    pub rows: Vec<SweepRow>,
}

/// Nearest odd element count for a requested aperture extent, ties toward
/// the larger (denser) grid. Never below 1.
pub fn odd_count_for(extent: f64, spacing: f64) -> u32 {
    let ratio = extent / spacing;
    if !ratio.is_finite() || ratio <= 1.0 {
        return 1;
    }
    let half_steps = ((ratio - 1.0) / 2.0).round();
    let count = 2.0 * half_steps + 1.0;
    count.min(u32::MAX as f64) as u32
}

/// The config for one grid value, plus the realized-geometry note recorded
/// in the row diagnostics (no silent grid snapping).
fn config_for_value(spec: &SweepSpec, value: f64) -> (ScenarioConfig, String) {
    let mut cfg = spec.base;
    let d = cfg.spacing_m();
    match spec.variable {
        SweepVar::SurfaceSize => {
            let m = odd_count_for(value, d);
            cfg.my = m;
            cfg.mz = m;
            (
                cfg,
                format!(
                    "my={m};mz={m};realized_L={}",
                    super::csv::format_number(m as f64 * d)
                ),
            )
        }
        SweepVar::UlaLength => {
            let m = odd_count_for(value, d);
            cfg.mz = m;
            (
                cfg,
                format!(
                    "my={};mz={m};realized_Lz={}",
                    cfg.my,
                    super::csv::format_number(m as f64 * d)
                ),
            )
        }
        SweepVar::TxRange => {
            cfg.tx_r_m = value;
            (cfg, format!("my={};mz={}", cfg.my, cfg.mz))
        }
    }
}

fn build_row(spec: &SweepSpec, value: f64) -> SweepRow {
    let (cfg, mut diagnostics) = config_for_value(spec, value);
    let n_columns: usize = spec.models.iter().map(|m| m.columns().len()).sum();
    let scenario = match cfg.to_scenario() {
        Ok(sc) => sc,
        Err(e) => {
            diagnostics.push_str(&format!(";scenario: skipped ({e})"));
            return SweepRow {
                sweep_value: value,
                cells: vec![None; n_columns],
                diagnostics,
            };
        }
    };
    let mut cells = Vec::with_capacity(n_columns);
    for tag in &spec.models {
        let outcomes = evaluate_model(*tag, &scenario, spec.upw.as_ref());
        match &outcomes[0] {
            Err(reason) => {
                diagnostics.push_str(&format!(";{}: skipped ({reason})", tag.as_str()));
            }
            Ok(first) => {
                let mut notes: Vec<&str> = first.diagnostics().iter().map(String::as_str).collect();
                for outcome in outcomes.iter().skip(1).flatten() {
                    for note in outcome.diagnostics() {
                        if !notes.contains(&note.as_str()) {
                            notes.push(note);
                        }
                    }
                }
                for note in notes {
                    diagnostics.push_str(&format!(";{}: {note}", tag.as_str()));
                }
            }
        }
        for outcome in outcomes {
            cells.push(outcome.ok().map(|est| est.value()));
        }
    }
    SweepRow {
        sweep_value: value,
        cells,
        diagnostics,
    }
}

/// Runs the sweep. Rows are independent; evaluation fans out over the rayon
/// pool and the table is assembled in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    let columns: Vec<&'static str> = spec
        .models
        .iter()
        .flat_map(|m| m.columns().iter().copied())
        .collect();
    let rows: Vec<SweepRow> = spec.grid.par_iter().map(|&v| build_row(spec, v)).collect();
    Ok(SweepTable {
        variable: spec.variable,
        columns,
        rows,
    })
}

/// Per-model report for a single scenario evaluation.
#[derive(Debug, Clone)]
pub struct ReportEntry {
    /// Column-style label, e.g. `exact-sum` or `bound-lower`.
    pub label: String,
    pub outcome: CellOutcome,
}

/// Evaluates the requested models against a config file. Inapplicable models
/// are reported as skipped with their reason, never silently dropped.
pub fn run_scenario(
    config_path: &Path,
    models: &[ModelTag],
    upw: Option<&UpwConfig>,
) -> Result<Vec<ReportEntry>> {
    let cfg = ScenarioConfig::from_file(config_path)?;
    let scenario = cfg.to_scenario()?;
    let mut entries = Vec::new();
    for tag in models {
        let outcomes = evaluate_model(*tag, &scenario, upw);
        for (column, outcome) in tag.columns().iter().zip(outcomes) {
            entries.push(ReportEntry {
                label: column.trim_end_matches("_db").replace('_', "-"),
                outcome,
            });
        }
    }
    Ok(entries)
}

/// Parses a CLI grid spec: either `start:stop:steps` (inclusive, linear) or
/// a comma-separated list of values.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = |msg: String| Error::Validation(msg);
    let grid = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad(format!(
                "grid `{text}` must be `start:stop:steps` or a comma list"
            )));
        }
        let start: f64 = parts[0]
            .parse()
            .map_err(|_| bad(format!("invalid grid start `{}`", parts[0])))?;
        let stop: f64 = parts[1]
            .parse()
            .map_err(|_| bad(format!("invalid grid stop `{}`", parts[1])))?;
        let steps: usize = parts[2]
            .parse()
            .map_err(|_| bad(format!("invalid grid step count `{}`", parts[2])))?;
        if steps < 2 {
            return Err(bad("grid needs at least 2 steps".to_string()));
        }
        (0..steps)
            .map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64)
            .collect()
    } else {
        text.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| bad(format!("invalid grid value `{s}`")))
            })
            .collect::<Result<Vec<f64>>>()?
    };
    Ok(grid)
}
