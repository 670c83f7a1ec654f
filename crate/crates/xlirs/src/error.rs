//! Error type shared by the whole crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Construction-time validation of a geometry, node, or scenario failed.
    #[error("validation error: {0}")]
    Validation(String),

    /// An element index fell outside the surface grid.
    #[error("element index ({i_y}, {i_z}) out of range for {m_y}x{m_z} grid")]
    IndexOutOfRange {
        i_y: i64,
        i_z: i64,
        m_y: u32,
        m_z: u32,
    },

    /// A phase profile or vector did not match the geometry it was used with.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A special-function argument left the real domain of the integrand.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature exhausted its refinement budget. The best estimate
    /// and its error bound are still reported.
    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    QuadratureNonConvergence { estimate: f64, error_bound: f64 },

    /// A model's precondition does not hold for the given scenario.
    #[error("model not applicable: {0}")]
    NotApplicable(String),

    /// A scenario config file could not be parsed.
    #[error("config parse error at line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    /// File I/O failed; the path is kept for context.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
