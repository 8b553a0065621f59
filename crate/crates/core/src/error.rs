use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
///
/// Input errors (bad shapes, bad parameters, malformed meshes) and numerical
/// failures (non-convergence, violated stability bounds) are kept apart so the
/// command line front end can map them to distinct exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("tensor lies in the degenerate set (zero or top eigenvalues coincide)")]
    DegenerateTensor,

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("director sample {index} has length {length}, expected unit length")]
    NonUnitDirector { index: usize, length: f64 },

    #[error("degenerate parameterization: {0}")]
    DegenerateParameter(String),

    #[error("surface is not C^1,1; curvature is unbounded")]
    NotC11,

    #[error("unsupported shape pair for symmetric difference: {0}")]
    UnsupportedPair(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("descent did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("stability check failed: {0}")]
    StabilityViolation(String),

    #[error("normal is parallel to the alignment direction")]
    DegenerateNormal,

    #[error("winding degree did not settle after {refinements} loop refinements (raw {raw})")]
    NonConvergedDegree { refinements: usize, raw: f64 },

    #[error("tangential projection of the defect profile vanishes at {0:?}")]
    DegenerateProjection([f64; 3]),

    #[error("region construction failed: {0}")]
    Region(String),

    #[error("operation not supported for this surface: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::StabilityViolation(_)
                | Error::NonConvergedDegree { .. }
                | Error::DegenerateProjection(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
