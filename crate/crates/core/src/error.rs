use core::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::evolve::MomentSeries;
use crate::packets::Family;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("{what} did not reach the requested accuracy")]
    NonConvergence { what: &'static str },

    #[error("quadrature tolerance not met: best estimate {best}, error estimate {error_estimate:e} > {tol:e}")]
    ToleranceNotMet { best: Complex64, error_estimate: f64, tol: f64 },

    #[error("grid too small: truncated probability {truncated:e}")]
    GridTooSmall { truncated: f64 },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(u32),

    #[error("operation not defined for the {0} family")]
    UnsupportedFamily(Family),

    #[error("minimum lies within two samples of the series end")]
    InsufficientSampling,

    #[error("resolution insufficient: refinements differ by {difference:e} > {tol:e}")]
    ResolutionInsufficient { difference: f64, tol: f64 },

    #[error("solver stopped at tau = {}: {fault}", partial.records.last().map_or(0.0, |r| r.tau))]
    Solver { fault: SolverFault, partial: MomentSeries },
}

/// Reason a time-stepping run was aborted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverFault {
    /// Amplitude in the outer 5% of the box exceeded the allowed fraction of the peak.
    BoundaryContamination { ratio: f64 },
    /// Norm moved away from one by more than the allowed drift.
    NormDrift { norm: f64 },
}

impl fmt::Display for SolverFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverFault::BoundaryContamination { ratio } => {
                write!(f, "boundary contamination (edge/peak amplitude {ratio:e})")
            }
            SolverFault::NormDrift { norm } => write!(f, "norm drift (norm {norm})"),
        }
    }
}

pub(crate) fn domain(what: &'static str, value: f64) -> Error {
    Error::Domain { what, value }
}
