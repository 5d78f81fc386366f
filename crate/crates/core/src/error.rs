use thiserror::Error;

use crate::noneuclid::Geometry;

/// Errors produced by the simulation and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid curve specification: {0}")]
    InvalidSpec(String),

    #[error("support function is not strictly convex: min(p + p'') = {min_radius:.3e}")]
    NonConvexSupport { min_radius: f64 },

    #[error("degenerate polyline: {0}")]
    DegeneratePolyline(String),

    #[error("operation requires a closed track")]
    OpenTrack,

    #[error("operation requires a simple closed track traversed once")]
    NotSimple,

    #[error("operation requires a strictly convex track (curvature > 0 everywhere)")]
    NotConvex,

    #[error("geometry mismatch: expected {expected:?}, found {found:?}")]
    GeometryMismatch { expected: Geometry, found: Geometry },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("probe angles (or their images) coincide on the circle")]
    CoincidentProbes,

    #[error("point correspondence is orientation reversing")]
    OrientationReversing,

    #[error("monodromy fit residual {residual:.3e} still above {tolerance:.1e} at {steps} steps")]
    FitResidual { residual: f64, tolerance: f64, steps: usize },

    #[error("no parabolic transition found for wheelbase up to {cap:.6}")]
    NoTransition { cap: f64 },

    #[error("monodromy is elliptic at wheelbase {ell}: no closed rear track")]
    EllipticMonodromy { ell: f64 },

    #[error("verification failed at wheelbase {ell}: {reason}")]
    VerificationFailed { ell: f64, reason: String },

    #[error("ideal point is not a nonzero null direction")]
    DegenerateStar,

    #[error("region has zero area")]
    ZeroArea,

    #[error("malformed configuration loop: {0}")]
    MalformedLoop(String),
}

impl Error {
    /// True for failures of a numerical check (as opposed to invalid input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::FitResidual { .. }
                | Error::NoTransition { .. }
                | Error::VerificationFailed { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
