//! Bicycle kinematics on a prescribed front-wheel track.
//!
//! The crate integrates the steering-angle equation of a bicycle modelled as a
//! moving segment of length `ell`, reconstructs the rear-wheel track (with its
//! cusps and signed length), computes the bicycle monodromy as a Möbius map of
//! the circle, simulates the Prytz hatchet planimeter and checks Menzin's
//! conjecture together with its spherical and hyperbolic analogues.
//!
//! Module map:
//!
//! * [`geom`]: front tracks, signed areas, support functions, wave fronts.
//! * [`dynamics`]: steering ODE, rear tracks, the configuration-loop area identity.
//! * [`moebius`]: Möbius maps of the circle, monodromy fitting and classification.
//! * [`planimeter`]: hatchet planimeter measurements and error scans.
//! * [`menzin`]: critical wheelbase, Menzin bound, isoperimetric defect bounds.
//! * [`noneuclid`]: spherical and hyperbolic steering, developments into H².
//! * [`export`]: CSV and SVG writers.

pub mod dynamics;
pub mod error;
pub mod export;
pub mod geom;
pub mod menzin;
pub mod moebius;
pub mod noneuclid;
pub mod planimeter;
pub(crate) mod quad;

pub use dynamics::{
    integrate_steering, loop_identity, rear_track, signed_rear_length, tractrix_area, BikeParams,
    ConfigLoop, LoopIdentity, RearTrack, SteeringSolution,
};
pub use error::{Error, Result};
pub use geom::{
    enclosed_area, isoperimetric_defect, make_curve, support_function, support_length_area,
    wavefront, CurveSpec, FrontTrack, Point, ShapeSpec, SupportFunction,
};
pub use menzin::{critical_length, defect_bound, menzin_verify, min_osculating_radius, MenzinReport};
pub use moebius::{
    classify, fixed_points, moebius_from_three, monodromy, monodromy_matrix, MoebiusClass,
    MoebiusMap, MonodromyReport,
};
pub use noneuclid::{develop_hyperbolic, hpz_verify, stargazing_angle, Geometry, HCurve};
pub use planimeter::{centroid, error_scan, measure, PlanimeterReading, StartConvention};
