//! Prytz (hatchet) planimeter.
//!
//! The tracer `F` runs once around a closed boundary while the chisel `R`
//! obeys the no-slip constraint. The loop is closed by rotating the rod about
//! the tracer's rest point; the rotation angle `δ` gives the estimate `δℓ²`,
//! and `A_F − A_R = δℓ²` holds exactly for the closed-up chisel path.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate_steering, loop_identity, BikeParams, ConfigLoop, ConfigSample, LoopPiece};
use crate::error::{Error, Result};
use crate::geom::{area_moments, make_curve, unit, CurveSpec, FrontTrack, Point};
use crate::noneuclid::Geometry;
use crate::quad::simpson;

/// Where the rod starts and how it is oriented.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StartConvention {
    /// Tracer at the base, chisel on the inward normal (`α₀ = ±π/2` by orientation).
    InwardNormal,
    /// Tracer at the base, rod on the line through the centroid, chisel on the centroid side.
    ThroughCentroid,
    /// Tracer at the base, rod direction `R → F` at the given angle.
    FixedDirection { angle: f64 },
    /// Tracer starts at the centroid with the rod pointing at the base, runs
    /// straight out to the base, around the boundary and straight back.
    Centroid,
}

impl Default for StartConvention {
    fn default() -> Self {
        StartConvention::InwardNormal
    }
}

/// Outcome of one planimeter measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanimeterReading {
    pub ell: f64,
    /// Track parameter of the base point.
    pub base_param: f64,
    pub base_point: Point,
    /// Tracer position at start and finish (the base, or the centroid).
    pub rest_point: Point,
    pub convention: StartConvention,
    /// Initial rod direction `R → F`.
    pub initial_direction: f64,
    /// Closing rotation angle `δ` (final minus initial rod direction).
    pub deflection: f64,
    /// `δℓ²`.
    pub estimate: f64,
    pub exact_area: f64,
    /// Mean-square distance of the region's points from its centroid.
    pub mean_square_radius: f64,
    /// `A_F(1 + R²/(2ℓ²))`.
    pub correction_estimate: f64,
    /// `estimate − correction_estimate`.
    pub residual_error: f64,
    /// Signed area of the closed-up chisel path.
    pub rear_area: f64,
    /// `estimate − (A_F − A_R)`; zero up to quadrature error.
    pub identity_gap: f64,
    /// `lhs − rhs` of the configuration-loop area identity on the same loop.
    pub loop_gap: f64,
}

/// Area centroid of the region bounded by a closed track.
pub fn centroid(track: &FrontTrack) -> Result<Point> {
    Ok(area_moments(track)?.centroid)
}

fn require_region(track: &FrontTrack) -> Result<()> {
    if track.geometry() != Geometry::Euclidean {
        return Err(Error::GeometryMismatch { expected: Geometry::Euclidean, found: track.geometry() });
    }
    if !track.is_closed() {
        return Err(Error::OpenTrack);
    }
    if track.traversals() != 1 || !track.is_simple() {
        return Err(Error::NotSimple);
    }
    Ok(())
}

/// Rod carried along one front piece from rod direction `theta0`: the final
/// (unwrapped) rod direction and the sampled configuration-loop piece.
struct Carried {
    theta_end: f64,
    piece: LoopPiece,
}

fn carry(track: &FrontTrack, ell: f64, theta0: f64, steps: usize) -> Result<Carried> {
    let params = BikeParams::new(ell).with_steps(steps);
    let alpha0 = track.tangent_angle(0.0) - theta0;
    let sol = integrate_steering(track, &params, alpha0)?;
    let h = sol.step();
    let samples: Vec<ConfigSample> = sol
        .alphas()
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let tp = track.eval(sol.time(i));
            let theta = tp.tangent_angle - a;
            let u = unit(theta);
            let r = tp.position - u * ell;
            ConfigSample { x: r.x, y: r.y, theta, dx: a.cos() * u.x, dy: a.cos() * u.y, dtheta: a.sin() / ell }
        })
        .collect();
    let theta_end = samples.last().unwrap().theta;
    // keep θ continuous with the caller's unwrapped value
    let shift = theta0 - samples[0].theta;
    let samples = samples.into_iter().map(|s| ConfigSample { theta: s.theta + shift, ..s }).collect();
    Ok(Carried { theta_end: theta_end + shift, piece: LoopPiece { step: h, samples } })
}

/// Rotation of the rod about the fixed tracer `pivot` from `from` to `to`.
fn closing_arc(pivot: Point, ell: f64, from: f64, to: f64, n: usize) -> LoopPiece {
    let samples = (0..=n)
        .map(|i| {
            let s = i as f64 / n as f64;
            let theta = from + (to - from) * s;
            let dtheta = to - from;
            let u = unit(theta);
            let r = pivot - u * ell;
            ConfigSample { x: r.x, y: r.y, theta, dx: ell * theta.sin() * dtheta, dy: -ell * theta.cos() * dtheta, dtheta }
        })
        .collect();
    LoopPiece { step: 1.0 / n as f64, samples }
}

fn rear_area(pieces: &[LoopPiece]) -> f64 {
    pieces
        .iter()
        .map(|p| {
            let v: Vec<f64> = p.samples.iter().map(|s| s.x * s.dy - s.y * s.dx).collect();
            0.5 * simpson(&v, p.step)
        })
        .sum()
}

/// Steps per unit length for auxiliary straight pieces.
const LINE_STEPS_PER_LENGTH: f64 = 1024.0;

/// Simulates one measurement with `steps` RK4 steps around the boundary.
pub fn measure_with(track: &FrontTrack, ell: f64, base_param: f64, convention: StartConvention, steps: usize) -> Result<PlanimeterReading> {
    Ok(measure_traced(track, ell, base_param, convention, steps)?.0)
}

/// Tracer and chisel paths of a measurement, closing arc included.
#[derive(Debug, Clone, PartialEq)]
pub struct TracedPaths {
    pub tracer: Vec<Point>,
    pub chisel: Vec<Point>,
    /// Index in `chisel` where the closing arc begins.
    pub arc_start: usize,
}

/// Like [`measure_with`], also returning the traced paths.
pub fn measure_traced(
    track: &FrontTrack,
    ell: f64,
    base_param: f64,
    convention: StartConvention,
    steps: usize,
) -> Result<(PlanimeterReading, TracedPaths)> {
    require_region(track)?;
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(Error::InvalidParameter(format!("rod length must be positive, got {ell}")));
    }
    let moments = area_moments(track)?;
    let boundary = track.rebased(base_param)?;
    let base = boundary.position(0.0);
    let tangent = boundary.tangent_angle(0.0);
    let g = moments.centroid;
    let mut pieces = Vec::new();
    let (rest, theta0, theta_end) = match convention {
        StartConvention::Centroid => {
            let out = base - g;
            let len = out.norm();
            if len < 1e-12 * track.diameter() {
                return Err(Error::InvalidParameter("base point coincides with the centroid".into()));
            }
            let dir = out.y.atan2(out.x);
            let line_steps = ((len * LINE_STEPS_PER_LENGTH).ceil() as usize).max(16);
            let outward = make_curve(&CurveSpec::line(g, dir, len))?;
            let inward = make_curve(&CurveSpec::line(base, dir + PI, len))?;
            let a = carry(&outward, ell, dir, line_steps)?;
            let b = carry(&boundary, ell, a.theta_end, steps)?;
            let c = carry(&inward, ell, b.theta_end, line_steps)?;
            let end = c.theta_end;
            pieces.extend([a.piece, b.piece, c.piece]);
            (g, dir, end)
        }
        other => {
            let theta0 = match other {
                StartConvention::InwardNormal => tangent - moments.area.signum() * PI / 2.0,
                StartConvention::ThroughCentroid => {
                    let d = base - g;
                    d.y.atan2(d.x)
                }
                StartConvention::FixedDirection { angle } => angle,
                StartConvention::Centroid => unreachable!(),
            };
            let b = carry(&boundary, ell, theta0, steps)?;
            let end = b.theta_end;
            pieces.push(b.piece);
            (base, theta0, end)
        }
    };
    let deflection = theta_end - theta0;
    pieces.push(closing_arc(rest, ell, theta_end, theta0, 512));
    let a_r = rear_area(&pieces);
    let mut paths = TracedPaths { tracer: Vec::new(), chisel: Vec::new(), arc_start: 0 };
    for (i, piece) in pieces.iter().enumerate() {
        if i + 1 == pieces.len() {
            paths.arc_start = paths.chisel.len();
        }
        for smp in &piece.samples {
            let r = Point::new(smp.x, smp.y);
            paths.chisel.push(r);
            paths.tracer.push(r + unit(smp.theta) * ell);
        }
    }
    let identity = loop_identity(&ConfigLoop::from_pieces(ell, pieces))?;
    let estimate = deflection * ell * ell;
    let exact = moments.area;
    let r2 = moments.mean_square_radius;
    let correction = exact * (1.0 + r2 / (2.0 * ell * ell));
    let reading = PlanimeterReading {
        ell,
        base_param,
        base_point: base,
        rest_point: rest,
        convention,
        initial_direction: theta0,
        deflection,
        estimate,
        exact_area: exact,
        mean_square_radius: r2,
        correction_estimate: correction,
        residual_error: estimate - correction,
        rear_area: a_r,
        identity_gap: estimate - (exact - a_r),
        loop_gap: identity.lhs - identity.rhs,
    };
    Ok((reading, paths))
}

/// One measurement with the default step count.
pub fn measure(track: &FrontTrack, ell: f64, base_param: f64, convention: StartConvention) -> Result<PlanimeterReading> {
    measure_with(track, ell, base_param, convention, crate::dynamics::DEFAULT_STEPS)
}

/// Rod deflection along any track (open or closed, any turning), from rod
/// direction `theta0`; unwrapped.
pub fn deflection(track: &FrontTrack, ell: f64, theta0: f64, steps: usize) -> Result<f64> {
    Ok(carry(track, ell, theta0, steps)?.theta_end - theta0)
}

/// One row of an error scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub ell: f64,
    pub base_param: f64,
    pub alpha: f64,
    pub estimate: f64,
    pub exact: f64,
    pub correction: f64,
    pub residual: f64,
    pub centroid_start: bool,
}

impl From<&PlanimeterReading> for ScanRow {
    fn from(r: &PlanimeterReading) -> Self {
        ScanRow {
            ell: r.ell,
            base_param: r.base_param,
            alpha: r.deflection,
            estimate: r.estimate,
            exact: r.exact_area,
            correction: r.correction_estimate,
            residual: r.residual_error,
            centroid_start: r.convention == StartConvention::Centroid,
        }
    }
}

/// Residuals over every `(ℓ, base)` cell with the given convention, followed
/// for each cell by the centroid-start measurement through the same base
/// (unless the convention already is the centroid start). Cells run in parallel.
pub fn error_scan(track: &FrontTrack, lengths: &[f64], bases: &[f64], convention: StartConvention) -> Result<Vec<ScanRow>> {
    require_region(track)?;
    let mut cells = Vec::new();
    for &ell in lengths {
        for &b in bases {
            cells.push((ell, b, convention));
            if convention != StartConvention::Centroid {
                cells.push((ell, b, StartConvention::Centroid));
            }
        }
    }
    cells
        .par_iter()
        .map(|&(ell, b, conv)| measure(track, ell, b, conv).map(|r| ScanRow::from(&r)))
        .collect()
}

/// Least-squares slope of `log |residual|` against `log ℓ`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.abs().ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_circle() -> FrontTrack {
        make_curve(&CurveSpec::circle(1.0)).unwrap()
    }

    #[test]
    fn closed_loop_identity_is_exact() {
        let e = make_curve(&CurveSpec::ellipse(2.0, 1.0).with_center(Point::new(0.5, -0.3))).unwrap();
        for conv in [
            StartConvention::InwardNormal,
            StartConvention::ThroughCentroid,
            StartConvention::FixedDirection { angle: 1.0 },
            StartConvention::Centroid,
        ] {
            let r = measure(&e, 3.0, 1.3, conv).unwrap();
            assert!(r.identity_gap.abs() < 1e-8 * r.exact_area, "{conv:?}: {}", r.identity_gap);
            assert!(r.loop_gap.abs() < 1e-8 * r.exact_area, "{conv:?}: {}", r.loop_gap);
        }
    }

    #[test]
    fn long_rod_on_unit_circle() {
        let r = measure(&unit_circle(), 10.0, 0.0, StartConvention::Centroid).unwrap();
        assert_relative_eq!(r.mean_square_radius, 0.5, epsilon = 1e-9);
        assert_relative_eq!(r.estimate, PI * (1.0 + 1.0 / 400.0), max_relative = 2e-3);
        let far = measure(&unit_circle(), 100.0, 0.0, StartConvention::Centroid).unwrap();
        assert!(far.residual_error.abs() < r.residual_error.abs() * 1e-2);
    }

    #[test]
    fn there_and_back_cancels() {
        let arc = make_curve(&CurveSpec::ellipse(2.0, 1.0)).unwrap();
        let theta0 = 0.4;
        let out = carry(&arc, 1.5, theta0, 4096).unwrap();
        let back = carry(&arc.reversed(), 1.5, out.theta_end, 4096).unwrap();
        assert!((back.theta_end - theta0).abs() < 1e-9);
    }

    #[test]
    fn reversal_negates_deflection() {
        let e = make_curve(&CurveSpec::ellipse(1.5, 1.0)).unwrap();
        let fwd = measure(&e, 4.0, 0.0, StartConvention::Centroid).unwrap();
        let rev = measure(&e.reversed(), 4.0, 0.0, StartConvention::Centroid).unwrap();
        assert_relative_eq!(fwd.exact_area, -rev.exact_area, epsilon = 1e-12);
        assert_relative_eq!(fwd.deflection, -rev.deflection, max_relative = 1e-9);
    }

    #[test]
    fn large_rod_gives_small_positive_turn() {
        let e = make_curve(&CurveSpec::ellipse(2.0, 1.0)).unwrap();
        let ell = 2.0 * (2.0f64).sqrt() + 0.1;
        for b in [0.0, 2.0, 4.0] {
            let r = measure(&e, ell, b, StartConvention::InwardNormal).unwrap();
            assert!(r.deflection > 0.0 && r.deflection < 2.0 * PI);
        }
    }

    #[test]
    fn centroids() {
        let c = make_curve(&CurveSpec::circle(1.0).with_center(Point::new(3.0, -1.0))).unwrap();
        let g = centroid(&c).unwrap();
        assert!((g - Point::new(3.0, -1.0)).norm() < 1e-12);
        let e = make_curve(&CurveSpec::ellipse(2.0, 1.0)).unwrap();
        assert!(centroid(&e).unwrap().norm() < 1e-12);
        let tri = make_curve(&CurveSpec::polyline(vec![Point::new(0.0, 0.0), Point::new(3.0, 0.0), Point::new(0.0, 3.0)])).unwrap();
        assert!((centroid(&tri).unwrap() - Point::new(1.0, 1.0)).norm() < 1e-4);
    }

    #[test]
    fn rejects_open_and_nonsimple() {
        let line = make_curve(&CurveSpec::line(Point::zeros(), 0.0, 1.0)).unwrap();
        assert!(matches!(measure(&line, 1.0, 0.0, StartConvention::InwardNormal), Err(Error::OpenTrack)));
        let twice = make_curve(&CurveSpec::circle(1.0).with_traversals(2)).unwrap();
        assert!(matches!(measure(&twice, 1.0, 0.0, StartConvention::InwardNormal), Err(Error::NotSimple)));
    }

    #[test]
    fn scan_single_cell_matches_measure() {
        let c = unit_circle();
        let rows = error_scan(&c, &[7.0], &[0.5], StartConvention::Centroid).unwrap();
        assert_eq!(rows.len(), 1);
        let m = measure(&c, 7.0, 0.5, StartConvention::Centroid).unwrap();
        assert_eq!(rows[0], ScanRow::from(&m));
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [5.0, 10.0, 20.0].iter().map(|&l: &f64| (l, 3.0 * l.powi(-3))).collect();
        assert_relative_eq!(log_log_slope(&pts), -3.0, epsilon = 1e-12);
    }
}
