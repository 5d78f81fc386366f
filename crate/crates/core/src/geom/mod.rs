//! Planar front tracks, Green's-theorem areas, support functions and wave fronts.

mod spec;
mod support;
mod track;

pub use spec::{make_curve, CurveSpec, ShapeSpec};
pub use support::{
    isoperimetric_defect, support_function, support_function_about, support_length_area,
    wavefront, SupportFunction, DEFAULT_FOURIER_ORDER, DEFAULT_GRID,
};
pub use track::{FrontTrack, TrackPoint};

use crate::error::{Error, Result};
use crate::noneuclid::Geometry;
use crate::quad::gauss_legendre_adaptive;

/// A point (or free vector) in the plane.
pub type Point = nalgebra::Vector2<f64>;

/// Unit vector at angle `theta`.
#[inline]
pub fn unit(theta: f64) -> Point {
    Point::new(theta.cos(), theta.sin())
}

/// Planar cross product `a × b`.
#[inline]
pub fn cross(a: &Point, b: &Point) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Area and low-order moments of the region bounded by a closed track.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaMoments {
    /// Signed area.
    pub area: f64,
    /// Area centroid.
    pub centroid: Point,
    /// Mean-square distance of points of the region from the centroid.
    pub mean_square_radius: f64,
}

/// Integrates `f(point)` against `dt` over the whole track, split at its
/// breakpoints so every panel sees a smooth integrand.
pub(crate) fn integrate_track<F: FnMut(f64, &TrackPoint) -> f64>(track: &FrontTrack, mut f: F) -> f64 {
    let bps = track.breakpoints();
    let total = track.total_length();
    // resolve the tightest bends as well as the overall length
    let kabs = track.max_curvature().abs().max(track.min_curvature().abs());
    let panel_len = (track.period() / 256.0).min(0.25 / kabs);
    let mut sum = 0.0;
    for w in bps.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a <= 0.0 {
            continue;
        }
        let panels = ((b - a) / panel_len).ceil().max(4.0) as usize;
        // Gauss nodes are interior, so piece boundaries never get evaluated
        sum += gauss_legendre_adaptive(a, b, panels, 1e-12 * (b - a), |t| {
            let tp = track.eval(t);
            f(t, &tp)
        });
    }
    debug_assert!(bps.last().map_or(true, |&l| (l - total).abs() < 1e-9 * total.max(1.0)));
    sum
}

/// Green's-theorem signed area `½∮(x dy − y dx)` of a closed Euclidean track.
pub fn enclosed_area(track: &FrontTrack) -> Result<f64> {
    require_euclidean_closed(track)?;
    Ok(0.5
        * integrate_track(track, |_, p| {
            p.position.x * p.tangent_angle.sin() - p.position.y * p.tangent_angle.cos()
        }))
}

/// Area, centroid and mean-square radius of the region bounded by a closed track.
pub fn area_moments(track: &FrontTrack) -> Result<AreaMoments> {
    require_euclidean_closed(track)?;
    let area = enclosed_area(track)?;
    if area.abs() < 1e-14 * track.diameter().powi(2).max(1e-300) {
        return Err(Error::ZeroArea);
    }
    // ∬x dA = ∮ x²/2 dy, ∬y dA = −∮ y²/2 dx, ∬x² dA = ∮ x³/3 dy, ∬y² dA = −∮ y³/3 dx
    let mx = integrate_track(track, |_, p| 0.5 * p.position.x.powi(2) * p.tangent_angle.sin());
    let my = -integrate_track(track, |_, p| 0.5 * p.position.y.powi(2) * p.tangent_angle.cos());
    let jxx = integrate_track(track, |_, p| p.position.x.powi(3) / 3.0 * p.tangent_angle.sin());
    let jyy = -integrate_track(track, |_, p| p.position.y.powi(3) / 3.0 * p.tangent_angle.cos());
    let centroid = Point::new(mx / area, my / area);
    let mean_square_radius = (jxx + jyy) / area - centroid.norm_squared();
    Ok(AreaMoments { area, centroid, mean_square_radius })
}

fn require_euclidean_closed(track: &FrontTrack) -> Result<()> {
    if track.geometry() != Geometry::Euclidean {
        return Err(Error::GeometryMismatch { expected: Geometry::Euclidean, found: track.geometry() });
    }
    if !track.is_closed() {
        return Err(Error::OpenTrack);
    }
    Ok(())
}
