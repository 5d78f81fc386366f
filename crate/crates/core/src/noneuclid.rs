//! Spherical and hyperbolic bicycles.
//!
//! Curves in H² live in the hyperboloid model `x₀² − x₁² − x₂² = 1`, `x₀ > 0`,
//! with the Minkowski product `⟨x, y⟩ = x₀y₀ − x₁y₁ − x₂y₂`. Ideal points
//! (stars) are null directions normalized to `x₀ = 1`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::BikeParams;
use crate::error::{Error, Result};
use crate::geom::{integrate_track, FrontTrack, Point};
use crate::moebius::{monodromy, MoebiusClass, MonodromyReport};
use crate::quad::{rk4_step, wrap_pi};

/// Ambient geometry of the front track.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    #[default]
    Euclidean,
    Spherical,
    Hyperbolic,
}

impl Geometry {
    /// Geodesic curvature of a circle of radius `ell`: `1/ℓ`, `cot ℓ` or `coth ℓ`.
    pub fn coefficient(self, ell: f64) -> f64 {
        match self {
            Geometry::Euclidean => 1.0 / ell,
            Geometry::Spherical => ell.cos() / ell.sin(),
            Geometry::Hyperbolic => 1.0 / ell.tanh(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Geometry::Euclidean => "euclidean",
            Geometry::Spherical => "spherical",
            Geometry::Hyperbolic => "hyperbolic",
        }
    }
}

impl std::str::FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" | "plane" => Ok(Geometry::Euclidean),
            "spherical" | "sphere" => Ok(Geometry::Spherical),
            "hyperbolic" | "h2" => Ok(Geometry::Hyperbolic),
            other => Err(Error::InvalidParameter(format!("unknown geometry '{other}'"))),
        }
    }
}

impl std::fmt::Display for Geometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

pub type Vec3 = [f64; 3];

/// Minkowski product `x₀y₀ − x₁y₁ − x₂y₂`.
pub fn minkowski(x: &Vec3, y: &Vec3) -> f64 {
    x[0] * y[0] - x[1] * y[1] - x[2] * y[2]
}

fn axpy(x: &Vec3, s: f64, y: &Vec3) -> Vec3 {
    [x[0] + s * y[0], x[1] + s * y[1], x[2] + s * y[2]]
}

fn scale(x: &Vec3, s: f64) -> Vec3 {
    [x[0] * s, x[1] * s, x[2] * s]
}

/// Point, unit tangent and unit normal of a curve in the hyperboloid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HFrame {
    pub p: Vec3,
    pub t: Vec3,
    pub n: Vec3,
}

impl HFrame {
    /// `P = (1,0,0)`, `T = (0,1,0)`, `N = (0,0,1)`.
    pub fn standard() -> Self {
        HFrame { p: [1.0, 0.0, 0.0], t: [0.0, 1.0, 0.0], n: [0.0, 0.0, 1.0] }
    }

    /// Gram–Schmidt in the Minkowski metric, keeping `P` first.
    fn orthonormalized(mut self) -> Self {
        self.p = scale(&self.p, 1.0 / minkowski(&self.p, &self.p).sqrt());
        self.t = axpy(&self.t, -minkowski(&self.t, &self.p), &self.p);
        self.t = scale(&self.t, 1.0 / (-minkowski(&self.t, &self.t)).sqrt());
        self.n = axpy(&self.n, -minkowski(&self.n, &self.p), &self.p);
        self.n = axpy(&self.n, minkowski(&self.n, &self.t), &self.t);
        self.n = scale(&self.n, 1.0 / (-minkowski(&self.n, &self.n)).sqrt());
        self
    }

    /// Largest deviation of the frame's Gram matrix from `diag(1, −1, −1)`.
    pub fn orthonormality_error(&self) -> f64 {
        [
            (minkowski(&self.p, &self.p) - 1.0).abs(),
            (minkowski(&self.t, &self.t) + 1.0).abs(),
            (minkowski(&self.n, &self.n) + 1.0).abs(),
            minkowski(&self.p, &self.t).abs(),
            minkowski(&self.p, &self.n).abs(),
            minkowski(&self.t, &self.n).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Hyperbolic distance between base points.
    pub fn distance_to(&self, other: &HFrame) -> f64 {
        minkowski(&self.p, &other.p).max(1.0).acosh()
    }

    /// Largest componentwise difference of the two frames.
    pub fn frame_distance(&self, other: &HFrame) -> f64 {
        let mut d: f64 = 0.0;
        for (a, b) in [(&self.p, &other.p), (&self.t, &other.t), (&self.n, &other.n)] {
            for i in 0..3 {
                d = d.max((a[i] - b[i]).abs());
            }
        }
        d
    }
}

/// A curve in H² parameterized by arc length, sampled on a uniform grid
/// together with its Frenet frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HCurve {
    pub times: Vec<f64>,
    pub frames: Vec<HFrame>,
    pub curvature: Vec<f64>,
}

impl HCurve {
    pub fn step(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    pub fn points(&self) -> Vec<Vec3> {
        self.frames.iter().map(|f| f.p).collect()
    }

    pub fn first(&self) -> &HFrame {
        &self.frames[0]
    }

    pub fn last(&self) -> &HFrame {
        self.frames.last().expect("curve has samples")
    }

    /// Worst frame orthonormality error over all samples.
    pub fn max_orthonormality_error(&self) -> f64 {
        self.frames.iter().map(HFrame::orthonormality_error).fold(0.0, f64::max)
    }

    /// Distance between the initial and final frames (0 for a C¹-closed curve).
    pub fn closure_gap(&self) -> f64 {
        self.first().frame_distance(self.last())
    }

    /// Points projected to the Poincaré disk, `(x₁, x₂)/(1 + x₀)`.
    pub fn poincare(&self) -> Vec<Point> {
        self.frames.iter().map(|f| poincare_disk(&f.p)).collect()
    }
}

pub fn poincare_disk(p: &Vec3) -> Point {
    Point::new(p[1] / (1.0 + p[0]), p[2] / (1.0 + p[0]))
}

/// Develops the curvature function `k` on `[0, length]` into H² starting
/// from the standard frame: RK4 on `P′ = T`, `T′ = P + kN`, `N′ = −kT`,
/// with the frame re-orthonormalized after every step.
pub fn develop_hyperbolic<K: Fn(f64) -> f64>(k: K, length: f64, steps: usize) -> HCurve {
    develop_from(k, length, steps, HFrame::standard())
}

pub fn develop_from<K: Fn(f64) -> f64>(k: K, length: f64, steps: usize, start: HFrame) -> HCurve {
    let steps = steps.max(1);
    let h = length / steps as f64;
    let rhs = |t: f64, f: &HFrame| -> HFrame {
        let kt = k(t);
        HFrame { p: f.t, t: axpy(&f.p, kt, &f.n), n: scale(&f.t, -kt) }
    };
    let add = |f: &HFrame, s: f64, d: &HFrame| HFrame {
        p: axpy(&f.p, s, &d.p),
        t: axpy(&f.t, s, &d.t),
        n: axpy(&f.n, s, &d.n),
    };
    let mut frames = Vec::with_capacity(steps + 1);
    let mut curvature = Vec::with_capacity(steps + 1);
    let mut f = start.orthonormalized();
    frames.push(f);
    curvature.push(k(0.0));
    for i in 0..steps {
        let t = i as f64 * h;
        let d1 = rhs(t, &f);
        let d2 = rhs(t + 0.5 * h, &add(&f, 0.5 * h, &d1));
        let d3 = rhs(t + 0.5 * h, &add(&f, 0.5 * h, &d2));
        let d4 = rhs(t + h, &add(&f, h, &d3));
        let incr = add(&add(&d1, 2.0, &d2), 2.0, &add(&d3, 0.5, &d4));
        f = add(&f, h / 6.0, &incr).orthonormalized();
        frames.push(f);
        curvature.push(k(t + h));
    }
    HCurve { times: (0..=steps).map(|i| i as f64 * h).collect(), frames, curvature }
}

/// Develops a planar (or any) front track by its curvature function.
pub fn develop_track(track: &FrontTrack, steps_per_traversal: usize) -> HCurve {
    let steps = steps_per_traversal * track.traversals() as usize;
    develop_hyperbolic(|t| track.curvature(t), track.total_length(), steps)
}

/// The ideal point giving stargazing angle `alpha0` at the standard frame.
pub fn star_for_initial_angle(alpha0: f64) -> Vec3 {
    [1.0, -alpha0.cos(), alpha0.sin()]
}

/// Angle at each sample between the tangent and the geodesic ray arriving
/// from `star`, unwrapped; `α = 0` when the star is straight behind.
/// Satisfies `α′ = k − sin α`.
pub fn stargazing_angle(curve: &HCurve, star: &Vec3) -> Result<Vec<f64>> {
    let norm = star[1].hypot(star[2]);
    if !(star[0] > 0.0) || norm == 0.0 || (minkowski(star, star)).abs() > 1e-9 * star[0] * star[0] {
        return Err(Error::DegenerateStar);
    }
    let a = scale(star, 1.0 / star[0]);
    let mut out: Vec<f64> = Vec::with_capacity(curve.frames.len());
    for f in &curve.frames {
        let d = axpy(&a, -minkowski(&a, &f.p), &f.p);
        let angle = (-minkowski(&d, &f.n)).atan2(minkowski(&d, &f.t));
        let unwrapped = match out.last() {
            Some(prev) => prev + wrap_pi(angle - prev),
            None => angle,
        };
        out.push(unwrapped);
    }
    Ok(out)
}

/// Hypothesis check and monodromy class for the non-Euclidean Menzin analogue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HpzReport {
    pub geometry: Geometry,
    pub ell: f64,
    /// Area enclosed on the left of the positively oriented track.
    pub area: f64,
    /// `2π(1 − cos ℓ)` on the sphere, `2π(cosh ℓ − 1)` in H².
    pub threshold: f64,
    /// Convexity and area hypotheses both hold.
    pub applicable: bool,
    pub reason: Option<String>,
    pub class: MoebiusClass,
    pub trace: f64,
    pub monodromy: MonodromyReport,
    /// `true` unless the hypotheses hold and the class is not hyperbolic.
    pub confirmed: bool,
}

/// Area by Gauss–Bonnet for a simple closed track of turning number one:
/// `2π − ∫k` on the sphere, `∫k − 2π` in H².
pub fn gauss_bonnet_area(track: &FrontTrack) -> Result<f64> {
    if !track.is_closed() {
        return Err(Error::OpenTrack);
    }
    let total_k = integrate_track(track, |_, p| p.curvature);
    match track.geometry() {
        Geometry::Spherical => Ok(2.0 * PI - total_k),
        Geometry::Hyperbolic => Ok(total_k - 2.0 * PI),
        Geometry::Euclidean => {
            Err(Error::GeometryMismatch { expected: Geometry::Spherical, found: Geometry::Euclidean })
        }
    }
}

pub fn hpz_threshold(geometry: Geometry, ell: f64) -> f64 {
    match geometry {
        Geometry::Spherical => 2.0 * PI * (1.0 - ell.cos()),
        Geometry::Hyperbolic => 2.0 * PI * (ell.cosh() - 1.0),
        Geometry::Euclidean => PI * ell * ell,
    }
}

/// Checks the area and convexity hypotheses on the sphere or in H² and
/// classifies the monodromy; a hyperbolic class is expected when they hold.
pub fn hpz_verify(track: &FrontTrack, geometry: Geometry, ell: f64) -> Result<HpzReport> {
    if track.geometry() != geometry {
        return Err(Error::GeometryMismatch { expected: geometry, found: track.geometry() });
    }
    let params = BikeParams::new(ell).with_geometry(geometry);
    params.validate()?;
    let area = gauss_bonnet_area(track)?;
    let threshold = hpz_threshold(geometry, ell);
    let kmin = track.min_curvature();
    let reason = if track.traversals() != 1 || !track.is_simple() {
        Some("track is not simple".to_string())
    } else if geometry == Geometry::Spherical && kmin <= 0.0 {
        Some(format!("not geodesically convex (min curvature {kmin})"))
    } else if geometry == Geometry::Hyperbolic && kmin <= 1.0 {
        Some(format!("not horocyclically convex (min curvature {kmin})"))
    } else if area <= threshold {
        Some(format!("area {area} does not exceed {threshold}"))
    } else {
        None
    };
    let report = monodromy(track, &params)?;
    let applicable = reason.is_none();
    let confirmed = !applicable || report.class == MoebiusClass::Hyperbolic;
    Ok(HpzReport {
        geometry,
        ell,
        area,
        threshold,
        applicable,
        reason,
        class: report.class,
        trace: report.trace,
        monodromy: report,
        confirmed,
    })
}

/// Radius of the rear circle when the front wheel rides the geodesic circle of
/// radius `rho` at the equilibrium steering angle; `None` if no such circle.
pub fn rear_circle_radius(geometry: Geometry, rho: f64, ell: f64) -> Option<f64> {
    match geometry {
        Geometry::Euclidean => (rho > ell).then(|| (rho * rho - ell * ell).sqrt()),
        Geometry::Spherical => {
            let c = rho.cos() / ell.cos();
            (ell < PI / 2.0 && c.abs() <= 1.0 && rho.sin() * ell.cos() > 0.0 && ell < rho).then(|| c.acos())
        }
        Geometry::Hyperbolic => {
            let c = rho.cosh() / ell.cosh();
            (c >= 1.0).then(|| c.acosh())
        }
    }
}

/// Equilibrium steering angle `arcsin(k / c(ℓ))` on a constant-curvature track.
pub fn equilibrium_angle(geometry: Geometry, curvature: f64, ell: f64) -> Option<f64> {
    let s = curvature / geometry.coefficient(ell);
    (s.abs() <= 1.0).then(|| s.asin())
}

/// Integrates `α′ = k − sin α` (the unit hyperbolic bicycle) on the grid of `curve`.
pub fn unit_bicycle_angles<K: Fn(f64) -> f64>(curve: &HCurve, k: K, alpha0: f64) -> Vec<f64> {
    let h = curve.step();
    let f = |t: f64, a: f64| k(t) - a.sin();
    let mut out = vec![alpha0];
    let mut a = alpha0;
    for i in 0..curve.times.len() - 1 {
        a = rk4_step(&f, curve.times[i], a, h);
        out.push(a);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{make_curve, CurveSpec};
    use approx::assert_relative_eq;

    #[test]
    fn coefficients() {
        assert_relative_eq!(Geometry::Euclidean.coefficient(2.0), 0.5);
        assert!(Geometry::Spherical.coefficient(PI / 2.0).abs() < 1e-15);
        assert_relative_eq!(Geometry::Hyperbolic.coefficient(30.0), 1.0, epsilon = 1e-15);
        assert_eq!("sphere".parse::<Geometry>().unwrap(), Geometry::Spherical);
        assert_eq!(serde_json::to_string(&Geometry::Hyperbolic).unwrap(), "\"hyperbolic\"");
    }

    #[test]
    fn geodesic_is_hyperbolic_line() {
        let c = develop_hyperbolic(|_| 0.0, 3.0, 3000);
        for (t, f) in c.times.iter().zip(&c.frames) {
            assert!((f.p[0] - t.cosh()).abs() < 1e-10);
            assert!((f.p[1] - t.sinh()).abs() < 1e-10);
            assert!(f.p[2].abs() < 1e-14);
        }
    }

    #[test]
    fn circle_of_curvature_above_one_closes() {
        let k = 2.0 / 3f64.sqrt();
        let c = develop_hyperbolic(|_| k, 2.0 * PI * 3f64.sqrt(), 8192);
        assert!(c.closure_gap() < 1e-5, "gap {}", c.closure_gap());
        assert!(c.max_orthonormality_error() < 1e-12);
    }

    #[test]
    fn hypercycle_does_not_close() {
        let short = develop_hyperbolic(|_| 0.5, 10.0, 4000);
        let long = develop_hyperbolic(|_| 0.5, 20.0, 8000);
        let d1 = short.first().distance_to(short.last());
        let d2 = long.first().distance_to(long.last());
        assert!(d1 > 1.0 && d2 > d1 + 1.0);
    }

    #[test]
    fn frame_stays_orthonormal_over_many_steps() {
        let c = develop_hyperbolic(|t| 2.0 + 0.3 * t.sin(), 50.0, 100_000);
        assert!(c.max_orthonormality_error() < 1e-8, "{}", c.max_orthonormality_error());
    }

    #[test]
    fn star_straight_behind_stays_behind() {
        let c = develop_hyperbolic(|_| 0.0, 5.0, 500);
        let a = stargazing_angle(&c, &star_for_initial_angle(0.0)).unwrap();
        assert!(a.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn star_abeam_matches_riccati_closed_form() {
        let c = develop_hyperbolic(|_| 0.0, 4.0, 2000);
        let a = stargazing_angle(&c, &star_for_initial_angle(PI / 2.0)).unwrap();
        for (t, x) in c.times.iter().zip(&a) {
            assert!(((x / 2.0).tan() - (-t).exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn stargazing_residual() {
        let k = |t: f64| 0.8 + 0.7 * (1.3 * t).cos();
        let c = develop_hyperbolic(k, 8.0, 16000);
        let a = stargazing_angle(&c, &star_for_initial_angle(2.0)).unwrap();
        let h = c.step();
        for i in 1..a.len() - 1 {
            let d = (a[i + 1] - a[i - 1]) / (2.0 * h);
            assert!((d - k(c.times[i]) + a[i].sin()).abs() < 1e-5);
        }
        let integrated = unit_bicycle_angles(&c, k, 2.0);
        assert!((integrated.last().unwrap() - a.last().unwrap()).abs() < 1e-8);
    }

    #[test]
    fn degenerate_star_rejected() {
        let c = develop_hyperbolic(|_| 0.0, 1.0, 10);
        assert_eq!(stargazing_angle(&c, &[1.0, 0.0, 0.0]), Err(Error::DegenerateStar));
        assert_eq!(stargazing_angle(&c, &[1.0, 2.0, 0.0]), Err(Error::DegenerateStar));
    }

    #[test]
    fn gauss_bonnet_caps() {
        let cap = make_curve(&CurveSpec::geodesic_circle(PI / 3.0, Geometry::Spherical)).unwrap();
        assert_relative_eq!(gauss_bonnet_area(&cap).unwrap(), PI, epsilon = 1e-10);
        let disk = make_curve(&CurveSpec::geodesic_circle(0.7, Geometry::Hyperbolic)).unwrap();
        assert_relative_eq!(gauss_bonnet_area(&disk).unwrap(), 2.0 * PI * (0.7f64.cosh() - 1.0), epsilon = 1e-10);
    }

    #[test]
    fn rear_circles() {
        assert_relative_eq!(rear_circle_radius(Geometry::Euclidean, 2.0, 1.0).unwrap(), 3f64.sqrt());
        let rs = rear_circle_radius(Geometry::Spherical, 1.0, 0.5).unwrap();
        assert_relative_eq!(1f64.cos(), 0.5f64.cos() * rs.cos(), epsilon = 1e-15);
        let rh = rear_circle_radius(Geometry::Hyperbolic, 1.0, 0.5).unwrap();
        assert_relative_eq!(1f64.cosh(), 0.5f64.cosh() * rh.cosh(), epsilon = 1e-15);
        assert!(rear_circle_radius(Geometry::Hyperbolic, 0.5, 1.0).is_none());
    }

    #[test]
    fn spherical_equilibrium_angle() {
        let (rho, ell) = (PI / 3.0, PI / 6.0);
        let a = equilibrium_angle(Geometry::Spherical, 1.0 / rho.tan(), ell).unwrap();
        assert_relative_eq!(a.sin(), ell.tan() / rho.tan(), epsilon = 1e-15);
    }
}
