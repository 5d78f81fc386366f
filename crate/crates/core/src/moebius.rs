//! Möbius maps of the steering circle and the bicycle monodromy.
//!
//! A matrix `[[a, b], [c, d]]` acts on the angle `α` through the homogeneous
//! coordinate `[sin(α/2) : cos(α/2)]`, i.e. on `x = tan(α/2)` by
//! `x ↦ (ax + b)/(cx + d)`. Matrices are kept with `det = 1` and `trace ≥ 0`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate_steering, signed_rear_length, BikeParams, CurvatureGrid};
use crate::error::{Error, Result};
use crate::geom::FrontTrack;
use crate::noneuclid::Geometry;
use crate::quad::{wrap_2pi, wrap_pi};

/// Probe angles used to fit the monodromy.
pub const PROBES: [f64; 3] = [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0];
/// Held-out angle used to validate the fit.
pub const VALIDATOR: f64 = PI / 2.0;
/// Maximum angular validation error accepted before the step count is doubled.
pub const FIT_TOLERANCE: f64 = 1e-6;
/// Default half-width of the parabolic band around `|trace| = 2`.
pub const DEFAULT_EPS_PAR: f64 = 1e-7;
/// Step counts are doubled at most this many times.
pub const MAX_DOUBLINGS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    pub m: [[f64; 2]; 2],
}

impl MoebiusMap {
    pub const IDENTITY: MoebiusMap = MoebiusMap { m: [[1.0, 0.0], [0.0, 1.0]] };

    /// Scales to `det = 1` and flips sign so that `trace ≥ 0`.
    pub fn from_matrix(m: [[f64; 2]; 2]) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::OrientationReversing);
        }
        let s = det.sqrt();
        let sign = if m[0][0] + m[1][1] < 0.0 { -1.0 } else { 1.0 };
        let f = sign / s;
        Ok(MoebiusMap { m: [[m[0][0] * f, m[0][1] * f], [m[1][0] * f, m[1][1] * f]] })
    }

    /// Rotation `α ↦ α + phi`.
    pub fn rotation(phi: f64) -> Self {
        let (s, c) = (0.5 * phi).sin_cos();
        MoebiusMap::from_matrix([[c, s], [-s, c]]).expect("rotation has det 1")
    }

    pub fn diagonal(lambda: f64) -> Self {
        MoebiusMap::from_matrix([[lambda, 0.0], [0.0, 1.0 / lambda]]).expect("diagonal has det 1")
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    fn image(&self, alpha: f64) -> (f64, f64) {
        let (s, c) = (0.5 * alpha).sin_cos();
        (self.m[0][0] * s + self.m[0][1] * c, self.m[1][0] * s + self.m[1][1] * c)
    }

    /// Image of `alpha`, in `[0, 2π)`.
    pub fn apply(&self, alpha: f64) -> f64 {
        let (s, c) = self.image(alpha);
        wrap_2pi(2.0 * s.atan2(c))
    }

    /// Action on `x = tan(α/2)`; `None` stands for `x = ∞`.
    pub fn apply_x(&self, x: Option<f64>) -> Option<f64> {
        let (num, den) = match x {
            Some(x) => (self.m[0][0] * x + self.m[0][1], self.m[1][0] * x + self.m[1][1]),
            None => (self.m[0][0], self.m[1][0]),
        };
        (den != 0.0).then(|| num / den)
    }

    /// Derivative of the circle map at `alpha`.
    pub fn circle_derivative(&self, alpha: f64) -> f64 {
        let (s, c) = self.image(alpha);
        1.0 / (s * s + c * c)
    }

    pub fn inverse(&self) -> Self {
        let m = self.m;
        MoebiusMap::from_matrix([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]).expect("inverse of det 1")
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &MoebiusMap) -> Self {
        let (a, b) = (self.m, other.m);
        let mut p = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                p[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        MoebiusMap::from_matrix(p).expect("product of det 1 maps")
    }

    /// Max-entry distance to the identity (equivalently to `±I` before normalization).
    pub fn distance_to_identity(&self) -> f64 {
        let m = self.m;
        (m[0][0] - 1.0).abs().max((m[1][1] - 1.0).abs()).max(m[0][1].abs()).max(m[1][0].abs())
    }

    /// Max-entry distance between the matrices, up to the overall sign
    /// (which is not fixed by normalization when the trace is zero).
    pub fn distance(&self, other: &MoebiusMap) -> f64 {
        let (mut same, mut flipped): (f64, f64) = (0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                same = same.max((self.m[i][j] - other.m[i][j]).abs());
                flipped = flipped.max((self.m[i][j] + other.m[i][j]).abs());
            }
        }
        same.min(flipped)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.distance_to_identity() < tol
    }
}

impl std::ops::Mul for MoebiusMap {
    type Output = MoebiusMap;

    fn mul(self, rhs: MoebiusMap) -> MoebiusMap {
        self.compose(&rhs)
    }
}

/// Cross-ratio of four points on the projective line in homogeneous form.
pub fn cross_ratio(alphas: [f64; 4]) -> f64 {
    let h = |a: f64| ((0.5 * a).sin(), (0.5 * a).cos());
    let det = |p: (f64, f64), q: (f64, f64)| p.0 * q.1 - p.1 * q.0;
    let [a, b, c, d] = alphas.map(h);
    det(a, c) * det(b, d) / (det(a, d) * det(b, c))
}

/// Unique Möbius map sending each input angle to its output angle.
pub fn moebius_from_three(pairs: [(f64, f64); 3]) -> Result<MoebiusMap> {
    let frame = |pts: [f64; 3]| -> Result<[[f64; 2]; 2]> {
        let h: Vec<(f64, f64)> = pts.iter().map(|a| ((0.5 * a).sin(), (0.5 * a).cos())).collect();
        let det = |p: (f64, f64), q: (f64, f64)| p.0 * q.1 - p.1 * q.0;
        let scale = 1e-13;
        if det(h[0], h[1]).abs() < scale || det(h[0], h[2]).abs() < scale || det(h[1], h[2]).abs() < scale {
            return Err(Error::CoincidentProbes);
        }
        // λ₁h₀ + λ₂h₁ = h₂ so that [1:0], [0:1], [1:1] go to the three points
        let d = det(h[0], h[1]);
        let l1 = det(h[2], h[1]) / d;
        let l2 = det(h[0], h[2]) / d;
        Ok([[l1 * h[0].0, l2 * h[1].0], [l1 * h[0].1, l2 * h[1].1]])
    };
    let a = frame([pairs[0].0, pairs[1].0, pairs[2].0])?;
    let b = frame([pairs[0].1, pairs[1].1, pairs[2].1])?;
    let det_a = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let a_inv = [[a[1][1] / det_a, -a[0][1] / det_a], [-a[1][0] / det_a, a[0][0] / det_a]];
    let mut m = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = b[i][0] * a_inv[0][j] + b[i][1] * a_inv[1][j];
        }
    }
    MoebiusMap::from_matrix(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoebiusClass {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl MoebiusClass {
    pub fn name(self) -> &'static str {
        match self {
            MoebiusClass::Elliptic => "elliptic",
            MoebiusClass::Parabolic => "parabolic",
            MoebiusClass::Hyperbolic => "hyperbolic",
        }
    }
}

impl std::fmt::Display for MoebiusClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Class by `|trace|` with parabolic band `eps_par`. The identity is parabolic.
pub fn classify(map: &MoebiusMap, eps_par: f64) -> MoebiusClass {
    let t = map.trace().abs();
    if t < 2.0 - eps_par {
        MoebiusClass::Elliptic
    } else if t <= 2.0 + eps_par {
        MoebiusClass::Parabolic
    } else {
        MoebiusClass::Hyperbolic
    }
}

/// A fixed angle in `[0, 2π)` and the circle-map derivative there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub angle: f64,
    pub multiplier: f64,
}

fn angle_of(v: (f64, f64)) -> f64 {
    wrap_2pi(2.0 * v.0.atan2(v.1))
}

/// Fixed points from real eigenvectors, attracting first. Empty for elliptic maps.
pub fn fixed_points(map: &MoebiusMap, eps_par: f64) -> Vec<FixedPoint> {
    let [[a, b], [c, d]] = map.m;
    let tr = map.trace();
    match classify(map, eps_par) {
        MoebiusClass::Elliptic => Vec::new(),
        MoebiusClass::Parabolic => {
            if map.is_identity(eps_par.sqrt()) {
                return Vec::new();
            }
            let h = 0.5 * tr;
            let v1 = (b, h - a);
            let v2 = (h - d, c);
            let v = if v1.0.hypot(v1.1) >= v2.0.hypot(v2.1) { v1 } else { v2 };
            vec![FixedPoint { angle: angle_of(v), multiplier: 1.0 }]
        }
        MoebiusClass::Hyperbolic => {
            let disc = (tr * tr - 4.0).max(0.0).sqrt();
            let big = 0.5 * (tr + disc);
            let small = 1.0 / big;
            let eig = |l: f64| {
                let v1 = (b, l - a);
                let v2 = (l - d, c);
                if v1.0.hypot(v1.1) >= v2.0.hypot(v2.1) {
                    v1
                } else {
                    v2
                }
            };
            [big, small]
                .into_iter()
                .map(|l| {
                    let angle = angle_of(eig(l));
                    FixedPoint { angle, multiplier: map.circle_derivative(angle) }
                })
                .collect()
        }
    }
}

/// Monodromy matrix from the fundamental solution of the linear system behind
/// the steering equation. Exact up to RK4 error and well conditioned even for
/// strongly hyperbolic maps.
pub fn monodromy_matrix(track: &FrontTrack, params: &BikeParams) -> Result<MoebiusMap> {
    check(track, params)?;
    let grid = CurvatureGrid::new(track, params.steps);
    MoebiusMap::from_matrix(grid.fundamental_matrix(params.coefficient()))
}

/// Monodromy over the stretch `[t0, t1]` of the track with `steps` steps.
pub fn monodromy_between(track: &FrontTrack, params: &BikeParams, t0: f64, t1: f64, steps: usize) -> Result<MoebiusMap> {
    check(track, params)?;
    if !(t0 < t1) || t0 < 0.0 || t1 > track.total_length() * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!("bad interval [{t0}, {t1}]")));
    }
    let grid = CurvatureGrid::between(track, t0, t1, steps.max(1));
    MoebiusMap::from_matrix(grid.fundamental_matrix(params.coefficient()))
}

fn check(track: &FrontTrack, params: &BikeParams) -> Result<()> {
    params.validate()?;
    if track.geometry() != params.geometry {
        return Err(Error::GeometryMismatch { expected: params.geometry, found: track.geometry() });
    }
    Ok(())
}

/// How the reported matrix was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitMethod {
    /// Three probe trajectories, validated on a fourth.
    ThreeProbe,
    /// Probe endpoints indistinguishable; fundamental matrix of the linear system.
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonodromyReport {
    pub matrix: [[f64; 2]; 2],
    pub trace: f64,
    pub class: MoebiusClass,
    pub identity: bool,
    pub fixed_angles: Vec<f64>,
    pub multipliers: Vec<f64>,
    /// Signed rear length `∫cos α` along each fixed trajectory.
    pub rear_lengths: Vec<f64>,
    pub fit_residual: f64,
    pub eps_par: f64,
    pub steps: usize,
    pub method: FitMethod,
    pub ell: f64,
    pub geometry: Geometry,
}

impl MonodromyReport {
    pub fn map(&self) -> MoebiusMap {
        MoebiusMap { m: self.matrix }
    }

    pub fn fixed_points(&self) -> Vec<FixedPoint> {
        self.fixed_angles
            .iter()
            .zip(&self.multipliers)
            .map(|(&angle, &multiplier)| FixedPoint { angle, multiplier })
            .collect()
    }
}

/// Integrated endpoint `α(T)` for each start angle, at the given steps per traversal.
pub fn endpoints(track: &FrontTrack, params: &BikeParams, starts: &[f64]) -> Result<Vec<f64>> {
    check(track, params)?;
    let grid = CurvatureGrid::new(track, params.steps);
    let c = params.coefficient();
    Ok(starts.par_iter().map(|&a| grid.endpoint(c, a)).collect())
}

/// Fits and classifies the monodromy from probe trajectories.
///
/// The validation error on the held-out angle must stay below
/// [`FIT_TOLERANCE`]; otherwise the step count is doubled, at most
/// [`MAX_DOUBLINGS`] times, before giving up with [`Error::FitResidual`].
pub fn monodromy(track: &FrontTrack, params: &BikeParams) -> Result<MonodromyReport> {
    check(track, params)?;
    let mut p = *params;
    let mut last_residual = f64::NAN;
    for _ in 0..=MAX_DOUBLINGS {
        let starts = [PROBES[0], PROBES[1], PROBES[2], VALIDATOR];
        let ends = endpoints(track, &p, &starts)?;
        let fit = moebius_from_three([(starts[0], ends[0]), (starts[1], ends[1]), (starts[2], ends[2])]);
        let (map, method) = match fit {
            Ok(m) => (m, FitMethod::ThreeProbe),
            Err(Error::CoincidentProbes) => (monodromy_matrix(track, &p)?, FitMethod::Linear),
            Err(e) => return Err(e),
        };
        let residual = wrap_pi(map.apply(VALIDATOR) - ends[3]).abs();
        last_residual = residual;
        if residual < FIT_TOLERANCE {
            return finish(track, &p, map, residual, method);
        }
        p.steps *= 2;
    }
    Err(Error::FitResidual { residual: last_residual, tolerance: FIT_TOLERANCE, steps: p.steps / 2 })
}

fn finish(track: &FrontTrack, params: &BikeParams, map: MoebiusMap, residual: f64, method: FitMethod) -> Result<MonodromyReport> {
    let eps_par = DEFAULT_EPS_PAR.max(10.0 * residual);
    let class = classify(&map, eps_par);
    let identity = map.is_identity(eps_par.sqrt().max(1e-6));
    let fps = if identity { Vec::new() } else { fixed_points(&map, eps_par) };
    let rear_lengths = fps
        .iter()
        .map(|fp| integrate_steering(track, params, fp.angle).map(|s| signed_rear_length(&s)))
        .collect::<Result<Vec<_>>>()?;
    Ok(MonodromyReport {
        matrix: map.m,
        trace: map.trace(),
        class,
        identity,
        fixed_angles: fps.iter().map(|f| f.angle).collect(),
        multipliers: fps.iter().map(|f| f.multiplier).collect(),
        rear_lengths,
        fit_residual: residual,
        eps_par,
        steps: params.steps,
        method,
        ell: params.ell,
        geometry: params.geometry,
    })
}
