//! Steering-angle dynamics of a bicycle on a prescribed front track.
//!
//! Convention: `alpha` is the angle from the segment direction `R → F` to the
//! front tangent, so the segment direction is `tangent_angle − alpha` and the
//! steering angle obeys `α′ = k(t) − c(ℓ)·sin α` with `c(ℓ) = 1/ℓ`, `cot ℓ`,
//! `coth ℓ` in the Euclidean plane, on the sphere and in H² respectively.

use std::f64::consts::PI;

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{make_curve, unit, CurveSpec, FrontTrack, Point};
use crate::noneuclid::Geometry;
use crate::quad::{gauss_legendre, rk4_step, simpson, wrap_pi};

/// Default number of RK4 steps per traversal of the front track.
pub const DEFAULT_STEPS: usize = 4096;

/// Wheelbase, ambient geometry and step count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BikeParams {
    pub ell: f64,
    pub geometry: Geometry,
    /// RK4 steps per traversal.
    pub steps: usize,
}

impl BikeParams {
    pub fn new(ell: f64) -> Self {
        BikeParams { ell, geometry: Geometry::Euclidean, steps: DEFAULT_STEPS }
    }

    pub fn with_geometry(mut self, geometry: Geometry) -> Self {
        self.geometry = geometry;
        self
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ell > 0.0 && self.ell.is_finite()) {
            return Err(Error::InvalidParameter(format!("wheelbase must be positive, got {}", self.ell)));
        }
        if self.geometry == Geometry::Spherical && self.ell >= PI {
            return Err(Error::InvalidParameter(format!("spherical wheelbase must be below π, got {}", self.ell)));
        }
        if self.steps < 2 {
            return Err(Error::InvalidParameter("need at least 2 steps".into()));
        }
        Ok(())
    }

    /// Geodesic curvature `c(ℓ)` of the circle of radius `ℓ`.
    pub fn coefficient(&self) -> f64 {
        self.geometry.coefficient(self.ell)
    }
}

/// Curvature and tangent turning sampled at the nodes and midpoints of a
/// uniform step grid.
///
/// The integrators work with `θ = ψ − α`, where `ψ(t) = ∫k` is the turning of
/// the tangent since the start: `θ′ = c·sin(ψ − θ)` involves no curvature, so
/// fillets narrower than a step cost no accuracy. Shared by every integration
/// over the same track and step count.
#[derive(Debug, Clone)]
pub(crate) struct CurvatureGrid {
    pub total: f64,
    pub steps: usize,
    /// `k((i/2)·h)` for `i = 0..=2·steps`.
    pub half: Vec<f64>,
    /// `ψ((i/2)·h)`, unwrapped.
    pub turn: Vec<f64>,
}

impl CurvatureGrid {
    pub fn new(track: &FrontTrack, steps_per_traversal: usize) -> Self {
        let steps = steps_per_traversal * track.traversals() as usize;
        Self::between(track, 0.0, track.total_length(), steps)
    }

    pub fn between(track: &FrontTrack, start: f64, end: f64, steps: usize) -> Self {
        let total = end - start;
        let h = total / steps as f64;
        let nodes: Vec<f64> = (0..=2 * steps).map(|i| start + 0.5 * h * i as f64).collect();
        let mut half: Vec<f64> = nodes.iter().map(|&t| track.curvature(t)).collect();
        // curvature jumps: average one-sided values at breakpoints on the grid
        for b in track.breakpoints() {
            let idx = (2.0 * (b - start) / h).round();
            if (start + idx * 0.5 * h - b).abs() < 1e-12 * track.total_length()
                && idx > 0.0
                && idx < (2 * steps) as f64
            {
                let eps = 1e-9 * h;
                half[idx as usize] = 0.5 * (track.curvature(b - eps) + track.curvature(b + eps));
            }
        }
        let mut turn = Vec::with_capacity(nodes.len());
        let mut psi = 0.0;
        let mut prev = track.tangent_angle(start);
        turn.push(0.0);
        for i in 1..nodes.len() {
            if track.geometry() == Geometry::Euclidean {
                let phi = track.tangent_angle(nodes[i]);
                let guess = 0.25 * h * (half[i - 1] + half[i]);
                psi += guess + wrap_pi(phi - prev - guess);
                prev = phi;
            } else {
                // chart tangent angles are not geodesic turning
                psi += gauss_legendre(nodes[i - 1], nodes[i], 1, |t| track.curvature(t));
            }
            turn.push(psi);
        }
        CurvatureGrid { total, steps, half, turn }
    }

    pub fn step(&self) -> f64 {
        self.total / self.steps as f64
    }

    fn rk4_theta(&self, c: f64, i: usize, th: f64) -> f64 {
        let h = self.step();
        let (p0, p1, p2) = (self.turn[2 * i], self.turn[2 * i + 1], self.turn[2 * i + 2]);
        let s1 = c * (p0 - th).sin();
        let s2 = c * (p1 - th - 0.5 * h * s1).sin();
        let s3 = c * (p1 - th - 0.5 * h * s2).sin();
        let s4 = c * (p2 - th - h * s3).sin();
        th + h / 6.0 * (s1 + 2.0 * s2 + 2.0 * s3 + s4)
    }

    /// Integrates `α′ = k − c·sin α` with classical RK4 (in the variable
    /// `ψ − α`); returns the node values.
    pub fn integrate(&self, c: f64, alpha0: f64) -> Vec<f64> {
        let mut alpha = Vec::with_capacity(self.steps + 1);
        alpha.push(alpha0);
        let mut th = -alpha0;
        for i in 0..self.steps {
            th = self.rk4_theta(c, i, th);
            alpha.push(self.turn[2 * i + 2] - th);
        }
        alpha
    }

    /// Final value only.
    pub fn endpoint(&self, c: f64, alpha0: f64) -> f64 {
        let mut th = -alpha0;
        for i in 0..self.steps {
            th = self.rk4_theta(c, i, th);
        }
        self.turn[2 * self.steps] - th
    }

    /// Fundamental matrix of the linear system `(u, v)′ = ½[[−c, k], [−k, c]](u, v)`,
    /// whose projectivization `x = u/v` is the Riccati form `x′ = ½k(x² + 1) − c x`
    /// of the steering equation in the coordinate `x = tan(α/2)`.
    ///
    /// The curvature part alone integrates to the rotation `G(ψ)`; RK4 runs on
    /// `w = G(ψ)⁻¹(u, v)`, with `w′ = ½c[[−cos ψ, −sin ψ], [−sin ψ, cos ψ]]w`.
    pub fn fundamental_matrix(&self, c: f64) -> [[f64; 2]; 2] {
        let h = self.step();
        let rhs = |psi: f64, m: &[f64; 4]| -> [f64; 4] {
            let (s, co) = psi.sin_cos();
            let a = [[-0.5 * c * co, -0.5 * c * s], [-0.5 * c * s, 0.5 * c * co]];
            // columns (m0, m2) and (m1, m3) evolve independently
            [
                a[0][0] * m[0] + a[0][1] * m[2],
                a[0][0] * m[1] + a[0][1] * m[3],
                a[1][0] * m[0] + a[1][1] * m[2],
                a[1][0] * m[1] + a[1][1] * m[3],
            ]
        };
        let axpy = |m: &[f64; 4], s: f64, d: &[f64; 4]| -> [f64; 4] {
            [m[0] + s * d[0], m[1] + s * d[1], m[2] + s * d[2], m[3] + s * d[3]]
        };
        let mut m = [1.0, 0.0, 0.0, 1.0];
        for i in 0..self.steps {
            let (p0, p1, p2) = (self.turn[2 * i], self.turn[2 * i + 1], self.turn[2 * i + 2]);
            let d1 = rhs(p0, &m);
            let d2 = rhs(p1, &axpy(&m, 0.5 * h, &d1));
            let d3 = rhs(p1, &axpy(&m, 0.5 * h, &d2));
            let d4 = rhs(p2, &axpy(&m, h, &d3));
            for j in 0..4 {
                m[j] += h / 6.0 * (d1[j] + 2.0 * d2[j] + 2.0 * d3[j] + d4[j]);
            }
        }
        let (b, a) = (0.5 * self.turn[2 * self.steps]).sin_cos();
        [
            [a * m[0] + b * m[2], a * m[1] + b * m[3]],
            [-b * m[0] + a * m[2], -b * m[1] + a * m[3]],
        ]
    }
}

/// Steering-angle history on a uniform grid with Hermite dense output.
#[derive(Debug, Clone)]
pub struct SteeringSolution {
    track: FrontTrack,
    params: BikeParams,
    alpha0: f64,
    step: f64,
    alpha: Vec<f64>,
    dalpha: Vec<f64>,
}

impl SteeringSolution {
    pub fn track(&self) -> &FrontTrack {
        &self.track
    }

    pub fn params(&self) -> &BikeParams {
        &self.params
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    /// Grid spacing in arc length.
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.alpha.len()).map(|i| self.time(i)).collect()
    }

    /// Unwrapped steering angle at the grid nodes.
    pub fn alphas(&self) -> &[f64] {
        &self.alpha
    }

    /// `α′` at the grid nodes, from the right-hand side.
    pub fn derivatives(&self) -> &[f64] {
        &self.dalpha
    }

    pub fn final_alpha(&self) -> f64 {
        *self.alpha.last().expect("solution has at least one node")
    }

    /// Right-hand side `k(t) − c(ℓ) sin α`.
    pub fn rhs(&self, t: f64, alpha: f64) -> f64 {
        self.track.curvature(t) - self.params.coefficient() * alpha.sin()
    }

    /// Cubic Hermite interpolation of `α` between grid nodes.
    pub fn alpha_at(&self, t: f64) -> f64 {
        let n = self.alpha.len() - 1;
        let x = (t / self.step).clamp(0.0, n as f64);
        let i = (x.floor() as usize).min(n - 1);
        let s = x - i as f64;
        let h = self.step;
        let (y0, y1, d0, d1) = (self.alpha[i], self.alpha[i + 1], self.dalpha[i], self.dalpha[i + 1]);
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
    }
}

/// Integrates the steering equation with fixed-step RK4, `params.steps` steps
/// per traversal, from `alpha0` at `t = 0`.
pub fn integrate_steering(track: &FrontTrack, params: &BikeParams, alpha0: f64) -> Result<SteeringSolution> {
    params.validate()?;
    if track.geometry() != params.geometry {
        return Err(Error::GeometryMismatch { expected: params.geometry, found: track.geometry() });
    }
    let grid = CurvatureGrid::new(track, params.steps);
    let c = params.coefficient();
    let alpha = grid.integrate(c, alpha0);
    let h = grid.step();
    let dalpha = alpha
        .iter()
        .enumerate()
        .map(|(i, a)| grid.half[2 * i] - c * a.sin())
        .collect();
    Ok(SteeringSolution { track: track.clone(), params: *params, alpha0, step: h, alpha, dalpha })
}

/// Rear-wheel track reconstructed from a steering solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RearTrack {
    pub times: Vec<f64>,
    pub points: Vec<Point>,
    pub front: Vec<Point>,
    pub alpha: Vec<f64>,
    /// Arc lengths where `cos α` changes sign (rear wheel reverses).
    pub cusp_times: Vec<f64>,
    /// `∫ cos α dt`.
    pub signed_length: f64,
    pub closed: bool,
}

impl RearTrack {
    /// Green's-theorem signed area of the rear path (meaningful when closed).
    pub fn signed_area(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].x * w[1].y - w[0].y * w[1].x).sum::<f64>() * 0.5
    }

    /// Rear position at grid index `i` of the solution.
    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }
}

/// `R(t) = F(t) − ℓ·u(t)` with `u` the unit vector at angle `tangent_angle − α`.
pub fn rear_track(solution: &SteeringSolution) -> Result<RearTrack> {
    let track = solution.track();
    if track.geometry() != Geometry::Euclidean {
        return Err(Error::GeometryMismatch { expected: Geometry::Euclidean, found: track.geometry() });
    }
    let ell = solution.params().ell;
    let times = solution.times();
    let mut points = Vec::with_capacity(times.len());
    let mut front = Vec::with_capacity(times.len());
    for (t, a) in times.iter().zip(solution.alphas()) {
        let tp = track.eval(*t);
        front.push(tp.position);
        points.push(tp.position - unit(tp.tangent_angle - a) * ell);
    }
    let cosines: Vec<f64> = solution.alphas().iter().map(|a| a.cos()).collect();
    let mut cusp_times = Vec::new();
    for i in 0..cosines.len() - 1 {
        let (c0, c1) = (cosines[i], cosines[i + 1]);
        if c0 == 0.0 && i > 0 && cosines[i - 1] * c1 < 0.0 {
            cusp_times.push(times[i]);
        } else if c0 * c1 < 0.0 {
            cusp_times.push(times[i] + solution.step() * c0 / (c0 - c1));
        }
    }
    let signed_length = simpson(&cosines, solution.step());
    let scale = track.diameter().max(ell);
    let closed = track.is_closed() && (points[0] - points[points.len() - 1]).norm() < 1e-6 * scale;
    Ok(RearTrack {
        times,
        points,
        front,
        alpha: solution.alphas().to_vec(),
        cusp_times,
        signed_length,
        closed,
    })
}

/// Net roll of the rear wheel, `∫₀ᵀ cos α dt` (composite Simpson on the grid).
pub fn signed_rear_length(solution: &SteeringSolution) -> f64 {
    let cosines: Vec<f64> = solution.alphas().iter().map(|a| a.cos()).collect();
    simpson(&cosines, solution.step())
}

/// Area swept between a straight front track and the rear path:
/// `∫ dist(R, line)·d(R·d̂)`, positive on the left of the line.
pub fn area_to_front_line(solution: &SteeringSolution) -> Result<f64> {
    let track = solution.track();
    if track.is_closed() || track.max_curvature().abs() > 0.0 || track.min_curvature().abs() > 0.0 {
        return Err(Error::InvalidParameter("front track must be a straight line".into()));
    }
    let ell = solution.params().ell;
    let origin = track.position(0.0);
    let theta = track.tangent_angle(0.0);
    let along = unit(theta);
    let normal = Point::new(-along.y, along.x);
    let integrand: Vec<f64> = solution
        .alphas()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let t = solution.time(i);
            let u = unit(theta - a);
            let r = track.position(t) - u * ell;
            let r_dot = u * a.cos();
            (r - origin).dot(&normal) * r_dot.dot(&along)
        })
        .collect();
    Ok(simpson(&integrand, solution.step()))
}

/// Area between a straight front track and the whole tractrix through the
/// starting configuration: the branch traced forward plus the branch traced
/// by running the same segment backward along the line for the same length.
/// Starting from `α₀ = ±π/2` (the cusp) this is the classical tractrix.
pub fn tractrix_area(track: &FrontTrack, params: &BikeParams, alpha0: f64) -> Result<f64> {
    let forward = integrate_steering(track, params, alpha0)?;
    let ahead = area_to_front_line(&forward)?;
    let spec = CurveSpec::line(track.position(0.0), track.tangent_angle(0.0) + PI, track.total_length());
    let behind = integrate_steering(&make_curve(&spec)?, params, alpha0 + PI)?;
    Ok(ahead - area_to_front_line(&behind)?)
}

/// One configuration `(x, y, θ)` of the segment and its derivative along a loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfigSample {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub dx: f64,
    pub dy: f64,
    pub dtheta: f64,
}

/// A stretch of a configuration loop sampled uniformly in its parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopPiece {
    pub step: f64,
    pub samples: Vec<ConfigSample>,
}

/// A closed path of segments of length `ell` in `(x, y, θ)` space; it need
/// not satisfy the bicycle constraint. `θ` is unwrapped, so its net change
/// records how many turns the segment makes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigLoop {
    pub ell: f64,
    pub pieces: Vec<LoopPiece>,
}

impl ConfigLoop {
    /// Single piece on `s ∈ [0, 1]` with `n` intervals.
    pub fn from_fn<F: Fn(f64) -> ConfigSample>(ell: f64, n: usize, f: F) -> Self {
        let samples = (0..=n).map(|i| f(i as f64 / n as f64)).collect();
        ConfigLoop { ell, pieces: vec![LoopPiece { step: 1.0 / n as f64, samples }] }
    }

    pub fn from_pieces(ell: f64, pieces: Vec<LoopPiece>) -> Self {
        ConfigLoop { ell, pieces }
    }

    /// From periodic samples at `s = j/M`, `j = 0..M` (endpoint excluded).
    /// Derivatives are spectral; `θ` may wind, the winding is inferred from
    /// successive differences.
    pub fn from_periodic_samples(ell: f64, x: &[f64], y: &[f64], theta: &[f64]) -> Result<Self> {
        let m = x.len();
        if m < 8 || y.len() != m || theta.len() != m {
            return Err(Error::MalformedLoop("need at least 8 samples of equal length for x, y, theta".into()));
        }
        let mut unwrapped = Vec::with_capacity(m);
        unwrapped.push(theta[0]);
        for j in 1..m {
            let prev = unwrapped[j - 1];
            unwrapped.push(prev + wrap_pi(theta[j] - prev));
        }
        let closing = unwrapped[m - 1] + wrap_pi(unwrapped[0] - unwrapped[m - 1]);
        let turns = ((closing - unwrapped[0]) / (2.0 * PI)).round();
        let winding = 2.0 * PI * turns;
        let periodic: Vec<f64> =
            unwrapped.iter().enumerate().map(|(j, t)| t - winding * j as f64 / m as f64).collect();
        let dx = spectral_derivative(x);
        let dy = spectral_derivative(y);
        let dt: Vec<f64> = spectral_derivative(&periodic).iter().map(|d| d + winding).collect();
        let mut samples: Vec<ConfigSample> = (0..m)
            .map(|j| ConfigSample { x: x[j], y: y[j], theta: unwrapped[j], dx: dx[j], dy: dy[j], dtheta: dt[j] })
            .collect();
        let first = samples[0];
        samples.push(ConfigSample { theta: first.theta + winding, ..first });
        Ok(ConfigLoop { ell, pieces: vec![LoopPiece { step: 1.0 / m as f64, samples }] })
    }

    fn check_closed(&self) -> Result<f64> {
        if !(self.ell > 0.0) {
            return Err(Error::InvalidParameter("segment length must be positive".into()));
        }
        if self.pieces.is_empty() || self.pieces.iter().any(|p| p.samples.len() < 2) {
            return Err(Error::MalformedLoop("every piece needs at least two samples".into()));
        }
        let scale = self
            .pieces
            .iter()
            .flat_map(|p| p.samples.iter())
            .map(|s| s.x.abs().max(s.y.abs()))
            .fold(self.ell, f64::max);
        let n = self.pieces.len();
        for i in 0..n {
            let end = self.pieces[i].samples.last().unwrap();
            let start = &self.pieces[(i + 1) % n].samples[0];
            let gap = (end.x - start.x).hypot(end.y - start.y);
            let dtheta = end.theta - start.theta;
            let turns = (dtheta / (2.0 * PI)).round();
            let last = i + 1 == n;
            let theta_gap = if last { dtheta - 2.0 * PI * turns } else { dtheta };
            if gap > 1e-9 * scale || theta_gap.abs() > 1e-9 {
                return Err(Error::MalformedLoop(format!("gap after piece {i}: position {gap:.3e}, angle {theta_gap:.3e}")));
            }
        }
        Ok(scale)
    }
}

fn spectral_derivative(values: &[f64]) -> Vec<f64> {
    let m = values.len();
    let mut planner = FftPlanner::new();
    let mut buf: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    planner.plan_fft_forward(m).process(&mut buf);
    for (k, z) in buf.iter_mut().enumerate() {
        let freq = if k <= m / 2 { k as f64 } else { k as f64 - m as f64 };
        *z = if m % 2 == 0 && k == m / 2 { Complex::new(0.0, 0.0) } else { *z * Complex::new(0.0, 2.0 * PI * freq) };
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    buf.iter().map(|z| z.re / m as f64).collect()
}

/// Both sides of `A_F − A_R = ℓ∫λ + (ℓ²/2)∫dθ` for a configuration loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopIdentity {
    pub front_area: f64,
    pub rear_area: f64,
    /// `∫λ`, `λ = cos θ dy − sin θ dx`: net sideways slip of the rear end.
    pub lambda_integral: f64,
    /// `∫dθ`, unwrapped.
    pub winding: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// Largest coordinate magnitude (or `ℓ`) on the loop.
    pub scale: f64,
}

/// Evaluates both sides of the area identity by Simpson quadrature per piece.
pub fn loop_identity(config: &ConfigLoop) -> Result<LoopIdentity> {
    let scale = config.check_closed()?;
    let ell = config.ell;
    let (mut front2, mut rear2, mut lambda, mut winding) = (0.0, 0.0, 0.0, 0.0);
    for piece in &config.pieces {
        let f = |g: &dyn Fn(&ConfigSample) -> f64| -> f64 {
            let v: Vec<f64> = piece.samples.iter().map(g).collect();
            simpson(&v, piece.step)
        };
        rear2 += f(&|s| s.x * s.dy - s.y * s.dx);
        front2 += f(&|s| {
            let (c, sn) = (s.theta.cos(), s.theta.sin());
            let (fx, fy) = (s.x + ell * c, s.y + ell * sn);
            let (dfx, dfy) = (s.dx - ell * sn * s.dtheta, s.dy + ell * c * s.dtheta);
            fx * dfy - fy * dfx
        });
        lambda += f(&|s| s.theta.cos() * s.dy - s.theta.sin() * s.dx);
        winding += piece.samples.last().unwrap().theta - piece.samples[0].theta;
    }
    let (front_area, rear_area) = (0.5 * front2, 0.5 * rear2);
    Ok(LoopIdentity {
        front_area,
        rear_area,
        lambda_integral: lambda,
        winding,
        lhs: front_area - rear_area,
        rhs: ell * lambda + 0.5 * ell * ell * winding,
        scale,
    })
}

/// Reference RK4 integration straight from the track (no curvature grid);
/// used to cross-check the grid integrator.
#[doc(hidden)]
pub fn integrate_direct(track: &FrontTrack, params: &BikeParams, alpha0: f64) -> f64 {
    let steps = params.steps * track.traversals() as usize;
    let h = track.total_length() / steps as f64;
    let c = params.coefficient();
    let f = |t: f64, a: f64| track.curvature(t) - c * a.sin();
    (0..steps).fold(alpha0, |a, i| rk4_step(&f, i as f64 * h, a, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{make_curve, CurveSpec};
    use approx::assert_relative_eq;

    fn circle(r: f64) -> FrontTrack {
        make_curve(&CurveSpec::circle(r)).unwrap()
    }

    #[test]
    fn straight_line_matches_closed_form_riccati() {
        let line = make_curve(&CurveSpec::line(Point::zeros(), 0.0, 3.0)).unwrap();
        let alpha0: f64 = 2.0;
        let sol = integrate_steering(&line, &BikeParams::new(1.0), alpha0).unwrap();
        for (i, a) in sol.alphas().iter().enumerate() {
            let t = sol.time(i);
            let expected = 2.0 * ((alpha0 / 2.0).tan() * (-t).exp()).atan();
            assert!((a - expected).abs() < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn tractrix_areas() {
        for ell in [1.0, 2.5] {
            let line = make_curve(&CurveSpec::line(Point::new(0.0, ell), 0.0, 40.0 * ell)).unwrap();
            let params = BikeParams::new(ell);
            // one branch from the cusp: ∫ℓ sin α cos²α dt with dt = −ℓ dα / sin α
            let branch = area_to_front_line(&integrate_steering(&line, &params, PI / 2.0).unwrap()).unwrap();
            assert_relative_eq!(branch.abs(), PI * ell * ell / 4.0, max_relative = 1e-9);
            for alpha0 in [PI / 2.0, -PI / 2.0, 1.0, 2.6] {
                let full = tractrix_area(&line, &params, alpha0).unwrap();
                assert_relative_eq!(full.abs(), PI * ell * ell / 2.0, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn circle_equilibrium_is_stationary() {
        let sol = integrate_steering(&circle(2.0), &BikeParams::new(1.0), 0.5f64.asin()).unwrap();
        assert!(sol.alphas().iter().all(|a| (a - PI / 6.0).abs() < 1e-12));
        let rear = rear_track(&sol).unwrap();
        for p in &rear.points {
            assert!((p.norm() - 3f64.sqrt()).abs() < 1e-12);
        }
        assert!(rear.closed);
        assert!(rear.cusp_times.is_empty());
        assert_relative_eq!(rear.signed_length, 2.0 * PI * 3f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn spherical_quarter_wheelbase_transports_parallel() {
        let cap = make_curve(&CurveSpec::geodesic_circle(1.0, Geometry::Spherical)).unwrap();
        let params = BikeParams::new(PI / 2.0).with_geometry(Geometry::Spherical);
        let sol = integrate_steering(&cap, &params, 0.3).unwrap();
        let k_integral = cap.curvature(0.0) * cap.total_length();
        assert_relative_eq!(sol.final_alpha() - 0.3, k_integral, epsilon = 1e-12);
    }

    #[test]
    fn geometry_must_match() {
        let cap = make_curve(&CurveSpec::geodesic_circle(1.0, Geometry::Spherical)).unwrap();
        assert!(matches!(
            integrate_steering(&cap, &BikeParams::new(1.0), 0.0),
            Err(Error::GeometryMismatch { .. })
        ));
        let sol = integrate_steering(&cap, &BikeParams::new(1.0).with_geometry(Geometry::Spherical), 0.0).unwrap();
        assert!(rear_track(&sol).is_err());
    }

    #[test]
    fn invalid_params() {
        assert!(BikeParams::new(0.0).validate().is_err());
        assert!(BikeParams::new(4.0).with_geometry(Geometry::Spherical).validate().is_err());
        assert!(BikeParams::new(4.0).with_geometry(Geometry::Hyperbolic).validate().is_ok());
    }

    #[test]
    fn straight_front_with_aligned_bike_rolls_full_length() {
        let line = make_curve(&CurveSpec::line(Point::zeros(), 0.7, 5.0)).unwrap();
        let sol = integrate_steering(&line, &BikeParams::new(1.0), 0.0).unwrap();
        assert_relative_eq!(signed_rear_length(&sol), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn critical_circle_spirals_to_center() {
        let track = make_curve(&CurveSpec::circle(1.0).with_traversals(60)).unwrap();
        let sol = integrate_steering(&track, &BikeParams::new(1.0), 0.3).unwrap();
        let rear = rear_track(&sol).unwrap();
        // α creeps up to π/2 without crossing it
        assert!(rear.cusp_times.is_empty());
        let per_loop = 4096;
        let loop_length = |k: usize| {
            let c: Vec<f64> = sol.alphas()[k * per_loop..=(k + 1) * per_loop].iter().map(|a| a.cos()).collect();
            simpson(&c, sol.step())
        };
        assert!(loop_length(59) < loop_length(20));
        assert!(loop_length(59) < 0.05);
        assert!(rear.points.last().unwrap().norm() < 0.05);
    }

    #[test]
    fn cusps_are_located_where_cos_alpha_vanishes() {
        let line = make_curve(&CurveSpec::line(Point::zeros(), 0.0, 6.0)).unwrap();
        // α decays from 3 through π/2 at tan(α/2) = 1
        let sol = integrate_steering(&line, &BikeParams::new(1.0), 3.0).unwrap();
        let rear = rear_track(&sol).unwrap();
        assert_eq!(rear.cusp_times.len(), 1);
        let expected = (1.5f64).tan().ln();
        assert!((rear.cusp_times[0] - expected).abs() < 1e-5);
    }

    #[test]
    fn ode_residual_at_midpoints() {
        let tracks = [
            make_curve(&CurveSpec::circle(2.0)).unwrap(),
            make_curve(&CurveSpec::ellipse(2.0, 1.0)).unwrap(),
            make_curve(&CurveSpec::fourier_support(1.0, vec![0.0, 0.1], vec![0.0, 0.0, 0.03])).unwrap(),
        ];
        for track in tracks {
            let sol = integrate_steering(&track, &BikeParams::new(0.8), 2.5).unwrap();
            let a = sol.alphas();
            for i in 1..sol.len() - 2 {
                let mid = sol.time(i) + 0.5 * sol.step();
                // fourth-order central difference at the half-grid point
                let diff = (a[i - 1] - 27.0 * a[i] + 27.0 * a[i + 1] - a[i + 2]) / (24.0 * sol.step());
                let residual = diff - sol.rhs(mid, sol.alpha_at(mid));
                assert!(residual.abs() < 1e-6, "residual {residual} at {mid}");
            }
        }
    }

    #[test]
    fn rear_velocity_points_along_segment() {
        let track = make_curve(&CurveSpec::ellipse(2.0, 1.0)).unwrap();
        let sol = integrate_steering(&track, &BikeParams::new(0.7), 2.0).unwrap();
        let rear = rear_track(&sol).unwrap();
        let p = &rear.points;
        for i in 2..p.len() - 2 {
            if rear.alpha[i].cos().abs() < 1e-2 {
                continue;
            }
            let v = (p[i - 2] - p[i - 1] * 8.0 + p[i + 1] * 8.0 - p[i + 2]) / (12.0 * sol.step());
            let seg = rear.front[i] - rear.points[i];
            let sin_angle = crate::geom::cross(&v, &seg) / (v.norm() * seg.norm());
            assert!(sin_angle.abs() < 1e-5, "angle {sin_angle} at {i}");
        }
    }

    #[test]
    fn grid_integrator_agrees_with_direct_evaluation() {
        let track = make_curve(&CurveSpec::ellipse(1.5, 1.0)).unwrap();
        let params = BikeParams::new(0.9);
        let a = integrate_steering(&track, &params, 1.0).unwrap().final_alpha();
        assert_relative_eq!(a, integrate_direct(&track, &params, 1.0), epsilon = 1e-13);
    }

    #[test]
    fn rotation_about_rear_end() {
        let ell = 1.3;
        let lp = ConfigLoop::from_fn(ell, 512, |s| ConfigSample {
            x: 0.0,
            y: 0.0,
            theta: 2.0 * PI * s,
            dx: 0.0,
            dy: 0.0,
            dtheta: 2.0 * PI,
        });
        let id = loop_identity(&lp).unwrap();
        assert_relative_eq!(id.lhs, PI * ell * ell, epsilon = 1e-12);
        assert!(id.lambda_integral.abs() < 1e-14);
        assert_relative_eq!(id.rhs, PI * ell * ell, epsilon = 1e-12);
    }

    #[test]
    fn rotation_about_front_end() {
        let ell = 0.8;
        let lp = ConfigLoop::from_fn(ell, 512, |s| {
            let th = 2.0 * PI * s;
            ConfigSample {
                x: -ell * th.cos(),
                y: -ell * th.sin(),
                theta: th,
                dx: ell * th.sin() * 2.0 * PI,
                dy: -ell * th.cos() * 2.0 * PI,
                dtheta: 2.0 * PI,
            }
        });
        let id = loop_identity(&lp).unwrap();
        assert_relative_eq!(id.lhs, -PI * ell * ell, epsilon = 1e-12);
        assert_relative_eq!(id.lambda_integral, -2.0 * PI * ell, epsilon = 1e-12);
        assert_relative_eq!(id.rhs, -PI * ell * ell, epsilon = 1e-12);
    }

    #[test]
    fn constrained_closed_rear_track_encloses_pi_ell_squared_less() {
        let sol = integrate_steering(&circle(2.0), &BikeParams::new(1.0), PI / 6.0).unwrap();
        let rear = rear_track(&sol).unwrap();
        let front_area = PI * 4.0;
        assert_relative_eq!(front_area - rear.signed_area(), PI, epsilon = 1e-5);
    }

    #[test]
    fn periodic_samples_get_spectral_derivatives() {
        let m = 256;
        let s: Vec<f64> = (0..m).map(|j| j as f64 / m as f64).collect();
        let x: Vec<f64> = s.iter().map(|s| (2.0 * PI * s).cos()).collect();
        let y: Vec<f64> = s.iter().map(|s| (4.0 * PI * s).sin()).collect();
        let th: Vec<f64> = s.iter().map(|s| wrap_pi(2.0 * PI * s + 0.2 * (2.0 * PI * s).sin())).collect();
        let lp = ConfigLoop::from_periodic_samples(1.0, &x, &y, &th).unwrap();
        let p = &lp.pieces[0];
        for (j, smp) in p.samples.iter().take(m).enumerate() {
            let a = 2.0 * PI * s[j];
            assert!((smp.dx + 2.0 * PI * a.sin()).abs() < 1e-10);
            assert!((smp.dtheta - 2.0 * PI * (1.0 + 0.2 * a.cos())).abs() < 1e-10);
        }
        assert_relative_eq!(p.samples[m].theta - p.samples[0].theta, 2.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn open_loop_is_rejected() {
        let lp = ConfigLoop::from_fn(1.0, 16, |s| ConfigSample { x: s, y: 0.0, theta: 0.0, dx: 1.0, dy: 0.0, dtheta: 0.0 });
        assert!(matches!(loop_identity(&lp), Err(Error::MalformedLoop(_))));
    }
}
