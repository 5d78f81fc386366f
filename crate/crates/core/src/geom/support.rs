use std::f64::consts::PI;

use rustfft::{num_complex::Complex, FftPlanner};

use super::{area_moments, unit, FrontTrack, Point};
use crate::error::{Error, Result};
use crate::noneuclid::Geometry;
use crate::quad::wrap_2pi;

/// Default number of Fourier modes kept beside the sample grid.
pub const DEFAULT_FOURIER_ORDER: usize = 64;
/// Default number of uniform samples in `φ ∈ [0, 2π)`.
pub const DEFAULT_GRID: usize = 4096;

/// Support function `p(φ)` of a (possibly cusped) envelope of lines.
///
/// Stored both as samples of `p` and `p′` on a uniform grid and as a truncated
/// Fourier series. Lengths and areas use the grid (periodic trapezoid rule).
#[derive(Debug, Clone, PartialEq)]
pub struct SupportFunction {
    origin: Point,
    p: Vec<f64>,
    dp: Vec<f64>,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl SupportFunction {
    /// From Fourier coefficients: `p = a0 + Σₙ cos[n-1] cos nφ + sin[n-1] sin nφ`.
    pub fn from_fourier(a0: f64, cos: &[f64], sin: &[f64]) -> Self {
        let eval = |phi: f64| {
            let (mut v, mut d) = (a0, 0.0);
            for (i, c) in cos.iter().enumerate() {
                let n = (i + 1) as f64;
                v += c * (n * phi).cos();
                d -= n * c * (n * phi).sin();
            }
            for (i, s) in sin.iter().enumerate() {
                let n = (i + 1) as f64;
                v += s * (n * phi).sin();
                d += n * s * (n * phi).cos();
            }
            (v, d)
        };
        Self::from_fn(|phi| eval(phi).0, |phi| eval(phi).1)
    }

    /// Samples `p` and `p′` from closures on the default grid.
    pub fn from_fn<P: Fn(f64) -> f64, D: Fn(f64) -> f64>(p: P, dp: D) -> Self {
        let m = DEFAULT_GRID;
        let grid = (0..m).map(|j| 2.0 * PI * j as f64 / m as f64);
        let pv: Vec<f64> = grid.clone().map(&p).collect();
        let dv: Vec<f64> = grid.map(&dp).collect();
        Self::from_samples(Point::zeros(), pv, dv, DEFAULT_FOURIER_ORDER)
    }

    fn from_samples(origin: Point, p: Vec<f64>, dp: Vec<f64>, order: usize) -> Self {
        let m = p.len();
        let mut buf: Vec<Complex<f64>> = p.iter().map(|&v| Complex::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let order = order.min(m / 2 - 1);
        let scale = 2.0 / m as f64;
        let mut cos = Vec::with_capacity(order + 1);
        let mut sin = Vec::with_capacity(order + 1);
        cos.push(buf[0].re / m as f64);
        sin.push(0.0);
        for z in buf.iter().take(order + 1).skip(1) {
            cos.push(z.re * scale);
            sin.push(-z.im * scale);
        }
        SupportFunction { origin, p, dp, cos, sin }
    }

    /// Grid spacing in `φ`.
    pub fn step(&self) -> f64 {
        2.0 * PI / self.p.len() as f64
    }

    pub fn grid_len(&self) -> usize {
        self.p.len()
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn samples(&self) -> &[f64] {
        &self.p
    }

    pub fn derivative_samples(&self) -> &[f64] {
        &self.dp
    }

    /// Fourier coefficients `(a₀..a_N, b₀..b_N)` with `b₀ = 0`.
    pub fn coefficients(&self) -> (&[f64], &[f64]) {
        (&self.cos, &self.sin)
    }

    /// `p(φ)` from the Fourier representation.
    pub fn value(&self, phi: f64) -> f64 {
        self.eval(phi).0
    }

    /// `(p, p′, p″)` from the Fourier representation.
    pub fn eval(&self, phi: f64) -> (f64, f64, f64) {
        let (mut v, mut d1, mut d2) = (self.cos[0], 0.0, 0.0);
        for n in 1..self.cos.len() {
            let nf = n as f64;
            let (s, c) = (nf * phi).sin_cos();
            let (a, b) = (self.cos[n], self.sin[n]);
            v += a * c + b * s;
            d1 += nf * (b * c - a * s);
            d2 -= nf * nf * (a * c + b * s);
        }
        (v, d1, d2)
    }

    /// Envelope point `origin + p·e(φ) + p′·e⊥(φ)` from the Fourier representation.
    pub fn envelope(&self, phi: f64) -> Point {
        let (p, dp, _) = self.eval(phi);
        let e = unit(phi);
        self.origin + e * p + Point::new(-e.y, e.x) * dp
    }

    /// Envelope points at the grid angles, from the stored samples.
    pub fn envelope_on_grid(&self) -> Vec<Point> {
        let h = self.step();
        self.p
            .iter()
            .zip(&self.dp)
            .enumerate()
            .map(|(j, (p, dp))| {
                let e = unit(j as f64 * h);
                self.origin + e * *p + Point::new(-e.y, e.x) * *dp
            })
            .collect()
    }
}

/// Support function of a strictly convex Euclidean track about its area centroid.
pub fn support_function(track: &FrontTrack) -> Result<SupportFunction> {
    let c = area_moments(track)?.centroid;
    support_function_about(track, c)
}

/// Support function of a strictly convex Euclidean track about `origin`.
pub fn support_function_about(track: &FrontTrack, origin: Point) -> Result<SupportFunction> {
    if track.geometry() != Geometry::Euclidean {
        return Err(Error::GeometryMismatch { expected: Geometry::Euclidean, found: track.geometry() });
    }
    if !track.is_closed() {
        return Err(Error::OpenTrack);
    }
    if !track.is_convex() || track.traversals() != 1 {
        return Err(Error::NotConvex);
    }
    let m = DEFAULT_GRID;
    let total = track.total_length();
    let theta0 = track.tangent_angle(0.0);
    let mut p = Vec::with_capacity(m);
    let mut dp = Vec::with_capacity(m);
    for j in 0..m {
        let phi = 2.0 * PI * j as f64 / m as f64;
        // the tangent angle increases through [θ₀, θ₀ + 2π]; find where it equals φ + π/2
        let target = theta0 + wrap_2pi(phi + 0.5 * PI - theta0);
        let t = solve_tangent(track, target, total);
        let x = track.position(t) - origin;
        let e = unit(phi);
        p.push(x.dot(&e));
        dp.push(x.dot(&Point::new(-e.y, e.x)));
    }
    Ok(SupportFunction::from_samples(origin, p, dp, DEFAULT_FOURIER_ORDER))
}

fn solve_tangent(track: &FrontTrack, target: f64, total: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, total);
    let mut t = total * (target - track.tangent_angle(0.0)) / (2.0 * PI);
    for _ in 0..200 {
        let tp = track.eval(t);
        let f = tp.tangent_angle - target;
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let mut next = t - f / tp.curvature;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() < 1e-15 * total || hi - lo < 1e-15 * total {
            return next;
        }
        t = next;
    }
    t
}

/// Signed length `∫p dφ` and signed area `½∫(p² − p′²) dφ`.
pub fn support_length_area(p: &SupportFunction) -> (f64, f64) {
    let h = p.step();
    let length = p.p.iter().sum::<f64>() * h;
    let area = 0.5 * p.p.iter().zip(&p.dp).map(|(a, b)| a * a - b * b).sum::<f64>() * h;
    (length, area)
}

/// Equidistant curve at distance `t`: support function `p − t`.
pub fn wavefront(p: &SupportFunction, t: f64) -> SupportFunction {
    let mut out = p.clone();
    out.p.iter_mut().for_each(|v| *v -= t);
    out.cos[0] -= t;
    out
}

/// Isoperimetric defect `L² − 4πA`.
pub fn isoperimetric_defect(p: &SupportFunction) -> f64 {
    let (l, a) = support_length_area(p);
    l * l - 4.0 * PI * a
}
