use std::f64::consts::PI;
use std::sync::Arc;

use super::{cross, unit, Point};
use crate::error::{Error, Result};
use crate::noneuclid::Geometry;
use crate::quad::{gauss_legendre, wrap_pi};

/// Position, unwrapped tangent angle and signed curvature at one arc-length value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackPoint {
    pub position: Point,
    pub tangent_angle: f64,
    pub curvature: f64,
}

/// A unit-speed front-wheel track.
///
/// One pass of an underlying base curve is repeated `traversals` times; a
/// reversed track runs the same passes backwards in time. For spherical and
/// hyperbolic tracks `position` lives in a geodesic-polar chart
/// `ρ (cos φ, sin φ)` and only the curvature is geometrically meaningful.
#[derive(Debug, Clone)]
pub struct FrontTrack {
    base: Arc<BaseCurve>,
    period: f64,
    turn: f64,
    traversals: u32,
    reversed: bool,
    offset: f64,
    closed: bool,
    convex: bool,
    kmin: f64,
    kmax: f64,
    geometry: Geometry,
}

impl FrontTrack {
    pub(crate) fn new(base: BaseCurve, traversals: u32, reversed: bool, geometry: Geometry) -> Result<Self> {
        if traversals == 0 {
            return Err(Error::InvalidSpec("traversals must be >= 1".into()));
        }
        let period = base.period();
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidSpec(format!("curve length {period} is not positive")));
        }
        let closed = base.is_closed();
        if !closed && traversals != 1 {
            return Err(Error::InvalidSpec("an open track can only be traversed once".into()));
        }
        let turn = base.eval(period).tangent_angle - base.eval(0.0).tangent_angle;
        let track = FrontTrack {
            base: Arc::new(base),
            period,
            turn,
            traversals,
            reversed,
            offset: 0.0,
            closed,
            convex: false,
            kmin: 0.0,
            kmax: 0.0,
            geometry,
        };
        Ok(track.with_convexity())
    }

    /// Total arc length `T` over all passes.
    pub fn total_length(&self) -> f64 {
        self.period * self.traversals as f64
    }

    /// Arc length of a single pass.
    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn traversals(&self) -> u32 {
        self.traversals
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Strict convexity: closed and curvature positive on the sample grid.
    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    /// Position, unwrapped tangent angle and curvature at arc length `t ∈ [0, T]`.
    pub fn eval(&self, t: f64) -> TrackPoint {
        let total = self.total_length();
        let t = t.clamp(0.0, total);
        if self.offset == 0.0 {
            return self.eval_unshifted(t);
        }
        let u = t + self.offset;
        if u > total {
            let mut p = self.eval_unshifted(u - total);
            p.tangent_angle += self.eval_unshifted(total).tangent_angle - self.eval_unshifted(0.0).tangent_angle;
            p
        } else {
            self.eval_unshifted(u)
        }
    }

    fn eval_unshifted(&self, t: f64) -> TrackPoint {
        let total = self.total_length();
        let s = if self.reversed { total - t } else { t };
        let pass = ((s / self.period).floor() as i64).clamp(0, self.traversals as i64 - 1);
        let tau = s - pass as f64 * self.period;
        let mut p = self.base.eval(tau);
        p.tangent_angle += pass as f64 * self.turn;
        if self.reversed {
            p.tangent_angle += PI;
            p.curvature = -p.curvature;
        }
        p
    }

    pub fn position(&self, t: f64) -> Point {
        self.eval(t).position
    }

    pub fn tangent_angle(&self, t: f64) -> f64 {
        self.eval(t).tangent_angle
    }

    pub fn curvature(&self, t: f64) -> f64 {
        self.eval(t).curvature
    }

    /// Arc-length values where the curvature may jump, including `0` and `T`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let total = self.total_length();
        let base = self.base.breakpoints();
        let mut out = Vec::with_capacity(base.len() * self.traversals as usize + 2);
        for pass in 0..self.traversals {
            for &b in &base {
                let s = pass as f64 * self.period + b;
                let s = if self.reversed { total - s } else { s };
                out.push((s - self.offset).rem_euclid(total));
            }
        }
        out.push(0.0);
        out.push(total);
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-13 * total.max(1.0));
        out
    }

    /// Total tangent rotation divided by 2π, rounded (closed tracks only).
    pub fn turning_number(&self) -> i64 {
        let d = self.eval(self.total_length()).tangent_angle - self.eval(0.0).tangent_angle;
        (d / (2.0 * PI)).round() as i64
    }

    /// The same passes traversed backwards in time, ending where this track starts.
    pub fn reversed(&self) -> FrontTrack {
        let total = self.total_length();
        let offset = if self.offset == 0.0 { 0.0 } else { total - self.offset };
        FrontTrack { reversed: !self.reversed, offset, convex: false, ..self.clone() }.with_convexity()
    }

    /// The same closed track started at arc length `t0` (taken modulo `T`).
    pub fn rebased(&self, t0: f64) -> Result<FrontTrack> {
        if !self.closed {
            return Err(Error::OpenTrack);
        }
        let total = self.total_length();
        let offset = (self.offset + t0).rem_euclid(total);
        Ok(FrontTrack { offset, ..self.clone() })
    }

    /// Arc length (in this track's own parameter) where the unshifted track starts.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    fn with_convexity(mut self) -> Self {
        let (lo, hi) = self.curvature_samples().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), k| (lo.min(k), hi.max(k)));
        self.kmin = lo;
        self.kmax = hi;
        self.convex = self.closed && lo > 0.0;
        self
    }

    /// `n + 1` equally spaced samples in arc length.
    pub fn sample(&self, n: usize) -> Vec<TrackPoint> {
        let total = self.total_length();
        (0..=n).map(|i| self.eval(total * i as f64 / n as f64)).collect()
    }

    /// Smallest curvature over a dense grid plus the midpoints of every smooth piece.
    pub fn min_curvature(&self) -> f64 {
        self.kmin
    }

    /// Largest curvature over the same grid.
    pub fn max_curvature(&self) -> f64 {
        self.kmax
    }

    fn curvature_samples(&self) -> impl Iterator<Item = f64> + '_ {
        let total = self.total_length();
        let n = 4096 * self.traversals as usize;
        let bps = self.breakpoints();
        let mids: Vec<f64> = bps.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        (0..n)
            .map(move |i| total * (i as f64 + 0.5) / n as f64)
            .chain(mids)
            .map(move |t| self.eval(t).curvature)
    }

    /// Largest distance between two points of the track (sampled).
    pub fn diameter(&self) -> f64 {
        let pts: Vec<Point> = {
            let n = 512;
            (0..n).map(|i| self.position(self.period * i as f64 / n as f64)).collect()
        };
        let mut d: f64 = 0.0;
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                d = d.max((a - b).norm());
            }
        }
        if !self.closed {
            d = d.max((self.position(0.0) - self.position(self.total_length())).norm());
        }
        d
    }

    /// A closed track traversed once whose sampled polygon has no self-crossings.
    pub fn is_simple(&self) -> bool {
        if !self.closed || self.traversals != 1 {
            return false;
        }
        let n = 720;
        let pts: Vec<Point> = (0..n).map(|i| self.position(self.period * i as f64 / n as f64)).collect();
        for i in 0..n {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (c, d) = (pts[j], pts[(j + 1) % n]);
                if segments_cross(&a, &b, &c, &d) {
                    return false;
                }
            }
        }
        true
    }
}

fn segments_cross(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let d1 = cross(&(b - a), &(c - a));
    let d2 = cross(&(b - a), &(d - a));
    let d3 = cross(&(d - c), &(a - c));
    let d4 = cross(&(d - c), &(b - c));
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// One pass of a unit-speed curve on `[0, period]`.
#[derive(Debug, Clone)]
pub(crate) enum BaseCurve {
    Line { start: Point, angle: f64, length: f64 },
    Circle { center: Point, radius: f64, phase: f64 },
    Parametric(ParametricCurve),
    Support(SupportCurve),
    Piecewise(Piecewise),
    /// Geodesic circle of radius `rho` on the sphere or in H², in a polar chart.
    GeodesicCircle { rho: f64, curvature: f64, perimeter: f64 },
}

impl BaseCurve {
    fn period(&self) -> f64 {
        match self {
            BaseCurve::Line { length, .. } => *length,
            BaseCurve::Circle { radius, .. } => 2.0 * PI * radius,
            BaseCurve::Parametric(c) => c.length(),
            BaseCurve::Support(c) => c.length(),
            BaseCurve::Piecewise(c) => c.length,
            BaseCurve::GeodesicCircle { perimeter, .. } => *perimeter,
        }
    }

    fn is_closed(&self) -> bool {
        match self {
            BaseCurve::Line { .. } => false,
            BaseCurve::Piecewise(c) => c.closed,
            _ => true,
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            BaseCurve::Piecewise(c) => c.starts.clone(),
            _ => Vec::new(),
        }
    }

    fn eval(&self, tau: f64) -> TrackPoint {
        match self {
            BaseCurve::Line { start, angle, .. } => TrackPoint {
                position: start + unit(*angle) * tau,
                tangent_angle: *angle,
                curvature: 0.0,
            },
            BaseCurve::Circle { center, radius, phase } => {
                let phi = phase + tau / radius;
                TrackPoint {
                    position: center + unit(phi) * *radius,
                    tangent_angle: phi + 0.5 * PI,
                    curvature: 1.0 / radius,
                }
            }
            BaseCurve::Parametric(c) => c.eval(tau),
            BaseCurve::Support(c) => c.eval(tau),
            BaseCurve::Piecewise(c) => c.eval(tau),
            BaseCurve::GeodesicCircle { rho, curvature, perimeter } => {
                let phi = 2.0 * PI * tau / perimeter;
                TrackPoint {
                    position: unit(phi) * *rho,
                    tangent_angle: phi + 0.5 * PI,
                    curvature: *curvature,
                }
            }
        }
    }
}

/// Trigonometric polynomial `Σ cₙ cos(nu) + sₙ sin(nu)`, `n ≥ 0`.
#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct Trig {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl Trig {
    /// Value and first two derivatives at `u`.
    fn eval3(&self, u: f64) -> (f64, f64, f64) {
        let n = self.cos.len().max(self.sin.len());
        let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for k in 0..n {
            let c = self.cos.get(k).copied().unwrap_or(0.0);
            let s = self.sin.get(k).copied().unwrap_or(0.0);
            if c == 0.0 && s == 0.0 {
                continue;
            }
            let kf = k as f64;
            let (sn, cs) = (kf * u).sin_cos();
            v += c * cs + s * sn;
            d1 += kf * (-c * sn + s * cs);
            d2 += -kf * kf * (c * cs + s * sn);
        }
        (v, d1, d2)
    }
}

const TABLE_NODES: usize = 1024;

/// Closed curve `(x(u), y(u))`, `u ∈ [0, 2π]`, reparameterized by arc length.
#[derive(Debug, Clone)]
pub(crate) struct ParametricCurve {
    x: Trig,
    y: Trig,
    cumulative: Vec<f64>,
    theta: Vec<f64>,
}

impl ParametricCurve {
    pub(crate) fn new(x: Trig, y: Trig) -> Result<Self> {
        let mut c = ParametricCurve { x, y, cumulative: Vec::new(), theta: Vec::new() };
        let du = 2.0 * PI / TABLE_NODES as f64;
        let mut cumulative = vec![0.0; TABLE_NODES + 1];
        let mut theta = vec![0.0; TABLE_NODES + 1];
        let mut min_speed = f64::INFINITY;
        for i in 0..=TABLE_NODES {
            let u = i as f64 * du;
            let (dx, dy) = c.velocity(u);
            min_speed = min_speed.min(dx.hypot(dy));
            let raw = dy.atan2(dx);
            theta[i] = if i == 0 { raw } else { theta[i - 1] + wrap_pi(raw - theta[i - 1]) };
            if i > 0 {
                cumulative[i] = cumulative[i - 1] + gauss_legendre(u - du, u, 1, |v| c.speed(v));
            }
        }
        if !(min_speed > 1e-9 * cumulative[TABLE_NODES]) {
            return Err(Error::InvalidSpec("parametric curve is not regular (zero speed)".into()));
        }
        c.cumulative = cumulative;
        c.theta = theta;
        Ok(c)
    }

    fn velocity(&self, u: f64) -> (f64, f64) {
        (self.x.eval3(u).1, self.y.eval3(u).1)
    }

    fn speed(&self, u: f64) -> f64 {
        let (dx, dy) = self.velocity(u);
        dx.hypot(dy)
    }

    fn length(&self) -> f64 {
        self.cumulative[TABLE_NODES]
    }

    fn node(&self, u: f64) -> usize {
        let du = 2.0 * PI / TABLE_NODES as f64;
        ((u / du).floor() as usize).min(TABLE_NODES - 1)
    }

    fn arc_length_at(&self, u: f64) -> f64 {
        let du = 2.0 * PI / TABLE_NODES as f64;
        let i = self.node(u);
        self.cumulative[i] + gauss_legendre(i as f64 * du, u, 1, |v| self.speed(v))
    }

    /// Inverts arc length by safeguarded Newton iteration.
    fn parameter_at(&self, s: f64) -> f64 {
        let du = 2.0 * PI / TABLE_NODES as f64;
        let s = s.clamp(0.0, self.length());
        let i = self.cumulative.partition_point(|&c| c <= s).clamp(1, TABLE_NODES) - 1;
        let (lo, hi) = (i as f64 * du, (i + 1) as f64 * du);
        let frac = (s - self.cumulative[i]) / (self.cumulative[i + 1] - self.cumulative[i]);
        let guess = lo + frac * du;
        newton_monotone(|u| self.arc_length_at(u) - s, |u| self.speed(u), lo, hi, guess)
    }

    fn eval(&self, tau: f64) -> TrackPoint {
        let du = 2.0 * PI / TABLE_NODES as f64;
        let u = self.parameter_at(tau);
        let (x, dx, ddx) = self.x.eval3(u);
        let (y, dy, ddy) = self.y.eval3(u);
        let speed = dx.hypot(dy);
        let i = self.node(u);
        let frac = (u - i as f64 * du) / du;
        let reference = self.theta[i] + frac * (self.theta[i + 1] - self.theta[i]);
        TrackPoint {
            position: Point::new(x, y),
            tangent_angle: reference + wrap_pi(dy.atan2(dx) - reference),
            curvature: (dx * ddy - dy * ddx) / speed.powi(3),
        }
    }
}

/// Strictly convex curve given as the envelope of its support function
/// `p(φ) = a₀ + Σ aₙ cos nφ + bₙ sin nφ` about `center`.
#[derive(Debug, Clone)]
pub(crate) struct SupportCurve {
    center: Point,
    p: Trig,
}

impl SupportCurve {
    pub(crate) fn new(center: Point, p: Trig) -> Result<Self> {
        let c = SupportCurve { center, p };
        let n = 4096;
        let min_radius = (0..n)
            .map(|i| c.radius_of_curvature(2.0 * PI * i as f64 / n as f64))
            .fold(f64::INFINITY, f64::min);
        if !(min_radius > 0.0) {
            return Err(Error::NonConvexSupport { min_radius });
        }
        Ok(c)
    }

    fn radius_of_curvature(&self, phi: f64) -> f64 {
        let (p, _, pdd) = self.p.eval3(phi);
        p + pdd
    }

    fn length(&self) -> f64 {
        2.0 * PI * self.p.cos.first().copied().unwrap_or(0.0)
    }

    /// `s(φ) = ∫₀^φ (p + p″)` in closed form.
    fn arc_length_at(&self, phi: f64) -> f64 {
        let n = self.p.cos.len().max(self.p.sin.len());
        let mut s = self.p.cos.first().copied().unwrap_or(0.0) * phi;
        for k in 1..n {
            let kf = k as f64;
            let a = self.p.cos.get(k).copied().unwrap_or(0.0);
            let b = self.p.sin.get(k).copied().unwrap_or(0.0);
            let factor = (1.0 - kf * kf) / kf;
            s += factor * (a * (kf * phi).sin() + b * (1.0 - (kf * phi).cos()));
        }
        s
    }

    fn eval(&self, tau: f64) -> TrackPoint {
        let a0 = self.p.cos.first().copied().unwrap_or(0.0);
        let guess = tau / a0;
        let phi = newton_monotone(
            |phi| self.arc_length_at(phi) - tau,
            |phi| self.radius_of_curvature(phi),
            0.0,
            2.0 * PI,
            guess,
        );
        let (p, dp, ddp) = self.p.eval3(phi);
        let e = unit(phi);
        let n = Point::new(-e.y, e.x);
        TrackPoint {
            position: self.center + e * p + n * dp,
            tangent_angle: phi + 0.5 * PI,
            curvature: 1.0 / (p + ddp),
        }
    }
}

/// Newton iteration for an increasing function, kept inside `[lo, hi]` by bisection.
fn newton_monotone<F, D>(f: F, df: D, mut lo: f64, mut hi: f64, guess: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut x = guess.clamp(lo, hi);
    for _ in 0..100 {
        let fx = f(x);
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let step = fx / df(x);
        let mut next = x - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-14 * (1.0 + x.abs()) {
            return next;
        }
        x = next;
    }
    x
}

#[derive(Debug, Clone)]
pub(crate) enum Piece {
    Line { start: Point, angle: f64 },
    Arc { center: Point, radius: f64, start_polar: f64, sign: f64, theta0: f64 },
}

/// Lines joined by circular-arc fillets; each piece is exactly unit speed.
#[derive(Debug, Clone)]
pub(crate) struct Piecewise {
    pieces: Vec<Piece>,
    starts: Vec<f64>,
    length: f64,
    closed: bool,
}

impl Piecewise {
    fn eval(&self, tau: f64) -> TrackPoint {
        let i = self.starts.partition_point(|&s| s <= tau).clamp(1, self.pieces.len()) - 1;
        let local = tau - self.starts[i];
        match &self.pieces[i] {
            Piece::Line { start, angle } => TrackPoint {
                position: start + unit(*angle) * local,
                tangent_angle: *angle,
                curvature: 0.0,
            },
            Piece::Arc { center, radius, start_polar, sign, theta0 } => {
                let turn = sign * local / radius;
                TrackPoint {
                    position: center + unit(start_polar + turn) * *radius,
                    tangent_angle: theta0 + turn,
                    curvature: sign / radius,
                }
            }
        }
    }

    /// Builds a C¹ curve from a vertex list by rounding each corner with a
    /// circular arc of radius `fillet` (shrunk where the adjacent edges are short).
    pub(crate) fn from_polyline(vertices: &[Point], closed: bool, fillet: Option<f64>) -> Result<Self> {
        let mut v: Vec<Point> = Vec::with_capacity(vertices.len());
        for p in vertices {
            if v.last().map_or(true, |q: &Point| (p - q).norm() > 0.0) {
                v.push(*p);
            }
        }
        if closed && v.len() > 1 && (v[0] - v[v.len() - 1]).norm() == 0.0 {
            v.pop();
        }
        let n = v.len();
        if closed && n < 3 {
            return Err(Error::DegeneratePolyline("a closed polyline needs at least 3 distinct vertices".into()));
        }
        if !closed && n < 2 {
            return Err(Error::DegeneratePolyline("an open polyline needs at least 2 distinct vertices".into()));
        }
        let mut diameter: f64 = 0.0;
        for (i, a) in v.iter().enumerate() {
            for b in &v[i + 1..] {
                diameter = diameter.max((a - b).norm());
            }
        }
        if closed {
            let area: f64 = (0..n).map(|i| cross(&v[i], &v[(i + 1) % n])).sum::<f64>() * 0.5;
            if area.abs() <= 1e-12 * diameter * diameter {
                return Err(Error::DegeneratePolyline("vertices are collinear".into()));
            }
        }
        let radius = fillet.unwrap_or(1e-3 * diameter);
        if !(radius >= 0.0) {
            return Err(Error::InvalidSpec("fillet radius must be non-negative".into()));
        }
        let edges = if closed { n } else { n - 1 };
        let dir = |i: usize| -> Point { (v[(i + 1) % n] - v[i]).normalize() };
        let len = |i: usize| -> f64 { (v[(i + 1) % n] - v[i]).norm() };

        // corner j sits between edge j-1 and edge j
        let mut turn = vec![0.0; n];
        let mut tangent_len = vec![0.0; n];
        let mut radii = vec![0.0; n];
        for j in 0..n {
            if !closed && (j == 0 || j == n - 1) {
                continue;
            }
            let e_in = (j + edges - 1) % edges;
            let (din, dout) = (dir(e_in), dir(j % edges));
            let delta = cross(&din, &dout).atan2(din.dot(&dout));
            if delta.abs() > PI - 1e-9 {
                return Err(Error::DegeneratePolyline(format!("vertex {j} reverses direction")));
            }
            turn[j] = delta;
            if delta.abs() < 1e-12 || radius == 0.0 {
                continue;
            }
            let half = (0.5 * delta.abs()).tan();
            let tl = (radius * half).min(0.5 * len(e_in).min(len(j % edges)));
            tangent_len[j] = tl;
            radii[j] = tl / half;
        }
        if radius == 0.0 && turn.iter().any(|t| t.abs() > 1e-12) {
            return Err(Error::InvalidSpec("corners need a positive fillet radius".into()));
        }

        let mut pieces = Vec::new();
        let mut starts = Vec::new();
        let mut s = 0.0;
        let mut theta = cross(&Point::x(), &dir(0)).atan2(Point::x().dot(&dir(0)));
        for i in 0..edges {
            let d = dir(i);
            let next = (i + 1) % n;
            let a = v[i] + d * tangent_len[i];
            let line_len = len(i) - tangent_len[i] - tangent_len[next];
            if line_len > 1e-15 * diameter {
                pieces.push(Piece::Line { start: a, angle: theta });
                starts.push(s);
                s += line_len;
            }
            if radii[next] > 0.0 {
                let t1 = v[next] - d * tangent_len[next];
                let sign = turn[next].signum();
                let normal = Point::new(-d.y, d.x);
                let center = t1 + normal * (sign * radii[next]);
                let rel = t1 - center;
                pieces.push(Piece::Arc {
                    center,
                    radius: radii[next],
                    start_polar: rel.y.atan2(rel.x),
                    sign,
                    theta0: theta,
                });
                starts.push(s);
                s += radii[next] * turn[next].abs();
            }
            theta += turn[next];
        }
        if pieces.is_empty() {
            return Err(Error::DegeneratePolyline("no pieces".into()));
        }
        Ok(Piecewise { pieces, starts, length: s, closed })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{make_curve, CurveSpec};
    use approx::assert_relative_eq;

    fn assert_unit_speed(track: &FrontTrack) {
        let total = track.total_length();
        let h = 1e-5;
        let n = 997;
        for i in 0..n {
            let t = (total - 2.0 * h) * (i as f64 + 0.5) / n as f64 + h;
            let v = (track.position(t + h) - track.position(t - h)) / (2.0 * h);
            assert!((v.norm() - 1.0).abs() < 1e-6, "speed {} at t = {t}", v.norm());
        }
    }

    #[test]
    fn built_in_kinds_are_unit_speed() {
        let specs = [
            CurveSpec::circle(0.7),
            CurveSpec::ellipse(2.0, 1.0),
            CurveSpec::ellipse(3.0, 0.5).with_traversals(2).with_orientation(-1),
            CurveSpec::fourier_support(1.0, vec![0.0, 0.1, 0.05], vec![0.0, -0.02, 0.0]),
            CurveSpec::fourier_curve(
                vec![0.0, 1.0],
                vec![0.0, 0.0, 0.0],
                vec![0.0, 0.0],
                vec![0.0, 0.0, 0.5],
            ),
            CurveSpec::polyline(vec![Point::new(0.0, 0.0), Point::new(3.0, 0.0), Point::new(0.0, 3.0)]),
            CurveSpec::line(Point::new(0.0, 1.0), 0.3, 5.0),
        ];
        for spec in specs {
            let track = make_curve(&spec).unwrap();
            assert_unit_speed(&track);
        }
    }

    #[test]
    fn tangent_angle_winds_by_turning_number() {
        let e = make_curve(&CurveSpec::ellipse(2.0, 1.0).with_traversals(3)).unwrap();
        let d = e.tangent_angle(e.total_length()) - e.tangent_angle(0.0);
        assert_relative_eq!(d, 6.0 * PI, epsilon = 1e-9);
        assert_eq!(e.turning_number(), 3);
        let tri = make_curve(&CurveSpec::polyline(vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 3.0),
            Point::new(3.0, 0.0),
        ]))
        .unwrap();
        assert_eq!(tri.turning_number(), -1);
    }

    #[test]
    fn closed_tracks_return_to_start() {
        for spec in [CurveSpec::ellipse(2.0, 1.0), CurveSpec::fourier_support(1.0, vec![0.0, 0.0, 0.05], vec![])] {
            let t = make_curve(&spec).unwrap();
            assert!((t.position(0.0) - t.position(t.total_length())).norm() < 1e-10);
        }
    }

    #[test]
    fn reversal_runs_backwards() {
        let e = make_curve(&CurveSpec::ellipse(2.0, 1.0)).unwrap();
        let r = e.reversed();
        let total = e.total_length();
        for t in [0.0, 0.3, 2.0, total] {
            assert!((r.position(t) - e.position(total - t)).norm() < 1e-12);
            assert_relative_eq!(r.curvature(t), -e.curvature(total - t), epsilon = 1e-12);
        }
        assert!(!r.is_convex());
        assert!(r.reversed().is_convex());
    }

    #[test]
    fn polyline_fillets_are_tangent_continuous() {
        let tri = make_curve(&CurveSpec::polyline(vec![
            Point::new(0.0, 0.0),
            Point::new(3.0, 0.0),
            Point::new(0.0, 3.0),
        ]))
        .unwrap();
        let bps = tri.breakpoints();
        for &b in &bps[1..bps.len() - 1] {
            let before = tri.eval(b - 1e-11);
            let after = tri.eval(b + 1e-11);
            assert!((before.position - after.position).norm() < 1e-8);
            assert!((before.tangent_angle - after.tangent_angle).abs() < 1e-8);
        }
        assert!(!tri.is_convex());
        assert!(tri.is_simple());
    }

    #[test]
    fn figure_eight_is_not_simple() {
        let eight = make_curve(&CurveSpec::fourier_curve(vec![0.0, 1.0], vec![], vec![], vec![0.0, 0.0, 0.5])).unwrap();
        assert!(!eight.is_simple());
        assert_eq!(eight.turning_number(), 0);
        assert!(make_curve(&CurveSpec::ellipse(2.0, 1.0)).unwrap().is_simple());
    }

    #[test]
    fn newton_inverts_arc_length_tightly() {
        let e = make_curve(&CurveSpec::ellipse(2.0, 1.0)).unwrap();
        let BaseCurve::Parametric(c) = e.base.as_ref() else { panic!() };
        for s in [0.0, 1.0, 4.2, c.length()] {
            let u = c.parameter_at(s);
            assert!((c.arc_length_at(u) - s).abs() < 1e-12);
        }
    }
}
