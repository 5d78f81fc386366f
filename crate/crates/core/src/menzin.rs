//! Critical wheelbase of a convex front track and Menzin's area bound.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate_steering, BikeParams, CurvatureGrid, DEFAULT_STEPS};
use crate::error::{Error, Result};
use crate::geom::{enclosed_area, unit, FrontTrack, Point};
use crate::moebius::{classify, fixed_points, MoebiusClass, MoebiusMap, DEFAULT_EPS_PAR};
use crate::noneuclid::Geometry;
use crate::quad::simpson;

/// Radius of the smallest osculating circle, `1 / max k`.
pub fn min_osculating_radius(track: &FrontTrack) -> Result<f64> {
    require_convex(track)?;
    Ok(1.0 / track.max_curvature())
}

fn require_convex(track: &FrontTrack) -> Result<()> {
    if track.geometry() != Geometry::Euclidean {
        return Err(Error::GeometryMismatch { expected: Geometry::Euclidean, found: track.geometry() });
    }
    if !track.is_closed() {
        return Err(Error::OpenTrack);
    }
    if !track.is_convex() {
        return Err(Error::NotConvex);
    }
    Ok(())
}

/// Knobs for the wheelbase scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Multiplicative step between scan points.
    pub ratio: f64,
    /// Bisection tolerance on `ℓ`; `None` means `1e-6·√(A/π)`.
    pub tol: Option<f64>,
    /// RK4 steps per traversal.
    pub steps: usize,
    /// The scan starts at `r / start_factor` with `r` the smallest osculating radius.
    pub start_factor: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { ratio: 1.05, tol: None, steps: DEFAULT_STEPS, start_factor: 1.05 }
    }
}

/// One scan sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub ell: f64,
    pub trace: f64,
    pub class: MoebiusClass,
}

/// Scan result: every sample, all brackets where `|trace| − 2` changes sign
/// and the bisected first transition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalScan {
    pub ell0: f64,
    pub samples: Vec<TracePoint>,
    pub transitions: Vec<(f64, f64)>,
}

/// Trace of the monodromy as a function of `ℓ`, sharing one curvature grid.
struct TraceFn {
    grid: CurvatureGrid,
}

impl TraceFn {
    fn new(track: &FrontTrack, steps: usize) -> Self {
        TraceFn { grid: CurvatureGrid::new(track, steps) }
    }

    fn map(&self, ell: f64) -> Result<MoebiusMap> {
        MoebiusMap::from_matrix(self.grid.fundamental_matrix(1.0 / ell))
    }

    fn trace(&self, ell: f64) -> Result<f64> {
        Ok(self.map(ell)?.trace())
    }
}

/// Scans `trace(ℓ)` upward from just below the smallest osculating radius in
/// steps of `ratio` up to `10√(A/π)`, recording every sign change of
/// `|trace| − 2`, and bisects the first one.
pub fn scan_critical(track: &FrontTrack, opts: &ScanOptions) -> Result<CriticalScan> {
    require_convex(track)?;
    if !(opts.ratio > 1.0) || !(opts.start_factor >= 1.0) {
        return Err(Error::InvalidParameter("scan ratio must exceed 1".into()));
    }
    let area = enclosed_area(track)?.abs();
    let scale = (area / PI).sqrt();
    let cap = 10.0 * scale;
    let tol = opts.tol.unwrap_or(1e-6 * scale);
    let r = 1.0 / track.max_curvature();
    let f = TraceFn::new(track, opts.steps);
    let mut ells = Vec::new();
    let mut ell = r / opts.start_factor;
    while ell < cap {
        ells.push(ell);
        ell *= opts.ratio;
    }
    ells.push(cap);
    let traces = ells.par_iter().map(|&l| f.trace(l)).collect::<Result<Vec<f64>>>()?;
    let samples: Vec<TracePoint> = ells
        .iter()
        .zip(&traces)
        .map(|(&ell, &trace)| TracePoint {
            ell,
            trace,
            class: classify(&MoebiusMap { m: [[0.5 * trace, 0.0], [0.0, 0.5 * trace]] }, DEFAULT_EPS_PAR),
        })
        .collect();
    let g = |t: f64| t.abs() - 2.0;
    let mut transitions = Vec::new();
    for w in samples.windows(2) {
        if (g(w[0].trace) > 0.0) != (g(w[1].trace) > 0.0) {
            transitions.push((w[0].ell, w[1].ell));
        }
    }
    let &(mut lo, mut hi) = transitions.first().ok_or(Error::NoTransition { cap })?;
    let above = g(f.trace(lo)?) > 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if (g(f.trace(mid)?) > 0.0) == above {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CriticalScan { ell0: 0.5 * (lo + hi), samples, transitions })
}

/// Smallest wheelbase where the monodromy becomes parabolic, to within `tol`.
pub fn critical_length(track: &FrontTrack, tol: f64) -> Result<f64> {
    Ok(scan_critical(track, &ScanOptions { tol: Some(tol), ..ScanOptions::default() })?.ell0)
}

/// Closed rear track at the attracting fixed point and the defect bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectBound {
    pub ell: f64,
    pub front_length: f64,
    pub front_area: f64,
    /// `L_F² − 4πA_F`.
    pub defect: f64,
    /// Signed area of the closed rear track from the area identity.
    pub rear_area: f64,
    /// The same area by Green's theorem on the rear track.
    pub rear_area_green: f64,
    /// `−4πA₀`.
    pub bound: f64,
    pub fixed_angle: f64,
    /// Signed rear length `∫cos α`.
    pub rear_length: f64,
    /// Total rotation `∫dθ` of the rod along the closed rear track.
    pub rear_rotation: f64,
    /// Gap between the rear track's endpoints.
    pub closure_gap: f64,
    pub holds: bool,
}

/// Defect `L² − 4πA` of the front track against `−4πA₀`, where `A₀` is the
/// signed area of the closed rear track at the attracting fixed point.
pub fn defect_bound(track: &FrontTrack, ell: f64) -> Result<DefectBound> {
    defect_bound_with(track, ell, DEFAULT_STEPS)
}

pub fn defect_bound_with(track: &FrontTrack, ell: f64, steps: usize) -> Result<DefectBound> {
    require_convex(track)?;
    let params = BikeParams::new(ell).with_steps(steps);
    params.validate()?;
    let map = MoebiusMap::from_matrix(CurvatureGrid::new(track, steps).fundamental_matrix(1.0 / ell))?;
    let fps = fixed_points(&map, DEFAULT_EPS_PAR);
    let fixed = fps.first().ok_or(Error::EllipticMonodromy { ell })?;
    let sol = integrate_steering(track, &params, fixed.angle)?;
    let h = sol.step();
    let mut integrand = Vec::with_capacity(sol.len());
    let mut cosines = Vec::with_capacity(sol.len());
    let mut rear = Vec::with_capacity(sol.len());
    for (i, &a) in sol.alphas().iter().enumerate() {
        let tp = track.eval(sol.time(i));
        let u = unit(tp.tangent_angle - a);
        let r: Point = tp.position - u * ell;
        let v = u * a.cos();
        integrand.push(r.x * v.y - r.y * v.x);
        cosines.push(a.cos());
        rear.push(r);
    }
    let front_area = enclosed_area(track)?;
    let rotation = (track.tangent_angle(track.total_length()) - track.tangent_angle(0.0))
        - (sol.final_alpha() - sol.alpha0());
    let rear_area = front_area - 0.5 * ell * ell * rotation;
    let rear_area_green = 0.5 * simpson(&integrand, h);
    let front_length = track.total_length();
    let defect = front_length * front_length - 4.0 * PI * front_area;
    let bound = -4.0 * PI * rear_area;
    let scale = front_length * front_length;
    Ok(DefectBound {
        ell,
        front_length,
        front_area,
        defect,
        rear_area,
        rear_area_green,
        bound,
        fixed_angle: fixed.angle,
        rear_length: simpson(&cosines, h),
        rear_rotation: rotation,
        closure_gap: (rear[0] - rear[rear.len() - 1]).norm(),
        holds: defect >= bound - 1e-6 * scale,
    })
}

/// Full numerical check of Menzin's bound on a convex front track.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MenzinReport {
    pub area: f64,
    pub min_osculating_radius: f64,
    pub ell0: f64,
    /// `A ≤ πℓ₀²(1 + 1e−4)`.
    pub bound_check: bool,
    /// `πℓ₀²/A − 1`.
    pub margin: f64,
    pub hyperbolic_at_half_radius: bool,
    pub elliptic_at_cap: bool,
    pub classification_curve: Vec<TracePoint>,
    pub transitions: Vec<(f64, f64)>,
    /// No elliptic sample lies below `ℓ₀`.
    pub monotone_below: bool,
    /// Defect bound just below `ℓ₀`, where the rear track still closes.
    pub defect_bound: Option<DefectBound>,
}

/// Assembles the report; any failing stage is an error naming the offending `ℓ`.
pub fn menzin_verify(track: &FrontTrack) -> Result<MenzinReport> {
    menzin_verify_with(track, &ScanOptions::default())
}

pub fn menzin_verify_with(track: &FrontTrack, opts: &ScanOptions) -> Result<MenzinReport> {
    require_convex(track)?;
    if !track.is_simple() {
        return Err(Error::NotSimple);
    }
    let area = enclosed_area(track)?;
    if area <= 0.0 {
        return Err(Error::InvalidParameter("track must be positively oriented".into()));
    }
    let r = 1.0 / track.max_curvature();
    let f = TraceFn::new(track, opts.steps);
    let small = f.trace(0.5 * r)?;
    if !(small > 2.0 + DEFAULT_EPS_PAR) {
        return Err(Error::VerificationFailed { ell: 0.5 * r, reason: format!("expected hyperbolic, trace {small}") });
    }
    let cap = 10.0 * (area / PI).sqrt();
    let large = f.trace(cap)?;
    if !(large.abs() < 2.0 - DEFAULT_EPS_PAR) {
        return Err(Error::VerificationFailed { ell: cap, reason: format!("expected elliptic, trace {large}") });
    }
    let scan = scan_critical(track, opts)?;
    let ell0 = scan.ell0;
    if ell0 < r - opts.tol.unwrap_or(1e-6 * (area / PI).sqrt()) {
        return Err(Error::VerificationFailed { ell: ell0, reason: format!("transition below osculating radius {r}") });
    }
    let bound = PI * ell0 * ell0;
    let bound_check = area <= bound * (1.0 + 1e-4);
    if !bound_check {
        return Err(Error::VerificationFailed { ell: ell0, reason: format!("area {area} exceeds πℓ₀² = {bound}") });
    }
    let monotone_below = scan
        .samples
        .iter()
        .filter(|s| s.ell < ell0)
        .all(|s| s.class != MoebiusClass::Elliptic);
    let defect = defect_bound_with(track, ell0 * (1.0 - 1e-3), opts.steps).ok();
    Ok(MenzinReport {
        area,
        min_osculating_radius: r,
        ell0,
        bound_check,
        margin: bound / area - 1.0,
        hyperbolic_at_half_radius: true,
        elliptic_at_cap: true,
        classification_curve: scan.samples,
        transitions: scan.transitions,
        monotone_below,
        defect_bound: defect,
    })
}
