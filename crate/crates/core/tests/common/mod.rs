#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tractrix_core::dynamics::ConfigLoop;
use tractrix_core::{make_curve, CurveSpec, FrontTrack, Point, SupportFunction};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Support-function harmonics 2..=4 with `Σ (n² − 1)|cₙ| ≤ budget` (convex when `budget < a0`).
pub fn convex_harmonics(rng: &mut impl Rng, budget: f64) -> (Vec<f64>, Vec<f64>) {
    let mut cos = vec![0.0; 4];
    let mut sin = vec![0.0; 4];
    let raw: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let weight: f64 = raw.iter().enumerate().map(|(i, c)| (((i / 2 + 2) as f64).powi(2) - 1.0) * c.abs()).sum();
    let s = budget * rng.gen_range(0.3..1.0) / weight;
    for (i, c) in raw.iter().enumerate() {
        let n = i / 2 + 1;
        if i % 2 == 0 {
            cos[n] = c * s;
        } else {
            sin[n] = c * s;
        }
    }
    (cos, sin)
}

/// Strictly convex closed track from a random support function around a random center.
pub fn random_convex(rng: &mut impl Rng) -> FrontTrack {
    let a0 = rng.gen_range(0.8..1.5);
    let (cos, sin) = convex_harmonics(rng, 0.7 * a0);
    let c = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    make_curve(&CurveSpec::fourier_support(a0, cos, sin).with_center(c)).unwrap()
}

/// Smooth closed track (not necessarily convex) from a perturbed circle.
pub fn random_smooth(rng: &mut impl Rng) -> FrontTrack {
    let mut coef = || -> Vec<f64> { (0..4).map(|n| if n == 0 { 0.0 } else { rng.gen_range(-0.15..0.15) / n as f64 }).collect() };
    let (mut x_cos, x_sin, y_cos, mut y_sin) = (coef(), coef(), coef(), coef());
    x_cos[1] += 1.0;
    y_sin[1] += 1.0;
    make_curve(&CurveSpec::fourier_curve(x_cos, x_sin, y_cos, y_sin)).unwrap()
}

/// Zero-mean support function with random harmonics 1..=5.
pub fn random_zero_mean_support(rng: &mut impl Rng) -> SupportFunction {
    let cos: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let sin: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
    SupportFunction::from_fourier(0.0, &cos, &sin)
}

/// Random smooth loop in `(x, y, θ)` that ignores the bicycle constraint.
pub fn random_config_loop(rng: &mut impl Rng, samples: usize) -> ConfigLoop {
    let ell = rng.gen_range(0.5..2.0);
    let winding = rng.gen_range(-2i32..=2) as f64;
    let mut series = || {
        let a: Vec<(f64, f64)> = (0..4).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        move |s: f64| a.iter().enumerate().map(|(n, (c, d))| c * ((n + 1) as f64 * s).cos() + d * ((n + 1) as f64 * s).sin()).sum::<f64>()
    };
    let (fx, fy, ft) = (series(), series(), series());
    let grid: Vec<f64> = (0..samples).map(|j| 2.0 * PI * j as f64 / samples as f64).collect();
    let x: Vec<f64> = grid.iter().map(|&s| fx(s)).collect();
    let y: Vec<f64> = grid.iter().map(|&s| fy(s)).collect();
    let theta: Vec<f64> = grid.iter().map(|&s| ft(s) + winding * s).collect();
    ConfigLoop::from_periodic_samples(ell, &x, &y, &theta).unwrap()
}

/// `a − b` reduced to `(−π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    if d > PI {
        d - 2.0 * PI
    } else {
        d
    }
}
