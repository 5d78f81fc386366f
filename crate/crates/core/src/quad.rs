//! Quadrature and small numeric helpers shared across modules.

use std::f64::consts::PI;

const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Composite 8-point Gauss–Legendre rule on `[a, b]` with `panels` panels.
pub(crate) fn gauss_legendre<F: FnMut(f64) -> f64>(a: f64, b: f64, panels: usize, mut f: F) -> f64 {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let mid = a + (i as f64 + 0.5) * h;
        let half = 0.5 * h;
        let mut s = 0.0;
        for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
            s += w * (f(mid - half * x) + f(mid + half * x));
        }
        total += s * half;
    }
    total
}

fn gl8_panel<F: FnMut(f64) -> f64>(a: f64, b: f64, f: &mut F) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut s = 0.0;
    for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
        s += w * (f(mid - half * x) + f(mid + half * x));
    }
    s * half
}

fn adaptive_panel<F: FnMut(f64) -> f64>(a: f64, b: f64, whole: f64, tol: f64, depth: u32, f: &mut F) -> f64 {
    let m = 0.5 * (a + b);
    let left = gl8_panel(a, m, f);
    let right = gl8_panel(m, b, f);
    let split = left + right;
    if depth == 0 || (split - whole).abs() <= tol {
        return split;
    }
    adaptive_panel(a, m, left, 0.5 * tol, depth - 1, f) + adaptive_panel(m, b, right, 0.5 * tol, depth - 1, f)
}

/// Composite 8-point Gauss–Legendre rule with each panel bisected until
/// halving changes it by at most its share of `tol`.
pub(crate) fn gauss_legendre_adaptive<F: FnMut(f64) -> f64>(a: f64, b: f64, panels: usize, tol: f64, mut f: F) -> f64 {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let share = tol / panels as f64;
    (0..panels)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let whole = gl8_panel(lo, hi, &mut f);
            adaptive_panel(lo, hi, whole, share, 10, &mut f)
        })
        .sum()
}

/// Composite Simpson rule on uniformly spaced samples. An odd number of
/// intervals closes with Simpson's 3/8 rule on the last three.
pub(crate) fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len().saturating_sub(1);
    match n {
        0 => 0.0,
        1 => 0.5 * h * (values[0] + values[1]),
        2 => h / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        3 => 3.0 * h / 8.0 * (values[0] + 3.0 * values[1] + 3.0 * values[2] + values[3]),
        _ => {
            let even_part = if n % 2 == 0 { n } else { n - 3 };
            let mut s = values[0] + values[even_part];
            for (i, v) in values.iter().enumerate().take(even_part).skip(1) {
                s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            let mut total = s * h / 3.0;
            if even_part < n {
                let v = &values[even_part..];
                total += 3.0 * h / 8.0 * (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3]);
            }
            total
        }
    }
}

/// Wraps an angle into `(-π, π]`.
pub(crate) fn wrap_pi(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y <= -PI {
        y + 2.0 * PI
    } else {
        y
    }
}

/// Wraps an angle into `[0, 2π)`.
pub(crate) fn wrap_2pi(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y >= 2.0 * PI {
        0.0
    } else {
        y
    }
}

/// One classical fourth-order Runge–Kutta step for a scalar ODE.
#[inline]
pub(crate) fn rk4_step<F: Fn(f64, f64) -> f64>(f: &F, t: f64, y: f64, h: f64) -> f64 {
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    let k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    let k4 = f(t + h, y + h * k3);
    y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}
