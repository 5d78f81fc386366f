mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use tractrix_core::menzin::{defect_bound_with, scan_critical, ScanOptions};
use tractrix_core::*;

use common::*;

#[test]
fn small_wheelbases_are_hyperbolic() {
    let mut rng = rng(41);
    for _ in 0..10 {
        let track = random_convex(&mut rng);
        let r = min_osculating_radius(&track).unwrap();
        assert_eq!(monodromy(&track, &BikeParams::new(0.9 * r)).unwrap().class, MoebiusClass::Hyperbolic);
    }
}

#[test]
fn osculating_radius_of_support_curve() {
    let t = make_curve(&CurveSpec::fourier_support(1.0, vec![0.0, 0.1], vec![])).unwrap();
    assert_relative_eq!(min_osculating_radius(&t).unwrap(), 0.7, max_relative = 1e-9);
    let e = make_curve(&CurveSpec::ellipse(2.0, 1.0)).unwrap();
    assert_relative_eq!(min_osculating_radius(&e).unwrap(), 0.5, max_relative = 1e-6);
}

#[test]
fn ellipse_report() {
    let e = make_curve(&CurveSpec::ellipse(2.0, 1.0)).unwrap();
    let r = menzin_verify(&e).unwrap();
    assert!(r.hyperbolic_at_half_radius && r.elliptic_at_cap && r.bound_check && r.monotone_below);
    assert!(r.ell0 >= 2f64.sqrt() - 1e-6);
    assert_relative_eq!(r.area, 2.0 * PI, max_relative = 1e-9);
    assert!(r.min_osculating_radius <= r.ell0);
    for s in r.classification_curve.iter().filter(|s| s.ell < r.ell0) {
        assert!(s.trace > 2.0, "ℓ = {}: trace {}", s.ell, s.trace);
    }
    let moved = make_curve(&CurveSpec::ellipse(2.0, 1.0).with_rotation(0.7).with_center(Point::new(-3.0, 1.5))).unwrap();
    let m = menzin_verify(&moved).unwrap();
    assert_relative_eq!(m.ell0, r.ell0, max_relative = 1e-6);
    assert_relative_eq!(m.area, r.area, max_relative = 1e-9);
}

#[test]
fn structure_just_below_the_critical_length() {
    let mut rng = rng(42);
    for _ in 0..3 {
        let track = random_convex(&mut rng);
        let ell0 = critical_length(&track, 1e-9).unwrap();
        let near = defect_bound_with(&track, ell0 * (1.0 - 1e-4), 8192).unwrap();
        let far = defect_bound_with(&track, ell0 * 0.9, 8192).unwrap();
        for b in [&near, &far] {
            assert!(b.closure_gap < 1e-6, "closure gap {}", b.closure_gap);
            assert_relative_eq!(b.rear_rotation, 2.0 * PI, epsilon = 1e-6);
            assert!(b.holds);
        }
        // A₀ ≤ 0 holds at ℓ₀; below it A₀ = A − πℓ² carries the extra π(ℓ₀² − ℓ²)
        let at = defect_bound_with(&track, ell0 * (1.0 - 1e-8), 8192).unwrap();
        assert!(at.rear_area <= 1e-6, "A₀ = {}", at.rear_area);
        assert!(near.rear_area <= 1e-6 + PI * (ell0 * ell0 - near.ell * near.ell));
        assert!(near.rear_length.abs() < far.rear_length.abs());
        assert!(near.rear_length.abs() < 0.05 * track.total_length());
    }
}

#[test]
fn circle_defect_bounds() {
    let r = 1.5;
    let c = make_curve(&CurveSpec::circle(r)).unwrap();
    let b = defect_bound(&c, 1.0).unwrap();
    assert_relative_eq!(b.rear_area, PI * (r * r - 1.0), max_relative = 1e-9);
    assert!(b.defect.abs() < 1e-9);
    assert!(b.bound < 0.0 && b.holds);
    let critical = defect_bound(&c, r).unwrap();
    assert!(critical.rear_area.abs() < 1e-9 && critical.bound.abs() < 1e-8);
}

#[test]
fn scan_records_every_transition() {
    let c = make_curve(&CurveSpec::circle(1.0)).unwrap();
    let scan = scan_critical(&c, &ScanOptions::default()).unwrap();
    assert!(!scan.transitions.is_empty());
    assert!((scan.ell0 - 1.0).abs() < 1e-6);
    assert!(scan.samples.windows(2).all(|w| w[1].ell > w[0].ell));
}

#[test]
fn random_convex_tracks_respect_the_menzin_bound() {
    let mut rng = rng(43);
    for _ in 0..10 {
        let r = menzin_verify(&random_convex(&mut rng)).unwrap();
        assert!(r.area <= PI * r.ell0 * r.ell0 * (1.0 + 1e-3));
        assert!(r.bound_check && r.monotone_below);
    }
}
