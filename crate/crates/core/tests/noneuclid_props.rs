mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;
use tractrix_core::noneuclid::{
    develop_track, equilibrium_angle, rear_circle_radius, star_for_initial_angle, unit_bicycle_angles, HFrame,
};
use tractrix_core::*;

use common::*;

fn sphere_cap(rho: f64) -> FrontTrack {
    make_curve(&CurveSpec::geodesic_circle(rho, Geometry::Spherical)).unwrap()
}

#[test]
fn long_hyperbolic_bicycle_is_the_unit_bicycle() {
    let rho = 1.0;
    let disk = make_curve(&CurveSpec::geodesic_circle(rho, Geometry::Hyperbolic)).unwrap();
    let k = disk.curvature(0.0);
    assert_relative_eq!(k, 1.0 / rho.tanh(), epsilon = 1e-14);
    let alpha0 = 0.4;
    let sol = integrate_steering(&disk, &BikeParams::new(10.0).with_geometry(Geometry::Hyperbolic), alpha0).unwrap();
    let curve = develop_hyperbolic(|_| k, disk.total_length(), sol.len() - 1);
    let unit = unit_bicycle_angles(&curve, |_| k, alpha0);
    let stars = stargazing_angle(&curve, &star_for_initial_angle(alpha0)).unwrap();
    for i in 0..sol.len() {
        assert!((sol.alphas()[i] - unit[i]).abs() < 1e-4);
        assert!((stars[i] - unit[i]).abs() < 1e-6);
    }
}

#[test]
fn identity_circle_closes_and_has_identity_monodromy() {
    let r = 3f64.sqrt() / 2.0;
    let twice = make_curve(&CurveSpec::circle(r).with_traversals(2)).unwrap();
    let developed = develop_track(&twice, 8192);
    assert!(developed.closure_gap() < 1e-5);
    for alpha0 in [0.0, 1.0, 2.5, 4.0] {
        let a = unit_bicycle_angles(&developed, |_| 1.0 / r, alpha0);
        assert!(angle_diff(*a.last().unwrap(), alpha0).abs() < 1e-6);
    }
    assert!(monodromy(&twice, &BikeParams::new(1.0)).unwrap().map().distance_to_identity() < 1e-4);
}

#[test]
fn convex_tracks_traversed_once_never_give_the_identity() {
    let mut rng = rng(51);
    for _ in 0..5 {
        let track = random_convex(&mut rng);
        let m = monodromy(&track, &BikeParams::new(1.0)).unwrap();
        assert!(m.map().distance_to_identity() > 1e-3);
        assert!(develop_track(&track, 4096).closure_gap() > 1e-3);
    }
}

#[test]
fn quarter_sphere_wheelbase_rotates_by_the_complementary_area() {
    let params = BikeParams::new(PI / 2.0).with_geometry(Geometry::Spherical);
    for rho in [0.3, 1.0, 2.0, 2.8] {
        let cap = sphere_cap(rho);
        let area = 2.0 * PI * (1.0 - rho.cos());
        let m = monodromy(&cap, &params).unwrap().map();
        assert!(m.distance(&MoebiusMap::rotation(2.0 * PI - area)) < 1e-6, "ρ = {rho}");
    }
}

#[test]
fn spherical_rear_circle_matches_three_dimensional_construction() {
    for (rho, ell) in [(1.0, 0.5), (1.2, 0.3), (0.8, 0.7)] {
        let k = sphere_cap(rho).curvature(0.0);
        let alpha = equilibrium_angle(Geometry::Spherical, k, ell).unwrap();
        // front at polar angle ρ on the meridian through (1, 0, 0), moving east
        let f = [rho.sin(), 0.0, rho.cos()];
        let east = [0.0, 1.0, 0.0];
        let north = [-rho.cos(), 0.0, rho.sin()];
        // rod direction R → F at angle −α from the tangent; R lies back along it
        let d: Vec<f64> = (0..3).map(|i| alpha.cos() * east[i] - alpha.sin() * north[i]).collect();
        let r: Vec<f64> = (0..3).map(|i| ell.cos() * f[i] - ell.sin() * d[i]).collect();
        assert_relative_eq!(r[2].acos(), rear_circle_radius(Geometry::Spherical, rho, ell).unwrap(), epsilon = 1e-12);
    }
}

#[test]
fn hpz_hypotheses_are_reported() {
    let small = hpz_verify(&sphere_cap(0.3), Geometry::Spherical, 1.0).unwrap();
    assert!(!small.applicable && small.confirmed && small.reason.is_some());
    let big = hpz_verify(&sphere_cap(1.2), Geometry::Spherical, 0.5).unwrap();
    assert!(big.applicable && big.confirmed);
    assert_eq!(big.class, MoebiusClass::Hyperbolic);
}

#[test]
fn hypercycle_drifts_away() {
    let c = develop_hyperbolic(|_| 0.5, 12.0, 12000);
    let start = HFrame::standard();
    let d: Vec<f64> = c.frames.iter().step_by(1000).map(|f| f.distance_to(&start)).collect();
    assert!(d.windows(2).skip(1).all(|w| w[1] > w[0]), "{d:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn stargazing_is_the_unit_bicycle(seed in any::<u64>(), alpha0 in -3.0f64..3.0) {
        let track = random_smooth(&mut rng(seed));
        let curve = develop_track(&track, 4096);
        let stars = stargazing_angle(&curve, &star_for_initial_angle(alpha0)).unwrap();
        let unit = unit_bicycle_angles(&curve, |t| track.curvature(t), alpha0);
        prop_assert!(curve.max_orthonormality_error() < 1e-9);
        let h = curve.step();
        for i in (2..stars.len() - 2).step_by(23) {
            prop_assert!((stars[i] - unit[i]).abs() < 1e-6);
            let d = (8.0 * (stars[i + 1] - stars[i - 1]) - (stars[i + 2] - stars[i - 2])) / (12.0 * h);
            let res = (d - track.curvature(curve.times[i]) + stars[i].sin()).abs();
            prop_assert!(res < 1e-5, "residual {res:.2e} at {i}, h {h:.2e}");
        }
    }
}
