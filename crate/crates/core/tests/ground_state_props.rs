use std::f64::consts::PI;

use gns_core::cube::{quotient, upper_bound_scaling_with, CubeGrid};
use gns_core::ground_state::*;

#[test]
fn identities_hold_at_finest_tolerance() {
    for d in 1..=5 {
        let p = solve_ground_state(d, 1e-12).unwrap();
        assert!(p.nehari_residual().abs() <= 1e-6, "d = {d}");
        assert!(p.pohozaev_residual().abs() <= 1e-6, "d = {d}");
        assert!(p.values.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0));
    }
}

#[test]
fn halving_the_step_is_stable() {
    for d in [2, 4] {
        let coarse = gns_numeric(&solve_ground_state(d, 1e-12).unwrap()).unwrap();
        let cfg = ShootingConfig { step: 5e-4, ..ShootingConfig::default() };
        let fine = gns_numeric(&solve_ground_state_with(d, 1e-12, &cfg).unwrap()).unwrap();
        assert!((fine / coarse - 1.0).abs() <= 1e-5, "d = {d}");
    }
}

#[test]
fn quotient_invariant_under_rescaling() {
    let p = solve_ground_state(3, 1e-12).unwrap();
    let g = p.quotient();
    for a in [0.5, 2.0] {
        for b in [0.5, 2.0] {
            let q = p.rescaled(a, b).unwrap().quotient();
            assert!((q / g - 1.0).abs() <= 1e-8, "a = {a}, b = {b}");
        }
    }
}

#[test]
fn one_dimensional_profile_solves_the_ode() {
    // u = 3^{1/4} sech^{1/2}(2x) satisfies −u″ + u = u⁵.
    let u = |x: f64| 3f64.powf(0.25) / (2.0 * x).cosh().sqrt();
    for x in [0.2, 0.9, 2.0] {
        let h = 1e-4;
        let upp = (u(x + h) - 2.0 * u(x) + u(x - h)) / (h * h);
        assert!((-upp + u(x) - u(x).powi(5)).abs() < 1e-6);
    }
    let p = solve_ground_state(1, 1e-12).unwrap();
    assert!((p.u0 - 3f64.powf(0.25)).abs() <= 1e-10);
    assert!((gns_numeric(&p).unwrap() - PI * PI / 4.0).abs() < 1e-4);
}

#[test]
fn scaled_functions_on_the_cube() {
    let p = solve_ground_state(2, 1e-12).unwrap();
    let grid = CubeGrid::new(2, 256).unwrap();
    let u = scaled_test_function(&p, 1.0, CubeGrid::new(2, 8).unwrap()).unwrap();
    assert!(u.values()[0] <= p.u0);
    let rows = upper_bound_scaling_with(&p, &[4.0, 8.0, 16.0], Some(grid.n)).unwrap();
    for r in &rows {
        assert!(r.mass_fraction <= 1.0 + 1e-6);
    }
    assert!(rows.windows(2).all(|w| w[1].quotient < w[0].quotient));
    let direct = quotient(&scaled_test_function(&p, 16.0, grid).unwrap()).unwrap().quotient;
    assert_eq!(direct, rows[2].quotient);
}
