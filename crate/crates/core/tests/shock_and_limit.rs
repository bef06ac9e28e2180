use approx::assert_relative_eq;
use hypersonic_wedge::euler::FlowParams;
use hypersonic_wedge::hypersonic_limit::{asymptotic_prediction, limit_state, low_energy_limit};
use hypersonic_wedge::shock_polar::{max_abs, polar_residual, rh_residual, solve_downstream};
use hypersonic_wedge::Error;
use proptest::prelude::*;

fn solve(theta_deg: f64, eps: f64, e0p: f64) -> hypersonic_wedge::shock_polar::ShockSolution {
    let p = FlowParams::new(theta_deg.to_radians(), eps, e0p).unwrap();
    solve_downstream(&p).unwrap()
}

// Divided differences of u1 and sigma built purely from the solver, checked
// against the closed-form slopes at eps = 0.
#[test]
fn divided_differences_approach_limit_slopes() {
    let (theta, e0p) = (30f64, 0.5);
    let lim = limit_state(&FlowParams::new(theta.to_radians(), 0.0, e0p).unwrap());
    let ladder = [1e-4, 1e-5, 1e-6];
    let mut du = Vec::new();
    let mut ds = Vec::new();
    for eps in ladder {
        let s = solve(theta, eps, e0p);
        du.push((s.downstream.u - lim.u_lim) / eps);
        ds.push((s.sigma - theta.to_radians().tan()) / eps);
    }
    for w in du.windows(2) {
        assert!((w[1] - lim.u_slope).abs() < (w[0] - lim.u_slope).abs());
    }
    for w in ds.windows(2) {
        assert!((w[1] - lim.sigma_slope).abs() < (w[0] - lim.sigma_slope).abs());
    }
    // Richardson on the last two rungs removes the O(eps) part of the error
    let r_u = (10.0 * du[2] - du[1]) / 9.0;
    let r_s = (10.0 * ds[2] - ds[1]) / 9.0;
    assert_relative_eq!(r_u, lim.u_slope, max_relative = 1e-5);
    assert_relative_eq!(r_s, lim.sigma_slope, max_relative = 1e-5);
}

#[test]
fn first_order_prediction_error_is_little_o() {
    let theta = 15f64.to_radians();
    let mut scaled = Vec::new();
    for eps in [1e-3, 1e-4, 1e-5, 1e-6] {
        let p = FlowParams::new(theta, eps, 1.0).unwrap();
        let s = solve_downstream(&p).unwrap();
        let pred = asymptotic_prediction(&p, eps);
        let err = (s.downstream.u - pred.u1)
            .abs()
            .max((s.downstream.v - pred.v1).abs())
            .max((s.sigma - pred.sigma).abs());
        scaled.push(err / eps);
    }
    for w in scaled.windows(2) {
        assert!(w[1] < 0.2 * w[0], "{scaled:?}");
    }
    assert!(scaled[3] < 1e-3, "{scaled:?}");
}

#[test]
fn eps_rho_limit() {
    for theta in [15.0, 30.0, 45.0, 60.0] {
        let s = solve(theta, 1e-7, 1.0);
        let lim = limit_state(&s.params);
        assert_relative_eq!(
            1e-7 * s.downstream.rho,
            lim.eps_rho_lim,
            max_relative = 1e-5
        );
    }
}

#[test]
fn quarter_pi_reference_point() {
    let s = solve(45.0, 1e-6, 1.0);
    assert_relative_eq!(s.p1(), 0.5, max_relative = 1e-4);
    assert_relative_eq!(s.downstream.u, 0.5, max_relative = 1e-4);
    assert_relative_eq!(1e-6 * s.downstream.rho, 0.4, max_relative = 1e-4);
}

#[test]
fn detached_and_invalid() {
    let p = FlowParams::new(80f64.to_radians(), 0.4, 1.0).unwrap();
    assert!(matches!(
        solve_downstream(&p),
        Err(Error::ShockDetached { .. })
    ));
    let p = FlowParams::new(0.3, 0.0, 1.0).unwrap();
    assert!(matches!(
        solve_downstream(&p),
        Err(Error::LimitStateRequested)
    ));
    assert!(FlowParams::new(0.3, -1.0, 1.0).is_err());
    assert!(FlowParams::new(0.3, 0.1, 0.0).is_err());
}

#[test]
fn low_energy_approach() {
    let (eps, theta) = (0.4, 20f64.to_radians());
    let lim = low_energy_limit(eps, theta).unwrap();
    let s = solve(20.0, eps, 1e-9);
    let (u, v) = lim.intersections[0];
    assert!((s.downstream.u - u).hypot(s.downstream.v - v) < 1e-6);
    assert_relative_eq!(s.downstream.rho, lim.rho_lim, max_relative = 1e-6);
    assert!(matches!(
        low_energy_limit(eps, (1.0 / (eps + 1.0f64)).asin() + 1e-9),
        Err(Error::NoIntersection { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn attached_shocks_satisfy_invariants(
        theta_deg in 5.0f64..60.0,
        log_eps in -6.0f64..-1.5,
        e0p in 0.2f64..2.0,
    ) {
        let eps = 10f64.powf(log_eps);
        let p = FlowParams::new(theta_deg.to_radians(), eps, e0p).unwrap();
        let s = solve_downstream(&p).unwrap();
        let a = p.slope();
        prop_assert!(max_abs(&rh_residual(&s)) < 1e-10);
        prop_assert!((s.downstream.v - a * s.downstream.u).abs() < 1e-12);
        prop_assert!(s.sigma > a);
        prop_assert!(s.downstream.rho > 1.0 && s.p1() > s.p0());
        prop_assert!(polar_residual(s.downstream.u, &p).abs() < 1e-9);
    }
}
