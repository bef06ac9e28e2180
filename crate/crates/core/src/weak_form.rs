//! Weak-form residuals of the steady Euler system with wedge and inflow
//! boundary terms, and the vague-convergence harness comparing the `eps > 0`
//! measures with the limit measure solution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::{pressure, FlowParams, GasState};
use crate::measure::{
    eps_measure_family, limit_measure_solution, pair_with, Component, Curve, DiracPart, Field,
    LimitMeasureSolution, MeasureFamily, Quadrature, TestFunction, Weight, ALL_COMPONENTS,
};
use crate::numeric::{fitted_order, sum2};
use crate::quadrature::{breakpoints, GaussRule};
use crate::shock_polar::{solve_downstream, ShockSolution};

/// Residuals of the mass, x-momentum, y-momentum and energy equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakResidual {
    pub r: [f64; 4],
}

impl WeakResidual {
    pub fn max_abs(&self) -> f64 {
        self.r.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

fn unit_on(curve: Curve) -> DiracPart {
    DiracPart::new(curve, Weight::constant(1.0))
}

/// `<m^k, phi_x> + <n^k, phi_y>` plus the pressure, wall-force and inflow terms.
pub fn weak_residual(
    family: &MeasureFamily,
    phi: &TestFunction,
    quad: &Quadrature,
) -> WeakResidual {
    let (dx, dy) = (phi.partial_x(), phi.partial_y());
    let wall = unit_on(family.wedge()).pair_with(phi, quad);
    let inflow = unit_on(Curve::inflow()).pair_with(phi, quad);
    let p_dx = pair_with(&family.pressure, &dx, quad);
    let p_dy = pair_with(&family.pressure, &dy, quad);
    let r = std::array::from_fn(|k| {
        let mut terms = vec![
            pair_with(&family.m[k], &dx, quad),
            pair_with(&family.n[k], &dy, quad),
            family.inflow[k] * inflow,
        ];
        match k {
            1 => terms.extend([p_dx, family.wall_force[0] * wall]),
            2 => terms.extend([p_dy, family.wall_force[1] * wall]),
            _ => {}
        }
        sum2(&terms)
    });
    WeakResidual { r }
}

/// Lift and drag per unit length of wedge surface, `-(w1_p, w2_p)`.
pub fn boundary_force(family: &MeasureFamily) -> [f64; 2] {
    [-family.wall_force[0], -family.wall_force[1]]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stratum {
    Wedge,
    Inflow,
    Interior,
}

/// Stratum of the `i`-th member of a battery.
pub fn stratum_of(i: usize) -> Stratum {
    match i % 3 {
        0 => Stratum::Wedge,
        1 => Stratum::Inflow,
        _ => Stratum::Interior,
    }
}

/// Pseudo-random bumps cycling through supports that cross the wedge surface,
/// cross the inflow line, and lie inside the flow domain.
pub fn stratified_battery(params: &FlowParams, n: usize, seed: u64) -> Vec<TestFunction> {
    let a = params.slope();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let rx = rng.random_range(0.1..0.5);
            let ry = rng.random_range(0.1..0.5);
            match stratum_of(i) {
                Stratum::Wedge => {
                    let x = rng.random_range(0.3..2.0);
                    let dy = rng.random_range(-0.5..0.5) * ry;
                    TestFunction::new(x, a * x + dy, rx, ry)
                }
                Stratum::Inflow => {
                    let x = rng.random_range(-0.5..0.5) * rx;
                    let y = rng.random_range(0.3..2.5);
                    TestFunction::new(x, y, rx, ry)
                }
                Stratum::Interior => {
                    let x = rx + rng.random_range(0.05..1.5);
                    let y = a * (x + rx) + ry + rng.random_range(0.05..1.0);
                    TestFunction::new(x, y, rx, ry)
                }
            }
        })
        .collect()
}

/// Ten bumps centred on the wedge surface near its leading edge,
/// `0.08 <= x <= 0.215`, with radii proportional to the distance from the tip.
pub fn wedge_bumps(params: &FlowParams) -> Vec<TestFunction> {
    let a = params.slope();
    (0..10)
        .map(|i| {
            let x = 0.08 + 0.015 * i as f64;
            let r = 0.8 * x;
            let aspect = [0.6, 0.8, 1.0][i % 3];
            TestFunction::new(x, a * x, r, aspect * r)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BatteryReport {
    pub residuals: Vec<WeakResidual>,
    pub max_per_equation: [f64; 4],
    pub max_abs: f64,
}

pub fn residual_battery(
    family: &MeasureFamily,
    phis: &[TestFunction],
    quad: &Quadrature,
) -> BatteryReport {
    let residuals: Vec<WeakResidual> = phis
        .par_iter()
        .map(|phi| weak_residual(family, phi, quad))
        .collect();
    let mut max_per_equation = [0.0f64; 4];
    for r in &residuals {
        for (m, x) in max_per_equation.iter_mut().zip(r.r) {
            *m = m.max(x.abs());
        }
    }
    let max_abs = max_per_equation.iter().fold(0.0f64, |m, x| m.max(*x));
    BatteryReport {
        residuals,
        max_per_equation,
        max_abs,
    }
}

/// Density of a component of the `eps > 0` family in a constant state.
pub fn component_density(c: Component, state: &GasState, params: &FlowParams) -> Result<f64> {
    let mom = [1.0, state.u, state.v, state.energy];
    Ok(match c {
        Component::M0 | Component::M1 | Component::M2 | Component::M3 => {
            state.rho * state.u * mom[c as usize]
        }
        Component::N0 | Component::N1 | Component::N2 | Component::N3 => {
            state.rho * state.v * mom[c as usize - 4]
        }
        Component::P => pressure(state, params)?,
    })
}

/// `<mu(eps), psi>` through the substitution `x = eta y`:
/// `int y (A(y) + B C(y)) dy` with `A` the upstream `eta`-integral, `B` the
/// downstream density times the strip width and `C` the strip mean of `psi`.
pub fn eta_route_pairing(
    sol: &ShockSolution,
    c: Component,
    psi: &dyn Field,
    quad: &Quadrature,
) -> Result<f64> {
    let params = &sol.params;
    let g0 = component_density(c, &sol.upstream, params)?;
    let g1 = component_density(c, &sol.downstream, params)?;
    let (e_s, e_w) = (sol.shock_eta(), 1.0 / params.slope());
    let width = e_w - e_s;
    let b = g1 * width;
    let r = psi.support();
    let ylo = r.y0.max(0.0);
    if !(r.y1 > ylo) {
        return Ok(0.0);
    }
    let rule = GaussRule::standard();
    // eta-integral of psi(eta y, y) over [lo, hi] clipped to the support
    let eta_integral = |lo: f64, hi: f64, y: f64, panels: usize| -> f64 {
        let lo = lo.max(r.x0 / y);
        let hi = hi.min(r.x1 / y);
        if !(hi > lo) {
            return 0.0;
        }
        rule.composite(lo, hi, panels, |eta| psi.eval(eta * y, y))
    };
    let kinks = [e_s, e_w].into_iter().flat_map(|e| [r.x0 / e, r.x1 / e]);
    let br = breakpoints(ylo, r.y1, kinks);
    let strip_panels = quad.panels.max(quad.strip_panels);
    Ok(rule.over_breaks(&br, quad.panels, |y| {
        if y <= 0.0 {
            return 0.0;
        }
        let a_y = g0 * eta_integral(0.0, e_s, y, quad.panels);
        let c_y = eta_integral(e_s, e_w, y, strip_panels) / width;
        y * (a_y + b * c_y)
    }))
}

/// Gaps of one component against every test function along the ladder.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentGaps {
    pub component: Component,
    /// `<mu_0, phi>` per test function.
    pub limit_pairing: Vec<f64>,
    /// `<mu(eps), phi>`, indexed `[phi][eps]`.
    pub pairing: Vec<Vec<f64>>,
    /// `|<mu(eps), phi> - <mu_0, phi>|`, indexed `[phi][eps]`.
    pub pairing_gap: Vec<Vec<f64>>,
    /// Slope of `log gap` against `log eps` per test function; `None` when a gap vanishes.
    pub fitted_order: Vec<Option<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub theta: f64,
    pub e0prime: f64,
    pub eps_ladder: Vec<f64>,
    pub test_functions: Vec<TestFunction>,
    pub components: Vec<ComponentGaps>,
}

impl ConvergenceReport {
    pub fn component(&self, c: Component) -> &ComponentGaps {
        self.components
            .iter()
            .find(|g| g.component == c)
            .expect("every component is reported")
    }

    /// Smallest fitted order over all components and test functions;
    /// `None` if any order is undefined.
    pub fn min_order(&self) -> Option<f64> {
        self.components
            .iter()
            .flat_map(|g| g.fitted_order.iter())
            .try_fold(f64::INFINITY, |m, o| o.map(|o| m.min(o)))
    }
}

fn check_ladder(ladder: &[f64]) -> Result<()> {
    if ladder.is_empty() {
        return Err(Error::InvalidParams("empty eps ladder".into()));
    }
    if ladder.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::InvalidParams(
            "ladder values must be positive".into(),
        ));
    }
    if ladder.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParams(
            "ladder must be strictly decreasing".into(),
        ));
    }
    Ok(())
}

fn pair_all(family: &MeasureFamily, phis: &[TestFunction], quad: &Quadrature) -> Vec<Vec<f64>> {
    ALL_COMPONENTS
        .iter()
        .map(|c| {
            let mu = family.component(*c);
            phis.iter().map(|phi| pair_with(mu, phi, quad)).collect()
        })
        .collect()
}

/// Pair every component of the `eps` family with every test function along the
/// ladder and compare with the limit measure solution.
pub fn vague_convergence(
    params: &FlowParams,
    phis: &[TestFunction],
    eps_ladder: &[f64],
    quad: &Quadrature,
) -> Result<ConvergenceReport> {
    check_ladder(eps_ladder)?;
    let limit_params = FlowParams::new(params.theta, 0.0, params.e0prime)?;
    let LimitMeasureSolution { family: limit, .. } = limit_measure_solution(&limit_params)?;
    let limit_pairs = pair_all(&limit, phis, quad);
    // [eps][component][phi]
    let per_eps: Vec<Vec<Vec<f64>>> = eps_ladder
        .par_iter()
        .map(|eps| {
            let p = FlowParams::new(params.theta, *eps, params.e0prime)?;
            let fam = eps_measure_family(&solve_downstream(&p)?)?;
            Ok(pair_all(&fam, phis, quad))
        })
        .collect::<Result<_>>()?;
    let components = ALL_COMPONENTS
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let pairing: Vec<Vec<f64>> = (0..phis.len())
                .map(|j| per_eps.iter().map(|e| e[ci][j]).collect())
                .collect();
            let pairing_gap: Vec<Vec<f64>> = pairing
                .iter()
                .zip(&limit_pairs[ci])
                .map(|(row, lim)| row.iter().map(|v| (v - lim).abs()).collect())
                .collect();
            let fitted = pairing_gap
                .iter()
                .map(|gaps| {
                    (eps_ladder.len() >= 2 && gaps.iter().all(|g| *g > 0.0))
                        .then(|| fitted_order(eps_ladder, gaps))
                })
                .collect();
            ComponentGaps {
                component: *c,
                limit_pairing: limit_pairs[ci].clone(),
                pairing,
                pairing_gap,
                fitted_order: fitted,
            }
        })
        .collect();
    Ok(ConvergenceReport {
        theta: params.theta,
        e0prime: params.e0prime,
        eps_ladder: eps_ladder.to_vec(),
        test_functions: phis.to_vec(),
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::pair;
    use std::f64::consts::FRAC_PI_4;

    fn limit_family(theta: f64, e: f64) -> MeasureFamily {
        let p = FlowParams::new(theta, 0.0, e).unwrap();
        limit_measure_solution(&p).unwrap().family
    }

    #[test]
    fn battery_is_stratified_and_reproducible() {
        let p = FlowParams::new(0.5, 0.0, 1.0).unwrap();
        let a = p.slope();
        let phis = stratified_battery(&p, 50, 7);
        assert_eq!(phis, stratified_battery(&p, 50, 7));
        assert_ne!(phis, stratified_battery(&p, 50, 8));
        let mut counts = [0; 3];
        for (i, phi) in phis.iter().enumerate() {
            let r = phi.support();
            match stratum_of(i) {
                Stratum::Wedge => {
                    assert!(Curve::wedge(a).clip(&r).is_some());
                    counts[0] += 1;
                }
                Stratum::Inflow => {
                    assert!(r.x0 < 0.0 && r.x1 > 0.0 && r.y1 > 0.0);
                    counts[1] += 1;
                }
                Stratum::Interior => {
                    assert!(r.x0 > 0.0 && r.y0 > a * r.x1);
                    counts[2] += 1;
                }
            }
        }
        assert!(counts[0] * 3 >= 50 && counts[1] * 3 >= 50);
    }

    #[test]
    fn limit_family_satisfies_weak_form() {
        for theta in [0.2, FRAC_PI_4, 1.0] {
            let fam = limit_family(theta, 0.8);
            let p = fam.params;
            for phi in stratified_battery(&p, 30, 3) {
                let r = weak_residual(&fam, &phi, &Quadrature::default());
                assert!(r.max_abs() < 1e-12, "{theta}: {:?}", r);
            }
        }
    }

    #[test]
    fn refinement_does_not_move_limit_residuals() {
        let fam = limit_family(0.6, 1.0);
        let q = Quadrature::default();
        for phi in stratified_battery(&fam.params, 12, 11) {
            let r1 = weak_residual(&fam, &phi, &q);
            let r2 = weak_residual(&fam, &phi, &q.refined(2));
            for k in 0..4 {
                assert!((r1.r[k] - r2.r[k]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn eps_family_upstream_bump_is_zero() {
        let p = FlowParams::new(0.3, 0.05, 0.5).unwrap();
        let sol = solve_downstream(&p).unwrap();
        let fam = eps_measure_family(&sol).unwrap();
        // well above the shock and away from the inflow line
        let phi = TestFunction::new(1.0, 3.0, 0.3, 0.3);
        let r = weak_residual(&fam, &phi, &Quadrature::default());
        assert!(r.max_abs() < 1e-15, "{:?}", r);
    }

    #[test]
    fn eps_family_battery() {
        let p = FlowParams::new(0.4, 0.02, 1.0).unwrap();
        let fam = eps_measure_family(&solve_downstream(&p).unwrap()).unwrap();
        let rep = residual_battery(&fam, &stratified_battery(&p, 30, 5), &Quadrature::default());
        assert!(rep.max_abs < 1e-11, "{:?}", rep.max_per_equation);
    }

    #[test]
    fn boundary_force_magnitudes() {
        let fam = limit_family(FRAC_PI_4, 1.0);
        let f = boundary_force(&fam);
        assert!((f[0].hypot(f[1]) - 0.5).abs() < 1e-15);
        let s = FRAC_PI_4.sin();
        assert!((f[0] - s.powi(3)).abs() < 1e-15);

        let p = FlowParams::new(0.3, 0.05, 0.5).unwrap();
        let sol = solve_downstream(&p).unwrap();
        let fam = eps_measure_family(&sol).unwrap();
        let f = boundary_force(&fam);
        assert!((f[0].hypot(f[1]) - sol.p1()).abs() < 1e-14);
        // parallel to the wedge normal (a, -1)
        let a = p.slope();
        assert!((f[0] + a * f[1]).abs() < 1e-15 && f[0] > 0.0);

        let small = limit_family(1e-6, 1.0);
        assert!(boundary_force(&small)[0].hypot(boundary_force(&small)[1]) < 1e-11);
    }

    #[test]
    fn eta_route_agrees_with_direct_pairing() {
        for (theta, eps) in [(0.3, 0.05), (FRAC_PI_4, 1e-3), (FRAC_PI_4, 1e-5)] {
            let p = FlowParams::new(theta, eps, 1.0).unwrap();
            let sol = solve_downstream(&p).unwrap();
            let fam = eps_measure_family(&sol).unwrap();
            let q = Quadrature::default();
            for phi in stratified_battery(&p, 9, 1).iter().chain(&wedge_bumps(&p)) {
                for c in ALL_COMPONENTS {
                    let direct = pair(fam.component(c), phi);
                    let eta = eta_route_pairing(&sol, c, phi, &q).unwrap();
                    assert!((direct - eta).abs() < 1e-11, "{c:?}: {direct} vs {eta}");
                }
            }
        }
    }

    #[test]
    fn ladder_validation() {
        let p = FlowParams::new(FRAC_PI_4, 0.0, 1.0).unwrap();
        let phis = wedge_bumps(&p);
        let q = Quadrature::default();
        assert!(vague_convergence(&p, &phis, &[1e-3, 1e-2], &q).is_err());
        assert!(vague_convergence(&p, &phis, &[], &q).is_err());
        assert!(vague_convergence(&p, &phis, &[1e-3, -1e-4], &q).is_err());
    }
}
