//! Attached oblique shock ahead of the wedge.
//!
//! With the slip condition `v1 = a u1` imposed, the downstream velocity solves
//! the cubic
//!
//! ```text
//! H(u) = (1 - u)^2 (u - lambda - 2 lambda e0') - a^2 u^2 (1 - u + 2 lambda e0'),
//! lambda = eps / (eps + 2).
//! ```
//!
//! `H(0) < 0` and `H(1) < 0` for every `eps > 0`, so roots in `(0, 1)` come in
//! pairs: a strong-shock root near `lambda (1 + 2 e0')` and the weak root that
//! continues from `cos^2 theta` as `eps -> 0`. The weak root is the one kept.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::{flux, pressure, FlowParams, GasState};
use crate::numeric::{bisect, cubic_real_roots, sum2};

/// Number of sample points used by the bracketing fallback.
pub const FALLBACK_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShockSolution {
    pub params: FlowParams,
    pub upstream: GasState,
    pub downstream: GasState,
    /// Shock slope `tan(alpha)`; the shock is the ray `y = sigma x`.
    pub sigma: f64,
    /// Angle between the shock and the x-axis, radians.
    pub alpha: f64,
}

impl ShockSolution {
    pub fn p0(&self) -> f64 {
        self.params.p0()
    }

    pub fn p1(&self) -> f64 {
        pressure(&self.downstream, &self.params).expect("validated downstream state")
    }

    /// Inverse slope of the shock, the value of `x / y` along it.
    pub fn shock_eta(&self) -> f64 {
        1.0 / self.sigma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarPoint {
    pub u: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy)]
struct Cubic {
    a2: f64,
    lambda: f64,
    /// `2 lambda e0'`
    k: f64,
}

impl Cubic {
    fn new(params: &FlowParams) -> Self {
        let lambda = params.eps / (params.eps + 2.0);
        let a = params.slope();
        Self {
            a2: a * a,
            lambda,
            k: 2.0 * lambda * params.e0prime,
        }
    }

    fn eval(&self, u: f64) -> f64 {
        let w = 1.0 - u;
        w * w * (u - self.lambda - self.k) - self.a2 * u * u * (w + self.k)
    }

    fn derivative(&self, u: f64) -> f64 {
        let w = 1.0 - u;
        -2.0 * w * (u - self.lambda - self.k) + w * w - self.a2 * (2.0 * u * (w + self.k) - u * u)
    }

    /// Expanded coefficients, highest degree first.
    fn coefficients(&self) -> [f64; 4] {
        let c = self.lambda + self.k;
        [
            1.0 + self.a2,
            -(2.0 + c + self.a2 * (1.0 + self.k)),
            1.0 + 2.0 * c,
            -c,
        ]
    }

    /// Right side of the shock polar `v^2 = (1-u)^2 (u - c) / (1 - u + k)`.
    fn polar_v2(&self, u: f64) -> f64 {
        let w = 1.0 - u;
        w * w * (u - self.lambda - self.k) / (w + self.k)
    }

    fn newton_polish(&self, u: f64) -> f64 {
        let d = self.derivative(u);
        if d == 0.0 || !d.is_finite() {
            return u;
        }
        let next = u - self.eval(u) / d;
        if next.is_finite() && self.eval(next).abs() <= self.eval(u).abs() {
            next
        } else {
            u
        }
    }
}

/// The cubic residual `H(u, lambda)` with `lambda = eps / (eps + 2)`.
pub fn polar_residual(u: f64, params: &FlowParams) -> f64 {
    Cubic::new(params).eval(u)
}

/// Right side of the shock polar, `v^2` as a function of `u`.
pub fn polar_v_squared(u: f64, params: &FlowParams) -> f64 {
    Cubic::new(params).polar_v2(u)
}

/// `u - v / sigma`, accurate even when the two terms nearly cancel.
fn normal_velocity(u: f64, v: f64, sigma: f64) -> f64 {
    let q = v / sigma;
    let r = (-q).mul_add(sigma, v);
    (u - q) - r / sigma
}

/// Post-shock density from the oblique-shock relation in terms of the shock angle.
fn jump_density(params: &FlowParams, sigma: f64) -> f64 {
    let eps = params.eps;
    let s2 = sigma * sigma / (1.0 + sigma * sigma);
    (eps + 2.0) / eps * s2 / (2.0 * params.e0prime + s2)
}

fn build_solution(params: &FlowParams, u1: f64) -> Result<ShockSolution> {
    let a = params.slope();
    let v1 = a * u1;
    let sigma = (1.0 - u1) / v1;
    let alpha = sigma.atan();
    // Mass jump rho1 (u1 - v1 / sigma) = 1, with the small difference formed
    // exactly. On the exact root this equals the oblique-shock density ratio;
    // on the rounded root it keeps the stored state mass-consistent.
    let rho1 = 1.0 / normal_velocity(u1, v1, sigma);
    let downstream = GasState::new(rho1, u1, v1, params.e0())?;
    Ok(ShockSolution {
        params: *params,
        upstream: params.upstream(),
        downstream,
        sigma,
        alpha,
    })
}

fn admissible(params: &FlowParams, cubic: &Cubic, u: f64) -> Option<ShockSolution> {
    if !(u > 0.0 && u < 1.0) || !(cubic.derivative(u) < 0.0) || !(cubic.polar_v2(u) > 0.0) {
        return None;
    }
    let sol = build_solution(params, u).ok()?;
    let p1 = pressure(&sol.downstream, params).ok()?;
    (p1 > params.p0() && sol.sigma > params.slope()).then_some(sol)
}

/// Pressure behind the shock from the oblique-shock jump relation, used as a
/// cross-check on the equation-of-state pressure.
fn jump_pressure(params: &FlowParams, sigma: f64) -> f64 {
    let eps = params.eps;
    let s2 = sigma * sigma / (1.0 + sigma * sigma);
    (2.0 * (eps + 1.0) * s2 - eps * eps * params.e0prime) / ((eps + 1.0) * (eps + 2.0))
}

fn verify(sol: &ShockSolution) -> Result<()> {
    let params = &sol.params;
    let a = params.slope();
    let d = &sol.downstream;
    let fail = |what: String| Err(Error::InvariantViolation(what));
    if (d.v - a * d.u).abs() > 1e-15 * d.v.abs().max(1.0) {
        return fail(format!("slip: v1 = {}, a u1 = {}", d.v, a * d.u));
    }
    if (sol.sigma * d.v - (1.0 - d.u)).abs() > 1e-14 {
        return fail("shock slope inconsistent with (1 - u1) / v1".into());
    }
    if (sol.alpha.tan() - sol.sigma).abs() > 1e-12 * sol.sigma.max(1.0) {
        return fail("alpha and sigma disagree".into());
    }
    if d.energy != params.e0() {
        return fail("E1 != E0".into());
    }
    let p1 = pressure(d, params)?;
    if !(p1 > params.p0()) {
        return fail(format!("entropy: p1 = {p1} <= p0 = {}", params.p0()));
    }
    if !(sol.sigma > a) {
        return fail(format!(
            "shock slope {} not above wedge slope {a}",
            sol.sigma
        ));
    }
    // The stored state is only as consistent as the rounded root allows; the
    // closure relations amplify that rounding by about rho1 / (1 - u1).
    let tol = 1e-9 + 1e-13 * d.rho / (1.0 - d.u);
    let rj = jump_density(params, sol.sigma);
    if (d.rho - rj).abs() > tol * rj {
        return fail(format!(
            "density {} disagrees with jump relation {rj}",
            d.rho
        ));
    }
    let pj = jump_pressure(params, sol.sigma);
    if (p1 - pj).abs() > tol * p1.abs().max(params.p0()) {
        return fail(format!("pressure {p1} disagrees with jump relation {pj}"));
    }
    Ok(())
}

/// Weak attached shock for `eps > 0`.
pub fn solve_downstream(params: &FlowParams) -> Result<ShockSolution> {
    if params.eps == 0.0 {
        return Err(Error::LimitStateRequested);
    }
    let cubic = Cubic::new(params);
    let [c3, c2, c1, c0] = cubic.coefficients();

    let closed_form = cubic_real_roots(c3, c2, c1, c0)
        .into_iter()
        .map(|r| cubic.newton_polish(r))
        .filter_map(|u| admissible(params, &cubic, u))
        .max_by(|x, y| x.downstream.u.total_cmp(&y.downstream.u));
    let sol = match closed_form {
        Some(sol) => sol,
        None => fallback_bracketing(params, &cubic)?,
    };
    verify(&sol)?;
    Ok(sol)
}

fn fallback_bracketing(params: &FlowParams, cubic: &Cubic) -> Result<ShockSolution> {
    let grid: Vec<f64> = (0..=FALLBACK_SAMPLES)
        .map(|i| i as f64 / FALLBACK_SAMPLES as f64)
        .collect();
    let best = grid
        .windows(2)
        .filter(|w| cubic.eval(w[0]) > 0.0 && cubic.eval(w[1]) <= 0.0)
        .filter_map(|w| bisect(|u| cubic.eval(u), w[0], w[1]))
        .filter_map(|u| admissible(params, cubic, u))
        .max_by(|x, y| x.downstream.u.total_cmp(&y.downstream.u));
    if let Some(sol) = best {
        return Ok(sol);
    }

    // H < 0 on all of (0, 1) means no attached shock exists; otherwise the
    // roots are there and the numerics failed to isolate them.
    let [c3, c2, c1, _] = cubic.coefficients();
    let crit = {
        let (qa, qb, qc) = (3.0 * c3, 2.0 * c2, c1);
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            vec![]
        } else {
            let s = disc.sqrt();
            vec![(-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)]
        }
    };
    let peak = crit
        .into_iter()
        .chain(grid.iter().copied())
        .filter(|u| *u > 0.0 && *u < 1.0)
        .map(|u| cubic.eval(u))
        .fold(f64::NEG_INFINITY, f64::max);
    if peak <= 0.0 {
        Err(Error::ShockDetached {
            theta: params.theta,
            eps: params.eps,
        })
    } else {
        Err(Error::RootBracketFailure(format!(
            "H reaches {peak:e} on (0, 1) but no admissible root was isolated"
        )))
    }
}

/// Rankine-Hugoniot residual `(F(V1) - F(V0)) - (G(V1) - G(V0)) / sigma`.
///
/// Evaluated in the algebraically identical normal-flux form
/// `F - G / sigma = (j, j u + p, j v - p / sigma, j E)` with `j = rho (u - v / sigma)`,
/// because the downstream fluxes grow like `1 / eps` and the literal difference
/// loses every significant digit of the residual.
pub fn rh_residual(sol: &ShockSolution) -> [f64; 4] {
    let sigma = sol.sigma;
    let parts = |s: &GasState| -> Result<[f64; 4]> {
        let p = pressure(s, &sol.params)?;
        let j = s.rho * normal_velocity(s.u, s.v, sigma);
        Ok([j, j * s.u + p, j * s.v - p / sigma, j * s.energy])
    };
    let (Ok(one), Ok(zero)) = (parts(&sol.downstream), parts(&sol.upstream)) else {
        return [f64::NAN; 4];
    };
    std::array::from_fn(|k| sum2(&[one[k], -zero[k]]))
}

/// Literal evaluation of the jump residual from the flux vectors.
pub fn rh_residual_direct(sol: &ShockSolution) -> [f64; 4] {
    let (Ok(f1), Ok(f0)) = (
        flux(&sol.downstream, &sol.params),
        flux(&sol.upstream, &sol.params),
    ) else {
        return [f64::NAN; 4];
    };
    std::array::from_fn(|k| (f1.f[k] - f0.f[k]) - (f1.g[k] - f0.g[k]) / sol.sigma)
}

pub fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `n` points `(u, +v(u))` along the shock polar for `u` from `lambda (1 + 2 e0')` to 1.
pub fn sample_polar(params: &FlowParams, n: usize) -> Result<Vec<PolarPoint>> {
    if params.eps == 0.0 {
        return Err(Error::LimitStateRequested);
    }
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "need n >= 2 polar points, got {n}"
        )));
    }
    let cubic = Cubic::new(params);
    let lo = cubic.lambda + cubic.k;
    if !(lo < 1.0) {
        return Err(Error::EmptyPolar);
    }
    Ok((0..n)
        .map(|i| {
            let u = if i == n - 1 {
                1.0
            } else {
                lo + (1.0 - lo) * i as f64 / (n - 1) as f64
            };
            PolarPoint {
                u,
                v: cubic.polar_v2(u).max(0.0).sqrt(),
            }
        })
        .collect())
}

/// Self-similar piecewise-constant field at a point of the flow domain.
pub fn evaluate_solution(sol: &ShockSolution, x: f64, y: f64) -> Result<GasState> {
    let a = sol.params.slope();
    if !(x > 0.0 && y > a * x) {
        return Err(Error::OutsideDomain { x, y });
    }
    let eta = x / y;
    let shock = sol.shock_eta();
    if eta < shock {
        Ok(sol.upstream)
    } else if eta > shock {
        Ok(sol.downstream)
    } else {
        Err(Error::OnShock { x, y })
    }
}
