//! Closed-form `eps -> 0` limits of the wedge shock and their first-order rates,
//! plus the fixed-`eps`, vanishing-`e0prime` regime where the polar becomes a circle.
//!
//! Nothing here calls into [`crate::shock_polar`]; the two modules check each other.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::FlowParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitState {
    /// `cos^2 theta`
    pub u_lim: f64,
    /// `sin theta cos theta`
    pub v_lim: f64,
    /// Newton's sine-squared surface pressure.
    pub p_lim: f64,
    /// Limit of `eps * rho1`.
    pub eps_rho_lim: f64,
    /// `d sigma / d eps` at `eps = 0`.
    pub sigma_slope: f64,
    /// Limit of `rho1 (sigma - a)`.
    pub mass_weight_rate: f64,
    /// `d u1 / d eps` at `eps = 0`.
    pub u_slope: f64,
}

pub fn limit_state(params: &FlowParams) -> LimitState {
    let (s, c) = params.theta.sin_cos();
    let e = params.e0prime;
    let s2 = s * s;
    LimitState {
        u_lim: c * c,
        v_lim: s * c,
        p_lim: s2,
        eps_rho_lim: 2.0 * s2 / (2.0 * e + s2),
        sigma_slope: (0.5 * s2 + e) / (c * c * c * s),
        mass_weight_rate: s / (c * c * c),
        u_slope: -(e + 0.5 * s2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowEnergyLimit {
    /// Limit of rho1 as `e0prime -> 0`, `(eps + 2) / eps`.
    pub rho_lim: f64,
    pub circle_center: f64,
    pub circle_radius: f64,
    /// The two points where `v = u tan(theta)` meets the circle, larger `u` first.
    pub intersections: [(f64, f64); 2],
}

/// Centre abscissa and radius of the limiting polar circle for fixed `eps`.
pub fn limiting_circle(eps: f64) -> (f64, f64) {
    ((eps + 1.0) / (eps + 2.0), 1.0 / (eps + 2.0))
}

/// Limiting polar circle for fixed `eps` and `e0prime -> 0`.
///
/// Both intersections with the wedge line are returned; which one is the
/// physical shock is left to the caller.
pub fn low_energy_limit(eps: f64, theta: f64) -> Result<LowEnergyLimit> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParams(format!("eps = {eps} must be > 0")));
    }
    if !(theta >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "theta = {theta} must be >= 0"
        )));
    }
    if theta >= (1.0 / (eps + 1.0)).asin() {
        return Err(Error::NoIntersection { theta });
    }
    let (center, radius) = limiting_circle(eps);
    let a = theta.tan();
    // (1 + a^2) u^2 - 2 c u + (c^2 - r^2) = 0
    let qa = 1.0 + a * a;
    let half_b = -center;
    let qc = (center - radius) * (center + radius);
    let disc = (half_b * half_b - qa * qc).max(0.0).sqrt();
    let big = (-half_b + disc) / qa;
    // product of roots is qc / qa; avoids cancellation in the smaller one
    let small = if big != 0.0 { qc / (qa * big) } else { 0.0 };
    Ok(LowEnergyLimit {
        rho_lim: (eps + 2.0) / eps,
        circle_center: center,
        circle_radius: radius,
        intersections: [(big, a * big), (small, a * small)],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticPrediction {
    pub eps: f64,
    pub u1: f64,
    pub v1: f64,
    pub sigma: f64,
}

/// First-order predictions `u1 = cos^2 theta + u_slope eps`, `sigma = a + sigma_slope eps`.
pub fn asymptotic_prediction(params: &FlowParams, eps_small: f64) -> AsymptoticPrediction {
    let lim = limit_state(params);
    let a = params.slope();
    let u1 = lim.u_lim + lim.u_slope * eps_small;
    AsymptoticPrediction {
        eps: eps_small,
        u1,
        v1: a * u1,
        sigma: a + lim.sigma_slope * eps_small,
    }
}
