//! Non-dimensional polytropic gas algebra for the steady 2D Euler system.
//!
//! Everything is normalized so that the incoming flow is `(rho, u, v) = (1, 1, 0)`.
//! The whole problem is fixed by three numbers: the wedge half-angle `theta`,
//! `eps = gamma - 1` and the reduced total energy `e0prime = E0 - 1/2`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Internal energy at or below this is rejected.
pub const MIN_INTERNAL_ENERGY: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowParams {
    /// Wedge half-opening angle in radians, in (0, pi/2).
    pub theta: f64,
    /// gamma - 1.
    pub eps: f64,
    /// E0 - 1/2.
    pub e0prime: f64,
}

impl FlowParams {
    pub fn new(theta: f64, eps: f64, e0prime: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidParams(format!(
                "theta = {theta} must lie in (0, pi/2)"
            )));
        }
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParams(format!("eps = {eps} must be >= 0")));
        }
        if !(e0prime > 0.0 && e0prime.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "e0prime = {e0prime} must be > 0"
            )));
        }
        Ok(Self {
            theta,
            eps,
            e0prime,
        })
    }

    /// Build from a wedge angle, gamma and the upstream Mach number, using
    /// `M0^2 * eps * e0prime = 1`.
    pub fn from_gamma_mach(theta: f64, gamma: f64, mach0: f64) -> Result<Self> {
        if !(gamma > 1.0) || !(mach0 > 0.0) {
            return Err(Error::InvalidParams(format!(
                "gamma = {gamma} must exceed 1 and M0 = {mach0} must be positive"
            )));
        }
        let eps = gamma - 1.0;
        Self::new(theta, eps, 1.0 / (mach0 * mach0 * eps))
    }

    /// Wedge slope `tan(theta)`.
    pub fn slope(&self) -> f64 {
        self.theta.tan()
    }

    pub fn gamma(&self) -> f64 {
        1.0 + self.eps
    }

    /// Total energy per unit mass of the incoming flow.
    pub fn e0(&self) -> f64 {
        self.e0prime + 0.5
    }

    /// Upstream pressure `eps / (eps + 1) * e0prime`.
    pub fn p0(&self) -> f64 {
        self.eps / (self.eps + 1.0) * self.e0prime
    }

    /// Upstream Mach number; infinite when `eps == 0`.
    pub fn mach0(&self) -> f64 {
        if self.eps == 0.0 {
            f64::INFINITY
        } else {
            (1.0 / (self.eps * self.e0prime)).sqrt()
        }
    }

    pub fn upstream(&self) -> GasState {
        GasState {
            rho: 1.0,
            u: 1.0,
            v: 0.0,
            energy: self.e0(),
        }
    }
}

/// Conserved-variable state `U = (rho, u, v, E)`. Pressure is always derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GasState {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    /// Total energy per unit mass.
    pub energy: f64,
}

impl GasState {
    pub fn new(rho: f64, u: f64, v: f64, energy: f64) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(Error::InvalidParams(format!("rho = {rho} must be > 0")));
        }
        let state = Self { rho, u, v, energy };
        let e = state.internal_energy();
        if !(e > MIN_INTERNAL_ENERGY) {
            return Err(Error::NonPositiveInternalEnergy(e));
        }
        Ok(state)
    }

    pub fn internal_energy(&self) -> f64 {
        self.energy - 0.5 * (self.u * self.u + self.v * self.v)
    }

    pub fn speed(&self) -> f64 {
        self.u.hypot(self.v)
    }
}

/// Flux vectors `F(U)` and `G(U)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxPair {
    pub f: [f64; 4],
    pub g: [f64; 4],
}

/// `p = (E - (u^2 + v^2)/2) * eps / (eps + 1) * rho`.
pub fn pressure(state: &GasState, params: &FlowParams) -> Result<f64> {
    let e = state.internal_energy();
    if !(e > MIN_INTERNAL_ENERGY) {
        return Err(Error::NonPositiveInternalEnergy(e));
    }
    Ok(e * (params.eps / (params.eps + 1.0)) * state.rho)
}

/// Returns `(c, M)`.
pub fn sound_speed_mach(state: &GasState, params: &FlowParams) -> Result<(f64, f64)> {
    if params.eps == 0.0 {
        return Err(Error::DegenerateSoundSpeed(
            "eps = 0 gives a pressureless gas",
        ));
    }
    let p = pressure(state, params)?;
    if !(p > 0.0) {
        return Err(Error::DegenerateSoundSpeed("non-positive pressure"));
    }
    let c = (params.gamma() * p / state.rho).sqrt();
    Ok((c, state.speed() / c))
}

pub fn flux(state: &GasState, params: &FlowParams) -> Result<FluxPair> {
    let p = pressure(state, params)?;
    let GasState { rho, u, v, energy } = *state;
    let mx = rho * u;
    let my = rho * v;
    Ok(FluxPair {
        f: [mx, mx * u + p, mx * v, mx * energy],
        g: [my, my * u, my * v + p, my * energy],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params(eps: f64, e0prime: f64) -> FlowParams {
        FlowParams::new(0.3, eps, e0prime).unwrap()
    }

    #[test]
    fn upstream_pressure_matches_closed_form() {
        for &(eps, e0p) in &[(0.4, 0.1), (1e-6, 1.0), (2.0, 3.5)] {
            let p = params(eps, e0p);
            let p0 = pressure(&p.upstream(), &p).unwrap();
            assert_relative_eq!(p0, eps / (eps + 1.0) * e0p, max_relative = 1e-15);
            assert_relative_eq!(p0, p.p0(), max_relative = 1e-15);
        }
    }

    #[test]
    fn pressureless_at_eps_zero() {
        let p = params(0.0, 1.0);
        let s = GasState::new(3.0, 0.2, -0.4, 2.0).unwrap();
        assert_eq!(pressure(&s, &p).unwrap(), 0.0);
        let fl = flux(&s, &p).unwrap();
        let (rho, u, v, e) = (3.0, 0.2, -0.4, 2.0);
        assert_eq!(fl.f, [rho * u, rho * u * u, rho * u * v, rho * u * e]);
        assert_eq!(fl.g, [rho * v, rho * v * u, rho * v * v, rho * v * e]);
    }

    #[test]
    fn hand_evaluated_pressure() {
        let p = params(1.0, 1.0);
        let s = GasState::new(2.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(pressure(&s, &p).unwrap(), 1.0);
    }

    #[test]
    fn rejects_non_positive_internal_energy() {
        assert!(matches!(
            GasState::new(1.0, 1.0, 0.0, 0.5),
            Err(Error::NonPositiveInternalEnergy(_))
        ));
        let p = params(0.4, 1.0);
        let bad = GasState {
            rho: 1.0,
            u: 1.0,
            v: 1.0,
            energy: 1.0 + 1e-15,
        };
        assert!(pressure(&bad, &p).is_err());
    }

    #[test]
    fn mach_from_energy() {
        let p = FlowParams::new(0.2, 1.0, 1.0).unwrap();
        let (_, m) = sound_speed_mach(&p.upstream(), &p).unwrap();
        assert_relative_eq!(m, 1.0, max_relative = 1e-14);

        let p = FlowParams::new(0.2, 0.4, 0.1).unwrap();
        let (c, m) = sound_speed_mach(&p.upstream(), &p).unwrap();
        assert_relative_eq!(m, 5.0, max_relative = 1e-14);
        assert_relative_eq!(m * m * p.eps * p.e0prime, 1.0, max_relative = 1e-14);
        assert_relative_eq!(c, 0.2, max_relative = 1e-14);
        assert_relative_eq!(p.mach0(), 5.0, max_relative = 1e-14);

        let p0 = params(0.0, 1.0);
        assert!(sound_speed_mach(&p0.upstream(), &p0).is_err());
    }

    #[test]
    fn gamma_mach_constructor() {
        let p = FlowParams::from_gamma_mach(0.2, 1.4, 5.0).unwrap();
        assert_relative_eq!(p.eps, 0.4, max_relative = 1e-15);
        assert_relative_eq!(p.e0prime, 0.1, max_relative = 1e-14);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(FlowParams::new(0.0, 0.1, 1.0).is_err());
        assert!(FlowParams::new(std::f64::consts::FRAC_PI_2, 0.1, 1.0).is_err());
        assert!(FlowParams::new(0.3, -0.1, 1.0).is_err());
        assert!(FlowParams::new(0.3, 0.1, 0.0).is_err());
    }

    #[test]
    fn example_fluxes() {
        let p = params(0.4, 1.0);
        let up = p.upstream();
        let p0 = p.p0();
        let fl = flux(&up, &p).unwrap();
        assert_eq!(fl.g, [0.0, 0.0, p0, 0.0]);
        assert_eq!(fl.f, [1.0, 1.0 + p0, 0.0, p.e0()]);

        let p = params(1.0, 1.0);
        let s = GasState::new(2.0, 1.0, 1.0, 3.0).unwrap();
        let fl = flux(&s, &p).unwrap();
        assert_eq!(fl.f, [2.0, 4.0, 2.0, 6.0]);
        assert_eq!(fl.g, [2.0, 2.0, 4.0, 6.0]);
    }

    proptest! {
        #[test]
        fn pressure_is_linear_in_density(
            rho in 0.01f64..100.0, u in -2.0f64..2.0, v in -2.0f64..2.0,
            extra in 0.01f64..5.0, k in 0.01f64..50.0, eps in 0.0f64..3.0,
        ) {
            let p = params(eps, 1.0);
            let e = 0.5 * (u * u + v * v) + extra;
            let s = GasState::new(rho, u, v, e).unwrap();
            let ks = GasState::new(k * rho, u, v, e).unwrap();
            let lhs = pressure(&ks, &p).unwrap();
            let rhs = k * pressure(&s, &p).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-300));
        }

        #[test]
        fn flux_and_pressure_agree(
            rho in 0.01f64..100.0, u in -2.0f64..2.0, v in -2.0f64..2.0,
            extra in 0.01f64..5.0, eps in 0.0f64..3.0,
        ) {
            let p = params(eps, 1.0);
            let s = GasState::new(rho, u, v, 0.5 * (u * u + v * v) + extra).unwrap();
            let pr = pressure(&s, &p).unwrap();
            let fl = flux(&s, &p).unwrap();
            let scale = 1.0 + rho * 4.0 + pr;
            prop_assert!((fl.f[1] - fl.f[0] * u - pr).abs() <= 1e-13 * scale);
            prop_assert!((fl.g[2] - fl.g[0] * v - pr).abs() <= 1e-13 * scale);
            prop_assert!((fl.f[0] * v - fl.g[0] * u).abs() <= 1e-13 * scale);
        }
    }
}
