//! Measure families for the wedge problem: the classical `eps > 0` solution
//! written as absolutely continuous measures, and the `eps = 0` measure
//! solution whose mass concentrates on the wedge surface.

use std::sync::Arc;

use serde::Serialize;

use super::{jump_flux_at, Curve, DiracPart, RadonMeasure, Sector, Weight};
use crate::error::{Error, Result};
use crate::euler::{pressure, FlowParams};
use crate::shock_polar::{evaluate_solution, ShockSolution};

/// The nine measures compared in convergence studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    M0,
    M1,
    M2,
    M3,
    N0,
    N1,
    N2,
    N3,
    P,
}

pub const ALL_COMPONENTS: [Component; 9] = [
    Component::M0,
    Component::M1,
    Component::M2,
    Component::M3,
    Component::N0,
    Component::N1,
    Component::N2,
    Component::N3,
    Component::P,
];

impl Component {
    pub fn name(self) -> &'static str {
        match self {
            Component::M0 => "m0",
            Component::M1 => "m1",
            Component::M2 => "m2",
            Component::M3 => "m3",
            Component::N0 => "n0",
            Component::N1 => "n1",
            Component::N2 => "n2",
            Component::N3 => "n3",
            Component::P => "p",
        }
    }
}

/// `m^k`, `n^k` (k = 0..3), the pressure measure and the wall force weights.
#[derive(Debug, Clone)]
pub struct MeasureFamily {
    pub params: FlowParams,
    pub m: [RadonMeasure; 4],
    pub n: [RadonMeasure; 4],
    pub pressure: RadonMeasure,
    /// `(w1_p, w2_p)`, constant along the wedge.
    pub wall_force: [f64; 2],
    /// Normal flux `rho0 u0 (1, u0, v0, E0) + (0, p0, 0, 0)` through the inflow line.
    pub inflow: [f64; 4],
    /// Present for the `eps > 0` family.
    pub shock: Option<ShockSolution>,
}

impl MeasureFamily {
    pub fn component(&self, c: Component) -> &RadonMeasure {
        match c {
            Component::M0 => &self.m[0],
            Component::M1 => &self.m[1],
            Component::M2 => &self.m[2],
            Component::M3 => &self.m[3],
            Component::N0 => &self.n[0],
            Component::N1 => &self.n[1],
            Component::N2 => &self.n[2],
            Component::N3 => &self.n[3],
            Component::P => &self.pressure,
        }
    }

    /// `w1_p + a w2_p`; zero when the wall force does no work on the gas.
    pub fn parallelism_defect(&self) -> f64 {
        self.wall_force[0] + self.params.slope() * self.wall_force[1]
    }

    pub fn wedge(&self) -> Curve {
        Curve::wedge(self.params.slope())
    }
}

#[derive(Debug, Clone)]
pub struct LimitMeasureSolution {
    pub family: MeasureFamily,
    pub varrho: RadonMeasure,
    /// Velocity trace on the wedge, `(cos^2 theta, sin theta cos theta)`.
    pub wall_velocity: (f64, f64),
    /// Velocity on the open domain.
    pub interior_velocity: (f64, f64),
    pub wall_pressure: f64,
}

/// Measure solution of the pressureless (`eps = 0`) problem.
pub fn limit_measure_solution(params: &FlowParams) -> Result<LimitMeasureSolution> {
    let theta = params.theta;
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidParams(format!(
            "theta = {theta} must lie in (0, pi/2)"
        )));
    }
    let (s, c) = theta.sin_cos();
    let a = params.slope();
    let e0 = params.e0();
    let omega = Sector::domain(a);
    let wedge = Curve::wedge(a);
    let ac_dirac = |density: f64, rate: f64| {
        let mu = RadonMeasure::zero();
        let mu = if density != 0.0 {
            mu.with_constant(omega, density)
        } else {
            mu
        };
        mu.with_dirac(wedge, Weight::linear(rate))
    };
    // Dirac rates per unit x; the n^k rates all carry sin^2 theta / cos theta.
    let n_rate = s * s / c;
    let m = [
        ac_dirac(1.0, s),
        ac_dirac(1.0, s * c * c),
        ac_dirac(0.0, s * s * c),
        ac_dirac(e0, e0 * s),
    ];
    let n = [
        ac_dirac(0.0, n_rate),
        ac_dirac(0.0, s * s * c),
        ac_dirac(0.0, s * s * s),
        ac_dirac(0.0, e0 * n_rate),
    ];
    let family = MeasureFamily {
        params: *params,
        m,
        n,
        pressure: RadonMeasure::zero(),
        wall_force: [-(s * s * s), s * s * c],
        inflow: [1.0, 1.0, 0.0, e0],
        shock: None,
    };
    Ok(LimitMeasureSolution {
        family,
        varrho: ac_dirac(1.0, s / (c * c)),
        wall_velocity: (c * c, s * c),
        interior_velocity: (1.0, 0.0),
        wall_pressure: s * s,
    })
}

/// The `eps > 0` solution as absolutely continuous measures on the two sectors
/// separated by the shock ray.
pub fn eps_measure_family(sol: &ShockSolution) -> Result<MeasureFamily> {
    let params = sol.params;
    let a = params.slope();
    let shock = sol.shock_eta();
    let sectors = [Sector::new(0.0, shock), Sector::new(shock, 1.0 / a)];
    // one interior probe per sector, on the ray through its angular midpoint
    let states = sectors
        .iter()
        .map(|s| {
            let eta = 0.5 * (s.eta_min + s.eta_max);
            evaluate_solution(sol, eta, 1.0)
        })
        .collect::<Result<Vec<_>>>()?;
    let moments = |s: &crate::euler::GasState| [1.0, s.u, s.v, s.energy];
    let build = |density: &dyn Fn(&crate::euler::GasState) -> f64| {
        sectors
            .iter()
            .zip(&states)
            .fold(RadonMeasure::zero(), |mu, (sec, st)| {
                mu.with_constant(*sec, density(st))
            })
    };
    let m = std::array::from_fn(|k| build(&|s| s.rho * s.u * moments(s)[k]));
    let n = std::array::from_fn(|k| build(&|s| s.rho * s.v * moments(s)[k]));
    let pressures = states
        .iter()
        .map(|s| pressure(s, &params))
        .collect::<Result<Vec<_>>>()?;
    let p_measure = sectors
        .iter()
        .zip(&pressures)
        .fold(RadonMeasure::zero(), |mu, (sec, p)| {
            mu.with_constant(*sec, *p)
        });
    let scaled = pressures[1] / a.hypot(1.0);
    let p0 = params.p0();
    let up = params.upstream();
    Ok(MeasureFamily {
        params,
        m,
        n,
        pressure: p_measure,
        wall_force: [-(a * scaled), scaled],
        inflow: [
            up.rho * up.u,
            up.rho * up.u * up.u + p0,
            0.0,
            up.rho * up.u * up.energy,
        ],
        shock: Some(*sol),
    })
}

/// Number of parameters probed eagerly before the weight is handed out.
const PROBES: [f64; 3] = [0.25, 1.0, 4.0];

/// Relative offset used for one-sided limits.
pub const ONE_SIDED_STEP: f64 = 1e-10;

/// Dirac weight `([[f]], [[g]]) . n` concentrated on `curve` by the distributional
/// divergence of a piecewise-smooth field `(f, g)`.
pub fn jump_concentration<F, G>(f: F, g: G, curve: Curve) -> Result<DiracPart>
where
    F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    G: Fn(f64, f64) -> f64 + Send + Sync + 'static,
{
    let t_end = curve.t_end.unwrap_or(f64::INFINITY);
    for t in PROBES.map(|p| {
        if t_end.is_finite() {
            p / 8.0 * t_end
        } else {
            p
        }
    }) {
        let w = jump_flux_at(&f, &g, &curve, t, ONE_SIDED_STEP);
        if !w.is_finite() {
            return Err(Error::OneSidedLimit(t));
        }
    }
    let weight = Weight::Function(Arc::new(move |t| {
        jump_flux_at(&f, &g, &curve, t, ONE_SIDED_STEP)
    }));
    Ok(DiracPart::new(curve, weight))
}
