use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("non-positive internal energy {0:e}")]
    NonPositiveInternalEnergy(f64),

    #[error("sound speed undefined: {0}")]
    DegenerateSoundSpeed(&'static str),

    #[error("limit state requested (eps = 0); use the `limit` subcommand")]
    LimitStateRequested,

    #[error(
        "shock detached: no admissible attached shock for theta = {theta:.6} rad, eps = {eps:e}"
    )]
    ShockDetached { theta: f64, eps: f64 },

    #[error("root bracketing failed: {0}")]
    RootBracketFailure(String),

    #[error("solution invariant violated: {0}")]
    InvariantViolation(String),

    #[error("point ({x}, {y}) lies outside the flow domain")]
    OutsideDomain { x: f64, y: f64 },

    #[error("point ({x}, {y}) lies on the shock ray")]
    OnShock { x: f64, y: f64 },

    #[error("shock polar has no admissible interval")]
    EmptyPolar,

    #[error("wedge line does not meet the limiting polar circle (theta = {theta:.6} rad)")]
    NoIntersection { theta: f64 },

    #[error("one-sided limit evaluation failed at t = {0}")]
    OneSidedLimit(f64),
}

impl Error {
    /// Physical (regime) failures as opposed to numerical ones.
    pub fn is_physical(&self) -> bool {
        matches!(
            self,
            Error::ShockDetached { .. } | Error::NoIntersection { .. } | Error::EmptyPolar
        )
    }

    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::InvalidParams(_)
                | Error::LimitStateRequested
                | Error::NonPositiveInternalEnergy(_)
                | Error::OutsideDomain { .. }
                | Error::OnShock { .. }
        )
    }

    /// Process exit status: 2 for physical failures, 3 for bad input, 4 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.is_physical() {
            2
        } else if self.is_invalid_input() {
            3
        } else {
            4
        }
    }

    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid_params",
            Error::NonPositiveInternalEnergy(_) => "non_positive_internal_energy",
            Error::DegenerateSoundSpeed(_) => "degenerate_sound_speed",
            Error::LimitStateRequested => "limit_state_requested",
            Error::ShockDetached { .. } => "shock_detached",
            Error::RootBracketFailure(_) => "root_bracket_failure",
            Error::InvariantViolation(_) => "invariant_violation",
            Error::OutsideDomain { .. } => "outside_domain",
            Error::OnShock { .. } => "on_shock",
            Error::EmptyPolar => "empty_polar",
            Error::NoIntersection { .. } => "no_intersection",
            Error::OneSidedLimit(_) => "one_sided_limit",
        }
    }
}
