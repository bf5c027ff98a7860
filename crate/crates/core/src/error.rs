use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of refinements.
    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    Convergence { estimate: f64, error_bound: f64 },

    /// The oscillation reaches a separatrix and the period is infinite.
    #[error("divergent period: {0}")]
    DivergentPeriod(String),

    /// The minimal-sensitivity condition has a vanishing denominator.
    #[error("degenerate minimal-sensitivity condition: scaled second-order coefficient is zero")]
    DegeneratePms,

    /// The minimal-sensitivity condition has no solution with λ² > 0.
    #[error("no stationary point with positive lambda^2 (got {lambda2:e})")]
    NoStationaryPoint { lambda2: f64 },

    /// The approximation produced Ω² ≤ 0.
    #[error("unphysical squared frequency {omega2:e}")]
    Unphysical { omega2: f64 },

    /// Two independent evaluations of the same quantity disagree.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    /// The integrator would exceed its step budget.
    #[error("step budget exceeded: {requested} steps requested, cap is {cap}")]
    StepBudget { requested: u64, cap: u64 },

    /// A period could not be extracted from a trajectory.
    #[error("period estimation failed: {0}")]
    Estimation(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::DivergentPeriod(_)
            | Error::DegeneratePms
            | Error::NoStationaryPoint { .. }
            | Error::Unphysical { .. } => 3,
            Error::Convergence { .. } | Error::StepBudget { .. } | Error::Estimation(_) => 4,
            Error::Consistency(_) => 1,
        }
    }
}
