//! Independent references for the perturbative results: exact periods,
//! a fixed-step RK4 integrator and a grid-projection evaluation of the
//! pendulum expansion.

mod exact;
mod integrator;
pub mod projection;

pub use exact::{
    duffing_exact_omega2, duffing_exact_period, duffing_period_agm, pendulum_exact_omega2,
    pendulum_exact_period, SEPARATRIX_GUARD,
};
pub use integrator::{
    integrate, integrate_capped, period_from_trajectory, System, Trajectory, DEFAULT_MAX_STEPS,
};
