//! Lindstedt–Poincaré perturbation theory improved by a linear delta
//! expansion (LPLDE), applied to the Duffing oscillator and the nonlinear
//! pendulum to third order.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: integer-order Bessel functions, the complete elliptic
//!   integral `K(m)` and a turning-point aware quadrature rule.
//! - [`duffing`]: closed-form third-order expansion of
//!   `ẍ + ω²x + μx³ = 0`, including the minimal-sensitivity choice of `λ²`.
//! - [`pendulum`]: Fourier–Bessel expansion of `θ̈ + ω² sin θ = 0` to third
//!   order.
//! - [`oracle`]: exact periods, an RK4 integrator and a grid-projection
//!   reference for the pendulum coefficients.
//! - [`harness`]: parameter sweeps, CSV output and the self-check suite used
//!   by the `lplde` binary.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod duffing;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod pendulum;
pub mod result;
pub mod specfun;

pub use error::{Error, Result};
pub use result::{FrequencyResult, Method};
