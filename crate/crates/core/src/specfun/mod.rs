//! Special functions and quadrature shared by the expansion engines and
//! the exact-period oracles.

mod bessel;
mod elliptic;
mod quadrature;

pub use bessel::bessel_j;
pub use elliptic::elliptic_k;
pub use quadrature::{integrate_smooth, integrate_turning_point, QuadratureConfig};
