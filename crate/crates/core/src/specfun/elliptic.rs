use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Complete elliptic integral of the first kind,
/// `K(m) = ∫₀^{π/2} dφ / √(1 − m sin²φ)` with parameter `m = k²`.
///
/// Evaluated through the arithmetic–geometric mean,
/// `K(m) = π / (2 AGM(1, √(1 − m)))`.
pub fn elliptic_k(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::domain(format!(
            "elliptic_k: parameter m = {m} outside [0, 1)"
        )));
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    // Quadratic convergence: 8 iterations already exhaust f64 for m < 1 - 1e-300.
    for _ in 0..64 {
        if (a - b).abs() <= 1e-15 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(FRAC_PI_2 / a)
}
