//! Bessel functions of the first kind and integer order.
//!
//! Small arguments use the ascending power series; everything else uses
//! Miller's downward recurrence normalised with `J₀ + 2 Σ J₂ₖ = 1`.

use crate::error::{Error, Result};

/// Largest |x| for which the ascending series is used. Beyond this the
/// alternating series loses digits to cancellation.
const SERIES_LIMIT: f64 = 3.0;

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

/// Bessel function of the first kind `J_n(x)`.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("bessel_j: non-finite argument {x}")));
    }
    let ax = x.abs();
    let value = if ax <= SERIES_LIMIT {
        series(n, ax)
    } else {
        miller(n, ax)
    };
    // J_n(-x) = (-1)^n J_n(x)
    Ok(if x < 0.0 && n % 2 == 1 { -value } else { value })
}

fn series(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let q = half * half;
    // (x/2)^n / n!
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / f64::from(k);
    }
    let mut sum = term;
    let nf = f64::from(n);
    for k in 1..200 {
        let kf = f64::from(k);
        term *= -q / (kf * (kf + nf));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn miller(n: u32, x: f64) -> f64 {
    let top = (n as f64).max(x);
    let start = 2 * ((top + 20.0 + 10.0 * top.sqrt()) as u32 / 2);

    let two_over_x = 2.0 / x;
    let mut above = 0.0_f64; // J_{k+1}
    let mut current = 1e-30_f64; // J_k
    let mut norm = 0.0_f64;
    let mut wanted = 0.0_f64;

    let mut k = start;
    loop {
        if k == n {
            wanted = current;
        }
        if k.is_multiple_of(2) {
            norm += if k == 0 { current } else { 2.0 * current };
        }
        if k == 0 {
            break;
        }
        let below = f64::from(k) * two_over_x * current - above;
        above = current;
        current = below;
        k -= 1;
        if current.abs() > RESCALE_ABOVE {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            norm *= RESCALE_BY;
            wanted *= RESCALE_BY;
        }
    }
    wanted / norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// `J_n(x) = (1/π) ∫₀^π cos(nτ − x sin τ) dτ`; the integrand is smooth
    /// and periodic so the trapezoidal rule converges geometrically.
    fn integral_oracle(n: u32, x: f64) -> f64 {
        let m = 512;
        let h = PI / m as f64;
        let f = |t: f64| (f64::from(n) * t - x * t.sin()).cos();
        let mut s = 0.5 * (f(0.0) + f(PI));
        for i in 1..m {
            s += f(i as f64 * h);
        }
        s * h / PI
    }

    #[test]
    fn known_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert!((bessel_j(1, 1.0).unwrap() - 0.4400505857449335).abs() < 1e-15);
        assert!((bessel_j(3, 1.0).unwrap() - 0.019563353982668).abs() < 1e-14);
    }

    #[test]
    fn matches_integral_representation() {
        let mut worst: f64 = 0.0;
        for n in [0u32, 1, 2, 3, 5, 8, 13, 21, 34, 64] {
            for i in 0..=80 {
                let x = -20.0 + 0.5 * i as f64;
                let err = (bessel_j(n, x).unwrap() - integral_oracle(n, x)).abs();
                worst = worst.max(err);
            }
        }
        assert!(worst <= 1e-13, "worst abs error {worst:e}");
    }

    #[test]
    fn odd_orders_are_odd() {
        for x in [0.3, 2.9, 3.1, 7.5, 15.0] {
            assert_eq!(bessel_j(3, -x).unwrap(), -bessel_j(3, x).unwrap());
            assert_eq!(bessel_j(4, -x).unwrap(), bessel_j(4, x).unwrap());
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(bessel_j(0, f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(2, f64::INFINITY), Err(Error::Domain(_))));
    }

    #[test]
    fn large_argument_stays_bounded() {
        let v = bessel_j(0, 500.0).unwrap();
        assert!((v - integral_oracle(0, 500.0)).abs() < 1e-12, "{v}");
    }
}
