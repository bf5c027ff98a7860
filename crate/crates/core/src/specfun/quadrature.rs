//! Globally adaptive Gauss–Kronrod (7/15) quadrature, plus a wrapper that
//! removes inverse-square-root singularities at both endpoints.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::error::{Error, Result};

/// Hard cap on the number of live subintervals.
const MAX_INTERVALS: usize = 20_000;

/// Tolerances for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum bisection depth of any subinterval.
    pub max_refinements: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_refinements: 30,
        }
    }
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_refinements: u32) -> Result<Self> {
        let cfg = Self {
            rel_tol,
            abs_tol,
            max_refinements,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) || self.max_refinements < 1 {
            return Err(Error::domain(format!(
                "invalid quadrature config: rel_tol={} abs_tol={} max_refinements={}",
                self.rel_tol, self.abs_tol, self.max_refinements
            )));
        }
        Ok(())
    }
}

// Kronrod abscissae (positive half, descending) and weights; the Gauss
// 7-point rule uses the odd-indexed abscissae.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, depth: u32) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
        depth,
    }
}

/// Adaptive integral of a smooth (bounded, finite) integrand over `[a, b]`.
pub fn integrate_smooth<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("integration limits must be finite"));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate_smooth(f, b, a, cfg).map(|v| -v);
    }

    let first = gauss_kronrod(&f, a, b, 0);
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::from([first]);

    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::Convergence {
                estimate: total,
                error_bound: total_err,
            });
        }
        if total_err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            return Ok(total);
        }
        let worst = heap.pop().expect("heap is never empty");
        if worst.depth >= cfg.max_refinements || heap.len() + 2 > MAX_INTERVALS {
            return Err(Error::Convergence {
                estimate: total,
                error_bound: total_err,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod(&f, worst.a, mid, worst.depth + 1);
        let right = gauss_kronrod(&f, mid, worst.b, worst.depth + 1);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // Drift from running updates is small but can mask convergence.
        if heap.len() % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
}

/// `∫_a^b f(x) dx` for an integrand with (at worst) inverse-square-root
/// singularities at `a` and `b`.
///
/// The substitution `x = a + (b − a) sin²φ` maps `[a, b]` to `[0, π/2]`
/// with `dx = (b − a) sin 2φ dφ`; the Jacobian cancels both singularities
/// so the transformed integrand is handed to [`integrate_smooth`]. The
/// integrand is never evaluated at the endpoints themselves.
pub fn integrate_turning_point<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("integration limits must be finite"));
    }
    let width = b - a;
    integrate_smooth(
        |phi: f64| {
            // measure from the nearer endpoint so x never rounds onto it
            let x = if phi < FRAC_PI_4 {
                a + width * phi.sin().powi(2)
            } else {
                b - width * phi.cos().powi(2)
            };
            f(x) * width * (2.0 * phi).sin()
        },
        0.0,
        FRAC_PI_2,
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn arcsine_integral() {
        let cfg = QuadratureConfig::default();
        let v = integrate_turning_point(|x| 1.0 / (1.0 - x * x).sqrt(), -1.0, 1.0, &cfg).unwrap();
        assert!((v - PI).abs() < 1e-12, "{v}");
    }

    #[test]
    fn constant_integrand() {
        let cfg = QuadratureConfig::default();
        let v = integrate_turning_point(|_| 1.0, 0.0, 2.0, &cfg).unwrap();
        assert!((v - 2.0).abs() < 1e-14);
        assert_eq!(integrate_smooth(|x| x, 3.0, 3.0, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let cfg = QuadratureConfig::default();
        let fwd = integrate_smooth(|x: f64| x.exp(), 0.0, 1.0, &cfg).unwrap();
        let back = integrate_smooth(|x: f64| x.exp(), 1.0, 0.0, &cfg).unwrap();
        assert_eq!(fwd, -back);
        assert!((fwd - (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn single_sided_singularity() {
        // ∫₀¹ dx/√(1−x) = 2
        let cfg = QuadratureConfig::default();
        let v = integrate_turning_point(|x| 1.0 / (1.0 - x).sqrt(), 0.0, 1.0, &cfg).unwrap();
        assert!((v - 2.0).abs() < 1e-11, "{v}");
    }

    #[test]
    fn reports_non_convergence_with_estimate() {
        let cfg = QuadratureConfig::new(1e-14, 0.0, 2).unwrap();
        match integrate_smooth(|x: f64| (1.0 / (x + 1e-6)).sin(), 0.0, 1.0, &cfg) {
            Err(Error::Convergence {
                estimate,
                error_bound,
            }) => {
                assert!(estimate.is_finite());
                assert!(error_bound > 0.0);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::new(0.0, 0.0, 10).is_err());
        assert!(QuadratureConfig::new(1e-8, -1.0, 10).is_err());
        assert!(QuadratureConfig::new(1e-8, 0.0, 0).is_err());
        assert!(QuadratureConfig::new(1e-8, 0.0, 1).is_ok());
    }

    proptest! {
        #[test]
        fn linear_in_integrand(alpha in -3.0..3.0f64, beta in -3.0..3.0f64, c in 0.1..2.0f64) {
            let cfg = QuadratureConfig::default();
            let f = |x: f64| 1.0 / (1.0 - x * x).sqrt();
            let g = |x: f64| (c * x).cos() / (1.0 - x * x).sqrt();
            let rf = integrate_turning_point(f, -1.0, 1.0, &cfg).unwrap();
            let rg = integrate_turning_point(g, -1.0, 1.0, &cfg).unwrap();
            let rh = integrate_turning_point(|x| alpha * f(x) + beta * g(x), -1.0, 1.0, &cfg).unwrap();
            let scale = alpha.abs() * rf.abs() + beta.abs() * rg.abs() + 1.0;
            prop_assert!((rh - (alpha * rf + beta * rg)).abs() <= 1e-9 * scale);
        }
    }
}
