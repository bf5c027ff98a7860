//! Grid-projection reference for the pendulum expansion.
//!
//! Each order is solved directly in τ-space: source terms are sampled on a
//! uniform grid from their defining expressions (with `sin θ₀`, `cos θ₀`
//! evaluated pointwise, not through Bessel tables), projected onto
//! `cos kτ` by the trapezoidal rule, and divided by the operator symbol
//! `λ²(1 − k²)`. The fundamental is removed through `α_n` and fixed at
//! the origin through `θ_n(0) = 0`.
//!
//! None of this shares code with [`crate::pendulum`]; agreement between
//! the two is evidence that the Kronecker-delta reductions are right.

use std::f64::consts::PI;

/// Grid and spectral resolution of the reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionConfig {
    /// Points on `[0, 2π)`.
    pub grid: usize,
    /// Odd harmonics kept in `θ₁`, `θ₂`: `cos((2j+1)τ)` for `j < harmonics`.
    pub harmonics: usize,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        Self {
            grid: 4096,
            harmonics: 40,
        }
    }
}

/// The expansion at one value of `λ²`, obtained by projection.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedExpansion {
    pub lambda2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    /// Coefficients of `cos((2j+1)τ)`.
    pub theta1: Vec<f64>,
    pub theta2: Vec<f64>,
    pub source2: Vec<f64>,
    pub source3: Vec<f64>,
    /// Largest `sin kτ` projection seen in any source; zero for even sources.
    pub sine_leak: f64,
}

struct Grid {
    tau: Vec<f64>,
    cos: Vec<Vec<f64>>,
    sin: Vec<Vec<f64>>,
}

impl Grid {
    fn new(cfg: &ProjectionConfig) -> Self {
        let tau: Vec<f64> = (0..cfg.grid)
            .map(|i| 2.0 * PI * i as f64 / cfg.grid as f64)
            .collect();
        let odd = |j: usize| (2 * j + 1) as f64;
        let cos = (0..cfg.harmonics)
            .map(|j| tau.iter().map(|t| (odd(j) * t).cos()).collect())
            .collect();
        let sin = (0..cfg.harmonics)
            .map(|j| tau.iter().map(|t| (odd(j) * t).sin()).collect())
            .collect();
        Self { tau, cos, sin }
    }

    /// `(1/π) ∫₀^{2π} f cos((2j+1)τ) dτ` by the trapezoidal rule.
    fn project(&self, f: &[f64], j: usize) -> f64 {
        2.0 * f.iter().zip(&self.cos[j]).map(|(a, b)| a * b).sum::<f64>() / f.len() as f64
    }

    fn project_sin(&self, f: &[f64], j: usize) -> f64 {
        2.0 * f.iter().zip(&self.sin[j]).map(|(a, b)| a * b).sum::<f64>() / f.len() as f64
    }

    fn synth(&self, coeffs: &[f64], weight: impl Fn(usize) -> f64) -> Vec<f64> {
        let mut out = vec![0.0; self.tau.len()];
        for (j, c) in coeffs.iter().enumerate() {
            let w = c * weight(j);
            for (o, basis) in out.iter_mut().zip(&self.cos[j]) {
                *o += w * basis;
            }
        }
        out
    }

    fn value(&self, coeffs: &[f64]) -> Vec<f64> {
        self.synth(coeffs, |_| 1.0)
    }

    fn second_derivative(&self, coeffs: &[f64]) -> Vec<f64> {
        self.synth(coeffs, |j| {
            let k = (2 * j + 1) as f64;
            -k * k
        })
    }
}

/// Solve `λ²θ'' + λ²θ = S` for the non-resonant harmonics of `S` and fix
/// the `cos τ` coefficient from `θ(0) = 0`.
fn solve_order(
    grid: &Grid,
    source: &[f64],
    lambda2: f64,
    harmonics: usize,
) -> (Vec<f64>, Vec<f64>) {
    let projected: Vec<f64> = (0..harmonics).map(|j| grid.project(source, j)).collect();
    let mut theta = vec![0.0; harmonics];
    for j in 1..harmonics {
        let k = (2 * j + 1) as f64;
        theta[j] = projected[j] / (lambda2 * (1.0 - k * k));
    }
    theta[0] = -theta[1..].iter().sum::<f64>();
    (theta, projected)
}

fn sine_leak(grid: &Grid, f: &[f64], harmonics: usize) -> f64 {
    (0..harmonics)
        .map(|j| grid.project_sin(f, j).abs())
        .fold(0.0, f64::max)
}

/// Projects the pendulum expansion to third order at one `λ²`.
pub fn project_pendulum(
    omega: f64,
    amplitude: f64,
    lambda2: f64,
    cfg: &ProjectionConfig,
) -> ProjectedExpansion {
    let grid = Grid::new(cfg);
    let w2 = omega * omega;
    let kmax = cfg.harmonics;

    let theta0: Vec<f64> = grid.tau.iter().map(|t| amplitude * t.cos()).collect();
    let f0: Vec<f64> = theta0
        .iter()
        .map(|th| -w2 * th.sin() + lambda2 * th)
        .collect();
    let f1: Vec<f64> = theta0.iter().map(|th| -w2 * th.cos() + lambda2).collect();
    let f2: Vec<f64> = theta0.iter().map(|th| w2 * th.sin()).collect();
    // −θ₀'' = A cos τ = θ₀
    let minus_theta0_dd = &theta0;

    // First order: S₁ = α₁ A cos τ + f(θ₀)
    let alpha1 = -grid.project(&f0, 0) / amplitude;
    let s1: Vec<f64> = f0
        .iter()
        .zip(minus_theta0_dd)
        .map(|(f, c)| alpha1 * c + f)
        .collect();
    let (theta1, _) = solve_order(&grid, &s1, lambda2, kmax);
    let th1 = grid.value(&theta1);
    let th1_dd = grid.second_derivative(&theta1);

    // Second order: S₂ = −α₁θ₁'' − α₂θ₀'' + θ₁ f'(θ₀)
    let base2: Vec<f64> = (0..cfg.grid)
        .map(|i| -alpha1 * th1_dd[i] + th1[i] * f1[i])
        .collect();
    let alpha2 = -grid.project(&base2, 0) / amplitude;
    let s2: Vec<f64> = base2
        .iter()
        .zip(minus_theta0_dd)
        .map(|(b, c)| b + alpha2 * c)
        .collect();
    let (theta2, source2) = solve_order(&grid, &s2, lambda2, kmax);
    let th2 = grid.value(&theta2);
    let th2_dd = grid.second_derivative(&theta2);

    // Third order: S₃ = −α₁θ₂'' − α₂θ₁'' − α₃θ₀'' + θ₂ f'(θ₀) + θ₁² f''(θ₀)/2
    let base3: Vec<f64> = (0..cfg.grid)
        .map(|i| {
            -alpha1 * th2_dd[i] - alpha2 * th1_dd[i]
                + th2[i] * f1[i]
                + 0.5 * th1[i] * th1[i] * f2[i]
        })
        .collect();
    let alpha3 = -grid.project(&base3, 0) / amplitude;
    let s3: Vec<f64> = base3
        .iter()
        .zip(minus_theta0_dd)
        .map(|(b, c)| b + alpha3 * c)
        .collect();
    let source3 = (0..kmax).map(|j| grid.project(&s3, j)).collect();

    let leak = [&s1, &s2, &s3]
        .iter()
        .map(|s| sine_leak(&grid, s, kmax))
        .fold(0.0, f64::max);

    ProjectedExpansion {
        lambda2,
        alpha1,
        alpha2,
        alpha3,
        theta1,
        theta2,
        source2,
        source3,
        sine_leak: leak,
    }
}

/// λ-independent coefficient families recovered from projections at two
/// values of `λ²` (every family is a polynomial in `1/λ²` of known degree).
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledReference {
    pub alpha1a: f64,
    pub d1_bar: Vec<f64>,
    pub s2a_bar: Vec<f64>,
    pub s2b_bar: Vec<f64>,
    pub alpha2_bar: f64,
    pub d2a_bar: Vec<f64>,
    pub d2b_bar: Vec<f64>,
    pub alpha3a: f64,
    pub alpha3b: f64,
    /// `s⁽³⁾_{2n+1}` at `λ² = 1`.
    pub s3_unit_lambda: Vec<f64>,
    pub sine_leak: f64,
}

/// Splits `v(λ) = a/λ⁴ + b/λ²` (or `a/λ² + b`, with `shift = 1`) sampled at
/// `λ² = 1` and `λ² = 2`.
fn split_two(at_one: f64, at_two: f64, inverse_powers: (i32, i32)) -> (f64, f64) {
    let (p, q) = inverse_powers;
    let (x1, y1) = (1.0, 1.0);
    let (x2, y2) = (2f64.powi(-p), 2f64.powi(-q));
    let det = x1 * y2 - x2 * y1;
    (
        (at_one * y2 - at_two * y1) / det,
        (x1 * at_two - x2 * at_one) / det,
    )
}

pub fn scaled_reference(omega: f64, amplitude: f64, cfg: &ProjectionConfig) -> ScaledReference {
    let one = project_pendulum(omega, amplitude, 1.0, cfg);
    let two = project_pendulum(omega, amplitude, 2.0, cfg);

    let pairs = |a: &[f64], b: &[f64], powers| -> (Vec<f64>, Vec<f64>) {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| split_two(x, y, powers))
            .unzip()
    };
    let (s2a_bar, s2b_bar) = pairs(&one.source2, &two.source2, (1, 0));
    let (d2a_bar, d2b_bar) = pairs(&one.theta2, &two.theta2, (2, 1));
    let (alpha3a, alpha3b) = split_two(one.alpha3, two.alpha3, (2, 1));

    ScaledReference {
        alpha1a: one.alpha1 + one.lambda2,
        d1_bar: one.theta1.clone(),
        s2a_bar,
        s2b_bar,
        alpha2_bar: one.alpha2,
        d2a_bar,
        d2b_bar,
        alpha3a,
        alpha3b,
        s3_unit_lambda: one.source3.clone(),
        sine_leak: one.sine_leak.max(two.sine_leak),
    }
}

/// `max_i |a_i − b_i| / max_i |b_i|` over the common prefix.
pub fn family_deviation(analytic: &[f64], reference: &[f64]) -> f64 {
    let n = analytic.len().min(reference.len());
    let scale = reference[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let diff = analytic[..n]
        .iter()
        .zip(&reference[..n])
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_recovers_known_parts() {
        let (a, b) = split_two(3.0 + 5.0, 3.0 / 4.0 + 5.0 / 2.0, (2, 1));
        assert!((a - 3.0).abs() < 1e-14 && (b - 5.0).abs() < 1e-14);
        let (a, b) = split_two(3.0 + 5.0, 1.5 + 5.0, (1, 0));
        assert!((a - 3.0).abs() < 1e-14 && (b - 5.0).abs() < 1e-14);
    }

    #[test]
    fn first_order_frequency_is_lambda_free() {
        let cfg = ProjectionConfig::default();
        let a = project_pendulum(1.0, 1.0, 1.0, &cfg);
        let b = project_pendulum(1.0, 1.0, 3.0, &cfg);
        assert!(((a.alpha1 + 1.0) - (b.alpha1 + 3.0)).abs() < 1e-14);
        assert!(a.sine_leak < 1e-13);
    }

    #[test]
    fn theta_orders_vanish_at_origin() {
        let e = project_pendulum(1.0, 2.0, 0.7, &ProjectionConfig::default());
        assert!(e.theta1.iter().sum::<f64>().abs() < 1e-15);
        assert!(e.theta2.iter().sum::<f64>().abs() < 1e-14);
    }
}
