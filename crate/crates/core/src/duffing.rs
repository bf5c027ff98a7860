//! Third-order Lindstedt–Poincaré expansion of the Duffing oscillator
//! `ẍ + ω²x + μx³ = 0`, interpolated with a linear delta expansion.
//!
//! The interpolated equation in scaled time `τ = Ωt` is
//!
//! ```text
//! Ω² x'' + (ω² + λ²) x = δ [ −μ x³ + λ² x ]
//! ```
//!
//! with `Ω² = Σ δⁿ αₙ` and `x = Σ δⁿ xₙ(τ)`. Every order is closed form:
//! the `αₙ` remove the resonant `cos τ` drive and each `xₙ` is a short odd
//! cosine series. Setting `λ = 0` recovers plain Lindstedt–Poincaré.

use crate::error::{Error, Result};
use crate::result::{FrequencyResult, Method};

/// Highest perturbative order implemented.
pub const MAX_ORDER: usize = 3;

/// Physical parameters of `ẍ + ω²x + μx³ = 0` with `x(0) = A`, `ẋ(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub omega: f64,
    pub mu: f64,
    pub amplitude: f64,
}

impl OscillatorParams {
    pub fn new(omega: f64, mu: f64, amplitude: f64) -> Result<Self> {
        let p = Self {
            omega,
            mu,
            amplitude,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::domain(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        if !(self.amplitude.is_finite() && self.amplitude > 0.0) {
            return Err(Error::domain(format!(
                "amplitude must be positive, got {}",
                self.amplitude
            )));
        }
        if !self.mu.is_finite() {
            return Err(Error::domain("mu must be finite"));
        }
        if let Some(edge) = self.separatrix_amplitude() {
            if self.amplitude >= edge {
                return Err(Error::domain(format!(
                    "amplitude {} is not below the separatrix amplitude {edge} (no periodic orbit)",
                    self.amplitude
                )));
            }
        }
        Ok(())
    }

    /// `ω/√(−μ)` for a softening spring; `None` when every amplitude oscillates.
    pub fn separatrix_amplitude(&self) -> Option<f64> {
        (self.mu < 0.0).then(|| self.omega / (-self.mu).sqrt())
    }

    /// `A²μ`, the only combination of amplitude and coupling the frequency
    /// depends on.
    pub fn coupling_strength(&self) -> f64 {
        self.amplitude * self.amplitude * self.mu
    }
}

/// Odd cosine series `Σ_j d_j cos((2j+1)τ)` in the scaled time `τ = Ωt`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSeries {
    pub coeffs: Vec<f64>,
}

impl HarmonicSeries {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    /// Coefficient of `cos(kτ)`; zero for even or absent harmonics.
    pub fn harmonic(&self, k: usize) -> f64 {
        if k.is_multiple_of(2) {
            return 0.0;
        }
        self.coeffs.get(k / 2).copied().unwrap_or(0.0)
    }

    fn terms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, &d)| ((2 * j + 1) as f64, d))
    }

    pub fn value(&self, tau: f64) -> f64 {
        self.terms().map(|(k, d)| d * (k * tau).cos()).sum()
    }

    pub fn d_dtau(&self, tau: f64) -> f64 {
        self.terms().map(|(k, d)| -k * d * (k * tau).sin()).sum()
    }

    pub fn d2_dtau2(&self, tau: f64) -> f64 {
        self.terms()
            .map(|(k, d)| -k * k * d * (k * tau).cos())
            .sum()
    }

    /// Value at `τ = 0`, i.e. the coefficient sum.
    pub fn at_zero(&self) -> f64 {
        self.coeffs.iter().sum()
    }
}

/// Solution state of the expansion up to some order.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationExpansion {
    pub params: OscillatorParams,
    pub lambda2: f64,
    /// `[α₀, α₁, α₂, α₃]`, always all four.
    pub alphas: [f64; 4],
    /// `x₀ … x_order`.
    pub orders: Vec<HarmonicSeries>,
}

impl PerturbationExpansion {
    pub fn order(&self) -> usize {
        self.orders.len() - 1
    }

    /// `Σ_{k ≤ order} α_k`.
    pub fn omega2(&self) -> f64 {
        self.alphas[..=self.order()].iter().sum()
    }

    /// `Σ δᵏ x_k(τ)`.
    pub fn displacement_with_delta(&self, tau: f64, delta: f64) -> f64 {
        let mut weight = 1.0;
        let mut total = 0.0;
        for series in &self.orders {
            total += weight * series.value(tau);
            weight *= delta;
        }
        total
    }

    /// Displacement at scaled time `τ` with `δ = 1`.
    pub fn displacement(&self, tau: f64) -> f64 {
        self.displacement_with_delta(tau, 1.0)
    }

    pub fn d_dtau(&self, tau: f64) -> f64 {
        self.orders.iter().map(|s| s.d_dtau(tau)).sum()
    }

    pub fn d2_dtau2(&self, tau: f64) -> f64 {
        self.orders.iter().map(|s| s.d2_dtau2(tau)).sum()
    }

    /// Displacement at physical time `t`, with `τ = √Ω² · t`.
    pub fn evaluate(&self, omega2: f64, t: f64) -> f64 {
        self.displacement(omega2.sqrt() * t)
    }
}

fn check_shift(params: &OscillatorParams, lambda2: f64) -> Result<f64> {
    let shifted = params.omega * params.omega + lambda2;
    if !(shifted > 0.0) || !lambda2.is_finite() {
        return Err(Error::domain(format!(
            "omega^2 + lambda^2 must be positive, got {shifted}"
        )));
    }
    Ok(shifted)
}

/// `[α₀, α₁, α₂, α₃]` of the interpolated expansion at a given `λ²`.
pub fn alpha_coefficients(params: &OscillatorParams, lambda2: f64) -> Result<[f64; 4]> {
    let u = check_shift(params, lambda2)?;
    let s = params.coupling_strength();
    let s2 = s * s;
    Ok([
        u,
        0.75 * s - lambda2,
        -3.0 * s2 / (128.0 * u),
        3.0 * s2 * (3.0 * s - 4.0 * lambda2) / (512.0 * u * u),
    ])
}

/// `Ω²` truncated at `order` (0 ≤ order ≤ 3) for a given `λ²`.
pub fn omega2_at(params: &OscillatorParams, lambda2: f64, order: usize) -> Result<f64> {
    if order > MAX_ORDER {
        return Err(Error::domain(format!("order {order} exceeds {MAX_ORDER}")));
    }
    let alphas = alpha_coefficients(params, lambda2)?;
    Ok(alphas[..=order].iter().sum())
}

/// Stationary point of the third-order `Ω²(λ)`: `λ² = 3A²μ/4`.
///
/// Negative for `μ < 0`; [`omega2`] clamps it to zero in that case.
pub fn pms_lambda2(params: &OscillatorParams) -> f64 {
    0.75 * params.coupling_strength()
}

/// Squared frequency by plain LP (`Method::Lp(1..=3)`) or by LPLDE.
///
/// LPLDE substitutes `λ² = max(0, 3A²μ/4)` into the third-order sum; the
/// clamp is reported in the diagnostics (`clamped = 1`).
pub fn omega2(params: &OscillatorParams, method: Method) -> Result<FrequencyResult> {
    params.validate()?;
    match method {
        Method::Lp(order @ 1..=3) => {
            let w2 = omega2_at(params, 0.0, usize::from(order))?;
            Ok(FrequencyResult::new(w2, method, Some(0.0)))
        }
        Method::Lp(order) => Err(Error::domain(format!(
            "LP order must be 1, 2 or 3, got {order}"
        ))),
        Method::Lplde => {
            let raw = pms_lambda2(params);
            let used = raw.max(0.0);
            let w2 = omega2_at(params, used, MAX_ORDER)?;
            let mut res = FrequencyResult::new(w2, Method::Lplde, Some(used))
                .with_diagnostic("lambda2_pms", raw)
                .with_diagnostic("clamped", if raw < 0.0 { 1.0 } else { 0.0 })
                .with_diagnostic("omega2_printed", lplde_printed_omega2(params));
            if raw < 0.0 {
                if let Ok(unclamped) = omega2_at(params, raw, MAX_ORDER) {
                    res = res.with_diagnostic("omega2_unclamped", unclamped);
                }
            }
            Ok(res)
        }
        Method::Exact => Err(Error::domain(
            "exact frequencies come from the oracle module",
        )),
    }
}

/// The LPLDE frequency after simplification,
/// `ω² + 3A²μ/4 − 3A⁴μ²/(32(3A²μ + 4ω²))`, equivalently
/// `(69A⁴μ² + 192A²μω² + 128ω⁴)/(96A²μ + 128ω²)`.
pub fn lplde_closed_form_omega2(params: &OscillatorParams) -> f64 {
    let s = params.coupling_strength();
    let w2 = params.omega * params.omega;
    w2 + 0.75 * s - 3.0 * s * s / (32.0 * (3.0 * s + 4.0 * w2))
}

/// The widely quoted closed form `(64A⁴μ² + 192A²μω² + 128ω⁴)/(96A²μ + 128ω²)`.
///
/// Kept for comparison only: it does not follow from the third-order sum
/// (the first numerator term should be 69A⁴μ²) and is less accurate.
pub fn lplde_printed_omega2(params: &OscillatorParams) -> f64 {
    let s = params.coupling_strength();
    let w2 = params.omega * params.omega;
    (64.0 * s * s + 192.0 * s * w2 + 128.0 * w2 * w2) / (96.0 * s + 128.0 * w2)
}

/// Cosine tables of `x₀ … x_order` at a given `λ²`.
pub fn trajectory(
    params: &OscillatorParams,
    lambda2: f64,
    order: usize,
) -> Result<PerturbationExpansion> {
    if order > MAX_ORDER {
        return Err(Error::domain(format!("order {order} exceeds {MAX_ORDER}")));
    }
    let alphas = alpha_coefficients(params, lambda2)?;
    let u = params.omega * params.omega + lambda2;
    let a = params.amplitude;
    let mu = params.mu;
    let s = params.coupling_strength();
    let l = lambda2;
    let a3mu = a * a * a * mu;
    let a5mu2 = a3mu * s;
    let a7mu3 = a5mu2 * s;
    let (u2, u3) = (u * u, u * u * u);

    let all = [
        vec![a],
        vec![-a3mu / (32.0 * u), a3mu / (32.0 * u)],
        vec![
            a3mu * (23.0 * s - 32.0 * l) / (1024.0 * u2),
            a3mu * (-3.0 * s + 4.0 * l) / (128.0 * u2),
            a5mu2 / (1024.0 * u2),
        ],
        vec![
            -a3mu * (547.0 * s * s - 1472.0 * s * l + 1024.0 * l * l) / (32768.0 * u3),
            a3mu * (297.0 * s * s - 768.0 * s * l + 512.0 * l * l) / (16384.0 * u3),
            a5mu2 * (-3.0 * s + 4.0 * l) / (2048.0 * u3),
            a7mu3 / (32768.0 * u3),
        ],
    ];
    Ok(PerturbationExpansion {
        params: *params,
        lambda2,
        alphas,
        orders: all
            .into_iter()
            .take(order + 1)
            .map(HarmonicSeries::new)
            .collect(),
    })
}

/// LPLDE frequencies for `(A, μ)` and for the rescaled pair
/// `(A√(μ/μ′), μ′)`, which describe the same dynamics.
pub fn rescaling_check(
    params: &OscillatorParams,
    mu_prime: f64,
) -> Result<(FrequencyResult, FrequencyResult)> {
    if mu_prime == 0.0 || !(params.mu * mu_prime > 0.0) {
        return Err(Error::domain(format!(
            "rescaling needs mu and mu' of the same nonzero sign (mu = {}, mu' = {mu_prime})",
            params.mu
        )));
    }
    let scaled = OscillatorParams::new(
        params.omega,
        mu_prime,
        params.amplitude * (params.mu / mu_prime).sqrt(),
    )?;
    Ok((
        omega2(params, Method::Lplde)?,
        omega2(&scaled, Method::Lplde)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit() -> OscillatorParams {
        OscillatorParams::new(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn alphas_at_zero_lambda() {
        let a = alpha_coefficients(&unit(), 0.0).unwrap();
        assert_eq!(a, [1.0, 0.75, -3.0 / 128.0, 9.0 / 512.0]);
        assert_eq!(a[2], -0.0234375);
        assert_eq!(a[3], 0.017578125);
    }

    #[test]
    fn alphas_harmonic_limit() {
        let p = OscillatorParams::new(1.0, 0.0, 1.0).unwrap();
        let a = alpha_coefficients(&p, 0.0).unwrap();
        assert_eq!(a, [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn alpha3_vanishes_at_pms() {
        let a = alpha_coefficients(&unit(), 0.75).unwrap();
        assert_eq!(a[0], 1.75);
        assert_eq!(a[1], 0.0);
        assert!((a[2] + 3.0 / (128.0 * 1.75)).abs() < 1e-17);
        assert_eq!(a[3], 0.0);
    }

    #[test]
    fn alpha_domain() {
        assert!(alpha_coefficients(&unit(), -1.0).is_err());
        assert!(alpha_coefficients(&unit(), -2.0).is_err());
    }

    #[test]
    fn pms_values() {
        assert_eq!(pms_lambda2(&unit()), 0.75);
        assert_eq!(
            pms_lambda2(&OscillatorParams::new(1.0, 1.0, 2.0).unwrap()),
            3.0
        );
        assert_eq!(
            pms_lambda2(&OscillatorParams::new(1.0, 0.0, 1.0).unwrap()),
            0.0
        );
    }

    #[test]
    fn omega2_by_method() {
        let lp3 = omega2(&unit(), Method::Lp(3)).unwrap();
        assert_eq!(lp3.omega2, 1.744140625);
        let lplde = omega2(&unit(), Method::Lplde).unwrap();
        assert!((lplde.omega2 - 389.0 / 224.0).abs() < 1e-15);
        assert_eq!(lplde.lambda2_used, Some(0.75));
        let harmonic = omega2(
            &OscillatorParams::new(1.0, 0.0, 1.0).unwrap(),
            Method::Lplde,
        )
        .unwrap();
        assert_eq!(harmonic.omega2, 1.0);
        assert!(omega2(&unit(), Method::Lp(0)).is_err());
        assert!(omega2(&unit(), Method::Lp(4)).is_err());
        assert!(omega2(&unit(), Method::Exact).is_err());
    }

    #[test]
    fn closed_forms() {
        let p = unit();
        assert!((lplde_closed_form_omega2(&p) - 389.0 / 224.0).abs() < 1e-15);
        assert!((lplde_printed_omega2(&p) - 384.0 / 224.0).abs() < 1e-15);
    }

    #[test]
    fn negative_coupling_is_clamped() {
        let p = OscillatorParams::new(1.0, -1.0, 0.5).unwrap();
        let r = omega2(&p, Method::Lplde).unwrap();
        assert_eq!(r.lambda2_used, Some(0.0));
        assert_eq!(r.diagnostics["clamped"], 1.0);
        assert_eq!(r.omega2, omega2(&p, Method::Lp(3)).unwrap().omega2);
        assert!(r.diagnostics.contains_key("omega2_unclamped"));
    }

    #[test]
    fn params_validation() {
        assert!(OscillatorParams::new(0.0, 1.0, 1.0).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, 0.0).is_err());
        assert!(OscillatorParams::new(1.0, -1.0, 1.0).is_err());
        assert!(OscillatorParams::new(1.0, -1.0, 0.999).is_ok());
        assert!(OscillatorParams::new(1.0, f64::NAN, 0.5).is_err());
    }

    #[test]
    fn first_and_second_order_tables() {
        let x1 = trajectory(&unit(), 0.0, 1).unwrap();
        assert_eq!(x1.orders[1].coeffs, vec![-1.0 / 32.0, 1.0 / 32.0]);
        let x2 = trajectory(&unit(), 0.0, 2).unwrap();
        assert_eq!(
            x2.orders[2].coeffs,
            vec![23.0 / 1024.0, -3.0 / 128.0, 1.0 / 1024.0]
        );
        assert_eq!(x2.orders[2].at_zero(), 0.0);
        assert!(trajectory(&unit(), 0.0, 4).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let p = OscillatorParams::new(1.0, 0.3, 0.7).unwrap();
        let e0 = trajectory(&p, 0.0, 0).unwrap();
        assert_eq!(e0.evaluate(1.0, 0.0), 0.7);
        assert!((e0.evaluate(4.0, std::f64::consts::FRAC_PI_2) + 0.7).abs() < 1e-15);

        let u = unit();
        let w2 = omega2(&u, Method::Lplde).unwrap().omega2;
        let e3 = trajectory(&u, pms_lambda2(&u), 3).unwrap();
        assert!((e3.evaluate(w2, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rescaling_examples() {
        let (a, b) = rescaling_check(&unit(), 4.0).unwrap();
        assert!((a.omega2 - 389.0 / 224.0).abs() < 1e-15);
        assert!((a.omega2 - b.omega2).abs() <= 1e-14 * a.omega2);

        let p = OscillatorParams::new(1.0, 2.0, 1.0).unwrap();
        let (a, b) = rescaling_check(&p, 2.0).unwrap();
        assert_eq!(a.omega2, b.omega2);

        let p = OscillatorParams::new(2.0, 0.5, 2.0).unwrap();
        let (a, b) = rescaling_check(&p, 2.0).unwrap();
        assert!((a.omega2 - b.omega2).abs() <= 1e-14 * a.omega2);

        assert!(rescaling_check(&unit(), 0.0).is_err());
        assert!(rescaling_check(&unit(), -1.0).is_err());
    }

    #[test]
    fn pms_is_stationary() {
        for &(w, mu, a) in &[
            (1.0, 1.0, 1.0),
            (1.0, 1.0, 2.0),
            (2.0, 0.5, 3.0),
            (1.0, 10.0, 0.5),
        ] {
            let p = OscillatorParams::new(w, mu, a).unwrap();
            let l = pms_lambda2(&p);
            let h = 1e-5 * (w * w + l);
            let up = omega2_at(&p, l + h, 3).unwrap();
            let down = omega2_at(&p, l - h, 3).unwrap();
            let centre = omega2_at(&p, l, 3).unwrap();
            let deriv = (up - down) / (2.0 * h);
            assert!(deriv.abs() <= 1e-6 * centre, "derivative {deriv:e}");
        }
    }

    #[test]
    fn third_order_residual_is_small() {
        let p = OscillatorParams::new(1.0, 1.0, 0.1).unwrap();
        for lambda2 in [0.0, pms_lambda2(&p)] {
            let e = trajectory(&p, lambda2, 3).unwrap();
            let w2 = e.omega2();
            let worst = (0..1024)
                .map(|i| {
                    let tau = 2.0 * std::f64::consts::PI * i as f64 / 1024.0;
                    let x = e.displacement(tau);
                    (w2 * e.d2_dtau2(tau) + x + x * x * x).abs()
                })
                .fold(0.0, f64::max);
            assert!(worst <= 1e-8, "residual {worst:e} at lambda2 {lambda2}");
        }
    }

    proptest! {
        #[test]
        fn first_order_frequency_ignores_lambda(
            w in 0.2..3.0f64, mu in 0.0..5.0f64, a in 0.1..3.0f64,
            lambda2 in prop::sample::select(vec![0.0, 0.3, 0.75, 2.0]),
        ) {
            let p = OscillatorParams::new(w, mu, a).unwrap();
            let got = omega2_at(&p, lambda2, 1).unwrap();
            let want = w * w + 0.75 * a * a * mu;
            prop_assert!((got - want).abs() <= 1e-15 * want.max(1.0) * 4.0);
        }

        #[test]
        fn boundary_conditions_hold(
            w in 0.2..3.0f64, mu in -2.0..5.0f64, frac in 0.05..0.95f64, lambda2 in 0.0..4.0f64,
        ) {
            let a = match mu < 0.0 { true => frac * w / (-mu).sqrt(), false => 3.0 * frac };
            let p = OscillatorParams::new(w, mu, a).unwrap();
            let e = trajectory(&p, lambda2, 3).unwrap();
            prop_assert_eq!(e.orders[0].at_zero(), a);
            for k in 1..=3 {
                let scale: f64 = e.orders[k].coeffs.iter().map(|c| c.abs()).sum::<f64>() + f64::MIN_POSITIVE;
                prop_assert!(e.orders[k].at_zero().abs() <= 1e-14 * scale);
            }
            for series in &e.orders {
                prop_assert_eq!(series.d_dtau(0.0), 0.0);
            }
        }
    }
}
