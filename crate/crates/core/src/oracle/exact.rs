use std::f64::consts::{FRAC_PI_2, PI};

use crate::duffing::OscillatorParams;
use crate::error::{Error, Result};
use crate::result::{omega2_from_period, FrequencyResult, Method};
use crate::specfun::{elliptic_k, integrate_smooth, QuadratureConfig};

/// Fraction of the separatrix amplitude beyond which the Duffing period is
/// reported as divergent.
pub const SEPARATRIX_GUARD: f64 = 0.999_999;

fn check_duffing(params: &OscillatorParams) -> Result<()> {
    if let Some(edge) = params.separatrix_amplitude() {
        if params.amplitude > SEPARATRIX_GUARD * edge {
            return Err(Error::DivergentPeriod(format!(
                "amplitude {} at or beyond the separatrix {edge}",
                params.amplitude
            )));
        }
    }
    params.validate()
}

/// Exact Duffing period `T = 2 ∫_{−A}^{A} dx / √(2(E − V(x)))` with
/// `V(x) = ω²x²/2 + μx⁴/4` and `E = V(A)`.
///
/// Evaluated as four quarter periods. With `x = A sin φ` the turning point
/// cancels against the Jacobian and the quarter period becomes
/// `∫₀^{π/2} dφ / √(ω² + μA²(1 + sin²φ)/2)`, smooth on the closed interval.
pub fn duffing_exact_period(params: &OscillatorParams, cfg: &QuadratureConfig) -> Result<f64> {
    check_duffing(params)?;
    let w2 = params.omega * params.omega;
    let s = params.coupling_strength();
    let integrand = |phi: f64| 1.0 / (w2 + 0.5 * s * (1.0 + phi.sin().powi(2))).sqrt();
    Ok(4.0 * integrate_smooth(integrand, 0.0, FRAC_PI_2, cfg)?)
}

/// Closed-form Duffing period through the complete elliptic integral,
/// `T = 4K(m)/√(ω² + μA²)` with `m = μA²/(2(ω² + μA²))`.
///
/// For `μ < 0` the parameter is negative and
/// `K(m) = K(−m/(1 − m))/√(1 − m)` brings it back into `[0, 1)`.
pub fn duffing_period_agm(params: &OscillatorParams) -> Result<f64> {
    check_duffing(params)?;
    let s = params.coupling_strength();
    let stiff = params.omega * params.omega + s;
    let m = s / (2.0 * stiff);
    let k = if m >= 0.0 {
        elliptic_k(m)?
    } else {
        elliptic_k(-m / (1.0 - m))? / (1.0 - m).sqrt()
    };
    Ok(4.0 * k / stiff.sqrt())
}

pub fn duffing_exact_omega2(
    params: &OscillatorParams,
    cfg: &QuadratureConfig,
) -> Result<FrequencyResult> {
    let period = duffing_exact_period(params, cfg)?;
    Ok(
        FrequencyResult::new(omega2_from_period(period), Method::Exact, None)
            .with_diagnostic("period", period),
    )
}

/// Exact pendulum period `T = (4/ω) K(sin²(A/2))`.
pub fn pendulum_exact_period(omega: f64, amplitude: f64) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::domain(format!(
            "omega must be positive, got {omega}"
        )));
    }
    if !(amplitude > 0.0) {
        return Err(Error::domain(format!(
            "amplitude must be positive, got {amplitude}"
        )));
    }
    if amplitude >= PI {
        return Err(Error::DivergentPeriod(format!(
            "amplitude {amplitude} reaches the inverted equilibrium"
        )));
    }
    let s = (0.5 * amplitude).sin();
    Ok(4.0 * elliptic_k(s * s)? / omega)
}

pub fn pendulum_exact_omega2(omega: f64, amplitude: f64) -> Result<FrequencyResult> {
    let period = pendulum_exact_period(omega, amplitude)?;
    Ok(
        FrequencyResult::new(omega2_from_period(period), Method::Exact, None)
            .with_diagnostic("period", period),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn harmonic_period() {
        let p = OscillatorParams::new(1.0, 0.0, 1.0).unwrap();
        let t = duffing_exact_period(&p, &cfg()).unwrap();
        assert!((t - 2.0 * PI).abs() < 1e-10 * 2.0 * PI);
    }

    #[test]
    fn unit_duffing_period() {
        let p = OscillatorParams::new(1.0, 1.0, 1.0).unwrap();
        let t = duffing_exact_period(&p, &cfg()).unwrap();
        // 4 K(1/4) / √2
        assert!((t - 4.76802202910246).abs() < 1e-9 * t, "{t}");
        assert!((t - 4.768022).abs() < 1e-6);
        let w2 = duffing_exact_omega2(&p, &cfg()).unwrap().omega2;
        assert!((w2 - 1.7365337573960282).abs() < 1e-9 * w2);
    }

    #[test]
    fn near_separatrix() {
        let small =
            duffing_exact_period(&OscillatorParams::new(1.0, -1.0, 1e-3).unwrap(), &cfg()).unwrap();
        let p = OscillatorParams::new(1.0, -1.0, 0.999999).unwrap();
        let t = duffing_exact_period(&p, &cfg()).unwrap();
        assert!((t - 42.99719879234681).abs() < 1e-8 * t, "{t}");
        assert!(t > 6.0 * small);
        let beyond = OscillatorParams {
            omega: 1.0,
            mu: -1.0,
            amplitude: 1.0,
        };
        assert!(matches!(
            duffing_exact_period(&beyond, &cfg()),
            Err(Error::DivergentPeriod(_))
        ));
    }

    #[test]
    fn quadrature_matches_agm() {
        for mu in [0.1, 1.0, 10.0, -0.5] {
            for a in [0.5, 1.0, 2.0] {
                let Ok(p) = OscillatorParams::new(1.0, mu, a) else {
                    continue;
                };
                let q = duffing_exact_period(&p, &cfg()).unwrap();
                let e = duffing_period_agm(&p).unwrap();
                assert!((q - e).abs() <= 1e-9 * e, "mu={mu} A={a}: {q} vs {e}");
            }
        }
    }

    #[test]
    fn pendulum_reference() {
        let t = pendulum_exact_period(1.0, 1e-9).unwrap();
        assert!((t - 2.0 * PI).abs() < 1e-12);
        let t = pendulum_exact_period(1.0, PI / 2.0).unwrap();
        assert!((t - 7.4162987092054875).abs() < 1e-12 * t);
        assert!(matches!(
            pendulum_exact_period(1.0, PI),
            Err(Error::DivergentPeriod(_))
        ));
        assert!(matches!(
            pendulum_exact_period(1.0, 0.0),
            Err(Error::Domain(_))
        ));
        let scaled = pendulum_exact_period(2.0, 1.0).unwrap() * 2.0;
        assert!((scaled - pendulum_exact_period(1.0, 1.0).unwrap()).abs() < 1e-14);
    }
}
