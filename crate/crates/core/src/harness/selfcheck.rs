//! Invariant suite behind `lplde selfcheck`.
//!
//! Every check reduces to a measured quantity and a limit; a check passes
//! when `measured ≤ limit`. Boolean properties count their violations.

use std::f64::consts::PI;

use crate::duffing::{self, OscillatorParams};
use crate::error::Result;
use crate::oracle::{self, projection, System};
use crate::pendulum::{self, PendulumParams, PendulumTables};
use crate::specfun::{bessel_j, elliptic_k, integrate_turning_point, QuadratureConfig};

use super::erratum::{erratum_rows, DEFAULT_AMPLITUDES};
use super::sweep::{run_sweep, FixedParams, SweepMethod, SweepSpec, SweepVariable};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub measured: f64,
    pub limit: f64,
    /// Set when the check could not be evaluated at all.
    pub error: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.measured <= self.limit
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        match &self.error {
            Some(e) => format!("{status} {}: {e}", self.name),
            None => format!(
                "{status} {}: {:.3e} (limit {:.1e})",
                self.name, self.measured, self.limit
            ),
        }
    }
}

type Measure = fn() -> Result<f64>;

/// `(name, limit, measurement)` for every invariant.
pub const CHECKS: &[(&str, f64, Measure)] = &[
    ("bessel_normalization", 1e-12, bessel_normalization),
    ("bessel_recurrence", 1e-11, bessel_recurrence),
    ("bessel_integral_representation", 1e-12, bessel_integral),
    ("elliptic_k_monotone", 0.0, elliptic_monotone),
    ("quadrature_linearity", 1e-9, quadrature_linearity),
    (
        "duffing_order1_lambda_independence",
        1e-15,
        duffing_lambda_independence,
    ),
    ("duffing_pms_stationarity", 1e-6, duffing_pms_stationarity),
    (
        "duffing_boundary_conditions",
        1e-14,
        duffing_boundary_conditions,
    ),
    ("duffing_order3_residual", 1e-8, duffing_residual),
    ("duffing_argmin_consistency", 1.0, duffing_argmin),
    ("duffing_rescaling_invariance", 1e-14, duffing_rescaling),
    ("duffing_erratum_substitution_wins", 0.0, duffing_erratum),
    ("duffing_quadrature_vs_agm", 1e-9, duffing_quadrature_vs_agm),
    ("duffing_period_even_in_amplitude", 0.0, duffing_period_even),
    ("pendulum_jacobi_anger_closure", 1e-10, pendulum_closure),
    ("pendulum_c0_equals_j0", 1e-10, pendulum_c0),
    ("pendulum_alpha3b_equals_alpha2bar", 1e-12, pendulum_alpha3b),
    ("pendulum_pms_stationarity", 1e-6, pendulum_pms_stationarity),
    ("pendulum_truncation_convergence", 1e-6, pendulum_truncation),
    ("pendulum_omega2_decreasing", 0.0, pendulum_monotone),
    ("pendulum_projection_oracle", 1e-8, pendulum_projection),
    ("rk_energy_conservation", 1e-8, rk_energy),
    ("csv_determinism_round_trip", 0.0, csv_determinism),
];

pub fn run_selfcheck() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|&(name, limit, measure)| match measure() {
            Ok(measured) => CheckOutcome {
                name,
                measured,
                limit,
                error: None,
            },
            Err(e) => CheckOutcome {
                name,
                measured: f64::NAN,
                limit,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

fn unit_duffing(a: f64) -> Result<OscillatorParams> {
    OscillatorParams::new(1.0, 1.0, a)
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn bessel_normalization() -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..=20 {
        let x = 0.5 * i as f64;
        let mut total = bessel_j(0, x)?.powi(2);
        for n in 1..=40 {
            total += 2.0 * bessel_j(n, x)?.powi(2);
        }
        worst = worst.max((total - 1.0).abs());
    }
    Ok(worst)
}

fn bessel_recurrence() -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..=19 {
        let x = 0.5 + 0.5 * i as f64;
        for n in 1..=20u32 {
            let lhs = bessel_j(n - 1, x)? + bessel_j(n + 1, x)?;
            let rhs = 2.0 * n as f64 / x * bessel_j(n, x)?;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst)
}

/// `J_n(x) = (1/2π) ∫₀^{2π} cos(nt − x sin t) dt`, trapezoidal (spectrally
/// accurate for a periodic integrand).
fn bessel_integral() -> Result<f64> {
    const POINTS: usize = 512;
    let mut worst = 0.0f64;
    for n in 0..=30u32 {
        for x in [0.1, 1.0, 2.5, 3.0, 3.5, 7.0, 15.0, 25.0] {
            let sum: f64 = (0..POINTS)
                .map(|i| {
                    let t = 2.0 * PI * i as f64 / POINTS as f64;
                    (n as f64 * t - x * t.sin()).cos()
                })
                .sum();
            worst = worst.max((bessel_j(n, x)? - sum / POINTS as f64).abs());
        }
    }
    Ok(worst)
}

fn elliptic_monotone() -> Result<f64> {
    let mut violations = 0;
    let mut prev = elliptic_k(0.0)?;
    for i in 1..1000 {
        let k = elliptic_k(i as f64 / 1000.0)?;
        if k <= prev {
            violations += 1;
        }
        prev = k;
    }
    Ok(violations as f64)
}

fn quadrature_linearity() -> Result<f64> {
    let cfg = QuadratureConfig::default();
    let (a, b) = (-0.3, 1.7);
    let weight = move |x: f64| 1.0 / ((x - a) * (b - x)).sqrt();
    let f = move |x: f64| weight(x) * x.exp();
    let g = move |x: f64| weight(x) * (1.0 + x * x).recip();
    let (alpha, beta) = (2.5, -1.25);
    let combined = integrate_turning_point(|x| alpha * f(x) + beta * g(x), a, b, &cfg)?;
    let separate = alpha * integrate_turning_point(f, a, b, &cfg)?
        + beta * integrate_turning_point(g, a, b, &cfg)?;
    Ok(rel(combined, separate))
}

fn duffing_lambda_independence() -> Result<f64> {
    let mut worst = 0.0f64;
    for &(w, mu, a) in &[(1.0, 1.0, 1.0), (0.7, 3.0, 2.0), (1.5, -0.5, 1.2)] {
        let p = OscillatorParams::new(w, mu, a)?;
        let want = w * w + 0.75 * a * a * mu;
        for l in [0.0, 0.3, 0.75, 2.0] {
            worst = worst.max(rel(duffing::omega2_at(&p, l, 1)?, want));
        }
    }
    Ok(worst)
}

fn duffing_pms_stationarity() -> Result<f64> {
    let mut worst = 0.0f64;
    for &(w, mu, a) in &[
        (1.0, 1.0, 0.5),
        (1.0, 1.0, 1.0),
        (1.0, 1.0, 5.0),
        (2.0, 0.3, 3.0),
    ] {
        let p = OscillatorParams::new(w, mu, a)?;
        let l = duffing::pms_lambda2(&p);
        let h = 1e-5 * (w * w + l);
        let d = (duffing::omega2_at(&p, l + h, 3)? - duffing::omega2_at(&p, l - h, 3)?) / (2.0 * h);
        worst = worst.max(d.abs() / duffing::omega2_at(&p, l, 3)?);
    }
    Ok(worst)
}

fn duffing_boundary_conditions() -> Result<f64> {
    let mut worst = 0.0f64;
    for &(w, mu, a, l) in &[
        (1.0, 1.0, 1.0, 0.75),
        (0.4, 2.0, 2.5, 0.0),
        (1.3, -0.8, 1.0, 1.7),
        (2.0, 7.0, 0.3, 3.0),
    ] {
        let e = duffing::trajectory(&OscillatorParams::new(w, mu, a)?, l, 3)?;
        for series in &e.orders[1..] {
            let scale: f64 = series.coeffs.iter().map(|c| c.abs()).sum();
            worst = worst.max(series.at_zero().abs() / scale);
        }
        for series in &e.orders {
            worst = worst.max(series.d_dtau(0.0).abs());
        }
    }
    Ok(worst)
}

fn duffing_residual() -> Result<f64> {
    let p = unit_duffing(0.1)?;
    let e = duffing::trajectory(&p, duffing::pms_lambda2(&p), 3)?;
    let w2 = e.omega2();
    Ok((0..1024)
        .map(|i| {
            let tau = 2.0 * PI * i as f64 / 1024.0;
            let x = e.displacement(tau);
            (w2 * e.d2_dtau2(tau) + x + x * x * x).abs()
        })
        .fold(0.0, f64::max))
}

/// Grid cells between the best `λ²` on a 101-point grid over `[0, 3A²μ]`
/// and `3A²μ/4`.
fn duffing_argmin() -> Result<f64> {
    let cfg = QuadratureConfig::default();
    let mut worst = 0.0f64;
    for a in [0.5, 1.0, 2.0] {
        let p = unit_duffing(a)?;
        let exact = oracle::duffing_exact_omega2(&p, &cfg)?.omega2;
        let top = 3.0 * p.coupling_strength();
        let cell = top / 100.0;
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..=100 {
            let l = cell * i as f64;
            let err = (duffing::omega2_at(&p, l, 3)? - exact).abs();
            if err < best.0 {
                best = (err, l);
            }
        }
        worst = worst.max((best.1 - duffing::pms_lambda2(&p)).abs() / cell);
    }
    Ok(worst)
}

fn duffing_rescaling() -> Result<f64> {
    let mut worst = 0.0f64;
    for &(mu, a, mu_prime) in &[
        (1.0, 1.0, 4.0),
        (2.0, 0.7, 0.5),
        (0.3, 3.0, 10.0),
        (-1.0, 0.5, -0.25),
    ] {
        let (x, y) = duffing::rescaling_check(&OscillatorParams::new(1.0, mu, a)?, mu_prime)?;
        worst = worst.max(rel(y.omega2, x.omega2));
    }
    Ok(worst)
}

fn duffing_erratum() -> Result<f64> {
    let rows = erratum_rows(1.0, 1.0, &DEFAULT_AMPLITUDES, &QuadratureConfig::default())?;
    Ok(rows
        .iter()
        .filter(|r| r.substitution_error() >= r.printed_error())
        .count() as f64)
}

fn duffing_quadrature_vs_agm() -> Result<f64> {
    let cfg = QuadratureConfig::default();
    let mut worst = 0.0f64;
    for mu in [0.1, 1.0, 10.0] {
        for a in [0.5, 1.0, 2.0] {
            let p = OscillatorParams::new(1.0, mu, a)?;
            worst = worst.max(rel(
                oracle::duffing_exact_period(&p, &cfg)?,
                oracle::duffing_period_agm(&p)?,
            ));
        }
    }
    Ok(worst)
}

/// Mismatches between mirrored rows of an exact-period sweep over `[−2, 2]`.
fn duffing_period_even() -> Result<f64> {
    let mut spec = SweepSpec::new(
        FixedParams::Duffing(unit_duffing(1.0)?),
        SweepVariable::Amplitude,
        -2.0,
        2.0,
        9,
    );
    spec.methods = vec![SweepMethod::Exact];
    spec.period = true;
    let t = run_sweep(&spec)?;
    let periods = t.column("exact_period").unwrap_or_default();
    let n = periods.len();
    Ok((0..n / 2)
        .filter(|&i| periods[i] != periods[n - 1 - i])
        .count() as f64)
}

fn pendulum_closure() -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 1..=30 {
        let a = 0.1 * i as f64;
        let p = PendulumParams::new(1.0, a, 12)?;
        let t = pendulum::fourier_tables(&p)?;
        worst = worst
            .max((t.c_odd.iter().sum::<f64>() - a.sin()).abs())
            .max((t.c_even.iter().sum::<f64>() - a.cos()).abs());
    }
    Ok(worst)
}

fn pendulum_c0() -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 1..=30 {
        let a = 0.1 * i as f64;
        let t = pendulum::fourier_tables(&PendulumParams::new(1.0, a, 12)?)?;
        worst = worst.max((t.c_even[0] - bessel_j(0, a)?).abs());
    }
    Ok(worst)
}

fn pendulum_alpha3b() -> Result<f64> {
    let mut worst = 0.0f64;
    for a in [0.1, 0.5, 1.0, 2.0, 2.5, 3.0] {
        let t = PendulumTables::build(&PendulumParams::new(1.0, a, pendulum::DEFAULT_J_MAX)?)?;
        worst = worst.max(rel(t.alpha3b, t.alpha2_bar));
    }
    Ok(worst)
}

fn pendulum_pms_stationarity() -> Result<f64> {
    let mut worst = 0.0f64;
    for a in [0.3, 1.0, 2.0, 2.5] {
        let t = PendulumTables::build(&PendulumParams::new(1.0, a, pendulum::DEFAULT_J_MAX)?)?;
        let l = pendulum::pms_lambda2(&t)?;
        let h = 1e-5 * l;
        let d = (t.omega2_at(l + h) - t.omega2_at(l - h)) / (2.0 * h);
        worst = worst.max((d * l).abs() / t.omega2_at(l));
    }
    Ok(worst)
}

fn pendulum_truncation() -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 1..=25 {
        let a = 0.1 * i as f64;
        let coarse = pendulum::omega2_lplde(&PendulumParams::new(1.0, a, 5)?)?.omega2;
        let fine = pendulum::omega2_lplde(&PendulumParams::new(1.0, a, 8)?)?.omega2;
        worst = worst.max(rel(coarse, fine));
    }
    Ok(worst)
}

fn pendulum_monotone() -> Result<f64> {
    let mut violations = 0;
    let mut prev = f64::INFINITY;
    for i in 1..=250 {
        let w2 = pendulum::omega2_lplde(&PendulumParams::new(1.0, 0.01 * i as f64, 5)?)?.omega2;
        if w2 >= prev {
            violations += 1;
        }
        prev = w2;
    }
    Ok(violations as f64)
}

/// Worst family-normalized deviation between the analytic tables and the
/// grid-projection reference at `A = 1`, `ω = 1`, `j_max = 5`.
pub fn pendulum_projection() -> Result<f64> {
    let p = PendulumParams::new(1.0, 1.0, pendulum::DEFAULT_J_MAX)?;
    let t = PendulumTables::build(&p)?;
    let r = projection::scaled_reference(1.0, 1.0, &projection::ProjectionConfig::default());
    let s3: Vec<f64> = (0..=p.j_max)
        .map(|n| pendulum::s3_source_coefficient(&t, n, 1.0))
        .collect::<Result<_>>()?;
    // the analytic s̄⁽²ᵃ⁾₁ is the fundamental before ᾱ₂A cancels it
    let mut s2a = t.s2a_bar.clone();
    s2a[0] += t.alpha2_bar * p.amplitude;
    let families = [
        projection::family_deviation(&t.d1_bar, &r.d1_bar),
        projection::family_deviation(&s2a, &r.s2a_bar),
        projection::family_deviation(&t.s2b_bar, &r.s2b_bar),
        projection::family_deviation(&t.d2a_bar, &r.d2a_bar),
        projection::family_deviation(&t.d2b_bar, &r.d2b_bar),
        projection::family_deviation(&s3, &r.s3_unit_lambda),
        rel(t.alpha1a, r.alpha1a),
        rel(t.alpha2_bar, r.alpha2_bar),
        rel(t.alpha3a, r.alpha3a),
        rel(t.alpha3b, r.alpha3b),
        r.sine_leak,
    ];
    Ok(families.into_iter().fold(0.0, f64::max))
}

fn rk_energy() -> Result<f64> {
    let duffing = System::Duffing(unit_duffing(1.0)?);
    let pend = System::Pendulum(PendulumParams::new(1.0, 2.0, pendulum::DEFAULT_J_MAX)?);
    let cfg = QuadratureConfig::default();
    let t_duffing = oracle::duffing_exact_period(&unit_duffing(1.0)?, &cfg)?;
    let t_pend = oracle::pendulum_exact_period(1.0, 2.0)?;
    let mut worst = 0.0f64;
    for (sys, period) in [(duffing, t_duffing), (pend, t_pend)] {
        worst =
            worst.max(oracle::integrate(&sys, 10.0 * period, 1e-3)?.max_relative_energy_drift());
    }
    Ok(worst)
}

/// Differences between two identical sweeps (body only) plus values lost
/// in a CSV round trip.
fn csv_determinism() -> Result<f64> {
    let p = PendulumParams::new(1.0, 1.0, pendulum::DEFAULT_J_MAX)?;
    let mut spec = SweepSpec::new(
        FixedParams::Pendulum(p),
        SweepVariable::Amplitude,
        -3.1,
        3.1,
        16,
    );
    spec.methods = vec![SweepMethod::Lp3, SweepMethod::Lplde, SweepMethod::Exact];
    spec.period = true;
    spec.errors = true;
    let first = run_sweep(&spec)?;
    let second = run_sweep(&spec)?;
    let mut bad = usize::from(first.csv_body() != second.csv_body());
    match super::table::ResultTable::from_csv(&first.to_csv()) {
        Ok(back) => {
            for (x, y) in back.rows.iter().flatten().zip(first.rows.iter().flatten()) {
                if x.to_bits() != y.to_bits() && !(x.is_nan() && y.is_nan()) {
                    bad += 1;
                }
            }
        }
        Err(_) => bad += 1,
    }
    Ok(bad as f64)
}

pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(CheckOutcome::passed)
}
