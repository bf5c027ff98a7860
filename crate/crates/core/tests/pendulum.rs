use approx::assert_relative_eq;

use lplde::oracle;
use lplde::pendulum::{self, PendulumParams, PendulumTables, DEFAULT_J_MAX};
use lplde::Error;

fn lplde(a: f64, j_max: usize) -> f64 {
    pendulum::omega2_lplde(&PendulumParams::new(1.0, a, j_max).unwrap())
        .unwrap()
        .omega2
}

#[test]
fn truncation_converges_by_five_terms() {
    for i in 1..=25 {
        let a = 0.1 * i as f64;
        let (coarse, fine) = (lplde(a, 5), lplde(a, 8));
        assert!((coarse - fine).abs() <= 1e-6 * fine, "A={a}");
    }
}

#[test]
fn frequency_decreases_with_amplitude() {
    let values: Vec<f64> = (1..=100)
        .map(|i| lplde(0.025 * i as f64, DEFAULT_J_MAX))
        .collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn error_table_against_elliptic_oracle() {
    // relative period error of the third-order result
    for (a, limit) in [
        (1.0, 3e-7),
        (1.5, 1e-5),
        (2.0, 2e-4),
        (2.5, 3e-3),
        (3.0, 6e-2),
    ] {
        let w2 = lplde(a, DEFAULT_J_MAX);
        let t = 2.0 * std::f64::consts::PI / w2.sqrt();
        let exact = oracle::pendulum_exact_period(1.0, a).unwrap();
        assert!(((t - exact) / exact).abs() <= limit, "A={a}");
    }
}

#[test]
fn unit_amplitude_coefficients() {
    let t = PendulumTables::build(&PendulumParams::new(1.0, 1.0, 5).unwrap()).unwrap();
    assert_relative_eq!(t.alpha2_bar, -5.692674659116218e-4, max_relative = 1e-12);
    assert_relative_eq!(t.alpha3a, 5.012492183794338e-4, max_relative = 1e-12);
    let lambda2 = pendulum::pms_lambda2(&t).unwrap();
    assert_relative_eq!(lambda2, 0.88052, max_relative = 1e-4);
    assert_relative_eq!(lplde(1.0, 5), 0.8794546558727592, max_relative = 1e-13);
}

#[test]
fn small_amplitude_limits() {
    assert!((lplde(1e-6, 5) - 1.0).abs() < 1e-9);
    let exact = oracle::pendulum_exact_omega2(1.0, 0.1).unwrap().omega2;
    assert!((lplde(0.1, 5) - exact).abs() < 1e-5);
    let lam = pendulum::pms_lambda2(
        &PendulumTables::build(&PendulumParams::new(1.0, 1e-3, 5).unwrap()).unwrap(),
    )
    .unwrap();
    assert!(lam.is_finite() && lam > 0.0);
}

#[test]
fn frequency_scales_with_omega() {
    let base = lplde(1.3, 6);
    let scaled = pendulum::omega2_lplde(&PendulumParams::new(2.0, 1.3, 6).unwrap())
        .unwrap()
        .omega2;
    assert_relative_eq!(scaled, 4.0 * base, max_relative = 1e-12);
}

#[test]
fn separatrix_is_rejected() {
    assert!(matches!(
        oracle::pendulum_exact_period(1.0, std::f64::consts::PI),
        Err(Error::DivergentPeriod(_))
    ));
    assert!(matches!(
        PendulumParams::new(1.0, 3.2, 5),
        Err(Error::Domain(_))
    ));
}
