use std::f64::consts::PI;

use crate::duffing::{self, HarmonicSeries};
use crate::error::{Error, Result};
use crate::oracle::{self, System};
use crate::pendulum::{self, PendulumTables};
use crate::result::Method;

use super::sweep::FixedParams;
use super::table::ResultTable;

/// RK4 solution next to the third-order LPLDE series on a common time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryComparison {
    pub table: ResultTable,
    /// `2π/Ω` of the series.
    pub period: f64,
    /// `max |x_rk − x_series|` over each successive period.
    pub max_error_per_period: Vec<f64>,
    /// Same, with the series run at the RK frequency. The frequency error
    /// alone makes the raw deviation drift linearly in phase; what is left
    /// here is the waveform error, which must not grow.
    pub aligned_error_per_period: Vec<f64>,
    /// Period measured on the RK trajectory.
    pub rk_period: f64,
}

enum Series {
    Duffing(duffing::PerturbationExpansion),
    Pendulum {
        amplitude: f64,
        theta1: HarmonicSeries,
        theta2: HarmonicSeries,
    },
}

impl Series {
    fn at_tau(&self, tau: f64) -> f64 {
        match self {
            Series::Duffing(e) => e.displacement(tau),
            Series::Pendulum {
                amplitude,
                theta1,
                theta2,
            } => amplitude * tau.cos() + theta1.value(tau) + theta2.value(tau),
        }
    }
}

fn lplde_series(system: &FixedParams) -> Result<(Series, f64)> {
    match system {
        FixedParams::Duffing(p) => {
            let res = duffing::omega2(p, Method::Lplde)?;
            let lambda2 = res.lambda2_used.unwrap_or(0.0);
            Ok((
                Series::Duffing(duffing::trajectory(p, lambda2, duffing::MAX_ORDER)?),
                res.omega2,
            ))
        }
        FixedParams::Pendulum(p) => {
            let tables = PendulumTables::build(p)?;
            let res = pendulum::omega2_from_tables(&tables)?;
            let lambda2 = res.lambda2_used.unwrap_or(1.0);
            let (theta1, theta2) = tables.theta_series(lambda2);
            Ok((
                Series::Pendulum {
                    amplitude: p.amplitude,
                    theta1,
                    theta2,
                },
                res.omega2,
            ))
        }
    }
}

/// Integrates `periods` series periods with step `dt` and samples both
/// solutions `samples_per_period` times per period.
pub fn compare_trajectory(
    system: &FixedParams,
    periods: usize,
    samples_per_period: usize,
    dt: f64,
) -> Result<TrajectoryComparison> {
    if periods == 0 || samples_per_period == 0 {
        return Err(Error::domain(
            "periods and samples per period must be positive",
        ));
    }
    let (series, omega2) = lplde_series(system)?;
    let omega = omega2.sqrt();
    let period = 2.0 * PI / omega;
    let sys = match system {
        FixedParams::Duffing(p) => System::Duffing(*p),
        FixedParams::Pendulum(p) => System::Pendulum(*p),
    };
    let t_end = period * periods as f64;
    let traj = oracle::integrate(&sys, t_end, dt)?;
    let rk_period = oracle::period_from_trajectory(&traj)?;
    let rk_omega = 2.0 * PI / rk_period;

    let mut table = ResultTable::new(vec![
        "t".into(),
        "rk_x".into(),
        "lplde_x".into(),
        "abs_diff".into(),
        "aligned_diff".into(),
    ])
    .with_meta("version", env!("CARGO_PKG_VERSION"))
    .with_meta("system", system.system_name())
    .with_meta("dt", dt)
    .with_meta("omega2_lplde", omega2);

    let mut worst = vec![0.0f64; periods];
    let mut aligned = vec![0.0f64; periods];
    let total = periods * samples_per_period;
    for i in 0..=total {
        let t = if i == total {
            t_end
        } else {
            t_end * i as f64 / total as f64
        };
        let rk = traj
            .position_at(t)
            .ok_or_else(|| Error::domain(format!("t = {t} outside the integrated window")))?;
        let approx = series.at_tau(omega * t);
        let diff = (rk - approx).abs();
        let shape = (rk - series.at_tau(rk_omega * t)).abs();
        let bucket = (i / samples_per_period).min(periods - 1);
        worst[bucket] = worst[bucket].max(diff);
        aligned[bucket] = aligned[bucket].max(shape);
        table.push(vec![t, rk, approx, diff, shape]);
    }

    Ok(TrajectoryComparison {
        table,
        period,
        max_error_per_period: worst,
        aligned_error_per_period: aligned,
        rk_period,
    })
}
