//! Classical fourth-order Runge–Kutta with a fixed step, and period
//! extraction from velocity zero crossings.

use crate::duffing::OscillatorParams;
use crate::error::{Error, Result};
use crate::pendulum::PendulumParams;

pub const DEFAULT_MAX_STEPS: u64 = 50_000_000;

/// A conservative one-degree-of-freedom oscillator started from rest at
/// its amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum System {
    Duffing(OscillatorParams),
    Pendulum(PendulumParams),
}

impl System {
    pub fn amplitude(&self) -> f64 {
        match self {
            System::Duffing(p) => p.amplitude,
            System::Pendulum(p) => p.amplitude,
        }
    }

    pub fn acceleration(&self, x: f64) -> f64 {
        match self {
            System::Duffing(p) => -p.omega * p.omega * x - p.mu * x * x * x,
            System::Pendulum(p) => -p.omega * p.omega * x.sin(),
        }
    }

    pub fn potential(&self, x: f64) -> f64 {
        match self {
            System::Duffing(p) => 0.5 * p.omega * p.omega * x * x + 0.25 * p.mu * x.powi(4),
            System::Pendulum(p) => p.omega * p.omega * (1.0 - x.cos()),
        }
    }

    pub fn energy(&self, x: f64, v: f64) -> f64 {
        0.5 * v * v + self.potential(x)
    }

    fn validate(&self) -> Result<()> {
        match self {
            System::Duffing(p) => p.validate(),
            System::Pendulum(p) => p.validate(),
        }
    }
}

/// Sampled solution of a [`System`] on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub system: System,
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    pub velocities: Vec<f64>,
    /// Total energy of the initial condition.
    pub energy: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn energy_at(&self, i: usize) -> f64 {
        self.system.energy(self.positions[i], self.velocities[i])
    }

    /// `max_t |E(t) − E(0)| / |E(0)|`.
    pub fn max_relative_energy_drift(&self) -> f64 {
        (0..self.len())
            .map(|i| (self.energy_at(i) - self.energy).abs())
            .fold(0.0, f64::max)
            / self.energy.abs()
    }

    /// Position at time `t` by cubic Hermite interpolation between the
    /// bracketing samples (velocities supply the slopes).
    pub fn position_at(&self, t: f64) -> Option<f64> {
        let (first, last) = (*self.times.first()?, *self.times.last()?);
        if !(first..=last).contains(&t) {
            return None;
        }
        let i = match self.times.partition_point(|&s| s <= t) {
            0 => 0,
            k if k >= self.len() => self.len() - 2,
            k => k - 1,
        };
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        Some(
            h00 * self.positions[i]
                + h10 * h * self.velocities[i]
                + h01 * self.positions[i + 1]
                + h11 * h * self.velocities[i + 1],
        )
    }
}

/// RK4 from `(A, 0)` up to `t_end` with step close to `dt`.
///
/// The step is shrunk to `t_end / ⌈t_end/dt⌉` so the last sample lands on
/// `t_end` exactly.
pub fn integrate(system: &System, t_end: f64, dt: f64) -> Result<Trajectory> {
    integrate_capped(system, t_end, dt, DEFAULT_MAX_STEPS)
}

pub fn integrate_capped(
    system: &System,
    t_end: f64,
    dt: f64,
    max_steps: u64,
) -> Result<Trajectory> {
    system.validate()?;
    if !(dt > 0.0 && dt.is_finite()) || !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::domain(format!(
            "need dt > 0 and t_end > 0, got dt={dt} t_end={t_end}"
        )));
    }
    let requested = (t_end / dt).ceil();
    if requested > max_steps as f64 {
        return Err(Error::StepBudget {
            requested: requested.min(u64::MAX as f64) as u64,
            cap: max_steps,
        });
    }
    let steps = requested as usize;
    let h = t_end / steps as f64;

    let mut times = Vec::with_capacity(steps + 1);
    let mut positions = Vec::with_capacity(steps + 1);
    let mut velocities = Vec::with_capacity(steps + 1);
    let (mut x, mut v) = (system.amplitude(), 0.0);
    times.push(0.0);
    positions.push(x);
    velocities.push(v);

    for i in 1..=steps {
        let k1x = v;
        let k1v = system.acceleration(x);
        let k2x = v + 0.5 * h * k1v;
        let k2v = system.acceleration(x + 0.5 * h * k1x);
        let k3x = v + 0.5 * h * k2v;
        let k3v = system.acceleration(x + 0.5 * h * k2x);
        let k4x = v + h * k3v;
        let k4v = system.acceleration(x + h * k3x);
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        times.push(if i == steps { t_end } else { i as f64 * h });
        positions.push(x);
        velocities.push(v);
    }

    let energy = system.energy(system.amplitude(), 0.0);
    Ok(Trajectory {
        system: *system,
        times,
        positions,
        velocities,
        energy,
    })
}

/// Period from successive negative-to-positive velocity crossings, each
/// located by linear interpolation between samples.
pub fn period_from_trajectory(traj: &Trajectory) -> Result<f64> {
    let crossings: Vec<f64> = traj
        .velocities
        .windows(2)
        .zip(traj.times.windows(2))
        .filter(|(v, _)| v[0] < 0.0 && v[1] >= 0.0)
        .map(|(v, t)| t[0] + (t[1] - t[0]) * (-v[0]) / (v[1] - v[0]))
        .collect();
    match crossings.as_slice() {
        [first, .., last] => Ok((last - first) / (crossings.len() - 1) as f64),
        _ => Err(Error::Estimation(format!(
            "need two upward velocity crossings, found {}",
            crossings.len()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn harmonic_returns_to_start() {
        let sys = System::Duffing(OscillatorParams::new(1.0, 0.0, 1.0).unwrap());
        let traj = integrate(&sys, 2.0 * PI, 1e-3).unwrap();
        assert!((traj.positions.last().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn harmonic_period() {
        let sys = System::Duffing(OscillatorParams::new(1.0, 0.0, 1.0).unwrap());
        let traj = integrate(&sys, 4.0 * PI, 1e-3).unwrap();
        assert!((period_from_trajectory(&traj).unwrap() - 2.0 * PI).abs() < 1e-7);
    }

    #[test]
    fn step_cap() {
        let sys = System::Duffing(OscillatorParams::new(1.0, 0.0, 1.0).unwrap());
        assert!(matches!(
            integrate_capped(&sys, 10.0, 1e-3, 100),
            Err(Error::StepBudget { cap: 100, .. })
        ));
        assert!(integrate(&sys, 1.0, 0.0).is_err());
    }

    #[test]
    fn too_short_for_a_period() {
        let sys = System::Duffing(OscillatorParams::new(1.0, 0.0, 1.0).unwrap());
        let traj = integrate(&sys, 4.0, 1e-3).unwrap();
        assert!(matches!(
            period_from_trajectory(&traj),
            Err(Error::Estimation(_))
        ));
    }

    #[test]
    fn hermite_interpolation_is_accurate() {
        let sys = System::Duffing(OscillatorParams::new(1.0, 0.0, 1.0).unwrap());
        let traj = integrate(&sys, 3.0, 1e-2).unwrap();
        for t in [0.0, 0.123, 1.5555, 2.999, 3.0] {
            assert!(
                (traj.position_at(t).unwrap() - t.cos()).abs() < 1e-8,
                "t={t}"
            );
        }
        assert!(traj.position_at(3.5).is_none());
    }
}
