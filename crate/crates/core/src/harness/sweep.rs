use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::duffing::{self, OscillatorParams};
use crate::error::{Error, Result};
use crate::oracle::{self, System};
use crate::pendulum::{self, PendulumParams};
use crate::result::Method;
use crate::specfun::QuadratureConfig;

use super::table::ResultTable;

/// RK4 samples per (estimated) period when a sweep asks for `rk`.
const RK_STEPS_PER_PERIOD: f64 = 4000.0;
/// Integration window in periods; two upward velocity crossings need > 1.5.
const RK_WINDOW_PERIODS: f64 = 2.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Amplitude,
    Mu,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Amplitude => "amplitude",
            SweepVariable::Mu => "mu",
        }
    }
}

impl FromStr for SweepVariable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "amplitude" | "a" => Ok(Self::Amplitude),
            "mu" => Ok(Self::Mu),
            _ => Err(Error::domain(format!("unknown sweep variable {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepMethod {
    Lp1,
    Lp3,
    Lplde,
    Exact,
    Rk,
}

impl SweepMethod {
    pub fn name(self) -> &'static str {
        match self {
            SweepMethod::Lp1 => "lp1",
            SweepMethod::Lp3 => "lp3",
            SweepMethod::Lplde => "lplde",
            SweepMethod::Exact => "exact",
            SweepMethod::Rk => "rk",
        }
    }
}

impl fmt::Display for SweepMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lp1" => Ok(Self::Lp1),
            "lp3" => Ok(Self::Lp3),
            "lplde" => Ok(Self::Lplde),
            "exact" => Ok(Self::Exact),
            "rk" => Ok(Self::Rk),
            other => Err(Error::domain(format!("unknown method {other:?}"))),
        }
    }
}

/// Parameters held fixed during a sweep; the swept field is overwritten.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedParams {
    Duffing(OscillatorParams),
    Pendulum(PendulumParams),
}

impl FixedParams {
    pub fn system_name(&self) -> &'static str {
        match self {
            FixedParams::Duffing(_) => "duffing",
            FixedParams::Pendulum(_) => "pendulum",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub fixed: FixedParams,
    pub methods: Vec<SweepMethod>,
    /// Add `T = 2π/√Ω²` columns.
    pub period: bool,
    /// Add `|T − T_exact|/T_exact` columns for every non-exact method.
    pub errors: bool,
    pub quadrature: QuadratureConfig,
}

impl SweepSpec {
    pub fn new(
        fixed: FixedParams,
        variable: SweepVariable,
        start: f64,
        stop: f64,
        steps: usize,
    ) -> Self {
        Self {
            variable,
            start,
            stop,
            steps,
            fixed,
            methods: vec![SweepMethod::Lplde, SweepMethod::Exact],
            period: false,
            errors: false,
            quadrature: QuadratureConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::domain(format!(
                "steps must be at least 2, got {}",
                self.steps
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::domain(format!(
                "need finite start < stop, got {} and {}",
                self.start, self.stop
            )));
        }
        if self.methods.is_empty() {
            return Err(Error::domain("no methods requested"));
        }
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(m) {
                return Err(Error::domain(format!("method {m} listed twice")));
            }
        }
        if matches!(self.fixed, FixedParams::Pendulum(_)) && self.variable == SweepVariable::Mu {
            return Err(Error::domain("the pendulum has no mu to sweep"));
        }
        self.quadrature.validate()
    }

    /// Sweep abscissae `(start·(n − i) + stop·i)/n`, `n = steps − 1`; the
    /// form is exactly antisymmetric when `start = −stop`.
    pub fn points(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| match i {
                0 => self.start,
                i if i == last => self.stop,
                i => (self.start * (last - i) as f64 + self.stop * i as f64) / last as f64,
            })
            .collect()
    }

    pub fn header(&self) -> Vec<String> {
        let mut header = vec![self.variable.name().to_owned()];
        for m in &self.methods {
            header.push(format!("{m}_omega2"));
            if self.period {
                header.push(format!("{m}_period"));
            }
            if self.errors && *m != SweepMethod::Exact {
                header.push(format!("{m}_relerr"));
            }
        }
        header
    }

    /// The system at one sweep point. Amplitudes enter through `|A|`:
    /// both oscillators are symmetric under `A → −A`.
    fn at(&self, value: f64) -> FixedParams {
        match (self.fixed, self.variable) {
            (FixedParams::Duffing(p), SweepVariable::Amplitude) => {
                FixedParams::Duffing(OscillatorParams {
                    amplitude: value.abs(),
                    ..p
                })
            }
            (FixedParams::Duffing(p), SweepVariable::Mu) => {
                FixedParams::Duffing(OscillatorParams { mu: value, ..p })
            }
            (FixedParams::Pendulum(p), _) => FixedParams::Pendulum(PendulumParams {
                amplitude: value.abs(),
                ..p
            }),
        }
    }
}

fn period_of(omega2: f64) -> f64 {
    if omega2 > 0.0 {
        2.0 * PI / omega2.sqrt()
    } else {
        f64::NAN
    }
}

fn exact_omega2(system: &FixedParams, cfg: &QuadratureConfig) -> Result<f64> {
    match system {
        FixedParams::Duffing(p) => Ok(oracle::duffing_exact_omega2(p, cfg)?.omega2),
        FixedParams::Pendulum(p) => {
            p.validate()?;
            Ok(oracle::pendulum_exact_omega2(p.omega, p.amplitude)?.omega2)
        }
    }
}

fn lplde_omega2(system: &FixedParams) -> Result<f64> {
    match system {
        FixedParams::Duffing(p) => Ok(duffing::omega2(p, Method::Lplde)?.omega2),
        FixedParams::Pendulum(p) => Ok(pendulum::omega2_lplde(p)?.omega2),
    }
}

/// Squared frequency from an RK4 run, with the step chosen from the best
/// available period estimate.
pub fn rk_omega2(system: &FixedParams, cfg: &QuadratureConfig) -> Result<f64> {
    let (sys, natural) = match system {
        FixedParams::Duffing(p) => (System::Duffing(*p), p.omega),
        FixedParams::Pendulum(p) => (System::Pendulum(*p), p.omega),
    };
    let guess = exact_omega2(system, cfg)
        .or_else(|_| lplde_omega2(system))
        .map(period_of)
        .unwrap_or(2.0 * PI / natural);
    let traj = oracle::integrate(&sys, RK_WINDOW_PERIODS * guess, guess / RK_STEPS_PER_PERIOD)?;
    Ok(crate::result::omega2_from_period(
        oracle::period_from_trajectory(&traj)?,
    ))
}

/// `Ω²` of one method at one parameter point.
pub fn evaluate(system: &FixedParams, method: SweepMethod, cfg: &QuadratureConfig) -> Result<f64> {
    match (method, system) {
        (SweepMethod::Exact, _) => exact_omega2(system, cfg),
        (SweepMethod::Lplde, _) => lplde_omega2(system),
        (SweepMethod::Rk, _) => rk_omega2(system, cfg),
        (SweepMethod::Lp1 | SweepMethod::Lp3, FixedParams::Duffing(p)) => {
            let order = if method == SweepMethod::Lp1 { 1 } else { 3 };
            Ok(duffing::omega2(p, Method::Lp(order))?.omega2)
        }
        (SweepMethod::Lp1 | SweepMethod::Lp3, FixedParams::Pendulum(p)) => {
            let order = if method == SweepMethod::Lp1 { 1 } else { 3 };
            Ok(pendulum::omega2_lp_baseline(p, order)?.omega2)
        }
    }
}

fn row(spec: &SweepSpec, value: f64) -> Vec<f64> {
    let system = spec.at(value);
    let cfg = &spec.quadrature;
    let omega2s: Vec<f64> = spec
        .methods
        .iter()
        .map(|&m| evaluate(&system, m, cfg).unwrap_or(f64::NAN))
        .collect();
    let exact_period = if spec.errors {
        let known = spec
            .methods
            .iter()
            .position(|&m| m == SweepMethod::Exact)
            .map(|i| omega2s[i]);
        period_of(known.unwrap_or_else(|| exact_omega2(&system, cfg).unwrap_or(f64::NAN)))
    } else {
        f64::NAN
    };

    let mut out = vec![value];
    for (&m, &w2) in spec.methods.iter().zip(&omega2s) {
        out.push(w2);
        let t = period_of(w2);
        if spec.period {
            out.push(t);
        }
        if spec.errors && m != SweepMethod::Exact {
            out.push((t - exact_period).abs() / exact_period);
        }
    }
    out
}

/// Evaluates every requested method at every sweep point.
///
/// Points run in parallel; rows come back in sweep order. A method that
/// fails at a point (outside its domain, divergent period, …) leaves
/// `NaN` in its columns instead of aborting the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<ResultTable> {
    spec.validate()?;
    let rows: Vec<Vec<f64>> = spec.points().par_iter().map(|&v| row(spec, v)).collect();

    let methods: Vec<&str> = spec.methods.iter().map(|m| m.name()).collect();
    let mut table = ResultTable::new(spec.header())
        .with_meta("version", env!("CARGO_PKG_VERSION"))
        .with_meta("system", spec.fixed.system_name())
        .with_meta("variable", spec.variable.name())
        .with_meta("methods", methods.join(" "))
        .with_meta("rel_tol", format!("{:e}", spec.quadrature.rel_tol))
        .with_meta("abs_tol", format!("{:e}", spec.quadrature.abs_tol))
        .with_meta("max_refinements", spec.quadrature.max_refinements)
        .with_meta("timestamp", unix_timestamp());
    table = match spec.fixed {
        FixedParams::Duffing(p) => table
            .with_meta("omega", p.omega)
            .with_meta("mu", p.mu)
            .with_meta("amplitude", p.amplitude),
        FixedParams::Pendulum(p) => table
            .with_meta("omega", p.omega)
            .with_meta("j_max", p.j_max),
    };
    for r in rows {
        table.push(r);
    }
    Ok(table)
}

fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
