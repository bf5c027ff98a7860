use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use lplde::duffing::{self, OscillatorParams};
use lplde::harness::{self, FixedParams, ResultTable, SweepMethod, SweepSpec, SweepVariable};
use lplde::pendulum::{self, PendulumParams, DEFAULT_J_MAX};
use lplde::result::Method;
use lplde::specfun::QuadratureConfig;

/// Exit code for malformed arguments (matches clap's usage errors).
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "lplde",
    version,
    about = "LP + linear delta expansion for the Duffing oscillator and the pendulum"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    Duffing,
    Pendulum,
}

#[derive(Clone, Copy, ValueEnum)]
enum VarArg {
    Amplitude,
    Mu,
}

#[derive(clap::Args)]
struct Tolerances {
    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,
    #[arg(long, default_value_t = 30)]
    max_refinements: u32,
}

impl Tolerances {
    fn config(&self) -> lplde::Result<QuadratureConfig> {
        QuadratureConfig::new(self.rel_tol, self.abs_tol, self.max_refinements)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Squared frequency and period of the Duffing oscillator at one point.
    DuffingFreq {
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, allow_negative_numbers = true)]
        amplitude: f64,
        /// lp1, lp3, lplde, exact or rk.
        #[arg(long, default_value = "lplde")]
        method: String,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Squared frequency and period of the pendulum at one point.
    PendulumPeriod {
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long, allow_negative_numbers = true)]
        amplitude: f64,
        #[arg(long, default_value = "lplde")]
        method: String,
        /// Series truncation (overrides LPLDE_JMAX).
        #[arg(long)]
        jmax: Option<usize>,
    },
    /// Parameter sweep written as CSV.
    Sweep {
        #[arg(long, value_enum)]
        system: SystemArg,
        #[arg(long = "var", value_enum, default_value = "amplitude")]
        variable: VarArg,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        /// Comma-separated subset of lp1, lp3, lplde, exact, rk.
        #[arg(long, default_value = "lp3,lplde,exact")]
        methods: String,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        mu: f64,
        /// Fixed amplitude when sweeping mu.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        amplitude: f64,
        #[arg(long)]
        jmax: Option<usize>,
        /// Add period columns.
        #[arg(long)]
        period: bool,
        /// Add relative period error columns against the exact period.
        #[arg(long)]
        errors: bool,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// RK4 trajectory next to the third-order LPLDE series, as CSV.
    Trajectory {
        #[arg(long, value_enum, default_value = "duffing")]
        system: SystemArg,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, allow_negative_numbers = true)]
        amplitude: f64,
        #[arg(long, default_value_t = 3)]
        periods: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long)]
        jmax: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the invariant suite; nonzero exit on any failure.
    Selfcheck,
    /// Both closed forms of the Duffing LPLDE frequency (69A⁴μ² and 64A⁴μ²) against the exact value.
    ErratumTable {
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, value_delimiter = ',', default_values_t = harness::erratum::DEFAULT_AMPLITUDES)]
        amplitudes: Vec<f64>,
        /// Markdown instead of CSV.
        #[arg(long)]
        markdown: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// An argument problem found after clap parsing (exit 2).
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn resolve_jmax(flag: Option<usize>) -> Result<usize> {
    if let Some(j) = flag {
        return Ok(j);
    }
    match std::env::var("LPLDE_JMAX") {
        Ok(v) => v.trim().parse().map_err(|_| {
            usage(format!(
                "LPLDE_JMAX must be a non-negative integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_J_MAX),
    }
}

fn parse_method(s: &str) -> Result<SweepMethod> {
    s.parse().map_err(|e: lplde::Error| usage(e.to_string()))
}

fn parse_methods(list: &str) -> Result<Vec<SweepMethod>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_method)
        .collect()
}

fn output(out: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_table(table: &ResultTable, out: Option<&PathBuf>) -> Result<()> {
    table.write_csv(output(out)?).context("writing CSV")
}

fn print_point(system: &FixedParams, method: SweepMethod, cfg: &QuadratureConfig) -> Result<()> {
    let omega2 = harness::evaluate(system, method, cfg)?;
    let mut out = io::stdout().lock();
    writeln!(out, "method = {method}")?;
    writeln!(out, "omega2 = {omega2:.16e}")?;
    writeln!(
        out,
        "period = {:.16e}",
        2.0 * std::f64::consts::PI / omega2.sqrt()
    )?;
    if method == SweepMethod::Lplde {
        let diagnostics = match system {
            FixedParams::Duffing(p) => duffing::omega2(p, Method::Lplde)?.diagnostics,
            FixedParams::Pendulum(p) => pendulum::omega2_lplde(p)?.diagnostics,
        };
        for (k, v) in diagnostics {
            writeln!(out, "{k} = {v:.16e}")?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::DuffingFreq {
            omega,
            mu,
            amplitude,
            method,
            tol,
        } => {
            let method = parse_method(&method)?;
            let p = OscillatorParams::new(omega, mu, amplitude)?;
            print_point(&FixedParams::Duffing(p), method, &tol.config()?)
        }
        Command::PendulumPeriod {
            omega,
            amplitude,
            method,
            jmax,
        } => {
            let method = parse_method(&method)?;
            let p = PendulumParams::new(omega, amplitude, resolve_jmax(jmax)?)?;
            print_point(
                &FixedParams::Pendulum(p),
                method,
                &QuadratureConfig::default(),
            )
        }
        Command::Sweep {
            system,
            variable,
            from,
            to,
            steps,
            methods,
            omega,
            mu,
            amplitude,
            jmax,
            period,
            errors,
            out,
            tol,
        } => {
            let fixed = match system {
                SystemArg::Duffing => FixedParams::Duffing(OscillatorParams {
                    omega,
                    mu,
                    amplitude,
                }),
                SystemArg::Pendulum => FixedParams::Pendulum(PendulumParams {
                    omega,
                    amplitude,
                    j_max: resolve_jmax(jmax)?,
                }),
            };
            let variable = match variable {
                VarArg::Amplitude => SweepVariable::Amplitude,
                VarArg::Mu => SweepVariable::Mu,
            };
            let mut spec = SweepSpec::new(fixed, variable, from, to, steps);
            spec.methods = parse_methods(&methods)?;
            spec.period = period;
            spec.errors = errors;
            spec.quadrature = tol.config()?;
            spec.validate().map_err(|e| usage(e.to_string()))?;
            write_table(&harness::run_sweep(&spec)?, out.as_ref())
        }
        Command::Trajectory {
            system,
            omega,
            mu,
            amplitude,
            periods,
            samples,
            dt,
            jmax,
            out,
        } => {
            let fixed = match system {
                SystemArg::Duffing => {
                    FixedParams::Duffing(OscillatorParams::new(omega, mu, amplitude)?)
                }
                SystemArg::Pendulum => FixedParams::Pendulum(PendulumParams::new(
                    omega,
                    amplitude,
                    resolve_jmax(jmax)?,
                )?),
            };
            let cmp = harness::compare_trajectory(&fixed, periods, samples, dt)?;
            write_table(&cmp.table, out.as_ref())
        }
        Command::Selfcheck => {
            let outcomes = harness::run_selfcheck();
            let mut out = io::stdout().lock();
            for o in &outcomes {
                writeln!(out, "{}", o.line())?;
            }
            let failed = outcomes.iter().filter(|o| !o.passed()).count();
            if failed > 0 {
                anyhow::bail!(lplde::Error::Consistency(format!(
                    "{failed} self-check(s) failed"
                )));
            }
            writeln!(out, "all {} checks passed", outcomes.len())?;
            Ok(())
        }
        Command::ErratumTable {
            omega,
            mu,
            amplitudes,
            markdown,
            out,
        } => {
            let cfg = QuadratureConfig::default();
            if markdown {
                let rows = harness::erratum_rows(omega, mu, &amplitudes, &cfg)?;
                output(out.as_ref())?.write_all(harness::erratum_markdown(&rows).as_bytes())?;
                Ok(())
            } else {
                write_table(
                    &harness::erratum_table(omega, mu, &amplitudes, &cfg)?,
                    out.as_ref(),
                )
            }
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<lplde::Error>() {
        Some(e) => e.exit_code() as u8,
        None => 1,
    }
}

/// A closed downstream pipe (`lplde … | head`) is not a failure.
fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain()
        .filter_map(|e| e.downcast_ref::<io::Error>())
        .any(|e| e.kind() == io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) if is_broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
