use crate::duffing::{self, OscillatorParams};
use crate::error::Result;
use crate::oracle;
use crate::specfun::QuadratureConfig;

use super::table::ResultTable;

/// Amplitudes used for the default comparison.
pub const DEFAULT_AMPLITUDES: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

/// Both closed forms of the Duffing LPLDE frequency against the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErratumRow {
    pub amplitude: f64,
    pub exact: f64,
    /// `69A⁴μ²` numerator, which is what the third-order sum reduces to.
    pub substitution: f64,
    /// `64A⁴μ²` numerator.
    pub printed: f64,
}

impl ErratumRow {
    pub fn substitution_error(&self) -> f64 {
        ((self.substitution - self.exact) / self.exact).abs()
    }

    pub fn printed_error(&self) -> f64 {
        ((self.printed - self.exact) / self.exact).abs()
    }
}

pub fn erratum_rows(
    omega: f64,
    mu: f64,
    amplitudes: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<ErratumRow>> {
    amplitudes
        .iter()
        .map(|&a| {
            let p = OscillatorParams::new(omega, mu, a)?;
            Ok(ErratumRow {
                amplitude: a,
                exact: oracle::duffing_exact_omega2(&p, cfg)?.omega2,
                substitution: duffing::lplde_closed_form_omega2(&p),
                printed: duffing::lplde_printed_omega2(&p),
            })
        })
        .collect()
}

pub fn erratum_table(
    omega: f64,
    mu: f64,
    amplitudes: &[f64],
    cfg: &QuadratureConfig,
) -> Result<ResultTable> {
    let header = [
        "amplitude",
        "exact_omega2",
        "substitution_omega2",
        "printed_omega2",
        "substitution_relerr",
        "printed_relerr",
    ];
    let mut table = ResultTable::new(header.iter().map(|s| s.to_string()).collect())
        .with_meta("version", env!("CARGO_PKG_VERSION"))
        .with_meta("omega", omega)
        .with_meta("mu", mu)
        .with_meta("rel_tol", format!("{:e}", cfg.rel_tol));
    for r in erratum_rows(omega, mu, amplitudes, cfg)? {
        table.push(vec![
            r.amplitude,
            r.exact,
            r.substitution,
            r.printed,
            r.substitution_error(),
            r.printed_error(),
        ]);
    }
    Ok(table)
}

/// Markdown rendering used in the README.
pub fn erratum_markdown(rows: &[ErratumRow]) -> String {
    let mut out = String::from(
        "| A | exact Ω² | 69A⁴μ² form | rel. error | 64A⁴μ² form | rel. error |\n|---|---|---|---|---|---|\n",
    );
    for r in rows {
        out.push_str(&format!(
            "| {} | {:.10} | {:.10} | {:.2e} | {:.10} | {:.2e} |\n",
            r.amplitude,
            r.exact,
            r.substitution,
            r.substitution_error(),
            r.printed,
            r.printed_error()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_form_wins() {
        let rows =
            erratum_rows(1.0, 1.0, &DEFAULT_AMPLITUDES, &QuadratureConfig::default()).unwrap();
        for r in &rows {
            assert!(r.substitution_error() < r.printed_error(), "{r:?}");
        }
        assert!((rows[1].printed_error() - 1.28e-2).abs() < 1e-4);
        assert!(erratum_markdown(&rows).lines().count() == 6);
    }
}
