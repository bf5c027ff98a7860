use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

/// How a squared frequency was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Plain Lindstedt–Poincaré (λ = 0) truncated at the given order.
    Lp(u8),
    /// Third-order LPLDE with λ fixed by minimal sensitivity.
    Lplde,
    /// Exact reference (quadrature or elliptic integral).
    Exact,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Lp(n) => write!(f, "lp{n}"),
            Method::Lplde => f.write_str("lplde"),
            Method::Exact => f.write_str("exact"),
        }
    }
}

/// Squared angular frequency Ω² of a periodic orbit plus the bookkeeping
/// needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyResult {
    pub omega2: f64,
    pub method: Method,
    pub lambda2_used: Option<f64>,
    pub diagnostics: BTreeMap<String, f64>,
}

impl FrequencyResult {
    pub fn new(omega2: f64, method: Method, lambda2_used: Option<f64>) -> Self {
        Self {
            omega2,
            method,
            lambda2_used,
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn with_diagnostic(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_owned(), value);
        self
    }

    /// Ω = √Ω².
    pub fn omega(&self) -> f64 {
        self.omega2.sqrt()
    }

    /// T = 2π/Ω.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega()
    }
}

/// Ω² corresponding to a period `T`.
pub fn omega2_from_period(period: f64) -> f64 {
    let omega = 2.0 * PI / period;
    omega * omega
}
