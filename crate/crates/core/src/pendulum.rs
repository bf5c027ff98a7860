//! Third-order LPLDE for the nonlinear pendulum `θ̈ + ω² sin θ = 0`.
//!
//! The interpolated equation is
//!
//! ```text
//! Ω² θ'' + λ² θ = δ f(θ),   f(θ) = −ω² sin θ + λ² θ
//! ```
//!
//! expanded around `θ₀ = A cos τ`. Every source term is an odd cosine
//! series built from the Jacobi–Anger coefficients of `sin(A cos τ)` and
//! `cos(A cos τ)`, so all orders reduce to finite sums once the series are
//! truncated at `j_max`.
//!
//! Every λ-dependent quantity is stored in scaled form. With
//! `d⁽¹⁾ = d̄⁽¹⁾/λ²`, `d⁽²⁾ = d̄⁽²ᵃ⁾/λ⁴ + d̄⁽²ᵇ⁾/λ²`, `α₂ = ᾱ₂/λ²` and
//! `α₃ = α₃ₐ/λ⁴ + α₃ᵦ/λ²` the third-order frequency is
//!
//! ```text
//! Ω²(λ) = α₁ₐ + 2ᾱ₂/λ² + α₃ₐ/λ⁴
//! ```
//!
//! and minimal sensitivity gives `λ² = −α₃ₐ/ᾱ₂`, `Ω² = α₁ₐ − ᾱ₂²/α₃ₐ`.

use std::f64::consts::PI;

use crate::duffing::{self, HarmonicSeries, OscillatorParams};
use crate::error::{Error, Result};
use crate::result::{FrequencyResult, Method};
use crate::specfun::bessel_j;

/// Series truncation used when none is given.
pub const DEFAULT_J_MAX: usize = 5;

/// Relative tolerance for the `α₃ᵦ = ᾱ₂` identity.
const ALPHA3B_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendulumParams {
    pub omega: f64,
    pub amplitude: f64,
    pub j_max: usize,
}

impl PendulumParams {
    pub fn new(omega: f64, amplitude: f64, j_max: usize) -> Result<Self> {
        let p = Self {
            omega,
            amplitude,
            j_max,
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
        if !(self.amplitude > 0.0 && self.amplitude < PI) {
            return Err(Error::domain(format!(
                "amplitude must lie in (0, pi), got {}",
                self.amplitude
            )));
        }
        if self.j_max < 2 {
            return Err(Error::domain(format!(
                "j_max must be at least 2, got {}",
                self.j_max
            )));
        }
        Ok(())
    }
}

/// Jacobi–Anger coefficients, indexed `0..=j_max`.
///
/// `sin(A cos τ) = Σ c_odd[j] cos((2j+1)τ)` and
/// `cos(A cos τ) = Σ c_even[j] cos(2jτ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTables {
    pub c_odd: Vec<f64>,
    pub c_even: Vec<f64>,
}

/// First-order data: `θ₁ = Σ (d̄⁽¹⁾_j/λ²) cos((2j+1)τ)` and `α₁ₐ = α₀ + α₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrder {
    pub d1_bar: Vec<f64>,
    pub alpha1a: f64,
}

/// Second-order data, all λ-independent.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrder {
    /// `λ⁻²` part of the source coefficients `s⁽²⁾_{2n+1}`.
    pub s2a_bar: Vec<f64>,
    /// `λ⁰` part of the source coefficients.
    pub s2b_bar: Vec<f64>,
    pub alpha2_bar: f64,
    /// `λ⁻⁴` part of `θ₂`.
    pub d2a_bar: Vec<f64>,
    /// `λ⁻²` part of `θ₂`.
    pub d2b_bar: Vec<f64>,
}

/// Every coefficient table of the expansion. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct PendulumTables {
    pub params: PendulumParams,
    pub c_odd: Vec<f64>,
    pub c_even: Vec<f64>,
    pub d1_bar: Vec<f64>,
    pub alpha1a: f64,
    pub s2a_bar: Vec<f64>,
    pub s2b_bar: Vec<f64>,
    pub alpha2_bar: f64,
    pub d2a_bar: Vec<f64>,
    pub d2b_bar: Vec<f64>,
    pub alpha3a: f64,
    pub alpha3b: f64,
}

/// Value `v[i]`, or zero when `i` lies past the truncation.
#[inline]
fn at(v: &[f64], i: usize) -> f64 {
    v.get(i).copied().unwrap_or(0.0)
}

fn odd2(n: usize) -> f64 {
    let k = (2 * n + 1) as f64;
    k * k
}

/// `4j(j+1)`, i.e. `−(1 − (2j+1)²)`.
fn resonance_gap(j: usize) -> f64 {
    4.0 * (j * (j + 1)) as f64
}

/// Closure `x₀ = −Σ_{j≥1} x_j` enforcing `θ_k(0) = 0`.
fn close_at_origin(v: &mut [f64]) {
    v[0] = -v[1..].iter().sum::<f64>();
}

/// `c_{2j+1} = 2(−1)ʲ J_{2j+1}(A)`, `c̃_{2j} = 2(−1)ʲ J_{2j}(A)` for `j ≥ 1`,
/// and `c̃₀ = cos A − Σ_{j≥1} c̃_{2j}`.
pub fn fourier_tables(params: &PendulumParams) -> Result<FourierTables> {
    params.validate()?;
    let a = params.amplitude;
    let sign = |j: usize| if j.is_multiple_of(2) { 2.0 } else { -2.0 };
    let mut c_odd = Vec::with_capacity(params.j_max + 1);
    let mut c_even = Vec::with_capacity(params.j_max + 1);
    for j in 0..=params.j_max {
        c_odd.push(sign(j) * bessel_j((2 * j + 1) as u32, a)?);
        c_even.push(if j == 0 {
            0.0
        } else {
            sign(j) * bessel_j((2 * j) as u32, a)?
        });
    }
    c_even[0] = a.cos() - c_even[1..].iter().sum::<f64>();
    Ok(FourierTables { c_odd, c_even })
}

/// `d̄⁽¹⁾_{2j+1} = ω² c_{2j+1}/(4j(j+1))` for `j ≥ 1`, `d̄⁽¹⁾₁` from
/// `θ₁(0) = 0`, and `α₁ₐ = ω² c₁/A`.
pub fn order1(params: &PendulumParams, fourier: &FourierTables) -> FirstOrder {
    let w2 = params.omega * params.omega;
    let mut d1_bar = vec![0.0; params.j_max + 1];
    for j in 1..=params.j_max {
        d1_bar[j] = w2 * fourier.c_odd[j] / resonance_gap(j);
    }
    close_at_origin(&mut d1_bar);
    FirstOrder {
        d1_bar,
        alpha1a: w2 * fourier.c_odd[0] / params.amplitude,
    }
}

/// Coefficient of `cos((2n+1)τ)` in `cos(A cos τ) · Σ v_j cos((2j+1)τ)`,
/// times two. The three sums come from `cos 2lτ cos (2j+1)τ` hitting the
/// target harmonic through `l = j − n`, `l = n + j + 1` and `l = n − j`.
fn even_product_projection(c_even: &[f64], v: &[f64], n: usize) -> f64 {
    let top = v.len() - 1;
    let mut sum = 0.0;
    for j in n..=top {
        sum += at(c_even, j - n) * v[j];
    }
    for l in (n + 1)..=top {
        sum += at(c_even, l) * v[l - n - 1];
    }
    for l in 0..=n.min(top) {
        sum += at(c_even, l) * v[n - l];
    }
    sum
}

/// `Σ_j v_j (c̃_{2j} + c̃_{2j+2})`, the `n = 0` case of
/// [`even_product_projection`].
fn fundamental_projection(c_even: &[f64], v: &[f64]) -> f64 {
    v.iter()
        .enumerate()
        .map(|(j, &x)| (at(c_even, j) + at(c_even, j + 1)) * x)
        .sum()
}

/// Second-order source and solution coefficients.
pub fn order2(params: &PendulumParams, fourier: &FourierTables, first: &FirstOrder) -> SecondOrder {
    let w2 = params.omega * params.omega;
    let jm = params.j_max;
    let d1 = &first.d1_bar;
    let c_even = &fourier.c_even;

    let mut s2a_bar = vec![0.0; jm + 1];
    let mut s2b_bar = vec![0.0; jm + 1];
    for n in 0..=jm {
        s2a_bar[n] =
            first.alpha1a * odd2(n) * d1[n] - 0.5 * w2 * even_product_projection(c_even, d1, n);
        s2b_bar[n] = -resonance_gap(n) * d1[n];
    }

    let alpha2_bar = ((-(first.alpha1a - 0.5 * w2 * c_even[0]) * d1[0])
        + 0.5 * w2 * fundamental_projection(c_even, d1))
        / params.amplitude;

    let mut d2a_bar = vec![0.0; jm + 1];
    let mut d2b_bar = vec![0.0; jm + 1];
    for j in 1..=jm {
        d2a_bar[j] = -s2a_bar[j] / resonance_gap(j);
        d2b_bar[j] = -s2b_bar[j] / resonance_gap(j);
    }
    close_at_origin(&mut d2a_bar);
    close_at_origin(&mut d2b_bar);

    SecondOrder {
        s2a_bar,
        s2b_bar,
        alpha2_bar,
        d2a_bar,
        d2b_bar,
    }
}

/// `(ω²/8)`-free part of the cubic term `sin(A cos τ) θ₁²` projected onto
/// `cos τ`, split by the symmetric index pairs.
fn cubic_fundamental(c_odd: &[f64], d1: &[f64]) -> f64 {
    let top = d1.len() - 1;
    let mut sum = 0.0;
    for m in 0..=top {
        for j in (m + 1)..=top {
            sum += (2.0 * at(c_odd, j - m - 1) + at(c_odd, m + j) + at(c_odd, m + j + 1))
                * d1[j]
                * d1[m];
        }
        for j in 0..=m {
            sum +=
                (2.0 * at(c_odd, m - j) + at(c_odd, m + j) + at(c_odd, m + j + 1)) * d1[j] * d1[m];
        }
    }
    sum
}

/// `(α₃ₐ, α₃ᵦ)` from requiring `s⁽³⁾₁ = 0`.
///
/// `α₃ᵦ` is evaluated from its own expression and must reproduce `ᾱ₂`;
/// a mismatch beyond `1e-10` relative is reported as
/// [`Error::Consistency`].
pub fn alpha3(
    params: &PendulumParams,
    fourier: &FourierTables,
    first: &FirstOrder,
    second: &SecondOrder,
) -> Result<(f64, f64)> {
    let w2 = params.omega * params.omega;
    let a = params.amplitude;
    let c1 = fourier.c_odd[0];
    let c0 = fourier.c_even[0];
    let c_even = &fourier.c_even;

    let alpha3a = -(w2 / a)
        * ((c1 / a - 0.5 * c0) * second.d2a_bar[0]
            - 0.5 * fundamental_projection(c_even, &second.d2a_bar)
            + 0.125 * cubic_fundamental(&fourier.c_odd, &first.d1_bar))
        - second.alpha2_bar * first.d1_bar[0] / a;

    let alpha3b = -(w2 / a)
        * ((c1 / a - 0.5 * c0) * second.d2b_bar[0]
            - 0.5 * fundamental_projection(c_even, &second.d2b_bar));

    let gap = (alpha3b - second.alpha2_bar).abs();
    if gap > ALPHA3B_TOLERANCE * second.alpha2_bar.abs() + f64::MIN_POSITIVE {
        return Err(Error::Consistency(format!(
            "alpha3b = {alpha3b:e} differs from alpha2_bar = {:e}",
            second.alpha2_bar
        )));
    }
    Ok((alpha3a, alpha3b))
}

impl PendulumTables {
    /// Runs the full coefficient pipeline through third order.
    pub fn build(params: &PendulumParams) -> Result<Self> {
        let fourier = fourier_tables(params)?;
        let first = order1(params, &fourier);
        let second = order2(params, &fourier, &first);
        let (alpha3a, alpha3b) = alpha3(params, &fourier, &first, &second)?;
        Ok(Self {
            params: *params,
            c_odd: fourier.c_odd,
            c_even: fourier.c_even,
            d1_bar: first.d1_bar,
            alpha1a: first.alpha1a,
            s2a_bar: second.s2a_bar,
            s2b_bar: second.s2b_bar,
            alpha2_bar: second.alpha2_bar,
            d2a_bar: second.d2a_bar,
            d2b_bar: second.d2b_bar,
            alpha3a,
            alpha3b,
        })
    }

    /// Third-order `Ω²(λ) = α₁ₐ + 2ᾱ₂/λ² + α₃ₐ/λ⁴`.
    pub fn omega2_at(&self, lambda2: f64) -> f64 {
        self.alpha1a + 2.0 * self.alpha2_bar / lambda2 + self.alpha3a / (lambda2 * lambda2)
    }

    /// `[α₀, α₁, α₂, α₃]` at a given `λ²`.
    pub fn alphas(&self, lambda2: f64) -> [f64; 4] {
        [
            lambda2,
            self.alpha1a - lambda2,
            self.alpha2_bar / lambda2,
            self.alpha3a / (lambda2 * lambda2) + self.alpha3b / lambda2,
        ]
    }

    /// `θ₁` and `θ₂` as cosine series at a given `λ²`.
    pub fn theta_series(&self, lambda2: f64) -> (HarmonicSeries, HarmonicSeries) {
        let l4 = lambda2 * lambda2;
        let theta1 = self.d1_bar.iter().map(|d| d / lambda2).collect();
        let theta2 = self
            .d2a_bar
            .iter()
            .zip(&self.d2b_bar)
            .map(|(a, b)| a / l4 + b / lambda2)
            .collect();
        (HarmonicSeries::new(theta1), HarmonicSeries::new(theta2))
    }
}

/// A coefficient written as `x/λ⁴ + y/λ² + z`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LambdaParts {
    pub inv_lambda4: f64,
    pub inv_lambda2: f64,
    pub constant: f64,
}

impl LambdaParts {
    pub fn at(&self, lambda2: f64) -> f64 {
        self.inv_lambda4 / (lambda2 * lambda2) + self.inv_lambda2 / lambda2 + self.constant
    }

    fn add(self, other: Self) -> Self {
        Self {
            inv_lambda4: self.inv_lambda4 + other.inv_lambda4,
            inv_lambda2: self.inv_lambda2 + other.inv_lambda2,
            constant: self.constant + other.constant,
        }
    }
}

/// The four contributions to the third-order source coefficient
/// `s⁽³⁾_{2n+1} = I_A + I_B + I_C + I_D`:
///
/// - `I_A`: the `−αₖ θ''` terms,
/// - `I_B`: `−ω² cos(A cos τ) θ₂`,
/// - `I_C`: `λ² θ₂`,
/// - `I_D`: `(ω²/2) sin(A cos τ) θ₁²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct S3Terms {
    pub i_a: LambdaParts,
    pub i_b: LambdaParts,
    pub i_c: LambdaParts,
    pub i_d: LambdaParts,
}

impl S3Terms {
    /// `(s̄⁽³ᵃ⁾, s̄⁽³ᵇ⁾, s̄⁽³ᶜ⁾)` as the λ-power decomposition.
    pub fn total(&self) -> LambdaParts {
        self.i_a.add(self.i_b).add(self.i_c).add(self.i_d)
    }

    pub fn at(&self, lambda2: f64) -> f64 {
        self.total().at(lambda2)
    }
}

/// The cubic `sin(A cos τ) θ₁²` term projected onto `cos((2n+1)τ)`.
///
/// Expanding the triple cosine product leaves eight Kronecker deltas; the
/// first never fires and the other seven reduce to the double sums
/// returned here (index 0 is the vanishing one). Each running index and
/// the implied `c` index are truncated at `j_max`. Multiply the total by
/// `ω²/8` to obtain `λ⁴ I_D`.
pub fn cubic_delta_sums(c_odd: &[f64], d1: &[f64], n: usize) -> [f64; 8] {
    let top = d1.len() - 1;
    let c = |l: usize| at(c_odd, l);
    let mut s = [0.0; 8];
    // δ(2(n−l−m−j)−2): l = n − m − j − 1
    for j in 0..n.min(top + 1) {
        for m in 0..(n - j).min(top + 1) {
            s[1] += c(n - m - j - 1) * d1[m] * d1[j];
        }
    }
    // δ(2(n+l+m−j)+2): l = j − n − m − 1
    for m in 0..=top {
        for j in (n + m + 1)..=top {
            s[2] += c(j - n - m - 1) * d1[m] * d1[j];
        }
    }
    // δ(2(n−l−m+j)): l = n − m + j
    for j in 0..=top {
        for m in 0..=(n + j).min(top) {
            s[3] += c(n + j - m) * d1[m] * d1[j];
        }
    }
    // δ(2(n+l−m+j)+2): l = m − n − j − 1
    for j in 0..=top {
        for m in (n + j + 1)..=top {
            s[4] += c(m - n - j - 1) * d1[j] * d1[m];
        }
    }
    // δ(2(n−l+m−j)): l = m + n − j
    for m in 0..=top {
        for j in 0..=(m + n).min(top) {
            s[5] += c(m + n - j) * d1[j] * d1[m];
        }
    }
    // δ(2(n+l−m−j)): l = m + j − n
    for j in 0..=top {
        for m in n.saturating_sub(j)..=top {
            s[6] += c(m + j - n) * d1[j] * d1[m];
        }
    }
    // δ(2(n−l+m+j)+2): l = n + m + j + 1
    for m in 0..=top {
        for j in 0..=top {
            s[7] += c(n + m + j + 1) * d1[j] * d1[m];
        }
    }
    s
}

/// λ-decomposed contributions to `s⁽³⁾_{2n+1}`.
pub fn s3_terms(tables: &PendulumTables, n: usize) -> Result<S3Terms> {
    let p = &tables.params;
    if n > p.j_max {
        return Err(Error::domain(format!(
            "harmonic index {n} exceeds j_max = {}",
            p.j_max
        )));
    }
    let w2 = p.omega * p.omega;
    let k2 = odd2(n);
    let fundamental = if n == 0 { p.amplitude } else { 0.0 };
    let (d1, d2a, d2b) = (&tables.d1_bar, &tables.d2a_bar, &tables.d2b_bar);

    // α₁ = α₁ₐ − λ², α₂ = ᾱ₂/λ², α₃ = α₃ₐ/λ⁴ + α₃ᵦ/λ²
    let i_a = LambdaParts {
        inv_lambda4: k2 * (tables.alpha1a * d2a[n] + tables.alpha2_bar * d1[n])
            + tables.alpha3a * fundamental,
        inv_lambda2: k2 * (tables.alpha1a * d2b[n] - d2a[n]) + tables.alpha3b * fundamental,
        constant: -k2 * d2b[n],
    };
    let i_b = LambdaParts {
        inv_lambda4: -0.5 * w2 * even_product_projection(&tables.c_even, d2a, n),
        inv_lambda2: -0.5 * w2 * even_product_projection(&tables.c_even, d2b, n),
        constant: 0.0,
    };
    let i_c = LambdaParts {
        inv_lambda4: 0.0,
        inv_lambda2: d2a[n],
        constant: d2b[n],
    };
    let i_d = LambdaParts {
        inv_lambda4: 0.125 * w2 * cubic_delta_sums(&tables.c_odd, d1, n).iter().sum::<f64>(),
        inv_lambda2: 0.0,
        constant: 0.0,
    };
    Ok(S3Terms { i_a, i_b, i_c, i_d })
}

/// Third-order source coefficient `s⁽³⁾_{2n+1}` at a given `λ²`.
pub fn s3_source_coefficient(tables: &PendulumTables, n: usize, lambda2: f64) -> Result<f64> {
    Ok(s3_terms(tables, n)?.at(lambda2))
}

/// Minimal-sensitivity `λ² = −α₃ₐ/ᾱ₂`.
pub fn pms_lambda2(tables: &PendulumTables) -> Result<f64> {
    if tables.alpha2_bar == 0.0 {
        return Err(Error::DegeneratePms);
    }
    let lambda2 = -tables.alpha3a / tables.alpha2_bar;
    if !(lambda2 > 0.0) {
        return Err(Error::NoStationaryPoint { lambda2 });
    }
    Ok(lambda2)
}

/// LPLDE squared frequency `Ω² = α₁ₐ − ᾱ₂²/α₃ₐ`.
pub fn omega2_lplde(params: &PendulumParams) -> Result<FrequencyResult> {
    let tables = PendulumTables::build(params)?;
    omega2_from_tables(&tables)
}

pub fn omega2_from_tables(tables: &PendulumTables) -> Result<FrequencyResult> {
    let lambda2 = pms_lambda2(tables)?;
    let omega2 = tables.alpha1a - tables.alpha2_bar * tables.alpha2_bar / tables.alpha3a;
    if !(omega2 > 0.0) {
        return Err(Error::Unphysical { omega2 });
    }
    Ok(FrequencyResult::new(omega2, Method::Lplde, Some(lambda2))
        .with_diagnostic("lambda2", lambda2)
        .with_diagnostic("j_max", tables.params.j_max as f64)
        .with_diagnostic("alpha1a", tables.alpha1a)
        .with_diagnostic("alpha2_bar", tables.alpha2_bar)
        .with_diagnostic("alpha3a", tables.alpha3a)
        .with_diagnostic("alpha3b", tables.alpha3b))
}

/// Plain LP baseline: the Duffing frequency of the cubic truncation
/// `sin θ ≈ θ − θ³/6`, i.e. `μ = −ω²/6`.
///
/// Only defined below the cubic model's separatrix `A < √6`.
pub fn omega2_lp_baseline(params: &PendulumParams, order: u8) -> Result<FrequencyResult> {
    params.validate()?;
    let mu = -params.omega * params.omega / 6.0;
    let cubic = OscillatorParams::new(params.omega, mu, params.amplitude)?;
    Ok(duffing::omega2(&cubic, Method::Lp(order))?.with_diagnostic("mu_equivalent", mu))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64) -> PendulumParams {
        PendulumParams::new(1.0, a, DEFAULT_J_MAX).unwrap()
    }

    #[test]
    fn validation() {
        assert!(PendulumParams::new(1.0, 0.0, 5).is_err());
        assert!(PendulumParams::new(1.0, PI, 5).is_err());
        assert!(PendulumParams::new(1.0, 1.0, 1).is_err());
        assert!(PendulumParams::new(0.0, 1.0, 5).is_err());
        assert!(PendulumParams::new(1.0, -0.5, 5).is_err());
    }

    #[test]
    fn fourier_values_at_unit_amplitude() {
        let f = fourier_tables(&params(1.0)).unwrap();
        assert!((f.c_odd[0] - 0.880101171489867).abs() < 1e-15);
        assert!((f.c_odd[1] + 0.0391267079653).abs() < 1e-12);
    }

    #[test]
    fn small_amplitude_limit() {
        let p = params(1e-8);
        let f = fourier_tables(&p).unwrap();
        assert!((f.c_odd[0] / 1e-8 - 1.0).abs() < 1e-14);
        assert!(f.c_odd[1..].iter().all(|c| c.abs() < 1e-24));
        let first = order1(&p, &f);
        assert!((first.alpha1a - 1.0).abs() < 1e-14);
    }

    #[test]
    fn first_order_values() {
        let p = params(1.0);
        let f = fourier_tables(&p).unwrap();
        let first = order1(&p, &f);
        assert!((first.d1_bar[1] + 0.00489083849567).abs() < 1e-13);
        assert!((first.d1_bar[1] - f.c_odd[1] / 8.0).abs() < 1e-18);
        let sum: f64 = first.d1_bar.iter().sum();
        let scale = first.d1_bar.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        assert!(sum.abs() <= 1e-14 * scale);
    }

    #[test]
    fn second_order_structure() {
        let t = PendulumTables::build(&params(1.3)).unwrap();
        for j in 1..=t.params.j_max {
            assert!((t.d2b_bar[j] - t.d1_bar[j]).abs() <= 1e-15 * t.d1_bar[j].abs());
        }
        // The n = 0 source coefficient is what α₂ cancels.
        assert!((t.s2a_bar[0] + t.alpha2_bar * 1.3).abs() <= 1e-14 * t.s2a_bar[0].abs());
        // θ₂(0) = 0 for any λ.
        for l2 in [0.3, 1.0, 2.5] {
            let (_, theta2) = t.theta_series(l2);
            let scale: f64 = theta2.coeffs.iter().map(|c| c.abs()).sum();
            assert!(theta2.at_zero().abs() <= 1e-14 * scale);
        }
    }

    #[test]
    fn alpha3b_equals_alpha2_bar() {
        for a in [0.01, 0.5, 1.0, 2.0, 3.0] {
            let t = PendulumTables::build(&params(a)).unwrap();
            assert!(
                (t.alpha3b - t.alpha2_bar).abs() <= 1e-12 * t.alpha2_bar.abs(),
                "A={a}"
            );
        }
    }

    #[test]
    fn third_order_fundamental_vanishes() {
        let t = PendulumTables::build(&params(1.0)).unwrap();
        for l2 in [0.5, 1.0, 3.0] {
            let terms = s3_terms(&t, 0).unwrap();
            let scale = [terms.i_a, terms.i_b, terms.i_c, terms.i_d]
                .iter()
                .map(|p| p.at(l2).abs())
                .fold(0.0, f64::max);
            assert!(terms.at(l2).abs() <= 1e-12 * scale, "lambda2={l2}");
        }
        assert!(s3_source_coefficient(&t, 6, 1.0).is_err());
    }

    #[test]
    fn tiny_amplitude_sources_are_cubically_small() {
        let t = PendulumTables::build(&params(1e-8)).unwrap();
        for n in 1..=t.params.j_max {
            assert!(s3_source_coefficient(&t, n, 1.0).unwrap().abs() <= 1e-20);
        }
        assert!(t.alpha3a.abs() < 1e-14);
        assert!(t.alpha2_bar.abs() < 1e-14);
    }

    #[test]
    fn pms_guards() {
        let mut t = PendulumTables::build(&params(1.0)).unwrap();
        assert!(pms_lambda2(&t).unwrap() > 0.0);
        let mut flipped = t.clone();
        flipped.alpha3a = -flipped.alpha3a;
        assert!(matches!(
            pms_lambda2(&flipped),
            Err(Error::NoStationaryPoint { .. })
        ));
        t.alpha2_bar = 0.0;
        assert_eq!(pms_lambda2(&t), Err(Error::DegeneratePms));
    }

    #[test]
    fn pms_small_amplitude_is_finite() {
        let t = PendulumTables::build(&params(1e-3)).unwrap();
        let l2 = pms_lambda2(&t).unwrap();
        assert!(l2.is_finite() && l2 > 0.0);
        assert!((l2 - 1.0).abs() < 1e-5, "{l2}");
    }

    #[test]
    fn lplde_small_amplitude() {
        let r = omega2_lplde(&params(1e-6)).unwrap();
        assert!((r.omega2 - 1.0).abs() < 1e-9);
        assert_eq!(r.diagnostics["j_max"], 5.0);
    }

    #[test]
    fn pms_is_stationary() {
        for a in [0.5, 1.0, 2.0, 2.5] {
            let t = PendulumTables::build(&params(a)).unwrap();
            let l2 = pms_lambda2(&t).unwrap();
            let h = 1e-5 * l2;
            let d = (t.omega2_at(l2 + h) - t.omega2_at(l2 - h)) / (2.0 * h);
            assert!(d.abs() <= 1e-6 * t.omega2_at(l2), "A={a}: {d:e}");
            let direct = omega2_from_tables(&t).unwrap().omega2;
            assert!((t.omega2_at(l2) - direct).abs() <= 1e-14 * direct);
        }
    }

    #[test]
    fn alphas_reassemble_frequency() {
        let t = PendulumTables::build(&params(1.7)).unwrap();
        let l2 = 0.8;
        let sum: f64 = t.alphas(l2).iter().sum();
        assert!((sum - t.omega2_at(l2)).abs() < 1e-14);
    }

    #[test]
    fn lp_baseline() {
        for a in [0.2, 1.0, 2.0, 2.4] {
            let r = omega2_lp_baseline(&params(a), 1).unwrap();
            assert!((r.omega2 - (1.0 - a * a / 8.0)).abs() < 1e-15);
        }
        let r3 = omega2_lp_baseline(&params(1.0), 3).unwrap();
        let cubic = OscillatorParams::new(1.0, -1.0 / 6.0, 1.0).unwrap();
        assert_eq!(
            r3.omega2,
            duffing::omega2(&cubic, Method::Lp(3)).unwrap().omega2
        );
        assert!(omega2_lp_baseline(&params(2.5), 3).is_err());
        let tiny = omega2_lp_baseline(&params(1e-6), 3).unwrap();
        assert!((tiny.omega2 - 1.0).abs() < 1e-12);
    }
}
