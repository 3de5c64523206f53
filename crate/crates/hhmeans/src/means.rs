//! Closed-form weighted scalar means and constants.
//!
//! For a pair `(a, b)` of positive reals and a weight `ν ∈ [0, 1]` this module
//! evaluates
//!
//! - the weighted arithmetic mean `a ∇_ν b = (1−ν)a + νb`,
//! - the weighted geometric mean `a ♯_ν b = a^{1−ν} b^ν`,
//! - the weighted logarithmic mean `L_ν(a, b)` interpolating the two,
//! - its one-variable representing function `f_ν(t) = L_ν(1, t)`,
//! - the weighted identric mean `I_ν(a, b)`,
//! - the Kantorovich constant `K(a, b) = (a+b)²/(4ab)`,
//! - the correction factor `α_ν(a, b) ≥ 1` sharpening the AM-GM ratio bound.
//!
//! Every removable singularity (equal arguments, endpoint or half weights) is
//! handled by an explicit limit or series branch controlled by [`LimitPolicy`].
//! Products of powers are evaluated in log space so arguments spanning many
//! decades neither overflow nor lose the leading digits.

use std::fmt;

/// Errors raised by mean evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum MeanError {
    /// Pair constructor rejected a non-positive or non-finite argument.
    InvalidPair { a: f64, b: f64 },
    /// Weight outside `[0, 1]` or not finite.
    InvalidWeight { nu: f64 },
    /// Limit-policy thresholds outside `(0, 1e-3)`.
    InvalidPolicy { eps_arg: f64, eps_nu: f64 },
    /// The operation needs distinct arguments; the caller should use the
    /// diagonal limit instead.
    DiagonalArgument { a: f64, b: f64 },
    /// The operation is not defined for this weight (endpoint weights for
    /// the identric mean and the alpha factor).
    OutOfDomain { what: &'static str, value: f64 },
}

impl fmt::Display for MeanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeanError::InvalidPair { a, b } => {
                write!(f, "pair arguments must be finite and positive, got ({a}, {b})")
            }
            MeanError::InvalidWeight { nu } => {
                write!(f, "weight must lie in [0, 1], got {nu}")
            }
            MeanError::InvalidPolicy { eps_arg, eps_nu } => {
                write!(f, "limit-policy thresholds must lie in (0, 1e-3), got eps_arg={eps_arg}, eps_nu={eps_nu}")
            }
            MeanError::DiagonalArgument { a, b } => {
                write!(f, "arguments ({a}, {b}) are too close; use the diagonal limit")
            }
            MeanError::OutOfDomain { what, value } => {
                write!(f, "{what} is not defined at {value}")
            }
        }
    }
}

impl std::error::Error for MeanError {}

/// An ordered pair `(a, b)` of strictly positive finite reals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivePair {
    a: f64,
    b: f64,
}

impl PositivePair {
    pub fn new(a: f64, b: f64) -> Result<Self, MeanError> {
        if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
            Ok(Self { a, b })
        } else {
            Err(MeanError::InvalidPair { a, b })
        }
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Relative separation `|a−b| / max(a,b)`.
    #[inline]
    pub fn relative_gap(&self) -> f64 {
        (self.a - self.b).abs() / self.a.max(self.b)
    }

    pub fn swapped(&self) -> Self {
        Self { a: self.b, b: self.a }
    }
}

/// A mean weight `ν ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weight {
    nu: f64,
}

/// Classification of a weight against a [`LimitPolicy`], deciding which
/// limit branch an operation takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightClass {
    EndpointZero,
    EndpointOne,
    NearHalf,
    Interior,
}

impl Weight {
    pub fn new(nu: f64) -> Result<Self, MeanError> {
        if nu.is_finite() && (0.0..=1.0).contains(&nu) {
            Ok(Self { nu })
        } else {
            Err(MeanError::InvalidWeight { nu })
        }
    }

    /// Midpoint weight `ν = 1/2`.
    pub const HALF: Weight = Weight { nu: 0.5 };

    #[inline]
    pub fn nu(&self) -> f64 {
        self.nu
    }

    #[inline]
    pub fn complement(&self) -> Weight {
        Weight { nu: 1.0 - self.nu }
    }

    #[inline]
    pub fn is_endpoint(&self) -> bool {
        self.nu == 0.0 || self.nu == 1.0
    }

    #[inline]
    pub fn is_interior(&self) -> bool {
        !self.is_endpoint()
    }

    /// `min(ν, 1−ν)`.
    #[inline]
    pub fn r(&self) -> f64 {
        self.nu.min(1.0 - self.nu)
    }

    /// `max(ν, 1−ν)`.
    #[inline]
    pub fn big_r(&self) -> f64 {
        self.nu.max(1.0 - self.nu)
    }

    pub fn classify(&self, lp: &LimitPolicy) -> WeightClass {
        if self.nu == 0.0 {
            WeightClass::EndpointZero
        } else if self.nu == 1.0 {
            WeightClass::EndpointOne
        } else if (self.nu - 0.5).abs() < lp.eps_nu {
            WeightClass::NearHalf
        } else {
            WeightClass::Interior
        }
    }
}

/// Thresholds deciding when limit and series branches activate.
///
/// `eps_arg` is a relative threshold on `|a−b|/max(a,b)` below which the
/// near-diagonal series branch of the logarithmic means activates (and below
/// which the identric mean refuses to evaluate). `eps_nu` bounds the band
/// `|ν − 1/2|` inside which the half-weight closed forms replace expressions
/// carrying `1−2ν` in a denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitPolicy {
    eps_arg: f64,
    eps_nu: f64,
}

impl LimitPolicy {
    /// The default thresholds as a constant, usable in const contexts.
    pub const DEFAULT: LimitPolicy = LimitPolicy { eps_arg: 1e-9, eps_nu: 1e-7 };

    pub fn new(eps_arg: f64, eps_nu: f64) -> Result<Self, MeanError> {
        if eps_arg > 0.0 && eps_arg < 1e-3 && eps_nu > 0.0 && eps_nu < 1e-3 {
            Ok(Self { eps_arg, eps_nu })
        } else {
            Err(MeanError::InvalidPolicy { eps_arg, eps_nu })
        }
    }

    #[inline]
    pub fn eps_arg(&self) -> f64 {
        self.eps_arg
    }

    #[inline]
    pub fn eps_nu(&self) -> f64 {
        self.eps_nu
    }
}

impl Default for LimitPolicy {
    /// `eps_arg = 1e-9`, `eps_nu = 1e-7`: double-precision cancellation
    /// thresholds with one decade of margin.
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// `(1−ν)a + νb`, exact at endpoints and on the diagonal.
pub fn weighted_arithmetic(p: PositivePair, w: Weight) -> f64 {
    if p.a == p.b {
        return p.a;
    }
    match w.nu {
        0.0 => p.a,
        1.0 => p.b,
        nu => (1.0 - nu) * p.a + nu * p.b,
    }
}

/// `a^{1−ν} b^ν`, computed as `exp((1−ν)·ln a + ν·ln b)`; exact at endpoints
/// and on the diagonal.
pub fn weighted_geometric(p: PositivePair, w: Weight) -> f64 {
    if p.a == p.b {
        return p.a;
    }
    match w.nu {
        0.0 => p.a,
        1.0 => p.b,
        _ => ln_weighted_geometric(p, w).exp(),
    }
}

/// `ln(a ♯_ν b) = (1−ν)·ln a + ν·ln b`.
pub fn ln_weighted_geometric(p: PositivePair, w: Weight) -> f64 {
    (1.0 - w.nu) * p.a.ln() + w.nu * p.b.ln()
}

/// Representing-function core: `f_ν(e^h)` where `h = ln t`.
///
/// Interior `ν` only. The direct branch
/// `[(1−ν)·expm1(νh)/ν + ν·e^{νh}·expm1((1−ν)h)/(1−ν)] / h`
/// is cancellation-free for every interior weight; the series branch
/// `1 + νh + ν(1+2ν)h²/6 + ν(1+ν+2ν²)h³/24`
/// takes over when `h` is too small to divide by.
fn rep_core(h: f64, nu: f64, series: bool) -> f64 {
    if h == 0.0 {
        return 1.0;
    }
    if series {
        let c2 = nu * (1.0 + 2.0 * nu) / 6.0;
        let c3 = nu * (1.0 + nu + 2.0 * nu * nu) / 24.0;
        return 1.0 + h * (nu + h * (c2 + h * c3));
    }
    let left = (1.0 - nu) * f64::exp_m1(nu * h) / nu;
    let right = nu * (nu * h).exp() * f64::exp_m1((1.0 - nu) * h) / (1.0 - nu);
    (left + right) / h
}

/// The weighted logarithmic mean `L_ν(a, b)`.
///
/// For distinct arguments and interior weight this is
/// `[ (1−ν)/ν · (a − a♯_νb) + ν/(1−ν) · (a♯_νb − b) ] / (ln a − ln b)`;
/// the diagonal value is `a`, the endpoint weights return `a` and `b` by
/// continuity, and pairs closer than `eps_arg` use the series branch.
pub fn weighted_logarithmic(p: PositivePair, w: Weight, lp: &LimitPolicy) -> f64 {
    if p.a == p.b {
        return p.a;
    }
    match w.nu {
        0.0 => p.a,
        1.0 => p.b,
        nu => {
            let h = log_ratio(p.b, p.a);
            p.a * rep_core(h, nu, p.relative_gap() <= lp.eps_arg)
        }
    }
}

/// The (unweighted) logarithmic mean `(a − b)/(ln a − ln b)`, with the
/// diagonal limit `a` and a series branch near it.
pub fn logarithmic_mean(p: PositivePair, lp: &LimitPolicy) -> f64 {
    if p.a == p.b {
        return p.a;
    }
    let h = log_ratio(p.b, p.a);
    if p.relative_gap() <= lp.eps_arg {
        p.a * (1.0 + h * (0.5 + h * (1.0 / 6.0 + h / 24.0)))
    } else {
        p.a * f64::exp_m1(h) / h
    }
}

/// The representing function `f_ν(t) = L_ν(1, t)` for `t > 0`, with
/// `f_ν(1) = 1` by continuity. Requires an interior weight.
pub fn rep_function(t: f64, w: Weight, lp: &LimitPolicy) -> Result<f64, MeanError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(MeanError::OutOfDomain { what: "rep_function argument", value: t });
    }
    if !w.is_interior() {
        return Err(MeanError::OutOfDomain { what: "rep_function weight", value: w.nu });
    }
    if t == 1.0 {
        return Ok(1.0);
    }
    let rel = (t - 1.0).abs() / t.max(1.0);
    Ok(rep_core(t.ln(), w.nu, rel <= lp.eps_arg))
}

/// `ln I_ν(a, b)` for distinct arguments and interior weight.
///
/// The displayed closed form carries `1−2ν` in an exponent over
/// `ν(1−ν)(b−a)`; regrouped into entropy divided-differences it is
/// `(1−ν)·S(a, νδ) + ν·S(m_ν, (1−ν)δ) − 1` with `δ = b−a`,
/// `m_ν = a + νδ`, and `S` the slope of `x ln x` — stable for every
/// admissible input. Inside the `eps_nu` band around `ν = 1/2` the classical
/// form `S(a, δ) − 1` is used.
pub fn ln_weighted_identric(p: PositivePair, w: Weight, lp: &LimitPolicy) -> Result<f64, MeanError> {
    if !w.is_interior() {
        return Err(MeanError::OutOfDomain { what: "identric mean weight", value: w.nu });
    }
    if p.relative_gap() <= lp.eps_arg {
        return Err(MeanError::DiagonalArgument { a: p.a, b: p.b });
    }
    let (a, b, nu) = (p.a, p.b, w.nu);
    let delta = b - a;
    if (nu - 0.5).abs() < lp.eps_nu {
        return Ok(entropy_slope(a, delta) - 1.0);
    }
    let m_nu = a + nu * delta;
    Ok((1.0 - nu) * entropy_slope(a, nu * delta) + nu * entropy_slope(m_nu, (1.0 - nu) * delta)
        - 1.0)
}

/// The weighted identric mean `I_ν(a, b)`; see [`ln_weighted_identric`].
pub fn weighted_identric(p: PositivePair, w: Weight, lp: &LimitPolicy) -> Result<f64, MeanError> {
    ln_weighted_identric(p, w, lp).map(f64::exp)
}

/// The Kantorovich constant `K(a, b) = (a+b)²/(4ab) ≥ 1`, exactly `1` on the
/// diagonal.
pub fn kantorovich(p: PositivePair) -> f64 {
    let s = p.a + p.b;
    s * s / (4.0 * p.a * p.b)
}

/// `ln(b/a)` for positive arguments, accurate across all ratios: `ln_1p` of
/// the relative difference near 1 (no cancellation), direct logs away from 1
/// (where `(b−a)/a` itself would round to `-1` for extreme ratios).
#[inline]
pub(crate) fn log_ratio(b: f64, a: f64) -> f64 {
    let r = (b - a) / a;
    if r.abs() < 0.5 {
        f64::ln_1p(r)
    } else {
        b.ln() - a.ln()
    }
}

/// `ln(1+z)/z`, continuous through `z = 0`.
#[inline]
pub(crate) fn ln1p_over(z: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else {
        f64::ln_1p(z) / z
    }
}

/// The divided difference `(φ(x+s) − φ(x))/s` of the entropy `φ(x) = x·ln x`,
/// evaluated as `ln x + (1+z)·ln(1+z)/z` with `z = s/x`. Continuous through
/// `s = 0` (value `φ'(x) = ln x + 1`) and conditioned like `ln x` itself, so
/// mean formulas built from it never suffer the `1/(b−a)` cancellation their
/// displayed closed forms carry.
#[inline]
pub(crate) fn entropy_slope(x: f64, s: f64) -> f64 {
    let z = s / x;
    x.ln() + (1.0 + z) * ln1p_over(z)
}

/// `ln α_ν(a, b)` for distinct arguments and interior weight.
///
/// The defining expression carries `2ν−1` in two denominators; the poles
/// cancel, and regrouped into entropy divided-differences the factor is
/// `2·S(m, (ν−1/2)δ) − S(a, νδ) − S(m_ν, (1−ν)δ)` with `δ = b−a`,
/// `m = a∇b`, `m_ν = a + νδ` — finite and stable through `ν = 1/2` and
/// through the diagonal. Inside the `eps_nu` band the limit
/// `2·ln( (a ∇ b) / I_{1/2}(a, b) )` is returned directly. Only exact
/// equality of the arguments is rejected (the factor tends to 1 there).
pub fn ln_alpha(p: PositivePair, w: Weight, lp: &LimitPolicy) -> Result<f64, MeanError> {
    if !w.is_interior() {
        return Err(MeanError::OutOfDomain { what: "alpha weight", value: w.nu });
    }
    if p.a == p.b {
        return Err(MeanError::DiagonalArgument { a: p.a, b: p.b });
    }
    let (a, b, nu) = (p.a, p.b, w.nu);
    let delta = b - a;
    let mid = 0.5 * (a + b);
    if (nu - 0.5).abs() < lp.eps_nu {
        // lim_{ν→1/2} α_ν = ((a∇b)/I_{1/2}(a,b))²
        let ln_i_half = entropy_slope(a, delta) - 1.0;
        return Ok(2.0 * (mid.ln() - ln_i_half));
    }
    let m_nu = a + nu * delta;
    Ok(2.0 * entropy_slope(mid, (nu - 0.5) * delta)
        - entropy_slope(a, nu * delta)
        - entropy_slope(m_nu, (1.0 - nu) * delta))
}

/// The correction factor `α_ν(a, b) ≥ 1`; see [`ln_alpha`].
pub fn alpha(p: PositivePair, w: Weight, lp: &LimitPolicy) -> Result<f64, MeanError> {
    ln_alpha(p, w, lp).map(f64::exp)
}
