//! The weighted Hermite-Hadamard functional and its refinement bounds.
//!
//! For a convex `f` and weight `ν`, the functional
//!
//! ```text
//! 𝔠_{f,ν}(a, b) = (∫₀¹ f(a ∇_{νλ} b) dλ) ∇_ν (∫₀¹ f(b ∇_{(1−ν)λ} a) dλ)
//! ```
//!
//! sits between `f(a ∇_ν b)` and `f(a) ∇_ν f(b)`. This module evaluates it by
//! adaptive quadrature, provides the split-integral identities that re-express
//! it through plain integrals of `f`, the inner/outer refinement terms
//! tightening the sandwich, ratio bounds between weights, the convex-gap
//! bracket, and the λ-averaged weights `r̃(ν)`, `R̃(ν)` with their closed
//! forms.
//!
//! Closed-form anchors used throughout the tests: with `f = exp` the
//! functional at `(ln a, ln b)` is the weighted logarithmic mean `L_ν(a, b)`,
//! and with `f = −log` it is `−ln I_ν(a, b)` for the weighted identric mean.

use std::cell::Cell;
use std::fmt;

use crate::convex::{ConvexFn, DomainError};
use crate::quad::{integrate, FunctionalResult, QuadError, QuadratureSpec};
use crate::young::BoundPair;

/// Errors raised by functional evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum HhError {
    /// The integration interval leaves the function's domain.
    Domain(String),
    /// Adaptive subdivision hit `max_depth` before reaching tolerance.
    Quadrature { value: f64, est_error: f64 },
    /// A ratio bound requires `f ≥ 0` but a sampled value fell below
    /// `−1e-12`.
    NegativeFunction { x: f64, value: f64 },
    /// `r̃`/`R̃` and the refinement bounds need an interior weight.
    OutOfDomain { what: &'static str, value: f64 },
}

impl fmt::Display for HhError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HhError::Domain(msg) => write!(f, "domain error: {msg}"),
            HhError::Quadrature { value, est_error } => {
                write!(f, "quadrature failure (value ≈ {value}, est_error ≈ {est_error})")
            }
            HhError::NegativeFunction { x, value } => {
                write!(f, "function must be nonnegative, got f({x}) = {value}")
            }
            HhError::OutOfDomain { what, value } => write!(f, "{what} undefined at {value}"),
        }
    }
}

impl std::error::Error for HhError {}

impl From<DomainError> for HhError {
    fn from(e: DomainError) -> Self {
        HhError::Domain(e.to_string())
    }
}

impl From<QuadError<HhError>> for HhError {
    fn from(e: QuadError<HhError>) -> Self {
        match e {
            QuadError::ToleranceNotMet { value, est_error } => HhError::Quadrature { value, est_error },
            QuadError::Integrand(inner) => inner,
        }
    }
}

fn check_weight(nu: f64) -> Result<(), HhError> {
    if (0.0..=1.0).contains(&nu) && nu.is_finite() {
        Ok(())
    } else {
        Err(HhError::OutOfDomain { what: "weight", value: nu })
    }
}

fn check_domain(f: &ConvexFn, lo: f64, hi: f64) -> Result<(), HhError> {
    if f.domain().covers_open(lo.min(hi), lo.max(hi)) {
        Ok(())
    } else {
        Err(HhError::Domain(format!(
            "integration range [{}, {}] exits the domain {} of {}",
            lo.min(hi),
            hi.max(lo),
            f.domain(),
            f.label()
        )))
    }
}

fn quad_fn(
    f: &ConvexFn,
    g: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<FunctionalResult, HhError> {
    integrate(|lam| f.eval(g(lam)).map_err(HhError::from), lo, hi, spec).map_err(HhError::from)
}

/// Evaluates `𝔠_{f,ν}(x, y)` for `x, y` in the closure of `f`'s domain.
///
/// At `ν ∈ {0, 1}` the zero-weight integral is skipped entirely, so
/// degenerate intervals never raise spurious domain errors.
pub fn hh_functional(
    f: &ConvexFn,
    x: f64,
    y: f64,
    nu: f64,
    spec: &QuadratureSpec,
) -> Result<FunctionalResult, HhError> {
    check_weight(nu)?;
    check_domain(f, x, y)?;
    if nu == 0.0 {
        return quad_fn(f, |lam| x + nu * lam * (y - x), 0.0, 1.0, spec);
    }
    if nu == 1.0 {
        return quad_fn(f, |lam| y + (1.0 - nu) * lam * (x - y), 0.0, 1.0, spec);
    }
    let first = quad_fn(f, |lam| x + nu * lam * (y - x), 0.0, 1.0, spec)?;
    let second = quad_fn(f, |lam| y + (1.0 - nu) * lam * (x - y), 0.0, 1.0, spec)?;
    Ok(FunctionalResult {
        value: (1.0 - nu) * first.value + nu * second.value,
        est_error: (1.0 - nu) * first.est_error + nu * second.est_error,
        evaluations: first.evaluations + second.evaluations,
    })
}

/// Split-integral identity for `𝔠_{f,ν}(t, 1)`:
/// `(1/(1−t))·[ (1−ν)/ν ∫_t^m f + ν/(1−ν) ∫_m^1 f ]` with `m = (1−ν)t + ν`.
pub fn hh_split_t1(
    f: &ConvexFn,
    t: f64,
    nu: f64,
    spec: &QuadratureSpec,
) -> Result<FunctionalResult, HhError> {
    if t == 1.0 {
        return Err(HhError::Domain("split identity undefined at t = 1".into()));
    }
    if !(nu > 0.0 && nu < 1.0) {
        return Err(HhError::OutOfDomain { what: "split-identity weight", value: nu });
    }
    check_domain(f, t, 1.0)?;
    let m = (1.0 - nu) * t + nu;
    let left = quad_fn(f, |u| u, t, m, spec)?;
    let right = quad_fn(f, |u| u, m, 1.0, spec)?;
    let c1 = (1.0 - nu) / nu;
    let c2 = nu / (1.0 - nu);
    let scale = 1.0 / (1.0 - t);
    Ok(FunctionalResult {
        value: scale * (c1 * left.value + c2 * right.value),
        est_error: scale.abs() * (c1 * left.est_error + c2 * right.est_error),
        evaluations: left.evaluations + right.evaluations,
    })
}

/// Mirror identity for `𝔠_{f,ν}(1, t)`:
/// `(1/(t−1))·[ (1−ν)/ν ∫_1^m f + ν/(1−ν) ∫_m^t f ]` with `m = (1−ν) + νt`.
pub fn hh_split_1t(
    f: &ConvexFn,
    t: f64,
    nu: f64,
    spec: &QuadratureSpec,
) -> Result<FunctionalResult, HhError> {
    if t == 1.0 {
        return Err(HhError::Domain("split identity undefined at t = 1".into()));
    }
    if !(nu > 0.0 && nu < 1.0) {
        return Err(HhError::OutOfDomain { what: "split-identity weight", value: nu });
    }
    check_domain(f, 1.0, t)?;
    let m = (1.0 - nu) + nu * t;
    let left = quad_fn(f, |u| u, 1.0, m, spec)?;
    let right = quad_fn(f, |u| u, m, t, spec)?;
    let c1 = (1.0 - nu) / nu;
    let c2 = nu / (1.0 - nu);
    let scale = 1.0 / (t - 1.0);
    Ok(FunctionalResult {
        value: scale * (c1 * left.value + c2 * right.value),
        est_error: scale.abs() * (c1 * left.est_error + c2 * right.est_error),
        evaluations: left.evaluations + right.evaluations,
    })
}

/// Inner refinement `ℜ⁽¹⁾ = f(x ∇_{ν/2} y) ∇_ν f(x ∇_{(1+ν)/2} y)`, the
/// lower tightening of the sandwich.
pub fn refine_r1(f: &ConvexFn, x: f64, y: f64, nu: f64) -> Result<f64, HhError> {
    check_weight(nu)?;
    let u = f.eval(mix(x, y, nu / 2.0))?;
    let v = f.eval(mix(x, y, (1.0 + nu) / 2.0))?;
    Ok((1.0 - nu) * u + nu * v)
}

/// Outer refinement `ℜ⁽²⁾ = (f(x) ∇_ν f(y)) ∇ f(x ∇_ν y)`, the upper
/// tightening of the sandwich.
pub fn refine_r2(f: &ConvexFn, x: f64, y: f64, nu: f64) -> Result<f64, HhError> {
    check_weight(nu)?;
    let ends = (1.0 - nu) * f.eval(x)? + nu * f.eval(y)?;
    let mid = f.eval(mix(x, y, nu))?;
    Ok(0.5 * (ends + mid))
}

#[inline]
fn mix(x: f64, y: f64, w: f64) -> f64 {
    x + w * (y - x)
}

/// A two-sided bound with the bounded quantity and the quadrature error
/// spent computing all three.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketResult {
    pub bounds: BoundPair,
    pub middle: f64,
    pub est_error: f64,
}

impl BracketResult {
    pub fn min_slack(&self) -> f64 {
        self.bounds.min_slack(self.middle)
    }
}

/// Ratio bounds between weights for nonnegative `f`:
/// `min{(1−ν)/ν, ν/(1−ν)}·𝔠_{f,1/2}(t,1) ≤ 𝔠_{f,ν}(t,1) ≤ max{…}·𝔠_{f,1/2}(t,1)`.
///
/// Every sampled function value is tracked; anything below `−1e-12` raises
/// [`HhError::NegativeFunction`].
pub fn ratio_bounds_thm23(
    f: &ConvexFn,
    t: f64,
    nu: f64,
    spec: &QuadratureSpec,
) -> Result<BracketResult, HhError> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(HhError::OutOfDomain { what: "ratio-bound weight", value: nu });
    }
    if t == 1.0 {
        return Err(HhError::Domain("ratio bounds undefined at t = 1".into()));
    }
    let min_seen = Cell::new(f64::INFINITY);
    let min_at = Cell::new(f64::NAN);
    let tracked = |x: f64| -> Result<f64, HhError> {
        let v = f.eval(x)?;
        if v < min_seen.get() {
            min_seen.set(v);
            min_at.set(x);
        }
        Ok(v)
    };

    check_domain(f, t, 1.0)?;
    let eval_c = |nu_val: f64| -> Result<FunctionalResult, HhError> {
        let first =
            integrate(|lam| tracked(mix(t, 1.0, nu_val * lam)), 0.0, 1.0, spec).map_err(HhError::from)?;
        let second = integrate(|lam| tracked(mix(1.0, t, (1.0 - nu_val) * lam)), 0.0, 1.0, spec)
            .map_err(HhError::from)?;
        Ok(FunctionalResult {
            value: (1.0 - nu_val) * first.value + nu_val * second.value,
            est_error: (1.0 - nu_val) * first.est_error + nu_val * second.est_error,
            evaluations: first.evaluations + second.evaluations,
        })
    };

    let c_nu = eval_c(nu)?;
    let c_half = eval_c(0.5)?;
    if min_seen.get() < -1e-12 {
        return Err(HhError::NegativeFunction { x: min_at.get(), value: min_seen.get() });
    }
    let q = (1.0 - nu) / nu;
    let (lo, hi) = (q.min(1.0 / q), q.max(1.0 / q));
    Ok(BracketResult {
        bounds: BoundPair::standard(lo * c_half.value, hi * c_half.value),
        middle: c_nu.value,
        est_error: c_nu.est_error + hi * c_half.est_error,
    })
}

/// The convex-gap bracket at points `x, y`:
/// `2r·Δ ≤ f(x) ∇_t f(y) − f(x ∇_t y) ≤ 2R·Δ` with
/// `Δ = f(x) ∇ f(y) − f(x ∇ y)`, `r = min{t, 1−t}`, `R = max{t, 1−t}`.
pub fn convex_gap_bounds(f: &ConvexFn, x: f64, y: f64, t: f64) -> Result<BracketResult, HhError> {
    check_weight(t)?;
    let fx = f.eval(x)?;
    let fy = f.eval(y)?;
    let middle = (1.0 - t) * fx + t * fy - f.eval(mix(x, y, t))?;
    let delta = 0.5 * (fx + fy) - f.eval(mix(x, y, 0.5))?;
    let r = t.min(1.0 - t);
    let big_r = t.max(1.0 - t);
    Ok(BracketResult {
        bounds: BoundPair::standard(2.0 * r * delta, 2.0 * big_r * delta),
        middle,
        est_error: 0.0,
    })
}

/// The deviation integral
/// `D(ν) = ∫₀¹ [ f(x∇_{νλ}y) ∇ f(y∇_{(1−ν)λ}x) − f(x ∇_{(1+λ(2ν−1))/2} y) ] dλ ≥ 0`,
/// which brackets `𝔠_{f,ν} − f(x ∇_ν y)` between `2rD` and `2RD`.
pub fn thm210_integral(
    f: &ConvexFn,
    x: f64,
    y: f64,
    nu: f64,
    spec: &QuadratureSpec,
) -> Result<FunctionalResult, HhError> {
    check_weight(nu)?;
    check_domain(f, x, y)?;
    integrate(
        |lam| {
            let a1 = f.eval(mix(x, y, nu * lam))?;
            let a2 = f.eval(mix(y, x, (1.0 - nu) * lam))?;
            let mid = f.eval(mix(x, y, 0.5 * (1.0 + lam * (2.0 * nu - 1.0))))?;
            Ok::<_, HhError>(0.5 * (a1 + a2) - mid)
        },
        0.0,
        1.0,
        spec,
    )
    .map_err(HhError::from)
}

/// Closed form of the λ-averaged minimum weight
/// `r̃(ν) = ∫₀¹ (r₁ ∇_ν r₂) dλ` with `r₁ = min{νλ, 1−νλ}`,
/// `r₂ = min{(1−ν)λ, 1−(1−ν)λ}`:
/// `((2ν−1)²|2ν−1| + 6ν(1−ν) − 1) / (8ν(1−ν))`. Peaks at `r̃(1/2) = 1/4`.
pub fn r_tilde(nu: f64) -> Result<f64, HhError> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(HhError::OutOfDomain { what: "r_tilde", value: nu });
    }
    let u = 2.0 * nu - 1.0;
    Ok((u * u * u.abs() + 6.0 * nu * (1.0 - nu) - 1.0) / (8.0 * nu * (1.0 - nu)))
}

/// Closed form of the λ-averaged maximum weight
/// `R̃(ν) = (1 + 2ν(1−ν) − (2ν−1)²|2ν−1|) / (8ν(1−ν))`; satisfies
/// `r̃ + R̃ ≡ 1` and troughs at `R̃(1/2) = 3/4`.
#[allow(non_snake_case)]
pub fn R_tilde(nu: f64) -> Result<f64, HhError> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(HhError::OutOfDomain { what: "R_tilde", value: nu });
    }
    let u = 2.0 * nu - 1.0;
    Ok((1.0 + 2.0 * nu * (1.0 - nu) - u * u * u.abs()) / (8.0 * nu * (1.0 - nu)))
}

/// Quadrature evaluation of the `r̃`/`R̃` definitions, used as the
/// independent route against the closed forms.
pub fn r_tilde_by_quadrature(nu: f64, spec: &QuadratureSpec) -> Result<(f64, f64), HhError> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(HhError::OutOfDomain { what: "r_tilde", value: nu });
    }
    type NoErr = std::convert::Infallible;
    let r = integrate::<NoErr>(
        |lam| {
            let r1 = (nu * lam).min(1.0 - nu * lam);
            let r2 = ((1.0 - nu) * lam).min(1.0 - (1.0 - nu) * lam);
            Ok((1.0 - nu) * r1 + nu * r2)
        },
        0.0,
        1.0,
        spec,
    )
    .map_err(|e| match e {
        QuadError::ToleranceNotMet { value, est_error } => HhError::Quadrature { value, est_error },
        QuadError::Integrand(never) => match never {},
    })?;
    let big = integrate::<NoErr>(
        |lam| {
            let r1 = (nu * lam).max(1.0 - nu * lam);
            let r2 = ((1.0 - nu) * lam).max(1.0 - (1.0 - nu) * lam);
            Ok((1.0 - nu) * r1 + nu * r2)
        },
        0.0,
        1.0,
        spec,
    )
    .map_err(|e| match e {
        QuadError::ToleranceNotMet { value, est_error } => HhError::Quadrature { value, est_error },
        QuadError::Integrand(never) => match never {},
    })?;
    Ok((r.value, big.value))
}

/// Refinement of the upper half of the sandwich:
/// `2r̃(ν)Δ ≤ f(x) ∇_ν f(y) − 𝔠_{f,ν}(x, y) ≤ 2R̃(ν)Δ` with
/// `Δ = f(x) ∇ f(y) − f(x ∇ y)`.
pub fn thm217_bounds(
    f: &ConvexFn,
    x: f64,
    y: f64,
    nu: f64,
    spec: &QuadratureSpec,
) -> Result<BracketResult, HhError> {
    let rt = r_tilde(nu)?;
    let bt = R_tilde(nu)?;
    let c = hh_functional(f, x, y, nu, spec)?;
    let middle = (1.0 - nu) * f.eval(x)? + nu * f.eval(y)? - c.value;
    let delta = 0.5 * (f.eval(x)? + f.eval(y)?) - f.eval(mix(x, y, 0.5))?;
    Ok(BracketResult {
        bounds: BoundPair::standard(2.0 * rt * delta, 2.0 * bt * delta),
        middle,
        est_error: c.est_error,
    })
}

/// A one-sided bound `value ≤ bound` with the quadrature error spent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSidedBound {
    pub value: f64,
    pub bound: f64,
    pub est_error: f64,
}

impl OneSidedBound {
    pub fn slack(&self) -> f64 {
        self.bound - self.value
    }
}

/// Midpoint-value upper bound through the deviation integral:
/// `f(x ∇_ν y) ≤ f(x) ∇_ν f(y) − 2r·D(ν)` with `r = min{ν, 1−ν}`.
pub fn cor214_upper(
    f: &ConvexFn,
    x: f64,
    y: f64,
    nu: f64,
    spec: &QuadratureSpec,
) -> Result<OneSidedBound, HhError> {
    check_weight(nu)?;
    let d = thm210_integral(f, x, y, nu, spec)?;
    let r = nu.min(1.0 - nu);
    let value = f.eval(mix(x, y, nu))?;
    let bound = (1.0 - nu) * f.eval(x)? + nu * f.eval(y)? - 2.0 * r * d.value;
    Ok(OneSidedBound { value, bound, est_error: 2.0 * r * d.est_error })
}

/// Weight-integrated upper bound:
/// `∫₀¹ f(x ∇_ν y) dν ≤ f(x) ∇ f(y) − ∫₀¹ (1−|2ν−1|)·D(ν) dν`
/// by nested quadrature (the inner `D` runs at a tightened tolerance so the
/// outer integral does not chase its noise).
pub fn cor215_integrated(
    f: &ConvexFn,
    x: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<OneSidedBound, HhError> {
    check_domain(f, x, y)?;
    let lhs = quad_fn(f, |nu| mix(x, y, nu), 0.0, 1.0, spec)?;
    // Inner and outer tolerances must sit above the integrand's roundoff
    // floor, which scales with the function values (endpoint values bound a
    // convex function's magnitude up to its interior dip).
    let f_scale = f.eval(x)?.abs().max(f.eval(y)?.abs()).max(1.0);
    let inner_spec = QuadratureSpec::new(
        (spec.abs_tol() * 1e-3).max(1e-14 * f_scale),
        (spec.rel_tol() * 1e-3).max(5e-15),
        spec.max_depth(),
        spec.panel_order(),
    )
    .expect("derived spec stays valid");
    let outer_spec = QuadratureSpec::new(
        spec.abs_tol().max(3e-13 * f_scale),
        spec.rel_tol(),
        spec.max_depth(),
        spec.panel_order(),
    )
    .expect("derived spec stays valid");
    // split at the |2ν−1| kink
    let mut correction = FunctionalResult::exact(0.0);
    for (lo, hi) in [(0.0, 0.5), (0.5, 1.0)] {
        let part = integrate(
            |nu| {
                let d = thm210_integral(f, x, y, nu, &inner_spec)?;
                Ok::<_, HhError>((1.0 - (2.0 * nu - 1.0).abs()) * d.value)
            },
            lo,
            hi,
            &outer_spec,
        )
        .map_err(HhError::from)?;
        correction = FunctionalResult {
            value: correction.value + part.value,
            est_error: correction.est_error + part.est_error,
            evaluations: correction.evaluations + part.evaluations,
        };
    }
    let bound = 0.5 * (f.eval(x)? + f.eval(y)?) - correction.value;
    Ok(OneSidedBound {
        value: lhs.value,
        bound,
        est_error: lhs.est_error + correction.est_error,
    })
}
