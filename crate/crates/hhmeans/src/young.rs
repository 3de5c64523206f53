//! The Young gap `(1−ν) + νt − t^ν` and its classical bound families.
//!
//! The gap is the scalar AM-GM deficit at the point `t` with weight `ν`. Four
//! bound families bracket it:
//!
//! - Kittaneh-Manasrah: `r(√t−1)² ≤ gap ≤ R(√t−1)²`,
//! - Cartwright-Field: `½ν(1−ν)(t−1)²/max{t,1} ≤ gap ≤ ½ν(1−ν)(t−1)²/min{t,1}`,
//! - Alzer-Fonseca-Kovačec (log form): `½ν(1−ν)·min{t,1}·ln²t ≤ gap ≤ … max{t,1} …`,
//! - Alzer-Fonseca-Kovačec (two-parameter): `min{ν/λ, (1−ν)/(1−λ)}·gap_λ ≤ gap_ν ≤ max{…}·gap_λ`,
//!
//! with `r = min{ν, 1−ν}` and `R = max{ν, 1−ν}`. Two difference identities
//! re-express the gap through logarithmic means of `t` and `1`, and
//! [`prop26_bounds`] carries the four families over to those differences,
//! with every inequality reversing for `0 < t < 1`.

use std::fmt;

use crate::means::{
    logarithmic_mean, rep_function, LimitPolicy, PositivePair, Weight,
};

/// Errors raised by the identity-style operations.
#[derive(Debug, Clone, PartialEq)]
pub enum YoungError {
    /// `t = 1` makes both sides of an identity `0/0`; callers should go
    /// through the limit-aware mean evaluators instead.
    UnitArgument,
    /// `t` must be positive and finite.
    InvalidArgument { t: f64 },
    /// The operation needs an interior weight or parameter.
    NonInterior { what: &'static str, value: f64 },
}

impl fmt::Display for YoungError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YoungError::UnitArgument => write!(f, "t = 1 is outside the identity domain"),
            YoungError::InvalidArgument { t } => {
                write!(f, "argument must be positive and finite, got {t}")
            }
            YoungError::NonInterior { what, value } => {
                write!(f, "{what} must lie strictly inside (0, 1), got {value}")
            }
        }
    }
}

impl std::error::Error for YoungError {}

/// Orientation of a two-sided bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `lower ≤ middle ≤ upper`.
    Standard,
    /// `lower ≥ middle ≥ upper` (the displayed inequalities reversed).
    Reversed,
}

/// A two-sided bound whose sides keep the orientation of the statement they
/// come from, rather than being swapped into sorted order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
    pub direction: Direction,
}

impl BoundPair {
    pub fn standard(lower: f64, upper: f64) -> Self {
        Self { lower, upper, direction: Direction::Standard }
    }

    /// Smallest signed slack of `middle` against both sides; negative means
    /// the bracket is violated.
    pub fn min_slack(&self, middle: f64) -> f64 {
        match self.direction {
            Direction::Standard => (middle - self.lower).min(self.upper - middle),
            Direction::Reversed => (self.lower - middle).min(middle - self.upper),
        }
    }

    pub fn contains(&self, middle: f64, tol: f64) -> bool {
        self.min_slack(middle) >= -tol
    }
}

fn check_t(t: f64) -> Result<(), YoungError> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(YoungError::InvalidArgument { t })
    }
}

/// The Young gap `(1−ν) + νt − t^ν ≥ 0`, computed as
/// `ν·expm1(h) − expm1(νh)` with `h = ln t` so it vanishes exactly at `t = 1`
/// and at endpoint weights.
pub fn young_gap(t: f64, w: Weight) -> f64 {
    debug_assert!(t > 0.0);
    let h = t.ln();
    w.nu() * f64::exp_m1(h) - f64::exp_m1(w.nu() * h)
}

/// Kittaneh-Manasrah bounds `r(√t−1)² ≤ gap ≤ R(√t−1)²`.
pub fn km_bounds(t: f64, w: Weight) -> BoundPair {
    let s = (t.sqrt() - 1.0).powi(2);
    BoundPair::standard(w.r() * s, w.big_r() * s)
}

/// Cartwright-Field bounds `½ν(1−ν)(t−1)²/max{t,1} ≤ gap ≤ ½ν(1−ν)(t−1)²/min{t,1}`.
pub fn cf_bounds(t: f64, w: Weight) -> BoundPair {
    let c = 0.5 * w.nu() * (1.0 - w.nu()) * (t - 1.0).powi(2);
    BoundPair::standard(c / t.max(1.0), c / t.min(1.0))
}

/// Alzer-Fonseca-Kovačec log-form bounds
/// `½ν(1−ν)·min{t,1}·ln²t ≤ gap ≤ ½ν(1−ν)·max{t,1}·ln²t`.
pub fn afk_log_bounds(t: f64, w: Weight) -> BoundPair {
    let c = 0.5 * w.nu() * (1.0 - w.nu()) * t.ln().powi(2);
    BoundPair::standard(c * t.min(1.0), c * t.max(1.0))
}

/// The two-parameter Alzer-Fonseca-Kovačec bounds, bracketing the gap at `ν`
/// by the gap at `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoParamBounds {
    pub bounds: BoundPair,
    /// Marks the `λ = 1−ν` specialization.
    pub reflected: bool,
}

/// `min{ν/λ, (1−ν)/(1−λ)}·gap(t, λ) ≤ gap(t, ν) ≤ max{…}·gap(t, λ)` for
/// interior `ν, λ`.
pub fn afk_two_param_bounds(t: f64, w: Weight, lam: f64) -> Result<TwoParamBounds, YoungError> {
    check_t(t)?;
    if !(lam > 0.0 && lam < 1.0) {
        return Err(YoungError::NonInterior { what: "lambda", value: lam });
    }
    if !w.is_interior() {
        return Err(YoungError::NonInterior { what: "weight", value: w.nu() });
    }
    let lam_w = Weight::new(lam).expect("interior lambda");
    let base = young_gap(t, lam_w);
    let q1 = w.nu() / lam;
    let q2 = (1.0 - w.nu()) / (1.0 - lam);
    Ok(TwoParamBounds {
        bounds: BoundPair::standard(q1.min(q2) * base, q1.max(q2) * base),
        reflected: lam == 1.0 - w.nu(),
    })
}

/// Both routes of a difference identity: the mean-difference side and the
/// gap-ratio side. The two agree to roundoff; [`DifferenceIdentity::residual`]
/// measures by how much.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferenceIdentity {
    /// The difference of logarithmic means.
    pub lhs: f64,
    /// The same quantity through the Young gap.
    pub rhs: f64,
}

impl DifferenceIdentity {
    /// The identity value (mean-difference route).
    pub fn value(&self) -> f64 {
        self.lhs
    }

    /// `|lhs − rhs| / max(|lhs|, |rhs|)`.
    pub fn residual(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.lhs - self.rhs).abs() / scale
        }
    }
}

/// `L(t, 1) − L(t^ν, 1) = gap(t, ν) / (ν·ln t)` for `t ≠ 1` and interior `ν`,
/// where `L` is the unweighted logarithmic mean.
pub fn lemma25_difference(
    t: f64,
    w: Weight,
    lp: &LimitPolicy,
) -> Result<DifferenceIdentity, YoungError> {
    check_t(t)?;
    if t == 1.0 {
        return Err(YoungError::UnitArgument);
    }
    if !w.is_interior() {
        return Err(YoungError::NonInterior { what: "weight", value: w.nu() });
    }
    let h = t.ln();
    let t_nu = (w.nu() * h).exp();
    let lhs = lmean1(t, lp) - lmean1(t_nu, lp);
    let rhs = young_gap(t, w) / (w.nu() * h);
    Ok(DifferenceIdentity { lhs, rhs })
}

/// `f_ν(t) − L(t, 1) = (2ν−1)·gap(t, ν) / (ν(1−ν)·ln t)` for `t ≠ 1` and
/// interior `ν`, where `f_ν` is the representing function of the weighted
/// logarithmic mean. Exactly zero at `ν = 1/2`.
pub fn lemma27_difference(
    t: f64,
    w: Weight,
    lp: &LimitPolicy,
) -> Result<DifferenceIdentity, YoungError> {
    check_t(t)?;
    if t == 1.0 {
        return Err(YoungError::UnitArgument);
    }
    if !w.is_interior() {
        return Err(YoungError::NonInterior { what: "weight", value: w.nu() });
    }
    if w.nu() == 0.5 {
        return Ok(DifferenceIdentity { lhs: 0.0, rhs: 0.0 });
    }
    let h = t.ln();
    let f_nu = rep_function(t, w, lp).expect("validated arguments");
    let lhs = f_nu - lmean1(t, lp);
    let rhs = (2.0 * w.nu() - 1.0) / (w.nu() * (1.0 - w.nu()) * h) * young_gap(t, w);
    Ok(DifferenceIdentity { lhs, rhs })
}

fn lmean1(t: f64, lp: &LimitPolicy) -> f64 {
    logarithmic_mean(PositivePair::new(t, 1.0).expect("t > 0"), lp)
}

/// One bracket of [`prop26_bounds`], labelled by the bound family it scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledBounds {
    pub label: &'static str,
    pub bounds: BoundPair,
}

/// The four bound families scaled onto the log-mean difference.
#[derive(Debug, Clone, PartialEq)]
pub struct Prop26 {
    /// `L(t, 1) − L(t^ν, 1)`.
    pub middle: f64,
    pub brackets: [LabeledBounds; 4],
}

/// Brackets `L(t,1) − L(t^ν,1)` four ways for `t ≠ 1` and interior `ν`:
/// by `(r/ν)(√t−1)²/ln t` and `(R/ν)(√t−1)²/ln t`; by
/// `((1−ν)/2)(t−1)²/(max{t,1}·ln t)` and the `min{t,1}` version; by
/// `((1−ν)/2)·min{t,1}·ln t` and the `max{t,1}` version; and by scaled
/// copies of `L(t,1) − L(t^{1−ν},1)`. All four reverse for `0 < t < 1`.
pub fn prop26_bounds(t: f64, w: Weight, lp: &LimitPolicy) -> Result<Prop26, YoungError> {
    check_t(t)?;
    if t == 1.0 {
        return Err(YoungError::UnitArgument);
    }
    if !w.is_interior() {
        return Err(YoungError::NonInterior { what: "weight", value: w.nu() });
    }
    let nu = w.nu();
    let direction = if t > 1.0 { Direction::Standard } else { Direction::Reversed };
    let h = t.ln();
    let middle = lemma25_difference(t, w, lp)?.lhs;

    let s = (t.sqrt() - 1.0).powi(2) / h;
    let km = BoundPair { lower: w.r() / nu * s, upper: w.big_r() / nu * s, direction };

    let c = 0.5 * (1.0 - nu) * (t - 1.0).powi(2) / h;
    let cf = BoundPair { lower: c / t.max(1.0), upper: c / t.min(1.0), direction };

    let d = 0.5 * (1.0 - nu) * h;
    let afk = BoundPair { lower: d * t.min(1.0), upper: d * t.max(1.0), direction };

    let reflected = lmean1(t, lp) - lmean1(((1.0 - nu) * h).exp(), lp);
    let q = nu / (1.0 - nu);
    let c2 = (1.0 - nu) / nu;
    let two = BoundPair {
        lower: c2 * q.min(1.0 / q) * reflected,
        upper: c2 * q.max(1.0 / q) * reflected,
        direction,
    };

    Ok(Prop26 {
        middle,
        brackets: [
            LabeledBounds { label: "km", bounds: km },
            LabeledBounds { label: "cf", bounds: cf },
            LabeledBounds { label: "afk", bounds: afk },
            LabeledBounds { label: "two-param", bounds: two },
        ],
    })
}
