//! Every mean-inequality chain as an executable, per-term-reporting
//! predicate, plus the seeded randomized verification suite.
//!
//! Each chain evaluates its terms at one input point and packages them into a
//! [`ChainReport`]: ordered labelled terms, consecutive slacks, and the worst
//! slack with its edge. Multiplicative chains are verified as additive chains
//! in log space so one additive tolerance covers quantities spanning many
//! decades.
//!
//! The violation test for a report is `min_slack < −tol` where
//! `tol = tol_rel · max|term| + floor`. The floor accounts for the absolute
//! rounding carried by difference-of-large-terms chains (of order
//! `ε·max(a,b)`) and for quadrature error budgets; without it, samples whose
//! chain terms are tiny relative to the inputs would flag pure roundoff.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::convex::{convexity_probe, ConvexFn, Interval};
use crate::hh::{
    self, cor214_upper, cor215_integrated, hh_functional, ratio_bounds_thm23, thm210_integral,
    thm217_bounds, HhError,
};
use crate::means::{
    self, kantorovich, ln_alpha, ln_weighted_geometric, ln_weighted_identric,
    rep_function, weighted_arithmetic, weighted_geometric, weighted_logarithmic, LimitPolicy,
    MeanError, PositivePair, Weight,
};
use crate::quad::QuadratureSpec;
use crate::sampling::{rng_for_seed, unit_f64};
use crate::young::{prop26_bounds, BoundPair, Direction, YoungError};

/// Rounding floor scale: absolute slack allowance per unit of input
/// magnitude, covering the `O(ε)` error of each difference of large terms.
const ROUNDING_FLOOR: f64 = 1e-13;

/// Absolute slack floor for the log-space chains: their terms are built from
/// entropy slopes conditioned like `ln max(a, b)`.
fn ln_chain_floor(a: f64, b: f64) -> f64 {
    ROUNDING_FLOOR * (1.0 + a.max(b).ln().abs())
}

/// Errors raised while evaluating a chain at one input.
#[derive(Debug, Clone, PartialEq)]
pub enum ChainError {
    Mean(MeanError),
    Young(YoungError),
    Functional(HhError),
    BadParam(String),
}

impl fmt::Display for ChainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainError::Mean(e) => write!(f, "{e}"),
            ChainError::Young(e) => write!(f, "{e}"),
            ChainError::Functional(e) => write!(f, "{e}"),
            ChainError::BadParam(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for ChainError {}

impl From<MeanError> for ChainError {
    fn from(e: MeanError) -> Self {
        ChainError::Mean(e)
    }
}

impl From<YoungError> for ChainError {
    fn from(e: YoungError) -> Self {
        ChainError::Young(e)
    }
}

impl From<HhError> for ChainError {
    fn from(e: HhError) -> Self {
        ChainError::Functional(e)
    }
}

/// Per-sample evaluation of an inequality chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub chain_name: String,
    /// Named inputs, e.g. `a`, `b`, `nu`, and any extras.
    pub inputs: Vec<(String, f64)>,
    /// Ordered labelled terms; the chain claims they are nondecreasing.
    pub terms: Vec<(String, f64)>,
    /// Consecutive differences `terms[i+1] − terms[i]`.
    pub slacks: Vec<f64>,
    pub violated: bool,
    pub min_slack: f64,
    /// Labels of the edge realizing `min_slack`.
    pub min_slack_edge: (String, String),
    /// `max|term|`, the scale the relative tolerance applies to.
    pub scale: f64,
    /// Absolute tolerance the violation test used.
    pub tol: f64,
}

impl ChainReport {
    /// Builds a report from ordered terms; `tol` is the absolute slack
    /// tolerance below which the chain counts as violated.
    pub fn new(
        chain_name: impl Into<String>,
        inputs: Vec<(String, f64)>,
        terms: Vec<(String, f64)>,
        tol: f64,
    ) -> Self {
        assert!(terms.len() >= 2, "a chain needs at least two terms");
        let slacks: Vec<f64> = terms.windows(2).map(|w| w[1].1 - w[0].1).collect();
        let (worst_idx, min_slack) = slacks
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, s)| if s < acc.1 { (i, s) } else { acc });
        let scale = terms.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
        Self {
            chain_name: chain_name.into(),
            min_slack_edge: (terms[worst_idx].0.clone(), terms[worst_idx + 1].0.clone()),
            violated: min_slack < -tol,
            min_slack,
            slacks,
            inputs,
            terms,
            scale,
            tol,
        }
    }

    /// `min_slack / tol`: comparable across samples of different magnitude;
    /// below `−1` means violated.
    pub fn score(&self) -> f64 {
        self.min_slack / self.tol
    }
}

fn named(pairs: &[(&str, f64)]) -> Vec<(String, f64)> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn terms_of(pairs: Vec<(&str, f64)>) -> Vec<(String, f64)> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Orients a bracket into nondecreasing term order: reversed brackets list
/// the displayed upper side first.
fn bracket_terms(bounds: BoundPair, middle: f64) -> Vec<(&'static str, f64)> {
    match bounds.direction {
        Direction::Standard => {
            vec![("lower", bounds.lower), ("middle", middle), ("upper", bounds.upper)]
        }
        Direction::Reversed => {
            vec![("upper", bounds.upper), ("middle", middle), ("lower", bounds.lower)]
        }
    }
}

/// Five-term chain interleaving the geometric, logarithmic, and arithmetic
/// means: `a♯_νb ≤ (a♯_{ν/2}b)∇_ν(a♯_{(1+ν)/2}b) ≤ L_ν ≤ (a∇_νb)∇(a♯_νb) ≤ a∇_νb`.
pub fn chain_cor12(p: PositivePair, w: Weight, lp: &LimitPolicy, tol_rel: f64) -> ChainReport {
    if p.a() == p.b() {
        // every term collapses to the common value
        let terms = ["geo", "refined_geo", "logmean", "mid_arith_geo", "arith"]
            .map(|l| (l, p.a()))
            .to_vec();
        return ChainReport::new(
            "cor12",
            named(&[("a", p.a()), ("b", p.b()), ("nu", w.nu())]),
            terms_of(terms),
            tol_rel * p.a(),
        );
    }
    let geo = weighted_geometric(p, w);
    let refined = refined_geometric(p, w, 0.5);
    let logmean = weighted_logarithmic(p, w, lp);
    let arith = weighted_arithmetic(p, w);
    let mid = 0.5 * (arith + geo);
    let terms = terms_of(vec![
        ("geo", geo),
        ("refined_geo", refined),
        ("logmean", logmean),
        ("mid_arith_geo", mid),
        ("arith", arith),
    ]);
    let scale = terms.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
    let tol = tol_rel * scale + ROUNDING_FLOOR * p.a().max(p.b());
    ChainReport::new(
        "cor12",
        named(&[("a", p.a()), ("b", p.b()), ("nu", w.nu())]),
        terms,
        tol,
    )
}

/// `(a♯_{cν}b) ∇_ν (a♯_{c(1+1/c−1)···}b)` helper: the inner refinement of the
/// geometric-to-logarithmic gap at scale `c`, i.e.
/// `(a♯_{cν}b) ∇_ν (a♯_{c+ (1−c)···}b)` with the two geometric weights
/// `cν` and `c + cν` for `c = 1/2`, or `3ν/4` and `(1+3ν)/4` for `c = 3/4`.
fn refined_geometric(p: PositivePair, w: Weight, c: f64) -> f64 {
    let nu = w.nu();
    let lo = Weight::new(c * nu).expect("scaled weight in [0,1]");
    let hi = Weight::new(c * nu + (1.0 - c)).expect("shifted weight in [0,1]");
    (1.0 - nu) * weighted_geometric(p, lo) + nu * weighted_geometric(p, hi)
}

/// Eight-term refinement chain between `a♯_νb` and `a∇_νb`:
///
/// ```text
/// a♯_νb ≤ (a♯_{3ν/4}b)∇_ν(a♯_{(1+3ν)/4}b)
///       ≤ (√a♯_ν√b)·L_ν(√a,√b)
///       ≤ (a♯_νb)∇((a♯_{ν/2}b)∇_ν(a♯_{(1+ν)/2}b))
///       ≤ (a♯_{ν/2}b)∇_ν(a♯_{(1+ν)/2}b)
///       ≤ L_ν(a,b)
///       ≤ (a♯_νb)∇(a∇_νb)
///       ≤ a∇_νb
/// ```
pub fn chain_thm28(p: PositivePair, w: Weight, lp: &LimitPolicy, tol_rel: f64) -> ChainReport {
    if p.a() == p.b() {
        let terms = [
            "geo",
            "refined_quarter",
            "sqrt_split",
            "mid_geo_refined",
            "refined_half",
            "logmean",
            "mid_geo_arith",
            "arith",
        ]
        .map(|l| (l, p.a()))
        .to_vec();
        return ChainReport::new(
            "thm28",
            named(&[("a", p.a()), ("b", p.b()), ("nu", w.nu())]),
            terms_of(terms),
            tol_rel * p.a(),
        );
    }
    let geo = weighted_geometric(p, w);
    let refined_q = refined_geometric(p, w, 0.75);
    let sq = PositivePair::new(p.a().sqrt(), p.b().sqrt()).expect("positive roots");
    let sqrt_split = weighted_geometric(sq, w) * weighted_logarithmic(sq, w, lp);
    let refined_h = refined_geometric(p, w, 0.5);
    let mid_geo_refined = 0.5 * (geo + refined_h);
    let logmean = weighted_logarithmic(p, w, lp);
    let arith = weighted_arithmetic(p, w);
    let mid_geo_arith = 0.5 * (geo + arith);
    let terms = terms_of(vec![
        ("geo", geo),
        ("refined_quarter", refined_q),
        ("sqrt_split", sqrt_split),
        ("mid_geo_refined", mid_geo_refined),
        ("refined_half", refined_h),
        ("logmean", logmean),
        ("mid_geo_arith", mid_geo_arith),
        ("arith", arith),
    ]);
    let scale = terms.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
    let tol = tol_rel * scale + ROUNDING_FLOOR * p.a().max(p.b());
    ChainReport::new(
        "thm28",
        named(&[("a", p.a()), ("b", p.b()), ("nu", w.nu())]),
        terms,
        tol,
    )
}

/// The self-improving sequence `g_m(t) = t^{(1−2^{−m})ν}·f_ν(t^{2^{−m}})`,
/// nonincreasing in `m` and converging to `t^ν`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub m_values: Vec<u32>,
    pub g_values: Vec<f64>,
    /// Whether `g_m ≤ g_{m−1}` held (within rounding) for every step.
    pub monotone: bool,
    /// `|g_{m_max} − t^ν|`.
    pub limit_gap: f64,
}

/// Evaluates the sequence for `m = 0..=m_max` (`g_0 = f_ν(t)`).
pub fn sequence_cor29(
    t: f64,
    w: Weight,
    m_max: u32,
    lp: &LimitPolicy,
) -> Result<SequenceReport, ChainError> {
    if !(t > 0.0 && t.is_finite()) || t == 1.0 {
        return Err(ChainError::BadParam(format!("sequence needs positive t ≠ 1, got {t}")));
    }
    if m_max > 40 {
        return Err(ChainError::BadParam(format!("m_max must be at most 40, got {m_max}")));
    }
    let h = t.ln();
    let t_pow_nu = (w.nu() * h).exp();
    let mut m_values = Vec::with_capacity(m_max as usize + 1);
    let mut g_values = Vec::with_capacity(m_max as usize + 1);
    for m in 0..=m_max {
        let s = 0.5f64.powi(m as i32);
        let root = (s * h).exp();
        let g = ((1.0 - s) * w.nu() * h).exp() * rep_function(root, w, lp)?;
        m_values.push(m);
        g_values.push(g);
    }
    let scale = g_values[0].abs().max(t_pow_nu.abs());
    let monotone = g_values.windows(2).all(|w| w[1] <= w[0] + 1e-12 * scale);
    let limit_gap = (g_values[m_max as usize] - t_pow_nu).abs();
    Ok(SequenceReport { m_values, g_values, monotone, limit_gap })
}

/// A closed-form two-sided bound together with the bounded quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub bounds: BoundPair,
    pub middle: f64,
}

impl Bracket {
    pub fn min_slack(&self) -> f64 {
        self.bounds.min_slack(self.middle)
    }
}

/// Refinement and reverse of `a♯_νb ≤ L_ν(a,b)`:
/// brackets `L_ν − a♯_νb` by `(r or R)/(ln b − ln a) · B` where
/// `B = (a♯_νb − a)/ν + (b − a♯_νb)/(1−ν) − 4(√(ab) − a♯_νb)/(1−2ν)`,
/// the last piece replaced by its limit `2√(ab)(ln b − ln a)` inside the
/// `eps_nu` band around `ν = 1/2`.
pub fn cor213_bounds(p: PositivePair, w: Weight, lp: &LimitPolicy) -> Result<Bracket, ChainError> {
    if p.a() == p.b() {
        return Err(ChainError::Mean(MeanError::DiagonalArgument { a: p.a(), b: p.b() }));
    }
    if !w.is_interior() {
        return Err(ChainError::Mean(MeanError::OutOfDomain {
            what: "cor213 weight",
            value: w.nu(),
        }));
    }
    let (a, b, nu) = (p.a(), p.b(), w.nu());
    let h = means::log_ratio(b, a);
    let geo = weighted_geometric(p, w);
    let middle = weighted_logarithmic(p, w, lp) - geo;

    // 4(√(ab) − a♯_νb)/(1−2ν) without cancellation: √(ab) − ♯ = −√(ab)·expm1((ν−1/2)h)
    let root = (a * b).sqrt();
    let u = 1.0 - 2.0 * nu;
    let third = if (nu - 0.5).abs() < lp.eps_nu() {
        2.0 * root * h
    } else {
        -4.0 * root * f64::exp_m1(-0.5 * u * h) / u
    };
    let bracket = a * f64::exp_m1(nu * h) / nu + geo * f64::exp_m1((1.0 - nu) * h) / (1.0 - nu) - third;
    let scaled = bracket / h;
    Ok(Bracket {
        bounds: BoundPair::standard(w.r() * scaled, w.big_r() * scaled),
        middle,
    })
}

/// Brackets `a∇_νb − L_ν(a,b)` by `r̃(ν)(√a−√b)²` and `R̃(ν)(√a−√b)²`.
pub fn cor219_logmean(p: PositivePair, w: Weight, lp: &LimitPolicy) -> Result<Bracket, ChainError> {
    let rt = hh::r_tilde(w.nu())?;
    let bt = hh::R_tilde(w.nu())?;
    let s = (p.a().sqrt() - p.b().sqrt()).powi(2);
    let middle = weighted_arithmetic(p, w) - weighted_logarithmic(p, w, lp);
    Ok(Bracket { bounds: BoundPair::standard(rt * s, bt * s), middle })
}

/// Brackets the identric mean in log space:
/// `r̃(ν)·ln K + ln(a♯_νb) ≤ ln I_ν(a,b) ≤ R̃(ν)·ln K + ln(a♯_νb)`.
pub fn cor219_identric(p: PositivePair, w: Weight, lp: &LimitPolicy) -> Result<Bracket, ChainError> {
    let rt = hh::r_tilde(w.nu())?;
    let bt = hh::R_tilde(w.nu())?;
    let ln_k = kantorovich(p).ln();
    let ln_geo = ln_weighted_geometric(p, w);
    let middle = ln_weighted_identric(p, w, lp)?;
    Ok(Bracket {
        bounds: BoundPair::standard(rt * ln_k + ln_geo, bt * ln_k + ln_geo),
        middle,
    })
}

/// Refinement and reverse of the AM-GM ratio in log space:
/// `r·ln α_ν + r̃·ln K ≤ ln(a∇_νb) − ln(a♯_νb) ≤ R·ln α_ν + R̃·ln K`.
pub fn remark222_kantorovich(
    p: PositivePair,
    w: Weight,
    lp: &LimitPolicy,
) -> Result<Bracket, ChainError> {
    let rt = hh::r_tilde(w.nu())?;
    let bt = hh::R_tilde(w.nu())?;
    let ln_a = ln_alpha(p, w, lp)?;
    let ln_k = kantorovich(p).ln();
    let middle = weighted_arithmetic(p, w).ln() - ln_weighted_geometric(p, w);
    Ok(Bracket {
        bounds: BoundPair::standard(w.r() * ln_a + rt * ln_k, w.big_r() * ln_a + bt * ln_k),
        middle,
    })
}

/// Log-space upper bound for the identric mean. Outside the `eps_nu` band
/// the displayed `(1−2ν)`-exponent bound regroups into entropy slopes as
/// `ln I_ν ≤ −1 − S(a, b−a) + 2·S(a∇b, (ν−1/2)(b−a))`; inside the band it
/// reduces to `I_{1/2}(a,b) ≤ a∇b`.
pub fn remark222_identric_upper(
    p: PositivePair,
    w: Weight,
    lp: &LimitPolicy,
) -> Result<(f64, f64), ChainError> {
    let (a, b, nu) = (p.a(), p.b(), w.nu());
    if (nu - 0.5).abs() < lp.eps_nu() {
        let ln_i = ln_weighted_identric(p, Weight::HALF, lp)?;
        return Ok((ln_i, (0.5 * (a + b)).ln()));
    }
    let ln_i = ln_weighted_identric(p, w, lp)?;
    let delta = b - a;
    let bound = -1.0 - means::entropy_slope(a, delta)
        + 2.0 * means::entropy_slope(0.5 * (a + b), (nu - 0.5) * delta);
    Ok((ln_i, bound))
}

/// The p,q reparameterization of the chain: for `p > 1`, `q = p/(p−1)`,
/// verifies `ab ≤ L_{1/q}(a^p, b^q) ≤ a^p/p + b^q/q` and reports all three
/// terms.
pub fn young_pq_check(
    a: f64,
    b: f64,
    p_exp: f64,
    lp: &LimitPolicy,
    tol_rel: f64,
) -> Result<ChainReport, ChainError> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(ChainError::BadParam(format!("a, b must be positive, got ({a}, {b})")));
    }
    if !(p_exp > 1.0 && p_exp.is_finite()) {
        return Err(ChainError::BadParam(format!("exponent p must exceed 1, got {p_exp}")));
    }
    let q = p_exp / (p_exp - 1.0);
    let x = a.powf(p_exp);
    let y = b.powf(q);
    if x == y {
        return Err(ChainError::BadParam(format!("a^p = b^q = {x} is outside the chain domain")));
    }
    if !(x.is_finite() && y.is_finite() && x > 0.0 && y > 0.0) {
        return Err(ChainError::BadParam(format!("a^p = {x}, b^q = {y} overflowed")));
    }
    let pair = PositivePair::new(x, y).expect("positive powers");
    let nu = Weight::new(1.0 / q).expect("1/q in (0,1)");
    let middle = weighted_logarithmic(pair, nu, lp);
    let terms = terms_of(vec![("product", a * b), ("young_mean", middle), ("split", x / p_exp + y / q)]);
    let scale = terms.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
    let tol = tol_rel * scale + ROUNDING_FLOOR * x.max(y);
    Ok(ChainReport::new(
        "young-pq",
        named(&[("a", a), ("b", b), ("p", p_exp)]),
        terms,
        tol,
    ))
}

/// Registered chain identifiers; the names are the CLI contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainId {
    Cor12,
    Thm28,
    Cor29,
    Thm23,
    Prop26,
    Thm210,
    Cor213,
    Cor214,
    Cor215,
    Thm217,
    Cor218,
    Cor219Log,
    Cor219Identric,
    Rem222Kant,
    Rem222Identric,
    YoungPq,
}

impl ChainId {
    pub const ALL: [ChainId; 16] = [
        ChainId::Cor12,
        ChainId::Thm28,
        ChainId::Cor29,
        ChainId::Thm23,
        ChainId::Prop26,
        ChainId::Thm210,
        ChainId::Cor213,
        ChainId::Cor214,
        ChainId::Cor215,
        ChainId::Thm217,
        ChainId::Cor218,
        ChainId::Cor219Log,
        ChainId::Cor219Identric,
        ChainId::Rem222Kant,
        ChainId::Rem222Identric,
        ChainId::YoungPq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChainId::Cor12 => "cor12",
            ChainId::Thm28 => "thm28",
            ChainId::Cor29 => "cor29",
            ChainId::Thm23 => "thm23",
            ChainId::Prop26 => "prop26",
            ChainId::Thm210 => "thm210",
            ChainId::Cor213 => "cor213",
            ChainId::Cor214 => "cor214",
            ChainId::Cor215 => "cor215",
            ChainId::Thm217 => "thm217",
            ChainId::Cor218 => "cor218",
            ChainId::Cor219Log => "cor219-log",
            ChainId::Cor219Identric => "cor219-identric",
            ChainId::Rem222Kant => "rem222-kant",
            ChainId::Rem222Identric => "rem222-identric",
            ChainId::YoungPq => "young-pq",
        }
    }

    pub fn parse(s: &str) -> Option<ChainId> {
        ChainId::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Whether the chain integrates a convex function (and so accepts
    /// `--fn` and is subject to the quadrature sample cap).
    pub fn uses_function(self) -> bool {
        matches!(
            self,
            ChainId::Thm23
                | ChainId::Thm210
                | ChainId::Cor214
                | ChainId::Cor215
                | ChainId::Thm217
                | ChainId::Cor218
        )
    }

    /// Default per-chain sample cap; only the nested-quadrature chain needs
    /// one to keep full-suite runtime bounded.
    fn default_cap(self) -> Option<u64> {
        match self {
            ChainId::Cor215 => Some(2000),
            _ => None,
        }
    }
}

/// Configuration of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: u64,
    /// Relative slack tolerance (violation when `min_slack < −tol_rel·scale`
    /// minus floors).
    pub tol_rel: f64,
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
    pub nu_range: (f64, f64),
    /// Exponent range for the p,q chain.
    pub p_range: (f64, f64),
    /// Sequence depth for the self-improving chain.
    pub m_max: u32,
    /// Convex function for the functional chains; defaults per chain when
    /// absent (`exp` on log-mapped inputs; `x^2` for the ratio bounds).
    pub func: Option<ConvexFn>,
    pub quad: QuadratureSpec,
    pub policy: LimitPolicy,
    /// Overrides the per-chain quadrature sample cap.
    pub quad_cap: Option<u64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            samples: 1000,
            tol_rel: 1e-10,
            a_range: (1e-3, 1e3),
            b_range: (1e-3, 1e3),
            nu_range: (0.01, 0.99),
            p_range: (1.1, 4.0),
            m_max: 30,
            func: None,
            quad: QuadratureSpec::default(),
            policy: LimitPolicy::DEFAULT,
            quad_cap: None,
        }
    }
}

/// Aggregated result of one chain's suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub chain_name: String,
    /// Samples actually evaluated (after any quadrature cap).
    pub samples: u64,
    /// Draws skipped because a precondition made the sample degenerate.
    pub skipped: u64,
    pub violations: u64,
    /// Lowest `min_slack/tol` seen across all samples and sub-chains.
    pub worst_score: f64,
    /// The report realizing `worst_score`.
    pub worst: Option<ChainReport>,
}

/// Configuration problems that abort a suite (as opposed to mathematical
/// violations, which are counted).
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteError(pub String);

impl fmt::Display for SuiteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "suite configuration error: {}", self.0)
    }
}

impl std::error::Error for SuiteError {}

#[inline]
fn lerp(u: f64, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * u
}

#[inline]
fn log_lerp(u: f64, range: (f64, f64)) -> f64 {
    lerp(u, range.0.ln(), range.1.ln()).exp()
}

/// Shrinks `[lo, hi]` until `f` evaluates finitely at both ends; errors when
/// nothing evaluable remains.
fn finite_sample_interval(f: &ConvexFn, mut lo: f64, mut hi: f64) -> Result<(f64, f64), SuiteError> {
    let original = (lo, hi);
    for _ in 0..200 {
        if f.eval(hi).is_ok() {
            break;
        }
        hi = lo + 0.8 * (hi - lo);
    }
    for _ in 0..200 {
        if f.eval(lo).is_ok() {
            break;
        }
        lo = hi - 0.8 * (hi - lo);
    }
    if lo < hi && f.eval(lo).is_ok() && f.eval(hi).is_ok() {
        Ok((lo, hi))
    } else {
        Err(SuiteError(format!(
            "function {} has no evaluable range inside [{}, {}]",
            f.label(),
            original.0,
            original.1
        )))
    }
}

/// Resolved sampling plan for the functional chains.
struct FnPlan {
    f: ConvexFn,
    /// Interval the pair arguments are drawn from.
    pair: (f64, f64),
    /// Interval `t` is drawn from for the ratio-bound chain.
    t_range: (f64, f64),
}

fn fn_plan(cfg: &SuiteConfig, chain: ChainId) -> Result<FnPlan, SuiteError> {
    match &cfg.func {
        None => {
            // Defaults chosen so values never overflow under the configured
            // ranges: exp over log-mapped inputs for the pair chains, x² for
            // the nonnegative ratio bounds.
            if chain == ChainId::Thm23 {
                Ok(FnPlan {
                    f: ConvexFn::square(),
                    pair: (cfg.a_range.0.ln(), cfg.a_range.1.ln()),
                    t_range: cfg.a_range,
                })
            } else {
                Ok(FnPlan {
                    f: ConvexFn::exp(),
                    pair: (cfg.a_range.0.ln(), cfg.b_range.1.ln()),
                    t_range: cfg.a_range,
                })
            }
        }
        Some(f) => {
            let dom = f.domain();
            let lo = dom.lo.max(-1e3);
            let hi = dom.hi.min(1e3);
            if !(lo < hi) {
                return Err(SuiteError(format!(
                    "function {} has empty sampling domain {}",
                    f.label(),
                    dom
                )));
            }
            // Keep away from open endpoints by a hair so evaluation succeeds.
            let pad = 1e-9 * (hi - lo);
            let (lo, hi) = finite_sample_interval(f, lo + pad, hi - pad)?;
            let probe = convexity_probe(f, Interval::closed(lo, hi), 10_000, cfg.seed);
            if !probe.passed {
                return Err(SuiteError(format!(
                    "function {} failed the convexity probe on [{lo}, {hi}] (worst violation {}, witness {:?})",
                    f.label(),
                    probe.worst_violation,
                    probe.witness
                )));
            }
            let t_range = if chain == ChainId::Thm23 {
                // the ratio bounds integrate over [min(t,1), max(t,1)]
                let lo_t = cfg.a_range.0.max(lo.max(1e-12));
                let hi_t = cfg.a_range.1.min(hi);
                if !(lo_t < hi_t) || hi_t <= 0.0 {
                    return Err(SuiteError(format!(
                        "function {} cannot host the ratio-bound chain on t-range [{lo_t}, {hi_t}]",
                        f.label()
                    )));
                }
                (lo_t, hi_t)
            } else {
                cfg.a_range
            };
            Ok(FnPlan { f: f.clone(), pair: (lo, hi), t_range })
        }
    }
}

/// One chain input point. `a`/`b` hold the chain's natural pair arguments:
/// the function-domain points for the functional chains, `t` (in `a`) for
/// the one-variable chains. `p` is the Young exponent, used only by the
/// p,q chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub a: f64,
    pub b: f64,
    pub nu: f64,
    pub p: f64,
}

/// Why one sample produced no report.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleError {
    /// The point hit a precondition (equal arguments, `t = 1`); skipping it
    /// is deterministic.
    Degenerate(String),
    /// Evaluation failed for a configuration-level reason (domain exit,
    /// quadrature failure).
    Config(String),
}

impl fmt::Display for SampleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleError::Degenerate(msg) => write!(f, "degenerate sample: {msg}"),
            SampleError::Config(msg) => write!(f, "{msg}"),
        }
    }
}

/// A chain bound to a validated configuration, ready to evaluate points.
pub struct ChainContext<'a> {
    chain: ChainId,
    cfg: &'a SuiteConfig,
    plan: Option<FnPlan>,
}

impl<'a> ChainContext<'a> {
    /// Validates ranges and, for the functional chains, resolves and probes
    /// the convex function.
    pub fn new(chain: ChainId, cfg: &'a SuiteConfig) -> Result<Self, SuiteError> {
        for (name, (lo, hi)) in
            [("a_range", cfg.a_range), ("b_range", cfg.b_range), ("p_range", cfg.p_range)]
        {
            if !(lo > 0.0 && hi > lo && hi.is_finite()) {
                return Err(SuiteError(format!("{name} [{lo}, {hi}] is not a valid positive range")));
            }
        }
        let (nlo, nhi) = cfg.nu_range;
        if !(nlo > 0.0 && nhi < 1.0 && nlo < nhi) {
            return Err(SuiteError(format!("nu_range [{nlo}, {nhi}] must be a subinterval of (0, 1)")));
        }
        let plan = if chain.uses_function() { Some(fn_plan(cfg, chain)?) } else { None };
        Ok(Self { chain, cfg, plan })
    }

    pub fn chain(&self) -> ChainId {
        self.chain
    }

    /// The convex function the chain integrates, when it integrates one.
    pub fn function(&self) -> Option<&ConvexFn> {
        self.plan.as_ref().map(|p| &p.f)
    }

    /// Whether pair inputs supplied in `(a, b)` form should be mapped
    /// through `ln` before evaluation: true for the pair-functional chains
    /// running their default `exp` (so the defaults stay overflow-free).
    pub fn maps_pair_through_ln(&self) -> bool {
        self.chain.uses_function() && self.chain != ChainId::Thm23 && self.cfg.func.is_none()
    }

    /// Draws the next sample point from the stream.
    fn draw(&self, rng: &mut rand_chacha::ChaCha8Rng) -> SamplePoint {
        // Fixed draw shape per sample keeps the stream aligned across chains.
        let u = [unit_f64(rng), unit_f64(rng), unit_f64(rng), unit_f64(rng)];
        let (a, b) = match (&self.plan, self.chain) {
            (Some(plan), ChainId::Thm23) => (log_lerp(u[0], plan.t_range), 1.0),
            (Some(plan), _) => {
                (lerp(u[0], plan.pair.0, plan.pair.1), lerp(u[1], plan.pair.0, plan.pair.1))
            }
            (None, _) => (log_lerp(u[0], self.cfg.a_range), log_lerp(u[1], self.cfg.b_range)),
        };
        SamplePoint {
            a,
            b,
            nu: lerp(u[2], self.cfg.nu_range.0, self.cfg.nu_range.1),
            p: lerp(u[3], self.cfg.p_range.0, self.cfg.p_range.1),
        }
    }

    /// Evaluates the chain at one point, returning one report per sub-chain.
    pub fn eval_at(&self, point: SamplePoint) -> Result<Vec<ChainReport>, SampleError> {
        eval_point(self.chain, self.cfg, self.plan.as_ref(), point)
    }
}

/// Runs the seeded suite for one chain. Degenerate draws (arguments a
/// precondition rejects) are skipped and counted; domain or quadrature
/// failures abort with a [`SuiteError`].
pub fn run_suite(chain: ChainId, cfg: &SuiteConfig) -> Result<SuiteOutcome, SuiteError> {
    if cfg.samples == 0 {
        return Err(SuiteError("samples must be at least 1".into()));
    }
    let ctx = ChainContext::new(chain, cfg)?;
    let cap = cfg.quad_cap.or(chain.default_cap());
    let samples = match cap {
        Some(c) if chain.uses_function() => cfg.samples.min(c),
        _ => cfg.samples,
    };

    let mut rng = rng_for_seed(cfg.seed);
    let mut outcome = SuiteOutcome {
        chain_name: chain.name().to_string(),
        samples,
        skipped: 0,
        violations: 0,
        worst_score: f64::INFINITY,
        worst: None,
    };

    for _ in 0..samples {
        let point = ctx.draw(&mut rng);
        match ctx.eval_at(point) {
            Ok(reports) => {
                for report in reports {
                    if report.violated {
                        outcome.violations += 1;
                    }
                    let score = report.score();
                    if score < outcome.worst_score {
                        outcome.worst_score = score;
                        outcome.worst = Some(report);
                    }
                }
            }
            Err(SampleError::Degenerate(_)) => outcome.skipped += 1,
            Err(SampleError::Config(msg)) => return Err(SuiteError(msg)),
        }
    }
    Ok(outcome)
}

fn config_err<E: fmt::Display>(e: E) -> SampleError {
    SampleError::Config(e.to_string())
}

/// Maps precondition violations to degenerate skips, anything else to a
/// configuration failure.
fn mean_failure(e: ChainError) -> SampleError {
    match &e {
        ChainError::Mean(MeanError::DiagonalArgument { .. }) => SampleError::Degenerate(e.to_string()),
        ChainError::Young(YoungError::UnitArgument) => SampleError::Degenerate(e.to_string()),
        ChainError::BadParam(_) => SampleError::Degenerate(e.to_string()),
        _ => config_err(e),
    }
}

fn eval_point(
    chain: ChainId,
    cfg: &SuiteConfig,
    plan: Option<&FnPlan>,
    point: SamplePoint,
) -> Result<Vec<ChainReport>, SampleError> {
    let lp = &cfg.policy;
    let tol = cfg.tol_rel;
    let SamplePoint { a, b, nu, .. } = point;
    if !(nu > 0.0 && nu < 1.0) {
        return Err(SampleError::Config(format!("weight {nu} must lie inside (0, 1)")));
    }
    let w = Weight::new(nu).expect("validated weight");
    let mk_pair = || -> Result<PositivePair, SampleError> {
        PositivePair::new(a, b).map_err(|e| SampleError::Config(e.to_string()))
    };
    let inputs3 = || named(&[("a", a), ("b", b), ("nu", nu)]);

    match chain {
        ChainId::Cor12 => Ok(vec![chain_cor12(mk_pair()?, w, lp, tol)]),
        ChainId::Thm28 => Ok(vec![chain_thm28(mk_pair()?, w, lp, tol)]),
        ChainId::Cor29 => {
            let t = a;
            if t == 1.0 {
                return Err(SampleError::Degenerate("t = 1".into()));
            }
            let seq = sequence_cor29(t, w, cfg.m_max, lp).map_err(mean_failure)?;
            let t_pow_nu = (w.nu() * t.ln()).exp();
            let mut terms = vec![("limit".to_string(), t_pow_nu)];
            for (m, g) in seq.m_values.iter().zip(&seq.g_values).rev() {
                terms.push((format!("g{m}"), *g));
            }
            let scale = terms.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
            let tol_abs = tol * scale + ROUNDING_FLOOR * scale.max(1.0);
            let mut reports = vec![ChainReport::new(
                "cor29",
                named(&[("t", t), ("nu", nu)]),
                terms,
                tol_abs,
            )];
            if cfg.m_max >= 30 {
                // convergence side condition: |g_m − t^ν| within 1e-7·t^ν
                reports.push(ChainReport::new(
                    "cor29.limit",
                    named(&[("t", t), ("nu", nu)]),
                    terms_of(vec![("limit_gap", seq.limit_gap), ("allowance", 1e-7 * t_pow_nu)]),
                    0.0,
                ));
            }
            Ok(reports)
        }
        ChainId::Thm23 => {
            let plan = plan.expect("functional chain has a plan");
            let t = a;
            if t == 1.0 {
                return Err(SampleError::Degenerate("t = 1".into()));
            }
            let r = ratio_bounds_thm23(&plan.f, t, nu, &cfg.quad).map_err(config_err)?;
            let terms = terms_of(bracket_terms(r.bounds, r.middle));
            let scale = terms.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
            let tol_abs = tol * scale + r.est_error + ROUNDING_FLOOR * scale.max(1.0);
            Ok(vec![ChainReport::new(
                "thm23",
                named(&[("t", t), ("nu", nu), ("fn_scale", scale)]),
                terms,
                tol_abs,
            )])
        }
        ChainId::Prop26 => {
            let t = a;
            if t == 1.0 {
                return Err(SampleError::Degenerate("t = 1".into()));
            }
            let p26 = prop26_bounds(t, w, lp).map_err(|e| mean_failure(e.into()))?;
            let input_scale = t.max(1.0) * (1.0 + t.ln().abs());
            let mut reports = Vec::with_capacity(4);
            for lb in &p26.brackets {
                let terms = terms_of(bracket_terms(lb.bounds, p26.middle));
                let scale = terms.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
                let tol_abs = tol * scale + ROUNDING_FLOOR * input_scale;
                reports.push(ChainReport::new(
                    format!("prop26.{}", lb.label),
                    named(&[("t", t), ("nu", nu)]),
                    terms,
                    tol_abs,
                ));
            }
            Ok(reports)
        }
        ChainId::Thm210 => {
            let plan = plan.expect("functional chain has a plan");
            let (x, y) = (a, b);
            let d = thm210_integral(&plan.f, x, y, nu, &cfg.quad).map_err(config_err)?;
            let c = hh_functional(&plan.f, x, y, nu, &cfg.quad).map_err(config_err)?;
            let fmid = plan.f.eval(x + nu * (y - x)).map_err(config_err)?;
            let diff = c.value - fmid;
            let (r, big_r) = (w.r(), w.big_r());
            let terms = terms_of(vec![
                ("lower", 2.0 * r * d.value),
                ("middle", diff),
                ("upper", 2.0 * big_r * d.value),
            ]);
            let scale = terms.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
            let budget = c.est_error + 2.0 * big_r * d.est_error;
            let tol_abs = tol * scale + budget + ROUNDING_FLOOR * fmid.abs().max(1.0);
            Ok(vec![
                ChainReport::new(
                    "thm210",
                    named(&[("x", x), ("y", y), ("nu", nu)]),
                    terms,
                    tol_abs,
                ),
                ChainReport::new(
                    "thm210.nonneg",
                    named(&[("x", x), ("y", y), ("nu", nu)]),
                    terms_of(vec![("zero", 0.0), ("deviation", d.value)]),
                    1e-10 + d.est_error,
                ),
            ])
        }
        ChainId::Cor214 => {
            let plan = plan.expect("functional chain has a plan");
            let (x, y) = (a, b);
            let r = cor214_upper(&plan.f, x, y, nu, &cfg.quad).map_err(config_err)?;
            let terms = terms_of(vec![("value", r.value), ("bound", r.bound)]);
            let scale = terms.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
            let tol_abs = tol * scale + r.est_error + ROUNDING_FLOOR * scale.max(1.0);
            Ok(vec![ChainReport::new(
                "cor214",
                named(&[("x", x), ("y", y), ("nu", nu)]),
                terms,
                tol_abs,
            )])
        }
        ChainId::Cor215 => {
            let plan = plan.expect("functional chain has a plan");
            let (x, y) = (a, b);
            let r = cor215_integrated(&plan.f, x, y, &cfg.quad).map_err(config_err)?;
            let terms = terms_of(vec![("integral", r.value), ("bound", r.bound)]);
            let scale = terms.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
            let tol_abs = tol * scale + r.est_error + ROUNDING_FLOOR * scale.max(1.0);
            Ok(vec![ChainReport::new(
                "cor215",
                named(&[("x", x), ("y", y)]),
                terms,
                tol_abs,
            )])
        }
        ChainId::Thm217 | ChainId::Cor218 => {
            let plan = plan.expect("functional chain has a plan");
            let (x, y) = (a, b);
            let (name, nu_used) = if chain == ChainId::Cor218 {
                ("cor218", 0.5)
            } else {
                ("thm217", nu)
            };
            let r = thm217_bounds(&plan.f, x, y, nu_used, &cfg.quad).map_err(config_err)?;
            let terms = terms_of(bracket_terms(r.bounds, r.middle));
            let scale = terms.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
            let fscale = plan.f.eval(x).map(f64::abs).unwrap_or(1.0).max(1.0);
            let tol_abs = tol * scale + r.est_error + ROUNDING_FLOOR * fscale;
            Ok(vec![ChainReport::new(
                name,
                named(&[("x", x), ("y", y), ("nu", nu_used)]),
                terms,
                tol_abs,
            )])
        }
        ChainId::Cor213 => {
            let br = cor213_bounds(mk_pair()?, w, lp).map_err(mean_failure)?;
            let terms = terms_of(bracket_terms(br.bounds, br.middle));
            let scale = terms.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
            let tol_abs = tol * scale + ROUNDING_FLOOR * a.max(b);
            Ok(vec![ChainReport::new("cor213", inputs3(), terms, tol_abs)])
        }
        ChainId::Cor219Log => {
            let br = cor219_logmean(mk_pair()?, w, lp).map_err(mean_failure)?;
            let terms = terms_of(bracket_terms(br.bounds, br.middle));
            let scale = terms.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
            let tol_abs = tol * scale + ROUNDING_FLOOR * a.max(b);
            Ok(vec![ChainReport::new("cor219-log", inputs3(), terms, tol_abs)])
        }
        ChainId::Cor219Identric => {
            let br = cor219_identric(mk_pair()?, w, lp).map_err(mean_failure)?;
            let terms = terms_of(bracket_terms(br.bounds, br.middle));
            let scale = terms.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
            let tol_abs = tol * scale.max(1.0) + ln_chain_floor(a, b);
            Ok(vec![ChainReport::new("cor219-identric", inputs3(), terms, tol_abs)])
        }
        ChainId::Rem222Kant => {
            let br = remark222_kantorovich(mk_pair()?, w, lp).map_err(mean_failure)?;
            let terms = terms_of(bracket_terms(br.bounds, br.middle));
            let scale = terms.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
            let tol_abs = tol * scale.max(1.0) + ln_chain_floor(a, b);
            Ok(vec![ChainReport::new("rem222-kant", inputs3(), terms, tol_abs)])
        }
        ChainId::Rem222Identric => {
            let (ln_i, bound) = remark222_identric_upper(mk_pair()?, w, lp).map_err(mean_failure)?;
            let terms = terms_of(vec![("ln_identric", ln_i), ("ln_bound", bound)]);
            let scale = terms.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
            let tol_abs = tol * scale.max(1.0) + ln_chain_floor(a, b);
            Ok(vec![ChainReport::new("rem222-identric", inputs3(), terms, tol_abs)])
        }
        ChainId::YoungPq => {
            let report = young_pq_check(a, b, point.p, lp, tol).map_err(mean_failure)?;
            Ok(vec![report])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LP: LimitPolicy = LimitPolicy::DEFAULT;

    fn pair(a: f64, b: f64) -> PositivePair {
        PositivePair::new(a, b).unwrap()
    }

    fn weight(nu: f64) -> Weight {
        Weight::new(nu).unwrap()
    }

    #[test]
    fn cor12_hand_values() {
        // (1, 4, ν = 1/2): 2; (4^{1/4}+4^{3/4})/2; 3/ln4; 2.25; 2.5
        let r = chain_cor12(pair(1.0, 4.0), Weight::HALF, &LP, 1e-10);
        let expect = [
            2.0,
            0.5 * (4.0f64.powf(0.25) + 4.0f64.powf(0.75)),
            3.0 / 4.0f64.ln(),
            2.25,
            2.5,
        ];
        for ((_, v), e) in r.terms.iter().zip(expect) {
            assert!((v - e).abs() < 1e-12, "{v} vs {e}");
        }
        assert!(!r.violated, "min slack {}", r.min_slack);
        assert_eq!(r.slacks.len(), 4);
        // diagonal collapses all five terms
        let r = chain_cor12(pair(3.0, 3.0), weight(0.3), &LP, 1e-10);
        assert!(r.terms.iter().all(|(_, v)| *v == 3.0));
        assert!(!r.violated);
    }

    #[test]
    fn thm28_is_nondecreasing_and_t_form_consistent() {
        let r = chain_thm28(pair(1.0, 4.0), weight(0.3), &LP, 1e-10);
        assert!(!r.violated, "min slack {} at {:?}", r.min_slack, r.min_slack_edge);
        // t-form: with a = 1, b = t the terms match the one-variable chain
        let (t, nu): (f64, f64) = (4.0, 0.3);
        let w = weight(nu);
        let f = |x: f64| rep_function(x, w, &LP).unwrap();
        let t_terms = [
            t.powf(nu),
            (1.0 - nu) * t.powf(0.75 * nu) + nu * t.powf((1.0 + 3.0 * nu) / 4.0),
            t.powf(nu / 2.0) * f(t.sqrt()),
            0.5 * (t.powf(nu) + (1.0 - nu) * t.powf(nu / 2.0) + nu * t.powf((1.0 + nu) / 2.0)),
            (1.0 - nu) * t.powf(nu / 2.0) + nu * t.powf((1.0 + nu) / 2.0),
            f(t),
            0.5 * (t.powf(nu) + (1.0 - nu) + nu * t),
            (1.0 - nu) + nu * t,
        ];
        for ((label, v), e) in r.terms.iter().zip(t_terms) {
            assert!((v - e).abs() < 1e-12, "{label}: {v} vs {e}");
        }
        // term 6 is the shared logarithmic-mean implementation
        let l = weighted_logarithmic(pair(1.0, t), w, &LP);
        assert_eq!(r.terms[5].1, l);
        // diagonal collapses
        let r = chain_thm28(pair(2.0, 2.0), weight(0.7), &LP, 1e-10);
        assert!(r.terms.iter().all(|(_, v)| *v == 2.0));
    }

    #[test]
    fn cor29_sequence_monotone_and_convergent() {
        let seq = sequence_cor29(2.0, weight(0.3), 30, &LP).unwrap();
        assert!(seq.monotone);
        assert_eq!(seq.g_values.len(), 31);
        // g_0 = f_ν(t)
        assert_eq!(seq.g_values[0], rep_function(2.0, weight(0.3), &LP).unwrap());
        // limit: g_30 → t^ν within 1e-8
        let t_nu = 2.0f64.powf(0.3);
        assert!(seq.limit_gap < 1e-8, "gap {}", seq.limit_gap);
        assert!(seq.g_values[30] >= t_nu - 1e-12);
        // t → 1: all g_m → 1
        let seq = sequence_cor29(1.0 + 1e-6, weight(0.4), 10, &LP).unwrap();
        assert!(seq.g_values.iter().all(|g| (g - 1.0).abs() < 1e-5));
        // t = 1 rejected
        assert!(sequence_cor29(1.0, weight(0.4), 10, &LP).is_err());
    }

    #[test]
    fn cor213_bracket_and_limit() {
        let br = cor213_bounds(pair(1.0, 4.0), weight(0.3), &LP).unwrap();
        assert!(br.min_slack() >= -1e-12, "slack {}", br.min_slack());
        // ν → 1/2: lower and upper converge to each other and to the
        // limit-branch value
        let p = pair(1.0, 4.0);
        let limit = cor213_bounds(p, Weight::HALF, &LP).unwrap();
        assert!((limit.bounds.lower - limit.bounds.upper).abs() < 1e-12);
        let mut last_width = f64::INFINITY;
        for k in 2..=5 {
            let nu = 0.5 + 10f64.powi(-k);
            let br = cor213_bounds(p, weight(nu), &LP).unwrap();
            let width = br.bounds.upper - br.bounds.lower;
            assert!(width < last_width);
            last_width = width;
            if k >= 4 {
                assert!((br.bounds.lower - limit.bounds.lower).abs() < 1e-3);
                assert!((br.bounds.upper - limit.bounds.upper).abs() < 1e-3);
            }
        }
        // a = b rejected
        assert!(cor213_bounds(pair(2.0, 2.0), weight(0.3), &LP).is_err());
    }

    #[test]
    fn cor219_log_hand_values() {
        // ν = 1/2 at (1,4): [1/4, 3/4] brackets 2.5 − 3/ln4
        let br = cor219_logmean(pair(1.0, 4.0), Weight::HALF, &LP).unwrap();
        assert!((br.bounds.lower - 0.25).abs() < 1e-15);
        assert!((br.bounds.upper - 0.75).abs() < 1e-15);
        let mid = 2.5 - 3.0 / 4.0f64.ln();
        assert!((br.middle - mid).abs() < 1e-14);
        assert!(br.min_slack() > 0.0);
        // diagonal zeroes everything
        let br = cor219_logmean(pair(3.0, 3.0), weight(0.4), &LP).unwrap();
        assert_eq!(br.middle, 0.0);
        assert_eq!(br.bounds.lower, 0.0);
    }

    #[test]
    fn cor219_identric_hand_values() {
        // (1,4,1/2): 2·(25/16)^{1/4} ≤ I ≤ 2·(25/16)^{3/4}, I = (1/e)·4^{4/3}
        let br = cor219_identric(pair(1.0, 4.0), Weight::HALF, &LP).unwrap();
        let k: f64 = 25.0 / 16.0;
        let lo = 2.0 * k.powf(0.25);
        let hi = 2.0 * k.powf(0.75);
        let i = (4.0f64.ln() * 4.0 / 3.0 - 1.0).exp();
        assert!((br.bounds.lower.exp() - lo).abs() < 1e-12);
        assert!((br.bounds.upper.exp() - hi).abs() < 1e-12);
        assert!((br.middle.exp() - i).abs() < 1e-12);
        assert!(br.min_slack() >= 0.0);
        // the lower bound refines a♯_νb ≤ I_ν (K ≥ 1, r̃ ≥ 0)
        let p = pair(2.0, 7.0);
        let w = weight(0.3);
        let br = cor219_identric(p, w, &LP).unwrap();
        assert!(br.bounds.lower >= ln_weighted_geometric(p, w) - 1e-12);
    }

    #[test]
    fn rem222_kant_bracket_and_refinement() {
        let br = remark222_kantorovich(pair(1.0, 5.0), weight(0.2), &LP).unwrap();
        assert!(br.min_slack() >= -1e-12, "slack {}", br.min_slack());
        // lower bound is itself ≥ 0 (refines AM-GM in log space)
        assert!(br.bounds.lower >= -1e-12);
        // band continuity near ν = 1/2
        let p = pair(1.0, 3.0);
        let inside = remark222_kantorovich(p, Weight::HALF, &LP).unwrap();
        for d in [1e-6, -1e-6] {
            let out = remark222_kantorovich(p, weight(0.5 + d), &LP).unwrap();
            assert!((out.bounds.lower - inside.bounds.lower).abs() < 1e-5);
            assert!((out.bounds.upper - inside.bounds.upper).abs() < 1e-5);
        }
    }

    #[test]
    fn rem222_identric_upper_holds_and_tightens() {
        let (ln_i, bound) = remark222_identric_upper(pair(1.0, 3.0), weight(0.3), &LP).unwrap();
        assert!(ln_i <= bound + 1e-12);
        // ν → 1/2 reduces to I_{1/2} ≤ a∇b
        let (ln_i, bound) = remark222_identric_upper(pair(2.0, 8.0), Weight::HALF, &LP).unwrap();
        assert!((bound - 5.0f64.ln()).abs() < 1e-15);
        assert!(ln_i <= bound);
        // bound − ln I shrinks as b → a
        let mut last = f64::INFINITY;
        for b in [1.5, 1.1, 1.01] {
            let (ln_i, bound) = remark222_identric_upper(pair(1.0, b), weight(0.3), &LP).unwrap();
            let gap = bound - ln_i;
            assert!(gap < last, "b={b}: {gap} vs {last}");
            last = gap;
        }
    }

    #[test]
    fn young_pq_cases() {
        // p = q = 2, a = 1, b = 2: chain 2 ≤ L ≤ 2.5
        let r = young_pq_check(1.0, 2.0, 2.0, &LP, 1e-10).unwrap();
        assert_eq!(r.terms[0].1, 2.0);
        assert_eq!(r.terms[2].1, 2.5);
        assert!(!r.violated);
        assert!(r.terms[0].1 <= r.terms[1].1 && r.terms[1].1 <= r.terms[2].1);
        // middle equals the weighted logarithmic mean of (a^p, b^q)
        let l = weighted_logarithmic(pair(1.0, 4.0), Weight::HALF, &LP);
        assert!((r.terms[1].1 - l).abs() < 1e-13);
        // ... and the displayed formula
        // (q/p)(a^p − ab) + (p/q)(ab − b^q), all over p·ln a − q·ln b
        let (a, b, p_exp): (f64, f64, f64) = (1.3, 2.7, 3.0);
        let q = p_exp / (p_exp - 1.0);
        let display = ((q / p_exp) * (a.powf(p_exp) - a * b) + (p_exp / q) * (a * b - b.powf(q)))
            / (p_exp * a.ln() - q * b.ln());
        let r = young_pq_check(a, b, p_exp, &LP, 1e-10).unwrap();
        assert!((r.terms[1].1 - display).abs() < 1e-12 * display.abs(), "{} vs {display}", r.terms[1].1);
        // a^p → b^q: all three terms → ab
        let r = young_pq_check(2.0, 2.0 + 1e-9, 2.0, &LP, 1e-10).unwrap();
        for (_, v) in &r.terms {
            assert!((v - 4.0).abs() < 1e-6);
        }
        // degenerate and invalid parameters are rejected
        assert!(young_pq_check(2.0, 2.0, 2.0, &LP, 1e-10).is_err());
        assert!(young_pq_check(1.0, 2.0, 1.0, &LP, 1e-10).is_err());
        assert!(young_pq_check(-1.0, 2.0, 2.0, &LP, 1e-10).is_err());
    }

    #[test]
    fn chain_registry_round_trips() {
        assert_eq!(ChainId::ALL.len(), 16);
        for id in ChainId::ALL {
            assert_eq!(ChainId::parse(id.name()), Some(id));
        }
        assert_eq!(ChainId::parse("nope"), None);
    }

    #[test]
    fn small_suites_pass_for_every_chain() {
        let cfg = SuiteConfig { samples: 60, ..Default::default() };
        for id in ChainId::ALL {
            let out = run_suite(id, &cfg).unwrap_or_else(|e| panic!("{}: {e}", id.name()));
            assert_eq!(out.violations, 0, "{}: worst {:?}", id.name(), out.worst);
            assert!(out.samples > 0);
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let cfg = SuiteConfig { samples: 40, ..Default::default() };
        let a = run_suite(ChainId::Cor12, &cfg).unwrap();
        let b = run_suite(ChainId::Cor12, &cfg).unwrap();
        assert_eq!(a, b);
        let cfg2 = SuiteConfig { seed: 43, ..cfg };
        let c = run_suite(ChainId::Cor12, &cfg2).unwrap();
        assert_ne!(a.worst_score.to_bits(), c.worst_score.to_bits());
    }

    #[test]
    fn suite_rejects_bad_configuration() {
        let cfg = SuiteConfig { samples: 0, ..Default::default() };
        assert!(run_suite(ChainId::Cor12, &cfg).is_err());
        let cfg = SuiteConfig { nu_range: (0.0, 0.99), ..Default::default() };
        assert!(run_suite(ChainId::Cor12, &cfg).is_err());
        let cfg = SuiteConfig { a_range: (-1.0, 2.0), ..Default::default() };
        assert!(run_suite(ChainId::Cor12, &cfg).is_err());
        // a concave --fn is rejected by the probe
        let ast = crate::fnspec::parse("-(x^2)").unwrap();
        let cfg = SuiteConfig {
            func: Some(ConvexFn::from_ast(ast, None)),
            samples: 5,
            ..Default::default()
        };
        assert!(run_suite(ChainId::Thm217, &cfg).is_err());
    }

    #[test]
    fn quadrature_cap_applies_to_nested_chain() {
        let cfg = SuiteConfig { samples: 5000, quad_cap: Some(3), ..Default::default() };
        let out = run_suite(ChainId::Cor215, &cfg).unwrap();
        assert_eq!(out.samples, 3);
        // closed-form chains ignore the cap
        let out = run_suite(ChainId::Cor12, &cfg).unwrap();
        assert_eq!(out.samples, 5000);
    }
}
