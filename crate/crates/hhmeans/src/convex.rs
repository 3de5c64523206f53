//! Evaluable univariate function descriptors with declared domains.
//!
//! A [`ConvexFn`] is what the functional evaluators integrate: a builtin
//! (`exp`, `−log`, the identity, `x²`, or a base-power family `t^x`) or a
//! parsed expression. Convexity is never assumed proven — [`convexity_probe`]
//! runs a randomized three-point secant test, and verification code rejects
//! functions that fail it.

use std::fmt;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::fnspec::{self, FnAst};
use crate::sampling::uniform_f64;

/// An interval of the real line; endpoints may be infinite, and each finite
/// endpoint is either open or closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub const REAL_LINE: Interval =
        Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY, lo_closed: false, hi_closed: false };

    pub fn open(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_closed: false, hi_closed: false }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    /// Whether the open interval `(lo, hi)` fits inside `self` with the
    /// endpoints allowed to touch the boundary.
    pub fn covers_open(&self, lo: f64, hi: f64) -> bool {
        self.lo <= lo && hi <= self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

/// Evaluation failure of a [`ConvexFn`].
#[derive(Debug, Clone, PartialEq)]
pub struct DomainError {
    pub x: f64,
    pub detail: String,
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "function not evaluable at {}: {}", self.x, self.detail)
    }
}

impl std::error::Error for DomainError {}

#[derive(Debug, Clone)]
enum Body {
    Exp,
    NegLog,
    Identity,
    Square,
    /// `x ↦ t^x` for a fixed base `t > 0`.
    PowBase(f64),
    Ast(Arc<FnAst>),
}

/// An evaluable univariate function with a declared domain and a label.
#[derive(Debug, Clone)]
pub struct ConvexFn {
    label: String,
    domain: Interval,
    body: Body,
}

impl ConvexFn {
    /// `exp(x)` on the whole line.
    pub fn exp() -> Self {
        Self { label: "exp(x)".into(), domain: Interval::REAL_LINE, body: Body::Exp }
    }

    /// `−log(x)` on `(0, ∞)`.
    pub fn neg_log() -> Self {
        Self {
            label: "-log(x)".into(),
            domain: Interval { lo: 0.0, hi: f64::INFINITY, lo_closed: false, hi_closed: false },
            body: Body::NegLog,
        }
    }

    /// The identity `x ↦ x` on the whole line.
    pub fn identity() -> Self {
        Self { label: "x".into(), domain: Interval::REAL_LINE, body: Body::Identity }
    }

    /// `x²` on the whole line.
    pub fn square() -> Self {
        Self { label: "x^2".into(), domain: Interval::REAL_LINE, body: Body::Square }
    }

    /// The base-power family `x ↦ t^x` for a fixed `t > 0`.
    pub fn pow_base(t: f64) -> Self {
        assert!(t > 0.0 && t.is_finite(), "pow_base requires a positive finite base");
        Self { label: format!("{t}^x"), domain: Interval::REAL_LINE, body: Body::PowBase(t) }
    }

    /// Wraps a parsed expression, restricted to one piece of its natural
    /// domain (the piece containing `anchor`, or the widest one).
    pub fn from_ast(ast: FnAst, anchor: Option<f64>) -> Self {
        let label = ast.to_string();
        let nd = fnspec::natural_domain(&ast);
        let domain = match anchor {
            Some(x) => nd.piece_containing(x).unwrap_or_else(|| nd.widest()),
            None => nd.widest(),
        };
        Self { label, domain, body: Body::Ast(Arc::new(ast)) }
    }

    /// Builtin registry lookup by label.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "exp" | "exp(x)" => Some(Self::exp()),
            "neg-log" | "-log(x)" => Some(Self::neg_log()),
            "id" | "identity" | "x" => Some(Self::identity()),
            "square" | "x^2" => Some(Self::square()),
            _ => None,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// A copy restricted to a smaller domain.
    pub fn restricted(mut self, domain: Interval) -> Self {
        self.domain = domain;
        self
    }

    /// Evaluates the function, rejecting out-of-domain points and non-finite
    /// results rather than returning them silently.
    pub fn eval(&self, x: f64) -> Result<f64, DomainError> {
        if !self.domain.contains(x) {
            return Err(DomainError { x, detail: format!("outside domain {}", self.domain) });
        }
        let y = match &self.body {
            Body::Exp => x.exp(),
            Body::NegLog => -x.ln(),
            Body::Identity => x,
            Body::Square => x * x,
            Body::PowBase(t) => (x * t.ln()).exp(),
            Body::Ast(ast) => {
                return fnspec::eval(ast, x)
                    .map_err(|e| DomainError { x, detail: e.to_string() });
            }
        };
        if y.is_finite() {
            Ok(y)
        } else {
            Err(DomainError { x, detail: format!("non-finite value {y}") })
        }
    }
}

/// Result of the randomized convexity probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub passed: bool,
    /// Most negative secant slack seen (0 when every triple satisfied the
    /// test exactly).
    pub worst_violation: f64,
    /// The triple realizing the worst violation, when one exists.
    pub witness: Option<(f64, f64, f64)>,
    pub trials: u32,
}

/// Random three-point secant test: for triples `x < y < z` in `interval`,
/// convexity demands `f(y)` at most the chord through `(x, f(x))`, `(z, f(z))`
/// within `1e-9·scale`. Failure is a value, not an error.
pub fn convexity_probe(f: &ConvexFn, interval: Interval, trials: u32, seed: u64) -> ProbeReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for _ in 0..trials {
        let mut pts = [
            uniform_f64(&mut rng, interval.lo, interval.hi),
            uniform_f64(&mut rng, interval.lo, interval.hi),
            uniform_f64(&mut rng, interval.lo, interval.hi),
        ];
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let [x, y, z] = pts;
        if x == y || y == z {
            continue;
        }
        let (fx, fy, fz) = match (f.eval(x), f.eval(y), f.eval(z)) {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            _ => continue,
        };
        let chord = fx + (fz - fx) * (y - x) / (z - x);
        let scale = fx.abs().max(fy.abs()).max(fz.abs()).max(1.0);
        let slack = (chord - fy) / scale;
        if slack < worst {
            worst = slack;
            witness = Some((x, y, z));
        }
    }
    let worst_violation = if worst.is_finite() { worst.min(0.0) } else { 0.0 };
    ProbeReport {
        passed: worst_violation >= -1e-9,
        worst_violation,
        witness: if worst_violation < -1e-9 { witness } else { None },
        trials,
    }
}
