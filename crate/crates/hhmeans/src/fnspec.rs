//! A small expression language for supplying convex functions as text.
//!
//! Grammar (no implicit multiplication; `^` is right-associative; unary
//! minus binds looser than `^`):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | power
//! power   := primary ('^' factor)?
//! primary := number | 'x' | func '(' expr ')' | '(' expr ')'
//! func    := 'exp' | 'log' | 'sqrt' | 'abs'
//! number  := digits ('.' digits)? (('e' | 'E') ('+' | '-')? digits)?
//! ```
//!
//! Evaluation is IEEE-consistent and never returns a non-finite value
//! silently: out-of-domain points (`log`/`sqrt` of a non-positive number,
//! division by zero, fractional powers of a negative base, overflow) raise
//! [`EvalError`].

use std::fmt;

use crate::convex::Interval;

/// Expression AST. Constants are finite reals; the single variable is `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum FnAst {
    Const(f64),
    Var,
    Add(Box<FnAst>, Box<FnAst>),
    Sub(Box<FnAst>, Box<FnAst>),
    Mul(Box<FnAst>, Box<FnAst>),
    Div(Box<FnAst>, Box<FnAst>),
    Pow(Box<FnAst>, Box<FnAst>),
    Neg(Box<FnAst>),
    Exp(Box<FnAst>),
    Log(Box<FnAst>),
    Sqrt(Box<FnAst>),
    Abs(Box<FnAst>),
}

/// Parse failure with a byte position into the source.
#[derive(Debug, Clone, PartialEq)]
pub enum ParseError {
    Syntax { position: usize, expected: String },
    UnknownFunction { position: usize, name: String },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { position, expected } => {
                write!(f, "syntax error at byte {position}: expected {expected}")
            }
            ParseError::UnknownFunction { position, name } => {
                write!(f, "unknown function `{name}` at byte {position} (expected exp, log, sqrt, abs)")
            }
        }
    }
}

impl std::error::Error for ParseError {}

/// Evaluation failure: the point is outside the natural domain of some node.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalError {
    pub node: &'static str,
    pub x: f64,
    pub detail: String,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} not evaluable at x = {}: {}", self.node, self.x, self.detail)
    }
}

impl std::error::Error for EvalError {}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Var,
    Func(&'static str),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Token)>, ParseError> {
        let mut lx = Lexer { src: src.as_bytes(), pos: 0 };
        let mut out = Vec::new();
        loop {
            lx.skip_ws();
            if lx.pos >= lx.src.len() {
                return Ok(out);
            }
            let start = lx.pos;
            let c = lx.src[lx.pos];
            let tok = match c {
                b'+' => {
                    lx.pos += 1;
                    Token::Plus
                }
                b'-' => {
                    lx.pos += 1;
                    Token::Minus
                }
                b'*' => {
                    lx.pos += 1;
                    Token::Star
                }
                b'/' => {
                    lx.pos += 1;
                    Token::Slash
                }
                b'^' => {
                    lx.pos += 1;
                    Token::Caret
                }
                b'(' => {
                    lx.pos += 1;
                    Token::LParen
                }
                b')' => {
                    lx.pos += 1;
                    Token::RParen
                }
                b'0'..=b'9' => lx.number(start)?,
                b'a'..=b'z' | b'A'..=b'Z' => lx.ident(start)?,
                _ => {
                    return Err(ParseError::Syntax {
                        position: start,
                        expected: "a number, `x`, a function name, or an operator".into(),
                    })
                }
            };
            out.push((start, tok));
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn number(&mut self, start: usize) -> Result<Token, ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            let frac_start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == frac_start {
                return Err(ParseError::Syntax { position: self.pos, expected: "digits after `.`".into() });
            }
        }
        if self.pos < self.src.len() && (self.src[self.pos] == b'e' || self.src[self.pos] == b'E') {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-') {
                self.pos += 1;
            }
            let exp_start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == exp_start {
                // not an exponent after all; backtrack so `2e` lexes as `2` then ident
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let value: f64 = text
            .parse()
            .map_err(|_| ParseError::Syntax { position: start, expected: "a finite number".into() })?;
        if !value.is_finite() {
            return Err(ParseError::Syntax { position: start, expected: "a finite number".into() });
        }
        Ok(Token::Number(value))
    }

    fn ident(&mut self, start: usize) -> Result<Token, ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii letters");
        match name {
            "x" => Ok(Token::Var),
            "exp" => Ok(Token::Func("exp")),
            "log" => Ok(Token::Func("log")),
            "sqrt" => Ok(Token::Func("sqrt")),
            "abs" => Ok(Token::Func("abs")),
            _ => Err(ParseError::UnknownFunction { position: start, name: name.into() }),
        }
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Token, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(ParseError::Syntax { position: self.here(), expected: what.into() }),
        }
    }

    fn expr(&mut self) -> Result<FnAst, ParseError> {
        let mut node = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    node = FnAst::Add(Box::new(node), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    node = FnAst::Sub(Box::new(node), Box::new(self.term()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn term(&mut self) -> Result<FnAst, ParseError> {
        let mut node = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    node = FnAst::Mul(Box::new(node), Box::new(self.factor()?));
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    node = FnAst::Div(Box::new(node), Box::new(self.factor()?));
                }
                _ => return Ok(node),
            }
        }
    }

    // Unary minus binds looser than `^`, so `-x^2` is `-(x^2)`.
    fn factor(&mut self) -> Result<FnAst, ParseError> {
        if let Some(Token::Minus) = self.peek() {
            self.pos += 1;
            return Ok(FnAst::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<FnAst, ParseError> {
        let base = self.primary()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            // right-associative: the exponent is a full factor
            let exp = self.factor()?;
            return Ok(FnAst::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<FnAst, ParseError> {
        let position = self.here();
        match self.bump() {
            Some(Token::Number(v)) => Ok(FnAst::Const(v)),
            Some(Token::Var) => Ok(FnAst::Var),
            Some(Token::Func(name)) => {
                self.expect(Token::LParen, "`(` after function name")?;
                let arg = self.expr()?;
                self.expect(Token::RParen, "`)` closing the function argument")?;
                Ok(match name {
                    "exp" => FnAst::Exp(Box::new(arg)),
                    "log" => FnAst::Log(Box::new(arg)),
                    "sqrt" => FnAst::Sqrt(Box::new(arg)),
                    _ => FnAst::Abs(Box::new(arg)),
                })
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(ParseError::Syntax {
                position,
                expected: "a number, `x`, a function call, or `(`".into(),
            }),
        }
    }
}

/// Parses a source string into an AST.
pub fn parse(src: &str) -> Result<FnAst, ParseError> {
    if src.trim().is_empty() {
        return Err(ParseError::Syntax { position: 0, expected: "a non-empty expression".into() });
    }
    let tokens = Lexer::tokens(src)?;
    let mut parser = Parser { tokens, pos: 0, end: src.len() };
    let ast = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(ParseError::Syntax {
            position: parser.here(),
            expected: "end of input or an operator".into(),
        });
    }
    Ok(ast)
}

/// Evaluates `ast` at `x`. Out-of-domain points raise [`EvalError`]; the
/// result is always finite.
pub fn eval(ast: &FnAst, x: f64) -> Result<f64, EvalError> {
    let v = eval_inner(ast, x)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError { node: "expression", x, detail: format!("non-finite result {v}") })
    }
}

fn eval_inner(ast: &FnAst, x: f64) -> Result<f64, EvalError> {
    let finite = |node: &'static str, v: f64| -> Result<f64, EvalError> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError { node, x, detail: format!("non-finite intermediate {v}") })
        }
    };
    match ast {
        FnAst::Const(c) => Ok(*c),
        FnAst::Var => Ok(x),
        FnAst::Add(a, b) => finite("+", eval_inner(a, x)? + eval_inner(b, x)?),
        FnAst::Sub(a, b) => finite("-", eval_inner(a, x)? - eval_inner(b, x)?),
        FnAst::Mul(a, b) => finite("*", eval_inner(a, x)? * eval_inner(b, x)?),
        FnAst::Div(a, b) => {
            let d = eval_inner(b, x)?;
            if d == 0.0 {
                return Err(EvalError { node: "/", x, detail: "division by zero".into() });
            }
            finite("/", eval_inner(a, x)? / d)
        }
        FnAst::Pow(a, b) => {
            let base = eval_inner(a, x)?;
            let exp = eval_inner(b, x)?;
            if base < 0.0 && exp.fract() != 0.0 {
                return Err(EvalError {
                    node: "^",
                    x,
                    detail: format!("fractional power {exp} of negative base {base}"),
                });
            }
            if base == 0.0 && exp < 0.0 {
                return Err(EvalError { node: "^", x, detail: "zero base with negative exponent".into() });
            }
            finite("^", base.powf(exp))
        }
        FnAst::Neg(a) => Ok(-eval_inner(a, x)?),
        FnAst::Exp(a) => finite("exp", eval_inner(a, x)?.exp()),
        FnAst::Log(a) => {
            let v = eval_inner(a, x)?;
            if v <= 0.0 {
                return Err(EvalError { node: "log", x, detail: format!("log of {v}") });
            }
            Ok(v.ln())
        }
        FnAst::Sqrt(a) => {
            let v = eval_inner(a, x)?;
            if v < 0.0 {
                return Err(EvalError { node: "sqrt", x, detail: format!("sqrt of {v}") });
            }
            Ok(v.sqrt())
        }
        FnAst::Abs(a) => Ok(eval_inner(a, x)?.abs()),
    }
}

/// The natural domain of an expression: disjoint open pieces on which every
/// `log`, `sqrt`, division, and power constraint holds. Conservative — the
/// reported pieces may under-approximate the true domain.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalDomain {
    pub pieces: Vec<Interval>,
}

impl NaturalDomain {
    pub fn piece_containing(&self, x: f64) -> Option<Interval> {
        self.pieces.iter().copied().find(|p| p.contains(x))
    }

    /// The widest piece (the whole line when unconstrained).
    pub fn widest(&self) -> Interval {
        self.pieces
            .iter()
            .copied()
            .max_by(|a, b| a.width().partial_cmp(&b.width()).unwrap())
            .unwrap_or(Interval { lo: 0.0, hi: 0.0, lo_closed: false, hi_closed: false })
    }

    /// Interior boundary points between adjacent pieces — the detected
    /// singularities the caller must stay on one side of.
    pub fn singularities(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for w in self.pieces.windows(2) {
            if w[0].hi == w[1].lo && w[0].hi.is_finite() {
                out.push(w[0].hi);
            }
        }
        out
    }

    fn whole_line() -> Self {
        Self { pieces: vec![Interval::REAL_LINE] }
    }

    fn empty() -> Self {
        Self { pieces: Vec::new() }
    }

    fn intersect(&self, other: &Self) -> Self {
        let mut pieces = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                let lo = a.lo.max(b.lo);
                let hi = a.hi.min(b.hi);
                if lo < hi {
                    pieces.push(Interval::open(lo, hi));
                }
            }
        }
        pieces.sort_by(|p, q| p.lo.partial_cmp(&q.lo).unwrap());
        Self { pieces }
    }

    /// Removes a single point, splitting the piece containing it.
    fn puncture(&self, x: f64) -> Self {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            if p.contains(x) {
                if p.lo < x {
                    pieces.push(Interval::open(p.lo, x));
                }
                if x < p.hi {
                    pieces.push(Interval::open(x, p.hi));
                }
            } else {
                pieces.push(*p);
            }
        }
        Self { pieces }
    }
}

/// Reads `ast` as an affine function `a·x + b` when it is one.
fn affine_of(ast: &FnAst) -> Option<(f64, f64)> {
    match ast {
        FnAst::Const(c) => Some((0.0, *c)),
        FnAst::Var => Some((1.0, 0.0)),
        FnAst::Add(l, r) => {
            let (a1, b1) = affine_of(l)?;
            let (a2, b2) = affine_of(r)?;
            Some((a1 + a2, b1 + b2))
        }
        FnAst::Sub(l, r) => {
            let (a1, b1) = affine_of(l)?;
            let (a2, b2) = affine_of(r)?;
            Some((a1 - a2, b1 - b2))
        }
        FnAst::Neg(u) => {
            let (a, b) = affine_of(u)?;
            Some((-a, -b))
        }
        FnAst::Mul(l, r) => match (affine_of(l)?, affine_of(r)?) {
            ((0.0, c), (a, b)) | ((a, b), (0.0, c)) => Some((a * c, b * c)),
            _ => None,
        },
        FnAst::Div(l, r) => {
            let (a, b) = affine_of(l)?;
            let (ad, bd) = affine_of(r)?;
            if ad == 0.0 && bd != 0.0 {
                Some((a / bd, b / bd))
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Where `a·x + b > 0`.
fn affine_positive(a: f64, b: f64) -> NaturalDomain {
    if a == 0.0 {
        if b > 0.0 {
            NaturalDomain::whole_line()
        } else {
            NaturalDomain::empty()
        }
    } else {
        let root = -b / a;
        let piece = if a > 0.0 {
            Interval::open(root, f64::INFINITY)
        } else {
            Interval::open(f64::NEG_INFINITY, root)
        };
        NaturalDomain { pieces: vec![piece] }
    }
}

/// Grid-probe fallback for non-affine constraints: keeps the sampled
/// sub-ranges of each piece where `pred(u(x))` held at every grid point.
fn probe_constraint(
    dom: &NaturalDomain,
    arg: &FnAst,
    pred: impl Fn(f64) -> bool,
) -> NaturalDomain {
    const GRID: usize = 257;
    const CLIP: f64 = 1e6;
    let mut pieces = Vec::new();
    for p in &dom.pieces {
        let lo = p.lo.max(-CLIP);
        let hi = p.hi.min(CLIP);
        if lo >= hi {
            continue;
        }
        let step = (hi - lo) / (GRID as f64 - 1.0);
        let mut run_start: Option<f64> = None;
        for i in 0..GRID {
            let x = lo + step * i as f64;
            let ok = matches!(eval_inner(arg, x), Ok(v) if v.is_finite() && pred(v));
            match (ok, run_start) {
                (true, None) => run_start = Some(x),
                (false, Some(s)) => {
                    let e = lo + step * (i as f64 - 1.0);
                    if s < e {
                        pieces.push(Interval::open(s, e));
                    }
                    run_start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = run_start {
            if s < hi {
                pieces.push(Interval::open(s, hi));
            }
        }
    }
    NaturalDomain { pieces }
}

/// The largest open pieces of validity inferable from the `log`, `sqrt`,
/// division, and power nodes. Affine arguments are solved exactly; other
/// shapes fall back to a deterministic grid probe.
pub fn natural_domain(ast: &FnAst) -> NaturalDomain {
    match ast {
        FnAst::Const(_) | FnAst::Var => NaturalDomain::whole_line(),
        FnAst::Add(l, r) | FnAst::Sub(l, r) | FnAst::Mul(l, r) => {
            natural_domain(l).intersect(&natural_domain(r))
        }
        FnAst::Neg(u) | FnAst::Exp(u) | FnAst::Abs(u) => natural_domain(u),
        FnAst::Log(u) | FnAst::Sqrt(u) => {
            let base = natural_domain(u);
            match affine_of(u) {
                Some((a, b)) => base.intersect(&affine_positive(a, b)),
                None => probe_constraint(&base, u, |v| v > 0.0),
            }
        }
        FnAst::Div(l, r) => {
            let base = natural_domain(l).intersect(&natural_domain(r));
            match affine_of(r) {
                Some((0.0, b)) => {
                    if b == 0.0 {
                        NaturalDomain::empty()
                    } else {
                        base
                    }
                }
                Some((a, b)) => base.puncture(-b / a),
                None => probe_constraint(&base, r, |v| v != 0.0),
            }
        }
        FnAst::Pow(l, r) => {
            let base = natural_domain(l).intersect(&natural_domain(r));
            match (&**l, &**r) {
                // constant nonnegative-integer exponent: any base
                (_, FnAst::Const(c)) if c.fract() == 0.0 && *c >= 0.0 => base,
                // anything else requires a positive base
                _ => match affine_of(l) {
                    Some((a, b)) => base.intersect(&affine_positive(a, b)),
                    None => probe_constraint(&base, l, |v| v > 0.0),
                },
            }
        }
    }
}

impl fmt::Display for FnAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(self, f, 0)
    }
}

/// Pretty-printer; parenthesizes children whenever their binding is not
/// strictly tighter than the context, so the output reparses to an
/// evaluation-identical AST.
fn write_node(ast: &FnAst, f: &mut fmt::Formatter<'_>, parent_prec: u8) -> fmt::Result {
    // precedence: add/sub 1, mul/div 2, unary minus 3, pow 4, atoms 5
    let prec = match ast {
        FnAst::Add(..) | FnAst::Sub(..) => 1,
        FnAst::Mul(..) | FnAst::Div(..) => 2,
        FnAst::Neg(..) => 3,
        FnAst::Pow(..) => 4,
        _ => 5,
    };
    let parens = prec < parent_prec || matches!(ast, FnAst::Const(c) if *c < 0.0) && parent_prec > 0;
    if parens {
        write!(f, "(")?;
    }
    match ast {
        FnAst::Const(c) => write!(f, "{c:?}")?,
        FnAst::Var => write!(f, "x")?,
        FnAst::Add(l, r) => {
            write_node(l, f, 1)?;
            write!(f, " + ")?;
            write_node(r, f, 2)?;
        }
        FnAst::Sub(l, r) => {
            write_node(l, f, 1)?;
            write!(f, " - ")?;
            write_node(r, f, 2)?;
        }
        FnAst::Mul(l, r) => {
            write_node(l, f, 2)?;
            write!(f, " * ")?;
            write_node(r, f, 3)?;
        }
        FnAst::Div(l, r) => {
            write_node(l, f, 2)?;
            write!(f, " / ")?;
            write_node(r, f, 3)?;
        }
        FnAst::Pow(l, r) => {
            // the base must bind tighter than `^`; the exponent reparses as a factor
            write_node(l, f, 5)?;
            write!(f, "^")?;
            write_node(r, f, 4)?;
        }
        FnAst::Neg(u) => {
            write!(f, "-")?;
            write_node(u, f, 3)?;
        }
        FnAst::Exp(u) => {
            write!(f, "exp(")?;
            write_node(u, f, 0)?;
            write!(f, ")")?;
        }
        FnAst::Log(u) => {
            write!(f, "log(")?;
            write_node(u, f, 0)?;
            write!(f, ")")?;
        }
        FnAst::Sqrt(u) => {
            write!(f, "sqrt(")?;
            write_node(u, f, 0)?;
            write!(f, ")")?;
        }
        FnAst::Abs(u) => {
            write!(f, "abs(")?;
            write_node(u, f, 0)?;
            write!(f, ")")?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}
