//! S-expression syntax for algebra elements.
//!
//! ```text
//! element := scalar | gen | (+ e…) | (smul s e) | (brk e e) | (mul e…) | (exp e) | (log e) | (bch e…)
//! gen     := x[i,a] | y[i,a] | t[i,j] | z[j] | c[]
//! scalar  := int | int/int | ?name
//! ```

use super::alphabet::Alphabet;
use super::lie::{bracket_string, LieElement, LieError};
use super::scalar::{fmt_q, Scalar, Q};
use super::tensor::TensorElement;
use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarLit {
    Num(Q),
    Var(String),
}

impl ScalarLit {
    pub fn to_scalar(&self) -> Scalar {
        match self {
            ScalarLit::Num(q) => Scalar::Rat(q.clone()),
            ScalarLit::Var(v) => Scalar::var(v),
        }
    }
}

impl fmt::Display for ScalarLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarLit::Num(q) => write!(f, "{}", fmt_q(q)),
            ScalarLit::Var(v) => write!(f, "?{v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Scalar(ScalarLit),
    /// Generator name in canonical form, e.g. `x[1,2]`.
    Gen(String),
    Sum(Vec<Expr>),
    SMul(ScalarLit, Box<Expr>),
    Brk(Box<Expr>, Box<Expr>),
    Mul(Vec<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Bch(Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("exp needs an argument without constant term")]
    ExpConstant,
    #[error("log needs an argument with constant term 1")]
    LogConstant,
    #[error("{0}")]
    NotLie(#[from] LieError),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

fn lex(src: &str) -> Vec<(Tok, usize, usize)> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut cur = String::new();
    let mut start = (1, 1);
    let flush = |cur: &mut String, start: (usize, usize), out: &mut Vec<(Tok, usize, usize)>| {
        if !cur.is_empty() {
            out.push((Tok::Atom(std::mem::take(cur)), start.0, start.1));
        }
    };
    for ch in src.chars() {
        match ch {
            '(' | ')' => {
                flush(&mut cur, start, &mut out);
                out.push((if ch == '(' { Tok::Open } else { Tok::Close }, line, col));
            }
            c if c.is_whitespace() => flush(&mut cur, start, &mut out),
            c => {
                if cur.is_empty() {
                    start = (line, col);
                }
                cur.push(c);
            }
        }
        if ch == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    flush(&mut cur, start, &mut out);
    out
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn err<T>(&self, at: Option<(usize, usize)>, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = at.unwrap_or(self.end);
        Err(ParseError { line, col, message: msg.into() })
    }

    fn here(&self) -> Option<(usize, usize)> {
        self.toks.get(self.pos).map(|t| (t.1, t.2))
    }

    fn element(&mut self) -> Result<Expr, ParseError> {
        let Some((tok, line, col)) = self.toks.get(self.pos).cloned() else {
            return self.err(None, "unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Close => self.err(Some((line, col)), "unexpected ')'"),
            Tok::Atom(a) => atom(&a).map_err(|m| ParseError { line, col, message: m }),
            Tok::Open => {
                let op = match self.toks.get(self.pos).cloned() {
                    Some((Tok::Atom(op), _, _)) => op,
                    _ => return self.err(self.here(), "expected an operator after '('"),
                };
                let op_at = self.here();
                self.pos += 1;
                let e = match op.as_str() {
                    "+" | "mul" | "bch" => {
                        let mut args = Vec::new();
                        while !matches!(self.toks.get(self.pos), Some((Tok::Close, _, _)) | None) {
                            args.push(self.element()?);
                        }
                        if args.is_empty() {
                            return self.err(op_at, format!("'{op}' needs at least one argument"));
                        }
                        match op.as_str() {
                            "+" => Expr::Sum(args),
                            "mul" => Expr::Mul(args),
                            _ => Expr::Bch(args),
                        }
                    }
                    "smul" => {
                        let s_at = self.here();
                        let s = match self.toks.get(self.pos).cloned() {
                            Some((Tok::Atom(s), l, c)) => scalar(&s).ok_or(ParseError { line: l, col: c, message: format!("expected a scalar, got '{s}'") })?,
                            _ => return self.err(s_at, "expected a scalar"),
                        };
                        self.pos += 1;
                        Expr::SMul(s, Box::new(self.element()?))
                    }
                    "brk" => {
                        let a = self.element()?;
                        let b = self.element()?;
                        Expr::Brk(Box::new(a), Box::new(b))
                    }
                    "exp" => Expr::Exp(Box::new(self.element()?)),
                    "log" => Expr::Log(Box::new(self.element()?)),
                    _ => return self.err(op_at, format!("unknown operator '{op}'")),
                };
                match self.toks.get(self.pos) {
                    Some((Tok::Close, _, _)) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    Some((_, l, c)) => self.err(Some((*l, *c)), format!("too many arguments to '{op}'")),
                    None => self.err(None, "missing ')'"),
                }
            }
        }
    }
}

fn scalar(a: &str) -> Option<ScalarLit> {
    if let Some(v) = a.strip_prefix('?') {
        let ok = !v.is_empty() && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '^');
        return ok.then(|| ScalarLit::Var(v.to_string()));
    }
    let int = |s: &str| -> Option<BigInt> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        s.parse().ok()
    };
    match a.split_once('/') {
        None => int(a).map(|n| ScalarLit::Num(Q::from_integer(n))),
        Some((n, d)) => {
            let (n, d) = (int(n)?, int(d)?);
            if d.is_zero() || d < BigInt::zero() {
                return None;
            }
            Some(ScalarLit::Num(Q::new(n, d)))
        }
    }
}

fn atom(a: &str) -> Result<Expr, String> {
    if let Some(s) = scalar(a) {
        return Ok(Expr::Scalar(s));
    }
    let open = a.find('[').ok_or_else(|| format!("expected a generator or scalar, got '{a}'"))?;
    if !a.ends_with(']') {
        return Err(format!("malformed generator '{a}'"));
    }
    let head = &a[..open];
    let body = &a[open + 1..a.len() - 1];
    let args: Vec<&str> = if body.is_empty() { vec![] } else { body.split(',').collect() };
    let ok_label = |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '*' || c == '_');
    if !args.iter().all(|s| ok_label(s)) {
        return Err(format!("malformed generator label in '{a}'"));
    }
    let arity = match head {
        "x" | "y" | "t" => 2,
        "z" => 1,
        "c" => 0,
        _ => return Err(format!("unknown generator kind '{head}'")),
    };
    if args.len() != arity {
        return Err(format!("generator '{head}' takes {arity} labels, got {}", args.len()));
    }
    Ok(Expr::Gen(format!("{head}[{}]", args.join(","))))
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src);
    let end = {
        let lines: Vec<&str> = src.split('\n').collect();
        (lines.len(), lines.last().map(|l| l.chars().count()).unwrap_or(0) + 1)
    };
    let mut p = Parser { toks, pos: 0, end };
    let e = p.element()?;
    if let Some((_, l, c)) = p.toks.get(p.pos) {
        return Err(ParseError { line: *l, col: *c, message: "trailing input after element".into() });
    }
    Ok(e)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, op: &str, xs: &[Expr]| {
            write!(f, "({op}")?;
            for x in xs {
                write!(f, " {x}")?;
            }
            write!(f, ")")
        };
        match self {
            Expr::Scalar(s) => write!(f, "{s}"),
            Expr::Gen(g) => write!(f, "{g}"),
            Expr::Sum(xs) => list(f, "+", xs),
            Expr::Mul(xs) => list(f, "mul", xs),
            Expr::Bch(xs) => list(f, "bch", xs),
            Expr::SMul(s, e) => write!(f, "(smul {s} {e})"),
            Expr::Brk(a, b) => write!(f, "(brk {a} {b})"),
            Expr::Exp(e) => write!(f, "(exp {e})"),
            Expr::Log(e) => write!(f, "(log {e})"),
        }
    }
}

impl Expr {
    /// Evaluates in the truncated tensor algebra over `alpha`.
    pub fn eval(&self, alpha: &Arc<Alphabet>, deg: u32) -> Result<TensorElement, EvalError> {
        Ok(match self {
            Expr::Scalar(s) => TensorElement::scalar(alpha, deg, s.to_scalar()),
            Expr::Gen(g) => {
                let l = alpha.letter(g).ok_or_else(|| EvalError::UnknownGenerator(g.clone()))?;
                TensorElement::letter(alpha, deg, l)
            }
            Expr::Sum(xs) => {
                let mut acc = TensorElement::zero(alpha, deg);
                for x in xs {
                    acc = acc.add(&x.eval(alpha, deg)?);
                }
                acc
            }
            Expr::Mul(xs) => {
                let mut acc = TensorElement::one(alpha, deg);
                for x in xs {
                    acc = acc.mul(&x.eval(alpha, deg)?);
                }
                acc
            }
            Expr::SMul(s, e) => e.eval(alpha, deg)?.scale(&s.to_scalar()),
            Expr::Brk(a, b) => a.eval(alpha, deg)?.commutator(&b.eval(alpha, deg)?),
            Expr::Exp(e) => {
                let t = e.eval(alpha, deg)?;
                if !t.counit().is_zero() {
                    return Err(EvalError::ExpConstant);
                }
                t.exp()
            }
            Expr::Log(e) => {
                let t = e.eval(alpha, deg)?;
                if t.counit() != Scalar::one() {
                    return Err(EvalError::LogConstant);
                }
                t.log()
            }
            Expr::Bch(xs) => {
                let mut acc = TensorElement::one(alpha, deg);
                for x in xs {
                    let t = x.eval(alpha, deg)?;
                    if !t.counit().is_zero() {
                        return Err(EvalError::ExpConstant);
                    }
                    acc = acc.mul(&t.exp());
                }
                acc.log()
            }
        })
    }

    pub fn eval_lie(&self, alpha: &Arc<Alphabet>, deg: u32) -> Result<LieElement, EvalError> {
        Ok(LieElement::from_tensor(&self.eval(alpha, deg)?)?)
    }

    /// Generator names used, in order of first appearance.
    pub fn generators(&self) -> Vec<String> {
        let mut out = Vec::new();
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Scalar(_) => {}
                Expr::Gen(g) => {
                    if !out.contains(g) {
                        out.push(g.clone());
                    }
                }
                Expr::Sum(xs) | Expr::Mul(xs) | Expr::Bch(xs) => xs.iter().for_each(|x| walk(x, out)),
                Expr::SMul(_, e) | Expr::Exp(e) | Expr::Log(e) => walk(e, out),
                Expr::Brk(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        walk(self, &mut out);
        out
    }
}

fn bracket_expr(alpha: &Alphabet, w: &[u8]) -> Expr {
    if w.len() == 1 {
        return Expr::Gen(alpha.name(w[0]).to_string());
    }
    let (u, v) = super::word::standard_factorization(w);
    Expr::Brk(Box::new(bracket_expr(alpha, u)), Box::new(bracket_expr(alpha, v)))
}

/// S-expression for a Lie element with rational coefficients (or a lone variable as coefficient).
pub fn lie_to_expr(e: &LieElement) -> Option<Expr> {
    let mut terms = Vec::new();
    for (w, c) in &e.terms {
        let b = bracket_expr(&e.alpha, w);
        let lit = match c {
            Scalar::Rat(q) => ScalarLit::Num(q.clone()),
            Scalar::Poly(p) => {
                let (m, k) = (p.0.len() == 1).then(|| p.0.iter().next().unwrap())?;
                if !num_traits::One::is_one(k) || m.0.len() != 1 || m.0[0].1 != 1 {
                    return None;
                }
                ScalarLit::Var(m.0[0].0.to_string())
            }
        };
        terms.push(if lit == ScalarLit::Num(Q::from_integer(1.into())) { b } else { Expr::SMul(lit, Box::new(b)) });
    }
    Some(match terms.len() {
        0 => Expr::Scalar(ScalarLit::Num(Q::from_integer(0.into()))),
        1 => terms.pop().unwrap(),
        _ => Expr::Sum(terms),
    })
}

/// Human-readable term list.
pub fn lie_terms(e: &LieElement) -> Vec<(String, String)> {
    e.terms.iter().map(|(w, c)| (bracket_string(&e.alpha, w), c.to_string())).collect()
}
