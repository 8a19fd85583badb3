//! Parameter functions of time.
//!
//! A [`TimeFunction`] is an immutable expression tree in `t`. Evaluation
//! propagates order-3 jets through the tree, so every value comes with its
//! first three derivatives exact to roundoff. Trees can also be
//! differentiated symbolically, which is how derived parameters such as
//! `ln ℑ'` are built without losing derivative orders.

mod jet;
mod parse;
pub mod random;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

pub use jet::Jet3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TimeFnError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("DomainError: {reason} in `{expr}` at t = {t}")]
    Domain { expr: String, reason: String, t: f64 },
    #[error("DomainError: t = {t} outside validity interval [{lo}, {hi}]")]
    OutsideInterval { t: f64, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Arc<Expr>),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    /// Integer or half-integer power.
    Pow(Arc<Expr>, f64),
    Call(Func, Arc<Expr>),
}

impl Expr {
    fn domain_err(&self, t: f64, reason: &str) -> TimeFnError {
        TimeFnError::Domain {
            expr: self.to_string(),
            reason: reason.to_string(),
            t,
        }
    }

    fn jet(&self, t: f64) -> Result<Jet3, TimeFnError> {
        Ok(match self {
            Expr::Const(c) => Jet3::constant(*c),
            Expr::Var => Jet3::variable(t),
            Expr::Neg(a) => -a.jet(t)?,
            Expr::Add(a, b) => a.jet(t)? + b.jet(t)?,
            Expr::Sub(a, b) => a.jet(t)? - b.jet(t)?,
            Expr::Mul(a, b) => a.jet(t)? * b.jet(t)?,
            Expr::Div(a, b) => {
                let den = b.jet(t)?;
                if den.value == 0.0 {
                    return Err(b.domain_err(t, "division by zero"));
                }
                a.jet(t)? * den.recip()
            }
            Expr::Pow(a, p) => {
                let base = a.jet(t)?;
                if p.fract() != 0.0 && base.value <= 0.0 {
                    return Err(a.domain_err(t, "fractional power of a non-positive value"));
                }
                if *p < 0.0 && base.value == 0.0 {
                    return Err(a.domain_err(t, "negative power of zero"));
                }
                base.powf(*p)
            }
            Expr::Call(f, a) => {
                let x = a.jet(t)?;
                match f {
                    Func::Exp => x.exp(),
                    Func::Ln => {
                        if x.value <= 0.0 {
                            return Err(a.domain_err(t, "logarithm of a non-positive value"));
                        }
                        x.ln()
                    }
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Sinh => x.sinh(),
                    Func::Cosh => x.cosh(),
                }
            }
        })
    }

    fn depends_on_t(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.depends_on_t(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.depends_on_t() || b.depends_on_t()
            }
        }
    }

    fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    fn derivative(self: &Arc<Self>) -> Arc<Expr> {
        use Expr::*;
        match &**self {
            Const(_) => cst(0.0),
            Var => cst(1.0),
            Neg(a) => neg(a.derivative()),
            Add(a, b) => add(a.derivative(), b.derivative()),
            Sub(a, b) => sub(a.derivative(), b.derivative()),
            Mul(a, b) => add(mul(a.derivative(), b.clone()), mul(a.clone(), b.derivative())),
            Div(a, b) => {
                let num = sub(mul(a.derivative(), b.clone()), mul(a.clone(), b.derivative()));
                div(num, pow(b.clone(), 2.0))
            }
            Pow(a, p) => mul(mul(cst(*p), pow(a.clone(), p - 1.0)), a.derivative()),
            Call(f, a) => {
                let inner = a.derivative();
                let outer = match f {
                    Func::Exp => self.clone(),
                    Func::Ln => return div(inner, a.clone()),
                    Func::Sin => call(Func::Cos, a.clone()),
                    Func::Cos => neg(call(Func::Sin, a.clone())),
                    Func::Sinh => call(Func::Cosh, a.clone()),
                    Func::Cosh => call(Func::Sinh, a.clone()),
                };
                mul(outer, inner)
            }
        }
    }
}

// Constructors with light constant folding, so symbolic derivatives stay small.

fn cst(c: f64) -> Arc<Expr> {
    Arc::new(Expr::Const(c))
}

fn neg(a: Arc<Expr>) -> Arc<Expr> {
    match a.as_const() {
        Some(c) => cst(-c),
        None => Arc::new(Expr::Neg(a)),
    }
}

fn add(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => cst(x + y),
        (Some(x), None) if x == 0.0 => b,
        (None, Some(y)) if y == 0.0 => a,
        _ => Arc::new(Expr::Add(a, b)),
    }
}

fn sub(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => cst(x - y),
        (Some(x), None) if x == 0.0 => neg(b),
        (None, Some(y)) if y == 0.0 => a,
        _ => Arc::new(Expr::Sub(a, b)),
    }
}

fn mul(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => cst(x * y),
        (Some(x), _) | (_, Some(x)) if x == 0.0 => cst(0.0),
        (Some(x), None) if x == 1.0 => b,
        (None, Some(y)) if y == 1.0 => a,
        _ => Arc::new(Expr::Mul(a, b)),
    }
}

fn div(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
    match (a.as_const(), b.as_const()) {
        (Some(x), _) if x == 0.0 => cst(0.0),
        (_, Some(y)) if y == 1.0 => a,
        _ => Arc::new(Expr::Div(a, b)),
    }
}

fn pow(a: Arc<Expr>, p: f64) -> Arc<Expr> {
    if p == 0.0 {
        return cst(1.0);
    }
    if p == 1.0 {
        return a;
    }
    Arc::new(Expr::Pow(a, p))
}

fn call(f: Func, a: Arc<Expr>) -> Arc<Expr> {
    Arc::new(Expr::Call(f, a))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 => write!(f, "({c})"),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var => f.write_str("t"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/({b})"),
            Expr::Pow(a, p) => write!(f, "({a})^({p})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

/// A scalar function of time with exact derivative jets.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeFunction {
    expr: Arc<Expr>,
    interval: Option<(f64, f64)>,
}

impl TimeFunction {
    /// Parse an expression in `t` (numbers, `+ - * / ^`, parentheses and
    /// the functions `exp ln sin cos sinh cosh`).
    pub fn parse(text: &str) -> Result<Self, TimeFnError> {
        Ok(TimeFunction {
            expr: parse::parse(text)?,
            interval: None,
        })
    }

    pub fn constant(c: f64) -> Self {
        TimeFunction {
            expr: cst(c),
            interval: None,
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn t() -> Self {
        TimeFunction {
            expr: Arc::new(Expr::Var),
            interval: None,
        }
    }

    /// Restrict evaluation to `lo <= t <= hi`.
    pub fn with_interval(mut self, lo: f64, hi: f64) -> Self {
        self.interval = Some((lo, hi));
        self
    }

    pub fn interval(&self) -> Option<(f64, f64)> {
        self.interval
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn is_constant(&self) -> bool {
        !self.expr.depends_on_t()
    }

    fn wrap(&self, expr: Arc<Expr>) -> Self {
        TimeFunction {
            expr,
            interval: self.interval,
        }
    }

    fn merged(&self, other: &TimeFunction, expr: Arc<Expr>) -> Self {
        let interval = match (self.interval, other.interval) {
            (Some((a, b)), Some((c, d))) => Some((a.max(c), b.min(d))),
            (i, None) | (None, i) => i,
        };
        TimeFunction { expr, interval }
    }

    pub fn eval_jet(&self, t: f64) -> Result<Jet3, TimeFnError> {
        if let Some((lo, hi)) = self.interval {
            if !(lo..=hi).contains(&t) {
                return Err(TimeFnError::OutsideInterval { t, lo, hi });
            }
        }
        let jet = self.expr.jet(t)?;
        if !jet.is_finite() {
            return Err(self.expr.domain_err(t, "non-finite result"));
        }
        Ok(jet)
    }

    pub fn value(&self, t: f64) -> Result<f64, TimeFnError> {
        self.eval_jet(t).map(|j| j.value)
    }

    /// Symbolic time derivative.
    pub fn derivative(&self) -> Self {
        self.wrap(self.expr.derivative())
    }

    pub fn ln(&self) -> Self {
        self.wrap(call(Func::Ln, self.expr.clone()))
    }

    pub fn exp(&self) -> Self {
        self.wrap(call(Func::Exp, self.expr.clone()))
    }

    /// `self^p` for integer or half-integer `p`.
    pub fn powf(&self, p: f64) -> Self {
        assert!((2.0 * p).fract() == 0.0, "exponent must be a half-integer");
        self.wrap(pow(self.expr.clone(), p))
    }

    pub fn scale(&self, k: f64) -> Self {
        self.wrap(mul(cst(k), self.expr.clone()))
    }
}

impl fmt::Display for TimeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

impl std::str::FromStr for TimeFunction {
    type Err = TimeFnError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TimeFunction::parse(s)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $ctor:ident) => {
        impl $tr<&TimeFunction> for &TimeFunction {
            type Output = TimeFunction;
            fn $method(self, rhs: &TimeFunction) -> TimeFunction {
                self.merged(rhs, $ctor(self.expr.clone(), rhs.expr.clone()))
            }
        }
        impl $tr<TimeFunction> for TimeFunction {
            type Output = TimeFunction;
            fn $method(self, rhs: TimeFunction) -> TimeFunction {
                (&self).$method(&rhs)
            }
        }
        impl $tr<f64> for &TimeFunction {
            type Output = TimeFunction;
            fn $method(self, rhs: f64) -> TimeFunction {
                self.wrap($ctor(self.expr.clone(), cst(rhs)))
            }
        }
        impl $tr<f64> for TimeFunction {
            type Output = TimeFunction;
            fn $method(self, rhs: f64) -> TimeFunction {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Neg for &TimeFunction {
    type Output = TimeFunction;
    fn neg(self) -> TimeFunction {
        self.wrap(neg(self.expr.clone()))
    }
}

impl Neg for TimeFunction {
    type Output = TimeFunction;
    fn neg(self) -> TimeFunction {
        -&self
    }
}
