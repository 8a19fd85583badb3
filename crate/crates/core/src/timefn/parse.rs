//! Recursive-descent parser for the time-function grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | 't' | name '(' expr ')' | '(' expr ')'
//! ```
//!
//! Exponents must be constant integers or half-integers.

use std::sync::Arc;

use super::{call, cst, neg, Expr, Func, TimeFnError};

pub(super) fn parse(text: &str) -> Result<Arc<Expr>, TimeFnError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.syntax(format!("unexpected `{}`", p.chars[p.pos])));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn syntax(&self, message: impl Into<String>) -> TimeFnError {
        TimeFnError::Syntax {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), TimeFnError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Arc<Expr>, TimeFnError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Arc::new(Expr::Add(lhs, self.term()?));
            } else if self.eat('-') {
                lhs = Arc::new(Expr::Sub(lhs, self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Arc<Expr>, TimeFnError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Arc::new(Expr::Mul(lhs, self.unary()?));
            } else if self.eat('/') {
                lhs = Arc::new(Expr::Div(lhs, self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Arc<Expr>, TimeFnError> {
        if self.eat('-') {
            return Ok(neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Arc<Expr>, TimeFnError> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.pos;
        let exponent = self.unary()?;
        let p = const_value(&exponent).ok_or_else(|| TimeFnError::Syntax {
            pos: at,
            message: "exponent must be a constant".into(),
        })?;
        if (2.0 * p).fract() != 0.0 || !p.is_finite() {
            return Err(TimeFnError::Syntax {
                pos: at,
                message: format!("exponent {p} is not an integer or half-integer"),
            });
        }
        Ok(Arc::new(Expr::Pow(base, p)))
    }

    fn primary(&mut self) -> Result<Arc<Expr>, TimeFnError> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                if name == "t" {
                    return Ok(Arc::new(Expr::Var));
                }
                let func = Func::from_name(&name).ok_or(TimeFnError::UnknownIdentifier {
                    pos: start,
                    name,
                })?;
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                Ok(call(func, arg))
            }
            Some(c) => Err(self.syntax(format!("unexpected `{c}`"))),
        }
    }

    fn number(&mut self) -> Result<Arc<Expr>, TimeFnError> {
        let start = self.pos;
        let digits = |p: &mut Parser| {
            while p.chars.get(p.pos).is_some_and(|c| c.is_ascii_digit()) {
                p.pos += 1;
            }
        };
        digits(self);
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            digits(self);
        }
        // exponent only when followed by a digit, so `2exp` stays an error
        if matches!(self.chars.get(self.pos), Some('e' | 'E')) {
            let mut look = self.pos + 1;
            if matches!(self.chars.get(look), Some('+' | '-')) {
                look += 1;
            }
            if self.chars.get(look).is_some_and(|c| c.is_ascii_digit()) {
                self.pos = look;
                digits(self);
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>().map(cst).map_err(|_| TimeFnError::Syntax {
            pos: start,
            message: format!("malformed number `{text}`"),
        })
    }
}

fn const_value(e: &Expr) -> Option<f64> {
    Some(match e {
        Expr::Const(c) => *c,
        Expr::Var => return None,
        Expr::Neg(a) => -const_value(a)?,
        Expr::Add(a, b) => const_value(a)? + const_value(b)?,
        Expr::Sub(a, b) => const_value(a)? - const_value(b)?,
        Expr::Mul(a, b) => const_value(a)? * const_value(b)?,
        Expr::Div(a, b) => const_value(a)? / const_value(b)?,
        Expr::Pow(..) | Expr::Call(..) => return None,
    })
}
