//! Text syntax for polynomials and rational expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary | power)*   juxtaposition multiplies: 2t, t1Z
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | variable | '(' expr ')' | '[' expr ']'
//! ```
//!
//! Variables are `X`, `Y`, `Z`, `t`, `t1..`, `u1..`; a lowercase `x`, `y`,
//! `z` is accepted as the corresponding coordinate. Division by a
//! non-constant is kept in the tree and only evaluates where the divisor is
//! invertible.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::Rat;
use super::{MultiPoly, Var};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rat),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.pos + 1, self.msg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("division by a non-constant `{0}` is not a polynomial")]
    NonPolynomial(String),
    #[error("division by zero")]
    DivisionByZero,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn starts_atom(c: u8) -> bool {
        c.is_ascii_digit() || c == b'(' || c == b'[' || b"XYZxyztu".contains(&c)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(c) if Self::starts_atom(c) => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected a non-negative integer exponent");
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| ParseError { pos: start, msg: "exponent too large".into() })?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let Some(c) = self.peek() else {
            return self.err("unexpected end of input");
        };
        match c {
            b'(' | b'[' => {
                let close = if c == b'(' { b')' } else { b']' };
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(close) {
                    return self.err(format!("expected `{}`", close as char));
                }
                self.pos += 1;
                Ok(e)
            }
            b'0'..=b'9' => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .unwrap();
                Ok(Expr::Num(Rat::from_integer(n)))
            }
            b'X' | b'x' => {
                self.pos += 1;
                Ok(Expr::Var(Var::X))
            }
            b'Y' | b'y' => {
                self.pos += 1;
                Ok(Expr::Var(Var::Y))
            }
            b'Z' | b'z' => {
                self.pos += 1;
                Ok(Expr::Var(Var::Z))
            }
            b't' | b'u' => {
                let start = self.pos;
                self.pos += 1;
                if self.src.get(self.pos) == Some(&b'_') {
                    self.pos += 1;
                }
                let dstart = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[dstart..self.pos]).unwrap();
                let name = format!("{}{}", c as char, digits);
                name.parse::<Var>().map(Expr::Var).map_err(|e| ParseError {
                    pos: start,
                    msg: e.to_string(),
                })
            }
            other => self.err(format!("unexpected character `{}`", other as char)),
        }
    }
}

impl Expr {
    pub fn parse(s: &str) -> Result<Expr, ParseError> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        if p.peek().is_some() {
            return p.err("unexpected trailing input");
        }
        Ok(e)
    }

    /// Converts to a polynomial; division is allowed only by nonzero
    /// constants.
    pub fn to_poly(&self) -> Result<MultiPoly, ExprError> {
        Ok(match self {
            Expr::Num(r) => MultiPoly::constant(r.clone()),
            Expr::Var(v) => MultiPoly::var(*v),
            Expr::Neg(a) => -a.to_poly()?,
            Expr::Add(a, b) => a.to_poly()? + b.to_poly()?,
            Expr::Sub(a, b) => a.to_poly()? - b.to_poly()?,
            Expr::Mul(a, b) => a.to_poly()? * b.to_poly()?,
            Expr::Div(a, b) => {
                let d = b.to_poly()?;
                match d.as_constant() {
                    Some(c) if c.is_zero() => return Err(ExprError::DivisionByZero),
                    Some(c) => a.to_poly()?.scale(&(Rat::one() / c)),
                    None => return Err(ExprError::NonPolynomial(d.to_string())),
                }
            }
            Expr::Pow(a, e) => a.to_poly()?.pow(*e),
        })
    }

    /// Generic evaluation; `div` decides invertibility.
    pub fn eval<S: Clone, E>(
        &self,
        leaf_var: &impl Fn(Var) -> Result<S, E>,
        leaf_num: &impl Fn(&Rat) -> S,
        ops: &impl EvalOps<S, E>,
    ) -> Result<S, E> {
        Ok(match self {
            Expr::Num(r) => leaf_num(r),
            Expr::Var(v) => leaf_var(*v)?,
            Expr::Neg(a) => ops.neg(a.eval(leaf_var, leaf_num, ops)?),
            Expr::Add(a, b) => ops.add(
                a.eval(leaf_var, leaf_num, ops)?,
                b.eval(leaf_var, leaf_num, ops)?,
            ),
            Expr::Sub(a, b) => ops.sub(
                a.eval(leaf_var, leaf_num, ops)?,
                b.eval(leaf_var, leaf_num, ops)?,
            ),
            Expr::Mul(a, b) => ops.mul(
                a.eval(leaf_var, leaf_num, ops)?,
                b.eval(leaf_var, leaf_num, ops)?,
            )?,
            Expr::Div(a, b) => ops.div(
                a.eval(leaf_var, leaf_num, ops)?,
                b.eval(leaf_var, leaf_num, ops)?,
            )?,
            Expr::Pow(a, e) => {
                let base = a.eval(leaf_var, leaf_num, ops)?;
                let mut acc = leaf_num(&Rat::one());
                for _ in 0..*e {
                    acc = ops.mul(acc, base.clone())?;
                }
                acc
            }
        })
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => out.push(*v),
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

/// Ring operations with fallible product and division, for [`Expr::eval`].
pub trait EvalOps<S, E> {
    fn add(&self, a: S, b: S) -> S;
    fn sub(&self, a: S, b: S) -> S;
    fn mul(&self, a: S, b: S) -> Result<S, E>;
    fn neg(&self, a: S) -> S;
    fn div(&self, a: S, b: S) -> Result<S, E>;
}

/// Parses a polynomial in the canonical syntax.
pub fn parse_poly(s: &str) -> Result<MultiPoly, ExprError> {
    Expr::parse(s)?.to_poly()
}

/// Parses a univariate polynomial in `var`.
pub fn parse_upoly(s: &str, var: Var) -> Result<super::UniPoly<Rat>, ExprError> {
    let p = parse_poly(s)?;
    p.to_univariate(var).ok_or_else(|| {
        ExprError::Parse(ParseError {
            pos: 0,
            msg: format!("expected a polynomial in {var} only, got `{p}`"),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let p = parse_poly("t^3+t^2+t-1").unwrap();
        assert_eq!(p.to_string(), "t^3+t^2+t-1");
        let l = parse_poly("X+(t3-t4)*Y-t3*Z").unwrap();
        assert_eq!(parse_poly(&l.to_string()).unwrap(), l);
        assert_eq!(l.num_terms(), 4);
    }

    #[test]
    fn juxtaposition_and_brackets() {
        let a = parse_poly("[X+(t_3-t_4)Y-t_3Z]").unwrap();
        let b = parse_poly("X+(t3-t4)*Y-t3*Z").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_poly("2t").unwrap(), parse_poly("2*t").unwrap());
        assert_eq!(parse_poly("x-t2Z").unwrap(), parse_poly("X-t2*Z").unwrap());
    }

    #[test]
    fn rational_coefficients() {
        let p = parse_poly("t^2-1/2").unwrap();
        assert_eq!(p.to_string(), "t^2-1/2");
        assert_eq!(parse_poly("-1/2*t").unwrap().to_string(), "-1/2*t");
        assert_eq!(
            parse_poly("1/0"),
            Err(ExprError::DivisionByZero)
        );
        assert!(matches!(parse_poly("1/t"), Err(ExprError::NonPolynomial(_))));
    }

    #[test]
    fn errors_have_positions() {
        let e = Expr::parse("t^3+?").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = Expr::parse("(t+1").unwrap_err();
        assert!(e.msg.contains(")"));
        assert!(Expr::parse("w1").is_err());
        assert!(Expr::parse("t0").is_err());
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(parse_poly("-t^2").unwrap().to_string(), "-t^2");
        assert_eq!(parse_poly("2*-t").unwrap().to_string(), "-2*t");
    }

    #[test]
    fn univariate() {
        let u = parse_upoly("t^3-4t^2+3t+1", Var::T).unwrap();
        assert_eq!(u.degree(), Some(3));
        assert!(parse_upoly("t1+t", Var::T).is_err());
    }
}
