//! A small parser for rational expressions in `r` with the Schwarzschild
//! symbols `M`, `omega`, `l`, `B`, `A`, `f`, `f1` and `i`, used to enter
//! source and reference operators in readable form.
//!
//! Grammar: sums and differences of products; juxtaposition multiplies;
//! `^` takes an integer exponent (optionally signed or parenthesised).

use std::iter::Peekable;
use std::str::Chars;

use crate::arith::{GaussianRational, RatFunc};
use crate::error::{Error, Result};

/// Values substituted for the named symbols.
#[derive(Clone, Debug)]
pub struct Env {
    pub m: GaussianRational,
    pub omega: GaussianRational,
    pub l: u32,
    pub a_l: Option<GaussianRational>,
}

impl Env {
    fn lookup(&self, name: &str) -> Result<RatFunc> {
        let two_m = RatFunc::constant(&self.m * &GaussianRational::from_i64(2));
        let f1 = &two_m * &RatFunc::r_pow(-1);
        Ok(match name {
            "r" => RatFunc::r(),
            "M" => RatFunc::constant(self.m.clone()),
            "omega" | "ω" | "w" => RatFunc::constant(self.omega.clone()),
            "l" => RatFunc::from_i64(i64::from(self.l)),
            "B" => RatFunc::from_i64(i64::from(self.l) * (i64::from(self.l) + 1)),
            "A" => RatFunc::constant(
                self.a_l.clone().ok_or_else(|| Error::Parse("expression uses A but no A_l was given".into()))?,
            ),
            "f" => &RatFunc::one() - &f1,
            "f1" => f1,
            "i" => RatFunc::constant(GaussianRational::i()),
            other => return Err(Error::Parse(format!("unknown symbol `{other}`"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut it: Peekable<Chars> = src.chars().peekable();
    while let Some(&c) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = it.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                it.next();
            }
            out.push(Tok::Num(s.parse().map_err(|_| Error::Parse(format!("number too large: {s}")))?));
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = it.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                s.push(d);
                it.next();
            }
            out.push(Tok::Ident(s));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            it.next();
        } else if c == '−' {
            out.push(Tok::Op('-'));
            it.next();
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    env: &'a Env,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{op}` at token {}", self.pos)))
        }
    }

    fn sum(&mut self) -> Result<RatFunc> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.product()?;
            } else if self.eat('-') {
                acc = &acc - &self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Op('(')))
    }

    fn product(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let den = self.unary()?;
                acc = acc.checked_div(&den)?;
            } else if self.starts_atom() {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.eat('(') {
            let k = self.exponent()?;
            self.expect(')')?;
            return Ok(k);
        }
        let sign = if self.eat('-') { -1 } else { 1 };
        match self.peek().cloned() {
            Some(Tok::Num(k)) => {
                self.pos += 1;
                Ok(sign * k)
            }
            _ => Err(Error::Parse("exponent must be an integer".into())),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.eat('^') {
            let k = self.exponent()?;
            return base.powi(k).ok_or(Error::DivisionByZero);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RatFunc::from_i64(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.env.lookup(&name)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.sum()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }
}

/// Evaluates `src` to an exact rational function of `r`.
pub fn parse_expr(src: &str, env: &Env) -> Result<RatFunc> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, env };
    let v = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Poly;

    fn env() -> Env {
        Env { m: GaussianRational::from_i64(1), omega: GaussianRational::from_i64(3), l: 2, a_l: None }
    }

    #[test]
    fn basics() {
        let e = env();
        assert_eq!(parse_expr("2 r^2 - 1", &e).unwrap(), RatFunc::from_poly(Poly::from_i64s(&[-1, 0, 2])));
        assert_eq!(parse_expr("f1", &e).unwrap(), RatFunc::from_i64(2) * RatFunc::r_pow(-1));
        assert_eq!(parse_expr("f + f1", &e).unwrap(), RatFunc::one());
        assert_eq!(parse_expr("B/(l+1)", &e).unwrap(), RatFunc::from_i64(2));
        assert_eq!(parse_expr("r^(-2) r^2", &e).unwrap(), RatFunc::one());
        assert_eq!(parse_expr("-r^2", &e).unwrap(), -RatFunc::r_pow(2));
        assert_eq!(parse_expr("i*i", &e).unwrap(), RatFunc::from_i64(-1));
        assert_eq!(parse_expr("2/3/omega", &e).unwrap(), RatFunc::constant(GaussianRational::from_frac(2, 9)));
    }

    #[test]
    fn errors() {
        let e = env();
        assert!(matches!(parse_expr("A", &e), Err(Error::Parse(_))));
        assert!(matches!(parse_expr("1/(f + f1 - 1)", &e), Err(Error::DivisionByZero)));
        assert!(parse_expr("(r", &e).is_err());
        assert!(parse_expr("r^x", &e).is_err());
        assert!(parse_expr("x", &e).is_err());
    }
}
