//! Exact elements of Q(i).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A Gaussian rational `re + im·i` with both parts kept in lowest terms.
///
/// `BigRational` already normalizes (positive denominator, coprime parts), so
/// every value has exactly one representation and structural equality is
/// numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

/// The four field operations, for [`rat_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Applies `op` to `a` and `b`, reporting division by zero as an error.
pub fn rat_arith(a: &GaussianRational, b: &GaussianRational, op: ArithOp) -> Result<GaussianRational> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational { re, im: BigRational::zero() }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::real(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::real(BigRational::from_integer(n))
    }

    /// `p/q` as a real Gaussian rational. Panics when `q == 0`.
    pub fn from_frac(p: i64, q: i64) -> Self {
        Self::real(BigRational::new(p.into(), q.into()))
    }

    pub fn i() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The integer value, if this is a real integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.im.is_zero() && self.re.is_integer() {
            Some(self.re.to_integer())
        } else {
            None
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        self.to_integer().and_then(|n| n.to_i64())
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `re² + im²`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(GaussianRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        rhs.inv().map(|r| self * &r).ok_or(Error::DivisionByZero)
    }

    pub fn powi(&self, exp: i32) -> Option<Self> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut b = base;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Some(acc)
    }

    /// Total bit length of both numerators and denominators; used as the pivot
    /// weight during elimination.
    pub fn bit_size(&self) -> u64 {
        self.re.numer().bits() + self.re.denom().bits() + self.im.numer().bits() + self.im.denom().bits()
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_i64(1)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_i64(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(q: BigRational) -> Self {
        Self::real(q)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    /// Panics on division by zero; use [`GaussianRational::checked_div`] for a
    /// fallible version.
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        self.checked_div(rhs).expect("division by zero Gaussian rational")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

macro_rules! forward_owned_binop {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned_binop!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&fmt_rational(&self.re));
        }
        let mag = self.im.abs();
        let im_body = if mag.is_one() { String::new() } else { fmt_rational(&mag) };
        if self.re.is_zero() {
            let sign = if self.im.is_negative() { "-" } else { "" };
            write!(f, "{sign}{im_body}i")
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "{}{sign}{im_body}i", fmt_rational(&self.re))
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (sign, body) = match s.as_bytes().first()? {
        b'+' => (1, &s[1..]),
        b'-' => (-1, &s[1..]),
        _ => (1, s),
    };
    if body.is_empty() {
        return None;
    }
    let q = match body.split_once('/') {
        Some((p, d)) => {
            let p: BigInt = parse_digits(p)?;
            let d: BigInt = parse_digits(d)?;
            if d.is_zero() {
                return None;
            }
            BigRational::new(p, d)
        }
        None => BigRational::from_integer(parse_digits(body)?),
    };
    Some(if sign < 0 { -q } else { q })
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for GaussianRational {
    type Err = Error;

    /// Accepts `p`, `p/q`, `p/qi`, `i`, `-i` and `a+bi` / `a-bi` with each
    /// part in either integer or `p/q` form.
    fn from_str(raw: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid Gaussian rational {raw:?}"));
        let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        let Some(body) = s.strip_suffix('i') else {
            return parse_rational(&s).map(GaussianRational::real).ok_or_else(bad);
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        // The imaginary part starts at the last sign that is not the leading one.
        let split = body
            .char_indices()
            .rev()
            .find(|&(idx, c)| idx > 0 && (c == '+' || c == '-'))
            .map(|(idx, _)| idx);
        let (re_str, im_str) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let re = if re_str.is_empty() { BigRational::zero() } else { parse_rational(re_str).ok_or_else(bad)? };
        let im = match im_str {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other).ok_or_else(bad)?,
        };
        Ok(GaussianRational { re, im })
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(GaussianRational::from_i64(n)),
        }
    }
}
