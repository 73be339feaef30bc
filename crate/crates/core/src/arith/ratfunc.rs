use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize};

use super::{GaussianRational, Poly};
use crate::error::{Error, Result};

/// A rational function of `r` over Q(i) in canonical form: the denominator is
/// monic and coprime to the numerator, and zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            let inv = den.coeff(0).inv().expect("nonzero denominator");
            return RatFunc { num: num.scale(&inv), den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let lc_inv = den.leading_coeff().expect("nonzero").inv().expect("nonzero");
        RatFunc { num: num.scale(&lc_inv), den: den.scale(&lc_inv) }
    }

    /// Coprime `num`, `den`: only rescales to a monic denominator.
    fn from_parts(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let lc = den.leading_coeff().expect("nonzero denominator");
        if lc.is_one() {
            return RatFunc { num, den };
        }
        let inv = lc.inv().expect("nonzero");
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        RatFunc { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_i64(c: i64) -> Self {
        Self::constant(GaussianRational::from_i64(c))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    /// The independent variable `r`.
    pub fn r() -> Self {
        Self::from_poly(Poly::x())
    }

    /// `(r - rho)^k` for any integer `k`.
    pub fn power_of_linear(rho: &GaussianRational, k: i64) -> Self {
        let base = Poly::linear(rho).pow(k.unsigned_abs() as u32);
        if k >= 0 {
            Self::from_poly(base)
        } else {
            RatFunc { num: Poly::one(), den: base }
        }
    }

    /// `r^k` for any integer `k`.
    pub fn r_pow(k: i64) -> Self {
        Self::power_of_linear(&GaussianRational::zero(), k)
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value, if this function is constant.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<Self> {
        let inv = rhs.inv().ok_or(Error::DivisionByZero)?;
        Ok(self * &inv)
    }

    pub fn powi(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let e = exp.unsigned_abs() as u32;
        Some(RatFunc { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn derivative(&self) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.derivative());
        }
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::normalized(num, &self.den * &self.den)
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &GaussianRational) -> Option<GaussianRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(x) / &d)
    }

    /// `f(r + shift)`.
    pub fn taylor_shift(&self, shift: &GaussianRational) -> Self {
        Self::normalized(self.num.taylor_shift(shift), self.den.taylor_shift(shift))
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

#[derive(Deserialize)]
struct RawRatFunc {
    num: Poly,
    #[serde(default = "Poly::one")]
    den: Poly,
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawRatFunc::deserialize(d)?;
        RatFunc::new(raw.num, raw.den).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Poly| {
            let compound = p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
                || (p.degree() == Some(0) && {
                    let c = p.coeff(0);
                    !c.is_real() && !c.re().is_zero()
                });
            if compound {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::normalized(&self.num + &rhs.num, self.den.clone());
        }
        if self.den.is_one() || rhs.den.is_one() {
            // a + c/d = (a d + c)/d is already in lowest terms
            let (poly, frac) = if self.den.is_one() { (self, rhs) } else { (rhs, self) };
            let num = &(&poly.num * &frac.den) + &frac.num;
            return RatFunc { num, den: frac.den.clone() };
        }
        // Henrici: with g = gcd(b, d), only g can divide the new numerator
        let g = Poly::gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RatFunc::from_parts(num, &self.den * &rhs.den);
        }
        let b = self.den.exact_div(&g).expect("gcd divides");
        let d = rhs.den.exact_div(&g).expect("gcd divides");
        let num = &(&self.num * &d) + &(&rhs.num * &b);
        if num.is_zero() {
            return RatFunc::zero();
        }
        let h = Poly::gcd(&num, &g);
        let den = &(&b * &d) * &g;
        if h.is_one() {
            RatFunc::from_parts(num, den)
        } else {
            RatFunc::from_parts(num.exact_div(&h).expect("gcd divides"), den.exact_div(&h).expect("gcd divides"))
        }
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        // cross-cancel: gcd(a/g1 · c/g2, b/g2 · d/g1) = 1
        let g1 = Poly::gcd(&self.num, &rhs.den);
        let g2 = Poly::gcd(&rhs.num, &self.den);
        let cancel = |p: &Poly, g: &Poly| if g.is_one() { p.clone() } else { p.exact_div(g).expect("gcd divides") };
        let num = &cancel(&self.num, &g1) * &cancel(&rhs.num, &g2);
        let den = &cancel(&self.den, &g2) * &cancel(&rhs.den, &g1);
        RatFunc::from_parts(num, den)
    }
}

/// Panics on division by zero; use [`RatFunc::checked_div`] for a fallible variant.
impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("rational function division by zero")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl From<GaussianRational> for RatFunc {
    fn from(c: GaussianRational) -> Self {
        RatFunc::constant(c)
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<i64> for RatFunc {
    fn from(c: i64) -> Self {
        RatFunc::from_i64(c)
    }
}
