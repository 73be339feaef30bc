//! Dense univariate polynomials over Q(i).
//!
//! The same type serves for polynomials in the independent variable `r` and
//! for characteristic polynomials in the index `n`; only the printed variable
//! name differs (see [`Poly::display_in`]).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::GaussianRational;

/// Coefficients from degree 0 upward. The highest stored coefficient is never
/// zero, so the zero polynomial is the empty list.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<GaussianRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GaussianRational::from_i64(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Self::monomial(GaussianRational::one(), 1)
    }

    pub fn monomial(c: GaussianRational, degree: usize) -> Self {
        let mut coeffs = vec![GaussianRational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// `x - root`.
    pub fn linear(root: &GaussianRational) -> Self {
        Self::new(vec![-root, GaussianRational::one()])
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<GaussianRational> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn leading_coeff(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Divides by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&lc.inv().expect("nonzero leading coefficient")),
            _ => self.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussianRational::from_i64(k as i64))
                .collect(),
        )
    }

    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![GaussianRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Quotient and remainder. Panics on division by the zero polynomial.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lc_inv = divisor.coeffs[dd].inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![GaussianRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let t = &c * d;
                rem[k + j] -= &t;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// `p(x + shift)`.
    pub fn taylor_shift(&self, shift: &GaussianRational) -> Self {
        if shift.is_zero() {
            return self.clone();
        }
        let lin = Poly::new(vec![shift.clone(), GaussianRational::one()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Coefficients in reverse order: `x^deg · p(1/x)`.
    pub fn reversed(&self) -> Self {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Multiplicity of `root` as a zero of `self`; `None` for the zero polynomial.
    pub fn root_multiplicity(&self, root: &GaussianRational) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let mut count = 0;
        let mut p = self.clone();
        loop {
            let (q, rem) = p.synthetic_div(root);
            if !rem.is_zero() {
                return Some(count);
            }
            count += 1;
            p = q;
        }
    }

    /// Division by `x - root`: quotient and the value `p(root)`.
    pub fn synthetic_div(&self, root: &GaussianRational) -> (Poly, GaussianRational) {
        if self.is_zero() {
            return (Poly::zero(), GaussianRational::zero());
        }
        let n = self.coeffs.len();
        let mut quot = vec![GaussianRational::zero(); n - 1];
        let mut carry = GaussianRational::zero();
        for k in (0..n).rev() {
            let val = &self.coeffs[k] + &(&carry * root);
            if k == 0 {
                return (Poly::new(quot), val);
            }
            quot[k - 1] = val.clone();
            carry = val;
        }
        unreachable!()
    }

    /// Number of leading zero coefficients, i.e. the multiplicity of the root 0.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.monic(), b.monic());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r.monic();
        }
        x.monic()
    }

    pub fn lcm(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let g = Poly::gcd(a, b);
        (a * &b.exact_div(&g).expect("gcd divides")).monic()
    }

    /// Content-free square-free part, monic.
    pub fn squarefree_part(&self) -> Poly {
        if self.is_constant() {
            return self.monic();
        }
        let g = Poly::gcd(self, &self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    pub fn display_in<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, var }
    }
}

struct PolyDisplay<'a> {
    poly: &'a Poly,
    var: &'a str,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let compound = !c.is_real() && !c.re().is_zero();
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ => (false, text),
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let body = if compound { format!("({body})") } else { body };
            match k {
                0 => f.write_str(&body)?,
                _ => {
                    if body != "1" {
                        write!(f, "{body}*")?;
                    }
                    f.write_str(self.var)?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("r"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Poly::new(coeffs)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect();
        Poly::new(coeffs)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = a * b;
                coeffs[i + j] += &t;
            }
        }
        Poly::new(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64s(c)
    }

    #[test]
    fn gcd_shared_root() {
        // r^2 - 1 and r - 1
        assert_eq!(Poly::gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])), p(&[-1, 1]));
    }

    #[test]
    fn gcd_with_unit() {
        assert_eq!(Poly::gcd(&Poly::x(), &Poly::one()), Poly::one());
    }

    #[test]
    fn gcd_of_zeros_is_zero() {
        assert!(Poly::gcd(&Poly::zero(), &Poly::zero()).is_zero());
    }

    #[test]
    fn gcd_against_factored_forms() {
        // (r-2)^2 (r+1) and (r-2)(r+3): compare against the known common factor.
        let a = &(&p(&[-2, 1]) * &p(&[-2, 1])) * &p(&[1, 1]);
        let b = &p(&[-2, 1]) * &p(&[3, 1]);
        let g = Poly::gcd(&a, &b);
        assert_eq!(g, p(&[-2, 1]));
        assert!(a.exact_div(&g).is_some() && b.exact_div(&g).is_some());
    }

    #[test]
    fn division_identity() {
        let a = p(&[5, -3, 0, 2, 7]);
        let b = p(&[1, 0, 3]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn shift_and_multiplicity() {
        // (r-2)^3 (r+1)
        let a = &p(&[-2, 1]).pow(3) * &p(&[1, 1]);
        let two = GaussianRational::from_i64(2);
        assert_eq!(a.root_multiplicity(&two), Some(3));
        assert_eq!(a.taylor_shift(&two).low_order(), Some(3));
        assert_eq!(a.root_multiplicity(&GaussianRational::from_i64(5)), Some(0));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 0, 1]).to_string(), "r^2 - 1");
        assert_eq!(p(&[0, -2, 3]).display_in("n").to_string(), "3*n^2 - 2*n");
        let c = Poly::new(vec!["1+i".parse().unwrap(), "-i".parse().unwrap()]);
        assert_eq!(c.to_string(), "-i*r + (1+i)");
    }
}
