//! Exact Laurent data of rational functions at finite points and at infinity.
//!
//! At a finite point `ρ` the relevant order is the smallest exponent of
//! `(r - ρ)` in the expansion (the leading order); at infinity it is the
//! largest exponent of `r` (the trailing order), which for a rational function
//! is `deg num - deg den`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{GaussianRational, Poly, RatFunc};
use crate::error::{Error, Result};

/// An integer order extended by the two sentinels used for the zero function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    NegInf,
    Finite(i64),
    PosInf,
}

impl Order {
    pub fn finite(self) -> Option<i64> {
        match self {
            Order::Finite(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }
}

impl From<i64> for Order {
    fn from(n: i64) -> Self {
        Order::Finite(n)
    }
}

/// Sum of orders. A sentinel absorbs any finite value; `+∞ + -∞` has no
/// meaning for valuations and panics.
impl Add for Order {
    type Output = Order;
    fn add(self, rhs: Order) -> Order {
        match (self, rhs) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            (Order::PosInf, Order::NegInf) | (Order::NegInf, Order::PosInf) => {
                panic!("sum of opposite infinite orders")
            }
            (Order::PosInf, _) | (_, Order::PosInf) => Order::PosInf,
            _ => Order::NegInf,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::NegInf => f.write_str("-inf"),
            Order::Finite(n) => write!(f, "{n}"),
            Order::PosInf => f.write_str("+inf"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(n) => s.serialize_i64(*n),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Order::Finite(n)),
            Raw::Str(s) => match s.as_str() {
                "-inf" => Ok(Order::NegInf),
                "+inf" | "inf" => Ok(Order::PosInf),
                _ => Err(serde::de::Error::custom(format!("bad order {s:?}"))),
            },
        }
    }
}

/// A point of the Riemann sphere around which expansions are taken.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExpansionPoint {
    Finite(GaussianRational),
    Infinity,
}

impl ExpansionPoint {
    pub fn zero() -> Self {
        ExpansionPoint::Finite(GaussianRational::zero())
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ExpansionPoint::Infinity)
    }

    /// The order a zero function has at this point.
    pub fn zero_order(&self) -> Order {
        match self {
            ExpansionPoint::Finite(_) => Order::PosInf,
            ExpansionPoint::Infinity => Order::NegInf,
        }
    }

    /// The local monomial `(r - ρ)^k`, or `r^k` at infinity.
    pub fn monomial(&self, k: i64) -> RatFunc {
        match self {
            ExpansionPoint::Finite(rho) => RatFunc::power_of_linear(rho, k),
            ExpansionPoint::Infinity => RatFunc::r_pow(k),
        }
    }

    /// True when `a` is a better (more singular) order than `b` here: smaller at
    /// finite points, larger at infinity.
    pub fn more_singular(&self, a: Order, b: Order) -> bool {
        match self {
            ExpansionPoint::Finite(_) => a < b,
            ExpansionPoint::Infinity => a > b,
        }
    }

    /// The most singular of a set of orders, or the zero sentinel if empty.
    pub fn extreme(&self, orders: impl IntoIterator<Item = Order>) -> Order {
        orders
            .into_iter()
            .fold(self.zero_order(), |acc, o| if self.more_singular(o, acc) { o } else { acc })
    }
}

impl fmt::Display for ExpansionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpansionPoint::Finite(rho) => write!(f, "{rho}"),
            ExpansionPoint::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ExpansionPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "oo" => Ok(ExpansionPoint::Infinity),
            other => Ok(ExpansionPoint::Finite(other.parse()?)),
        }
    }
}

impl Serialize for ExpansionPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExpansionPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The first few coefficients of a Laurent expansion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentExpansion {
    pub point: ExpansionPoint,
    pub valuation: Order,
    /// Coefficients starting at `valuation`, moving towards higher powers of
    /// `(r - ρ)` at finite points and lower powers of `r` at infinity.
    pub coeffs: Vec<GaussianRational>,
    /// The first order not represented in `coeffs`.
    pub truncation_order: Order,
}

impl LaurentExpansion {
    /// The truncated series as a rational function.
    pub fn to_ratfunc(&self) -> RatFunc {
        let Order::Finite(v) = self.valuation else {
            return RatFunc::zero();
        };
        let step = if self.point.is_infinity() { -1 } else { 1 };
        self.coeffs.iter().enumerate().fold(RatFunc::zero(), |acc, (k, c)| {
            &acc + &self.point.monomial(v + step * k as i64).scale(c)
        })
    }
}

/// Local order of `f` at `p`.
pub fn valuation(f: &RatFunc, p: &ExpansionPoint) -> Order {
    if f.is_zero() {
        return p.zero_order();
    }
    match p {
        ExpansionPoint::Finite(rho) => {
            let a = f.numer().root_multiplicity(rho).expect("nonzero") as i64;
            let b = f.denom().root_multiplicity(rho).expect("nonzero") as i64;
            Order::Finite(a - b)
        }
        ExpansionPoint::Infinity => {
            let a = f.numer().degree().expect("nonzero") as i64;
            let b = f.denom().degree().expect("nonzero") as i64;
            Order::Finite(a - b)
        }
    }
}

/// Numerator and denominator in the local variable `t`, with `t^v` split off.
/// At a finite point `t = r - ρ`; at infinity `t = 1/r`.
fn local_parts(f: &RatFunc, p: &ExpansionPoint) -> (i64, Poly, Poly) {
    match p {
        ExpansionPoint::Finite(rho) => {
            let n = f.numer().taylor_shift(rho);
            let d = f.denom().taylor_shift(rho);
            let a = n.low_order().expect("nonzero");
            let b = d.low_order().expect("nonzero");
            let strip = |q: &Poly, k: usize| Poly::new(q.coeffs()[k..].to_vec());
            (a as i64 - b as i64, strip(&n, a), strip(&d, b))
        }
        ExpansionPoint::Infinity => {
            let v = valuation(f, p).finite().expect("nonzero");
            (v, f.numer().reversed(), f.denom().reversed())
        }
    }
}

/// Power series quotient `n/d` to `terms` coefficients; `d(0) != 0`.
fn series_div(n: &Poly, d: &Poly, terms: usize) -> Vec<GaussianRational> {
    let d0_inv = d.coeff(0).inv().expect("unit constant term");
    let mut out: Vec<GaussianRational> = Vec::with_capacity(terms);
    for k in 0..terms {
        let mut acc = n.coeff(k);
        for j in 1..=k.min(d.degree().unwrap_or(0)) {
            acc -= &(&d.coeff(j) * &out[k - j]);
        }
        out.push(&acc * &d0_inv);
    }
    out
}

/// The first `terms` Laurent coefficients of `f` at `p`.
pub fn expand(f: &RatFunc, p: &ExpansionPoint, terms: usize) -> Result<LaurentExpansion> {
    if terms == 0 {
        return Err(Error::Precondition("an expansion needs at least one term".into()));
    }
    if f.is_zero() {
        return Ok(LaurentExpansion {
            point: p.clone(),
            valuation: p.zero_order(),
            coeffs: vec![GaussianRational::zero(); terms],
            truncation_order: p.zero_order(),
        });
    }
    let (v, n, d) = local_parts(f, p);
    let coeffs = series_div(&n, &d, terms);
    let t = terms as i64;
    let truncation_order = Order::Finite(if p.is_infinity() { v - t } else { v + t });
    Ok(LaurentExpansion { point: p.clone(), valuation: Order::Finite(v), coeffs, truncation_order })
}

/// Coefficient of `(r - ρ)^k` (or `r^k` at infinity) in the expansion of `f`.
pub fn coefficient(f: &RatFunc, p: &ExpansionPoint, k: i64) -> GaussianRational {
    let Order::Finite(v) = valuation(f, p) else {
        return GaussianRational::zero();
    };
    let offset = if p.is_infinity() { v - k } else { k - v };
    if offset < 0 {
        return GaussianRational::zero();
    }
    let (_, n, d) = local_parts(f, p);
    series_div(&n, &d, offset as usize + 1).pop().expect("nonempty")
}

/// Per-component orders of a vector, the most singular of them, and the vector
/// of coefficients at that order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorOrder {
    pub orders: Vec<Order>,
    pub global: Order,
    pub coeff: Vec<GaussianRational>,
}

/// Leading data at a finite point or trailing data at infinity, depending on `p`.
pub fn vector_order(v: &[RatFunc], p: &ExpansionPoint) -> VectorOrder {
    let orders: Vec<Order> = v.iter().map(|f| valuation(f, p)).collect();
    let global = p.extreme(orders.iter().copied());
    let coeff = v
        .iter()
        .zip(&orders)
        .map(|(f, &o)| match global {
            Order::Finite(g) if o == global => coefficient(f, p, g),
            _ => GaussianRational::zero(),
        })
        .collect();
    VectorOrder { orders, global, coeff }
}

/// Leading data of `v` at the finite point `rho`.
pub fn vector_leading_order(v: &[RatFunc], rho: &GaussianRational) -> VectorOrder {
    vector_order(v, &ExpansionPoint::Finite(rho.clone()))
}

/// Trailing data of `v` at infinity.
pub fn vector_trailing_order(v: &[RatFunc]) -> VectorOrder {
    vector_order(v, &ExpansionPoint::Infinity)
}

/// Total order on orders as seen from `p`: `Less` means more singular.
pub fn compare_at(p: &ExpansionPoint, a: Order, b: Order) -> Ordering {
    match p {
        ExpansionPoint::Finite(_) => a.cmp(&b),
        ExpansionPoint::Infinity => b.cmp(&a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_i64(n)
    }

    fn f_m1() -> RatFunc {
        &RatFunc::one() - &RatFunc::r_pow(-1).scale(&q(2))
    }

    #[test]
    fn valuations() {
        let f1 = RatFunc::r_pow(-1).scale(&q(2));
        assert_eq!(valuation(&f1, &ExpansionPoint::zero()), Order::Finite(-1));
        assert_eq!(valuation(&RatFunc::zero(), &ExpansionPoint::zero()), Order::PosInf);
        assert_eq!(valuation(&RatFunc::zero(), &ExpansionPoint::Infinity), Order::NegInf);
        assert_eq!(valuation(&f_m1(), &ExpansionPoint::Finite(q(2))), Order::Finite(1));
        assert_eq!(valuation(&f_m1(), &ExpansionPoint::Infinity), Order::Finite(0));
    }

    #[test]
    fn geometric_series() {
        let g = RatFunc::new(Poly::one(), Poly::from_i64s(&[1, -1])).unwrap();
        let e = expand(&g, &ExpansionPoint::zero(), 3).unwrap();
        assert_eq!(e.valuation, Order::Finite(0));
        assert_eq!(e.coeffs, vec![q(1), q(1), q(1)]);
    }

    #[test]
    fn inverse_f_at_infinity() {
        let e = expand(&f_m1().inv().unwrap(), &ExpansionPoint::Infinity, 3).unwrap();
        assert_eq!(e.valuation, Order::Finite(0));
        assert_eq!(e.coeffs, vec![q(1), q(2), q(4)]);
        // re-multiplying by f leaves only terms of order <= -3
        let rem = &(&e.to_ratfunc() * &f_m1()) - &RatFunc::one();
        assert!(valuation(&rem, &ExpansionPoint::Infinity) <= Order::Finite(-3));
    }

    #[test]
    fn f_at_horizon() {
        let e = expand(&f_m1(), &ExpansionPoint::Finite(q(2)), 2).unwrap();
        assert_eq!(e.valuation, Order::Finite(1));
        assert_eq!(e.coeffs, vec![GaussianRational::from_frac(1, 2), GaussianRational::from_frac(-1, 4)]);
    }

    #[test]
    fn vector_orders() {
        let f1 = RatFunc::r_pow(-1).scale(&q(2));
        let lo = vector_leading_order(&[f1, RatFunc::zero()], &q(0));
        assert_eq!(lo.orders, vec![Order::Finite(-1), Order::PosInf]);
        assert_eq!(lo.global, Order::Finite(-1));
        assert_eq!(lo.coeff, vec![q(2), q(0)]);

        let z = vector_leading_order(&[RatFunc::zero(), RatFunc::zero()], &q(0));
        assert_eq!(z.global, Order::PosInf);
        assert_eq!(z.coeff, vec![q(0), q(0)]);

        let t = vector_trailing_order(&[RatFunc::r_pow(2), RatFunc::r()]);
        assert_eq!(t.orders, vec![Order::Finite(2), Order::Finite(1)]);
        assert_eq!(t.global, Order::Finite(2));
        assert_eq!(t.coeff, vec![q(1), q(0)]);
    }

    #[test]
    fn order_arithmetic() {
        assert_eq!(Order::Finite(2) + Order::Finite(-5), Order::Finite(-3));
        assert_eq!(Order::PosInf + Order::Finite(1), Order::PosInf);
        assert!(Order::NegInf < Order::Finite(i64::MIN) && Order::Finite(i64::MAX) < Order::PosInf);
    }
}
