//! Exact root finding: integer roots of characteristic polynomials and
//! Gaussian-rational roots of denominators.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{GaussianRational, Poly};
use crate::error::{Error, Result};

/// Trial division goes this far before a cofactor is given up on.
const TRIAL_LIMIT: u64 = 10_000_000;
/// Plain candidate scans are used up to this many integers.
const SCAN_LIMIT: u64 = 2_000_000;

/// All integer roots of `p`, ascending and without repetition.
///
/// An integer `n` is a root exactly when it is a root of both the real-part
/// and the imaginary-part polynomials, so candidates come from whichever of the
/// two is nonzero and are then checked against `p` itself.
pub fn integer_roots(p: &Poly) -> Result<Vec<i64>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let re: Vec<BigRational> = p.coeffs().iter().map(|c| c.re().clone()).collect();
    let im: Vec<BigRational> = p.coeffs().iter().map(|c| c.im().clone()).collect();
    let part = if re.iter().any(|c| !c.is_zero()) { re } else { im };
    let ints = clear_denominators(&part);
    let Some(shift) = ints.iter().position(|c| !c.is_zero()) else {
        return Err(Error::ZeroPolynomial);
    };
    let ints: Vec<BigInt> = ints[shift..].to_vec();
    let ints = trim(ints);

    let mut roots = BTreeSet::new();
    if shift > 0 && p.coeff(0).is_zero() {
        roots.insert(0i64);
    }
    if ints.len() > 1 {
        let c0 = ints[0].abs();
        let bound = cauchy_bound(&ints);
        for d in integer_divisors_up_to(&c0, &bound)? {
            for cand in [d.clone(), -d] {
                let Some(n) = cand.to_i64() else { continue };
                if p.eval(&GaussianRational::from_i64(n)).is_zero() {
                    roots.insert(n);
                }
            }
        }
    }
    Ok(roots.into_iter().collect())
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// Integer multiple of a rational coefficient list with no denominators.
fn clear_denominators(coeffs: &[BigRational]) -> Vec<BigInt> {
    let l = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect()
}

/// `1 + max |c_i / c_n|`, rounded up; every root has absolute value at most this.
fn cauchy_bound(ints: &[BigInt]) -> BigInt {
    let lead = ints.last().expect("nonempty").abs();
    let max = ints[..ints.len() - 1].iter().map(|c| c.abs()).max().unwrap_or_default();
    BigInt::one() + max.div_ceil(&lead)
}

/// Positive divisors of `n` not exceeding `bound`.
fn integer_divisors_up_to(n: &BigInt, bound: &BigInt) -> Result<Vec<BigInt>> {
    let cap = bound.min(n).clone();
    if let Some(c) = cap.to_u64().filter(|&c| c <= SCAN_LIMIT) {
        return Ok((1..=c).map(BigInt::from).filter(|d| (n % d).is_zero()).collect());
    }
    let factors = factor_integer(n)
        .ok_or_else(|| Error::Precondition(format!("cannot factor {n} to enumerate root candidates")))?;
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                let v = d * &pk;
                if &v <= bound {
                    next.push(v);
                }
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    Ok(divs)
}

/// Prime factorization of a positive integer by trial division. Returns `None`
/// when a cofactor remains that might be composite.
fn factor_integer(n: &BigInt) -> Option<Vec<(BigInt, u32)>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return None;
    }
    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        let mut e = 0;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        if e > 0 {
            out.push((bd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        // With no factor up to the trial limit, n is prime once it is below the limit squared.
        let limit = BigInt::from(TRIAL_LIMIT);
        if n > &limit * &limit {
            return None;
        }
        out.push((n, 1));
    }
    Some(out)
}

/// A Gaussian integer `a + b i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct GaussInt(BigInt, BigInt);

impl GaussInt {
    fn norm(&self) -> BigInt {
        &self.0 * &self.0 + &self.1 * &self.1
    }

    fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt(&self.0 * &o.0 - &self.1 * &o.1, &self.0 * &o.1 + &self.1 * &o.0)
    }

    /// `self / o` if it is again a Gaussian integer.
    fn div_exact(&self, o: &GaussInt) -> Option<GaussInt> {
        let n = o.norm();
        let re = &self.0 * &o.0 + &self.1 * &o.1;
        let im = &self.1 * &o.0 - &self.0 * &o.1;
        if (&re % &n).is_zero() && (&im % &n).is_zero() {
            Some(GaussInt(re / &n, im / n))
        } else {
            None
        }
    }

    fn to_rational(&self) -> GaussianRational {
        GaussianRational::new(BigRational::from_integer(self.0.clone()), BigRational::from_integer(self.1.clone()))
    }
}

/// Writes a prime `p ≡ 1 (mod 4)` as `a² + b²` (Cornacchia).
fn two_squares(p: &BigInt) -> GaussInt {
    let one = BigInt::one();
    let exp = (p - &one) / BigInt::from(4);
    let mut c = BigInt::from(2);
    let t = loop {
        let t = c.modpow(&exp, p);
        if (&t * &t + &one) % p == BigInt::zero() {
            break t;
        }
        c += 1;
    };
    let (mut a, mut b) = (p.clone(), t);
    let root = p.sqrt();
    while b > root {
        let r = &a % &b;
        a = b;
        b = r;
    }
    let rest = p - &b * &b;
    GaussInt(b, rest.sqrt())
}

/// All Gaussian-integer divisors of `z` up to multiplication by units.
fn gaussian_divisors(z: &GaussInt) -> Option<Vec<GaussInt>> {
    let mut z = z.clone();
    let mut primes: Vec<GaussInt> = Vec::new();
    for (p, _) in factor_integer(&z.norm())? {
        if p == BigInt::from(2) {
            primes.push(GaussInt(BigInt::one(), BigInt::one()));
        } else if (&p % BigInt::from(4)) == BigInt::from(3) {
            primes.push(GaussInt(p, BigInt::zero()));
        } else {
            let g = two_squares(&p);
            primes.push(GaussInt(g.0.clone(), -g.1.clone()));
            primes.push(g);
        }
    }
    let mut divs = vec![GaussInt(BigInt::one(), BigInt::zero())];
    for pi in primes {
        let mut e = 0;
        while let Some(q) = z.div_exact(&pi) {
            z = q;
            e += 1;
        }
        let mut next = Vec::with_capacity(divs.len() * (e + 1));
        for d in &divs {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..e {
                cur = cur.mul(&pi);
                next.push(cur.clone());
            }
        }
        divs = next;
    }
    Some(divs)
}

fn units() -> [GaussInt; 4] {
    let (z, o) = (BigInt::zero(), BigInt::one());
    [GaussInt(o.clone(), z.clone()), GaussInt(z.clone(), o.clone()), GaussInt(-o.clone(), z.clone()), GaussInt(z, -o)]
}

/// Distinct roots of `p` in Q(i) together with the part of `p` they do not
/// account for (monic, square-free; `1` when `p` splits completely).
pub fn gaussian_roots(p: &Poly) -> Result<(Vec<GaussianRational>, Poly)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rest = p.squarefree_part();
    let mut roots = Vec::new();
    if rest.low_order().is_some_and(|k| k > 0) {
        roots.push(GaussianRational::zero());
        rest = rest.synthetic_div(&GaussianRational::zero()).0;
    }
    while rest.degree().is_some_and(|d| d >= 1) {
        if rest.degree() == Some(1) {
            let root = -&(&rest.coeff(0) / &rest.coeff(1));
            roots.push(root);
            rest = Poly::one();
            break;
        }
        let ints = gaussian_integer_coeffs(&rest);
        let c0 = ints.first().expect("nonzero");
        let cn = ints.last().expect("nonzero");
        let unsupported = || Error::UnsupportedPole(rest.to_string());
        let nums = gaussian_divisors(c0).ok_or_else(unsupported)?;
        let dens = gaussian_divisors(cn).ok_or_else(unsupported)?;
        let mut found = None;
        'search: for q in &dens {
            let qr = q.to_rational();
            for p0 in &nums {
                for u in units() {
                    let cand = &p0.mul(&u).to_rational() / &qr;
                    if rest.eval(&cand).is_zero() {
                        found = Some(cand);
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some(root) => {
                rest = rest.synthetic_div(&root).0;
                roots.push(root);
            }
            None => break,
        }
    }
    Ok((roots, rest.monic()))
}

/// A Z[i]-multiple of `p` with Gaussian-integer coefficients.
fn gaussian_integer_coeffs(p: &Poly) -> Vec<GaussInt> {
    let l = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.re().denom()).lcm(c.im().denom()));
    let l = BigRational::from_integer(l);
    p.coeffs()
        .iter()
        .map(|c| GaussInt((c.re() * &l).to_integer(), (c.im() * &l).to_integer()))
        .collect()
}
