use serde::{Deserialize, Serialize};

use super::multipliers::MultiplierPair;
use crate::arith::{integer_roots, poly_det, Matrix, Poly};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::laurent::{coefficient, valuation, ExpansionPoint, Order};

/// The characteristic matrix `E_n` of an operator at a point, its
/// determinant, and the integer roots of that determinant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharMatrix {
    pub point: ExpansionPoint,
    /// Entries are polynomials in `n`.
    pub entries: Matrix<Poly>,
    pub det: Poly,
    pub exponents: Vec<i64>,
}

/// Computes `E_n` from `T⁻¹ e[S c t^n] = (E_n c + O(t)) t^n`, with `t = r - ρ`
/// (or `t = r` and `O(1/r)` at infinity).
pub fn char_matrix(e: &DiffOp, m: &MultiplierPair) -> Result<CharMatrix> {
    let invalid = |reason: String| Error::InvalidMultipliers { point: m.point.to_string(), reason };
    if m.s.rows() != e.cols() || m.t.rows() != e.rows() {
        return Err(Error::DimensionMismatch("multipliers do not match the operator".into()));
    }
    let t_inv = m.t.inverse()?.ok_or_else(|| invalid("T is singular".into()))?;
    let action = e.apply_to_power(&m.s, &m.point)?.left_mul(&t_inv)?;
    let point = &m.point;
    let mut entries = Vec::with_capacity(action.rows() * action.cols());
    for i in 0..action.rows() {
        for j in 0..action.cols() {
            let poly_in_n = action.entry(i, j);
            let mut coeffs = Vec::with_capacity(poly_in_n.len());
            for g in &poly_in_n {
                let v = valuation(g, point);
                let bad = match point {
                    ExpansionPoint::Finite(_) => v < Order::Finite(0),
                    ExpansionPoint::Infinity => v > Order::Finite(0),
                };
                if bad {
                    return Err(invalid(format!(
                        "entry [{i},{j}] of T^-1 e[S t^n] has order {v} (expected {} 0)",
                        if point.is_infinity() { "<=" } else { ">=" }
                    )));
                }
                coeffs.push(coefficient(g, point, 0));
            }
            entries.push(Poly::new(coeffs));
        }
    }
    let entries = Matrix::from_vec(action.rows(), action.cols(), entries)?;
    let det = poly_det(&entries)?;
    if det.is_zero() {
        return Err(invalid("det E_n vanishes identically".into()));
    }
    let exponents = integer_roots(&det)?;
    Ok(CharMatrix { point: point.clone(), entries, det, exponents })
}

/// Lower bound `min({n_v} ∪ σ̌)` on the leading order of `S⁻¹u`.
pub fn leading_bound(e: &CharMatrix, n_v: Order) -> Order {
    e.exponents.iter().map(|&k| Order::Finite(k)).fold(n_v, Ord::min)
}

/// Upper bound `max({n_v} ∪ σ̂)` on the trailing order of `S⁻¹u`.
pub fn trailing_bound(e: &CharMatrix, n_v: Order) -> Order {
    e.exponents.iter().map(|&k| Order::Finite(k)).fold(n_v, Ord::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{RatFunc, RatFuncMatrix};

    fn with_exponents(exponents: Vec<i64>) -> CharMatrix {
        CharMatrix { point: ExpansionPoint::zero(), entries: Matrix::from_vec(0, 0, vec![]).unwrap(), det: Poly::one(), exponents }
    }

    #[test]
    fn derivative_needs_target_shift() {
        let origin = ExpansionPoint::zero();
        let d = DiffOp::derivative(1, 1);
        let trivial = MultiplierPair::identity(origin.clone(), 1);
        assert!(matches!(char_matrix(&d, &trivial), Err(Error::InvalidMultipliers { .. })));
        let shifted = MultiplierPair::new(origin, RatFuncMatrix::identity(1), RatFuncMatrix::scalar(1, RatFunc::r_pow(-1))).unwrap();
        let cm = char_matrix(&d, &shifted).unwrap();
        assert_eq!(cm.entries.get(0, 0), &Poly::x());
        assert_eq!(cm.exponents, vec![0]);
    }

    #[test]
    fn identity_operator_has_no_exponents() {
        let cm = char_matrix(&DiffOp::identity(2), &MultiplierPair::identity(ExpansionPoint::zero(), 2)).unwrap();
        assert!(cm.entries.map(|p| RatFunc::from_poly(p.clone())).is_identity());
        assert!(cm.exponents.is_empty());
    }

    #[test]
    fn bounds() {
        assert_eq!(leading_bound(&with_exponents(vec![-1, 1]), Order::Finite(0)), Order::Finite(-1));
        assert_eq!(leading_bound(&with_exponents(vec![]), Order::PosInf), Order::PosInf);
        assert_eq!(leading_bound(&with_exponents(vec![0]), Order::Finite(-3)), Order::Finite(-3));
        assert_eq!(trailing_bound(&with_exponents(vec![-1, 0]), Order::Finite(-3)), Order::Finite(0));
        assert_eq!(trailing_bound(&with_exponents(vec![-1, 0]), Order::Finite(2)), Order::Finite(2));
        assert_eq!(trailing_bound(&with_exponents(vec![]), Order::NegInf), Order::NegInf);
    }
}
