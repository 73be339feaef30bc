use serde::{Deserialize, Serialize};

use super::charmatrix::{char_matrix, CharMatrix};
use num_traits::Zero;

use crate::arith::{linsolve, ConstMatrix, GaussianRational, RatFunc, RatFuncMatrix};
use crate::diffop::{DiffOp, PowerAction};
use crate::error::{Error, Result};
use crate::laurent::{coefficient, valuation, ExpansionPoint, Order};

/// Source and target multipliers `S`, `T` at one expansion point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierPair {
    pub point: ExpansionPoint,
    #[serde(rename = "S")]
    pub s: RatFuncMatrix,
    #[serde(rename = "T")]
    pub t: RatFuncMatrix,
}

/// The local variable at `point`: `r - ρ`, or `r` at infinity.
pub(crate) fn local_center(point: &ExpansionPoint) -> GaussianRational {
    match point {
        ExpansionPoint::Finite(rho) => rho.clone(),
        ExpansionPoint::Infinity => GaussianRational::from_i64(0),
    }
}

/// True when `f` is a constant multiple of a power of `r - c`.
fn is_monomial_in(f: &RatFunc, c: &GaussianRational) -> bool {
    let is_power = |p: &crate::arith::Poly| {
        let k = p.root_multiplicity(c).expect("nonzero");
        p.degree() == Some(k)
    };
    !f.is_zero() && is_power(f.numer()) && is_power(f.denom())
}

/// True when `f` is a Laurent polynomial in `r - c`.
fn is_laurent_in(f: &RatFunc, c: &GaussianRational) -> bool {
    f.is_zero() || {
        let k = f.denom().root_multiplicity(c).expect("nonzero");
        f.denom().degree() == Some(k)
    }
}

impl MultiplierPair {
    /// Checks that `S`, `T` and their inverses are Laurent polynomials in the
    /// local variable, i.e. both determinants are a constant times one power.
    pub fn new(point: ExpansionPoint, s: RatFuncMatrix, t: RatFuncMatrix) -> Result<Self> {
        let pair = MultiplierPair { point, s, t };
        pair.validate_shape()?;
        Ok(pair)
    }

    pub fn identity(point: ExpansionPoint, n: usize) -> Self {
        MultiplierPair { point, s: RatFuncMatrix::identity(n), t: RatFuncMatrix::identity(n) }
    }

    /// Diagonal multipliers with the given powers of the local variable.
    pub fn diagonal(point: ExpansionPoint, s_pows: &[i64], t_pows: &[i64]) -> Self {
        let diag = |pows: &[i64]| RatFuncMatrix::diagonal(pows.iter().map(|&k| point.monomial(k)).collect());
        let (s, t) = (diag(s_pows), diag(t_pows));
        MultiplierPair { point, s, t }
    }

    pub fn validate_shape(&self) -> Result<()> {
        let c = local_center(&self.point);
        let invalid = |reason: String| Error::InvalidMultipliers { point: self.point.to_string(), reason };
        for (name, m) in [("S", &self.s), ("T", &self.t)] {
            if !m.is_square() {
                return Err(invalid(format!("{name} is not square")));
            }
            if let Some((k, _)) = m.entries().iter().enumerate().find(|(_, e)| !is_laurent_in(e, &c)) {
                return Err(invalid(format!(
                    "{name}[{},{}] has poles away from the expansion point",
                    k / m.cols(),
                    k % m.cols()
                )));
            }
            let det = m.det()?;
            if !is_monomial_in(&det, &c) {
                return Err(invalid(format!("det {name} = {det} is not a single power of the local variable")));
            }
        }
        if self.s.rows() != self.t.rows() {
            return Err(invalid("S and T differ in size".into()));
        }
        Ok(())
    }
}

/// The most singular order among the nonzero entries of `m` at `point`.
pub fn matrix_order(m: &RatFuncMatrix, point: &ExpansionPoint) -> Order {
    point.extreme(m.entries().iter().filter(|e| !e.is_zero()).map(|e| valuation(e, point)))
}

/// Row orders of `e[S t^n]` and the coefficient matrices (one per power of
/// `n`) of its leading row terms.
fn leading_rows(action: &PowerAction, point: &ExpansionPoint) -> Result<(Vec<i64>, Vec<ConstMatrix>)> {
    let mut orders = Vec::with_capacity(action.rows());
    for i in 0..action.rows() {
        let row_order = point.extreme((0..action.cols()).flat_map(|j| {
            action.entry(i, j).into_iter().filter(|f| !f.is_zero()).map(|f| valuation(&f, point))
        }));
        let Order::Finite(b) = row_order else {
            return Err(Error::InvalidMultipliers {
                point: point.to_string(),
                reason: format!("row {i} of e[S r^n] vanishes"),
            });
        };
        orders.push(b);
    }
    let powers = action.coeffs().len();
    let lead = (0..powers)
        .map(|k| {
            ConstMatrix::from_fn(action.rows(), action.cols(), |i, j| {
                coefficient(action.coeffs()[k].get(i, j), point, orders[i])
            })
        })
        .collect();
    Ok((orders, lead))
}

/// For a given `S`, a target `T` obtained by row reduction of `e[S t^n]`:
/// while some constant combination `w` of the leading row terms vanishes for
/// every `n`, the least singular row involved is replaced by that combination
/// (shifted by powers of `t`), which strictly lowers its singularity. `T` is
/// then the inverse of the accumulated row operations followed by the row
/// orders. When the leading rows are independent at the first step this is the
/// diagonal `T` of row orders.
pub fn complete_target(e: &DiffOp, point: &ExpansionPoint, s: RatFuncMatrix) -> Result<(MultiplierPair, CharMatrix)> {
    let base = e.apply_to_power(&s, point)?;
    let size = e.rows();
    let mut u = RatFuncMatrix::identity(size);
    let max_steps = 4 * size * (e.order().unwrap_or(0) + 1) + 8;
    let mut steps = 0;
    let orders = loop {
        let action = base.left_mul(&u)?;
        let (orders, lead) = leading_rows(&action, point)?;
        // w with wᵀ L_k = 0 for all k, i.e. the kernel of [L_0 | L_1 | ...]ᵀ
        let stacked = ConstMatrix::from_fn(action.cols() * lead.len(), size, |r, i| {
            lead[r / action.cols()].get(i, r % action.cols()).clone()
        });
        let zeros = vec![GaussianRational::zero(); stacked.rows()];
        let kernel = linsolve(&stacked, &zeros)?.kernel_basis;
        let Some(w) = kernel.first() else { break orders };
        if steps == max_steps {
            return Err(Error::InvalidMultipliers {
                point: point.to_string(),
                reason: format!("row reduction of e[S r^n] did not finish in {max_steps} steps"),
            });
        }
        steps += 1;
        let pivot = (0..size)
            .filter(|&i| !w[i].is_zero())
            .reduce(|a, b| if point.more_singular(Order::Finite(orders[a]), Order::Finite(orders[b])) { b } else { a })
            .expect("nonzero kernel vector");
        let mut op = RatFuncMatrix::identity(size);
        for j in 0..size {
            op.set(pivot, j, &RatFunc::constant(w[j].clone()) * &point.monomial(orders[pivot] - orders[j]));
        }
        u = op.mul(&u)?;
    };
    if steps > 0 {
        log::debug!("multipliers at {point}: {steps} row reduction step(s)");
    }
    let scale = RatFuncMatrix::diagonal(orders.iter().map(|&b| point.monomial(-b)).collect());
    let t_inv = scale.mul(&u)?;
    let t = t_inv.inverse()?.ok_or_else(|| Error::Internal("row operations are singular".into()))?;
    let pair = MultiplierPair::new(point.clone(), s, t)?;
    let cm = char_matrix(e, &pair)?;
    Ok((pair, cm))
}

/// Diagonal exponent vectors in `[-w, w]^size`, zero first, then by
/// increasing total absolute value, lexicographic within a level.
fn exponent_vectors(size: usize, w: i64) -> Vec<Vec<i64>> {
    let mut all: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..size {
        all = all
            .into_iter()
            .flat_map(|v| {
                (-w..=w).map(move |a| {
                    let mut v = v.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    all.sort_by_key(|v| (v.iter().map(|a| a.abs()).sum::<i64>(), v.clone()));
    all
}

/// Searches diagonal multipliers `S = diag((r-ρ)^{a_i})` with the exponents in
/// the window `[-p·size, p·size]`, completing each `S` with its forced `T`.
pub fn search_multipliers(e: &DiffOp, point: &ExpansionPoint) -> Result<(MultiplierPair, CharMatrix)> {
    if !e.is_square() {
        return Err(Error::DimensionMismatch("multipliers need a square operator".into()));
    }
    let size = e.rows();
    let w = (e.order().unwrap_or(0) * size) as i64;
    for pows in exponent_vectors(size, w) {
        let s = RatFuncMatrix::diagonal(pows.iter().map(|&a| point.monomial(a)).collect());
        match complete_target(e, point, s) {
            Ok(found) => {
                log::debug!("multipliers at {point}: S exponents {pows:?}");
                return Ok(found);
            }
            Err(Error::InvalidMultipliers { .. }) => continue,
            Err(other) => return Err(other),
        }
    }
    Err(Error::MissingMultipliers(format!("{point} (no diagonal multipliers with exponents in [-{w}, {w}])")))
}

/// Tries each supplied pair in turn, then the heuristic search.
pub fn resolve_multipliers(
    e: &DiffOp,
    point: &ExpansionPoint,
    supplied: &[MultiplierPair],
    search: bool,
) -> Result<(MultiplierPair, CharMatrix)> {
    let mut last_err = None;
    for pair in supplied.iter().filter(|p| &p.point == point) {
        match char_matrix(e, pair) {
            Ok(cm) => return Ok((pair.clone(), cm)),
            Err(err) => {
                log::debug!("supplied multipliers at {point} rejected: {err}");
                last_err = Some(err);
            }
        }
    }
    if search {
        return search_multipliers(e, point);
    }
    Err(last_err.unwrap_or_else(|| Error::MissingMultipliers(point.to_string())))
}
