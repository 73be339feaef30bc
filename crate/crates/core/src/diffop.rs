//! Matrix linear differential operators `Σ C_k(r) d^k/dr^k` with rational
//! coefficient matrices written to the left of the derivatives.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{Field, GaussianRational, Poly, RatFunc, RatFuncMatrix};
use crate::error::{Error, Result};
use crate::laurent::ExpansionPoint;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffOp {
    rows: usize,
    cols: usize,
    /// `coeffs[k]` multiplies `d^k`; the last entry is nonzero, and the zero
    /// operator has no entries.
    coeffs: Vec<RatFuncMatrix>,
}

/// `P·e = d^p + tail` for an operator of order `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicForm {
    pub p: RatFuncMatrix,
    pub tail: DiffOp,
}

pub(crate) fn binomial(n: usize, k: usize) -> GaussianRational {
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    GaussianRational::from_bigint(acc.into())
}

impl DiffOp {
    pub fn new(rows: usize, cols: usize, mut coeffs: Vec<RatFuncMatrix>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|c| c.rows() != rows || c.cols() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} coefficient in a {rows}x{cols} operator",
                bad.rows(),
                bad.cols()
            )));
        }
        while coeffs.last().is_some_and(RatFuncMatrix::is_zero) {
            coeffs.pop();
        }
        Ok(DiffOp { rows, cols, coeffs })
    }

    /// Builds an operator from a nonempty coefficient list, taking the shape
    /// from its first entry.
    pub fn from_coeffs(coeffs: Vec<RatFuncMatrix>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::DimensionMismatch("operator without coefficients".into()))?;
        let (r, c) = (first.rows(), first.cols());
        Self::new(r, c, coeffs)
    }

    /// A scalar operator from its coefficients, lowest derivative first.
    pub fn scalar(coeffs: Vec<RatFunc>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| RatFuncMatrix::scalar(1, c)).collect();
        Self::new(1, 1, coeffs).expect("1x1 coefficients")
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        DiffOp { rows, cols, coeffs: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::multiplication(RatFuncMatrix::identity(n))
    }

    /// The order-zero operator `u ↦ m·u`.
    pub fn multiplication(m: RatFuncMatrix) -> Self {
        Self::new(m.rows(), m.cols(), vec![m]).expect("consistent shape")
    }

    /// `I·d^k` of size `n`.
    pub fn derivative(n: usize, k: usize) -> Self {
        Self::monomial(RatFuncMatrix::identity(n), k)
    }

    /// `m·d^k`.
    pub fn monomial(m: RatFuncMatrix, k: usize) -> Self {
        let mut coeffs = vec![RatFuncMatrix::zeros(m.rows(), m.cols()); k];
        let (r, c) = (m.rows(), m.cols());
        coeffs.push(m);
        Self::new(r, c, coeffs).expect("consistent shape")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero operator (order −∞).
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[RatFuncMatrix] {
        &self.coeffs
    }

    /// Coefficient of `d^k`, zero beyond the order.
    pub fn coeff(&self, k: usize) -> RatFuncMatrix {
        self.coeffs.get(k).cloned().unwrap_or_else(|| RatFuncMatrix::zeros(self.rows, self.cols))
    }

    /// The scalar coefficient of `d^k` in entry `(i, j)`.
    pub fn entry_coeff(&self, i: usize, j: usize, k: usize) -> RatFunc {
        self.coeffs.get(k).map_or_else(RatFunc::zero, |c| c.get(i, j).clone())
    }

    /// The scalar operator in entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> DiffOp {
        DiffOp::scalar(self.coeffs.iter().map(|c| c.get(i, j).clone()).collect())
    }

    /// Assembles a block operator from a grid of blocks.
    pub fn block(grid: &[Vec<DiffOp>]) -> Result<Self> {
        let row_sizes: Vec<usize> = grid.iter().map(|row| row[0].rows).collect();
        let col_sizes: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        let (rows, cols) = (row_sizes.iter().sum(), col_sizes.iter().sum());
        let order = grid.iter().flatten().filter_map(DiffOp::order).max();
        let mut coeffs = vec![RatFuncMatrix::zeros(rows, cols); order.map_or(0, |o| o + 1)];
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                if b.rows != row_sizes[bi] || b.cols != col_sizes[bj] {
                    return Err(Error::DimensionMismatch("blocks do not tile".into()));
                }
                for (k, ck) in b.coeffs.iter().enumerate() {
                    for i in 0..b.rows {
                        for j in 0..b.cols {
                            coeffs[k].set(r0 + i, c0 + j, ck.get(i, j).clone());
                        }
                    }
                }
                c0 += b.cols;
            }
            r0 += row_sizes[bi];
        }
        Self::new(rows, cols, coeffs)
    }

    fn check_shape(&self, rhs: &DiffOp, what: &str) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{what} of {}x{} and {}x{} operators",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &DiffOp) -> Result<DiffOp> {
        self.check_shape(rhs, "sum")?;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k).add(&rhs.coeff(k))).collect::<Result<_>>()?;
        Self::new(self.rows, self.cols, coeffs)
    }

    pub fn sub(&self, rhs: &DiffOp) -> Result<DiffOp> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp { rows: self.rows, cols: self.cols, coeffs: self.coeffs.iter().map(RatFuncMatrix::neg).collect() }
    }

    /// `m·e` for a matrix `m` acting on the left.
    pub fn left_mul(&self, m: &RatFuncMatrix) -> Result<DiffOp> {
        let coeffs = self.coeffs.iter().map(|c| m.mul(c)).collect::<Result<_>>()?;
        Self::new(m.rows(), self.cols, coeffs)
    }

    pub fn scale(&self, c: &RatFunc) -> DiffOp {
        let coeffs = self.coeffs.iter().map(|m| m.scale(c)).collect();
        Self::new(self.rows, self.cols, coeffs).expect("same shape")
    }

    /// `e[u]`.
    pub fn apply(&self, u: &[RatFunc]) -> Result<Vec<RatFunc>> {
        if u.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} operator applied to a vector of length {}",
                self.rows,
                self.cols,
                u.len()
            )));
        }
        let mut out = vec![RatFunc::zero(); self.rows];
        let mut deriv = u.to_vec();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                deriv = deriv.iter().map(RatFunc::derivative).collect();
            }
            for (o, t) in out.iter_mut().zip(c.mul_vec(&deriv)?) {
                *o = &*o + &t;
            }
        }
        Ok(out)
    }

    /// `self ∘ rhs`, normalized with the Leibniz rule `d∘a = a·d + a'`.
    pub fn compose(&self, rhs: &DiffOp) -> Result<DiffOp> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "composition of {}x{} after {}x{} operators",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let (Some(p), Some(q)) = (self.order(), rhs.order()) else {
            return Ok(DiffOp::zero(self.rows, rhs.cols));
        };
        // derivs[m][j] = m-th derivative of rhs's j-th coefficient
        let mut derivs = vec![rhs.coeffs.clone()];
        for m in 1..=p {
            let next = derivs[m - 1].iter().map(RatFuncMatrix::derivative).collect();
            derivs.push(next);
        }
        let mut coeffs = vec![RatFuncMatrix::zeros(self.rows, rhs.cols); p + q + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (m, dm) in derivs.iter().enumerate().take(i + 1) {
                let a_binom = a.scale(&RatFunc::constant(binomial(i, m)));
                for (j, b) in dm.iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    let k = i - m + j;
                    coeffs[k] = coeffs[k].add(&a_binom.mul(b)?)?;
                }
            }
        }
        Self::new(self.rows, rhs.cols, coeffs)
    }

    /// Inverts the leading coefficient: `P·e = d^p + tail` with `ord(tail) < p`.
    pub fn monic_normalize(&self) -> Result<MonicForm> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("monic normalization needs a square operator".into()));
        }
        let p = self.order().ok_or(Error::SingularLeadingCoefficient)?;
        let lead = &self.coeffs[p];
        let inv = lead.inverse()?.ok_or(Error::SingularLeadingCoefficient)?;
        let mut tail = self.left_mul(&inv)?;
        tail.coeffs.truncate(p);
        let tail = Self::new(self.rows, self.cols, tail.coeffs)?;
        Ok(MonicForm { p: inv, tail })
    }

    /// Right division with remainder: `self = g + q∘e` with `ord(g) < ord(e)`.
    pub fn right_divide(&self, e: &DiffOp) -> Result<(DiffOp, DiffOp)> {
        if self.cols != e.cols {
            return Err(Error::DimensionMismatch("dividend and divisor act on different spaces".into()));
        }
        let p = e.order().ok_or(Error::OrderTooLow(1))?;
        if p == 0 {
            return Err(Error::OrderTooLow(1));
        }
        let monic = e.monic_normalize()?;
        let e_hat = DiffOp::derivative(e.rows, p).add(&monic.tail)?;
        let p_op = DiffOp::multiplication(monic.p.clone());

        let mut g = self.clone();
        let mut q = DiffOp::zero(self.rows, e.rows);
        while let Some(top) = g.order().filter(|&t| t >= p) {
            let k = top - p;
            let lead = DiffOp::monomial(g.coeffs[top].clone(), k);
            g = g.sub(&lead.compose(&e_hat)?)?;
            q = q.add(&lead.compose(&p_op)?)?;
            debug_assert!(g.order().is_none_or(|o| o < top));
        }
        Ok((g, q))
    }

    /// The action on `S·c·(r−ρ)^n` for symbolic `n` (at infinity, `S·c·r^n`):
    /// returns `M(r, n)` with `e[S c (r−ρ)^n] = M(r, n) c (r−ρ)^n`.
    pub fn apply_to_power(&self, s: &RatFuncMatrix, point: &ExpansionPoint) -> Result<PowerAction> {
        if s.rows() != self.cols {
            return Err(Error::DimensionMismatch("multiplier does not match the operator".into()));
        }
        let rho = match point {
            ExpansionPoint::Finite(rho) => rho.clone(),
            ExpansionPoint::Infinity => GaussianRational::zero(),
        };
        let rows = self.rows;
        let cols = s.cols();
        let p = self.order().unwrap_or(0);
        let mut s_derivs = vec![s.clone()];
        for m in 1..=p {
            let next = s_derivs[m - 1].derivative();
            s_derivs.push(next);
        }
        // coefficient of n^a: Σ_j ff_j[a] (r−ρ)^{−j} Σ_{k≥j} binom(k,j) C_k S^{(k−j)}
        let mut coeffs = vec![RatFuncMatrix::zeros(rows, cols); p + 1];
        let mut falling = Poly::one();
        for j in 0..=p {
            if j > 0 {
                falling = &falling * &Poly::linear(&GaussianRational::from_i64(j as i64 - 1));
            }
            let mut g = RatFuncMatrix::zeros(rows, cols);
            for k in j..self.coeffs.len() {
                let term = self.coeffs[k].mul(&s_derivs[k - j])?.scale(&RatFunc::constant(binomial(k, j)));
                g = g.add(&term)?;
            }
            if g.is_zero() {
                continue;
            }
            let g = g.scale(&RatFunc::power_of_linear(&rho, -(j as i64)));
            for (a, c) in falling.coeffs().iter().enumerate() {
                coeffs[a] = coeffs[a].add(&g.scale(&RatFunc::constant(c.clone())))?;
            }
        }
        Ok(PowerAction { rows, cols, coeffs })
    }
}

/// A matrix of rational functions of `r` depending polynomially on a symbol
/// `n`, stored as `Σ_a n^a · coeffs[a]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerAction {
    rows: usize,
    cols: usize,
    coeffs: Vec<RatFuncMatrix>,
}

impl PowerAction {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn coeffs(&self) -> &[RatFuncMatrix] {
        &self.coeffs
    }

    /// Coefficients of entry `(i, j)` as a polynomial in `n`.
    pub fn entry(&self, i: usize, j: usize) -> Vec<RatFunc> {
        self.coeffs.iter().map(|c| c.get(i, j).clone()).collect()
    }

    /// Substitutes a value for `n`.
    pub fn at(&self, n: &GaussianRational) -> RatFuncMatrix {
        let mut acc = RatFuncMatrix::zeros(self.rows, self.cols);
        let mut pow = GaussianRational::from_i64(1);
        for c in &self.coeffs {
            acc = acc.add(&c.scale(&RatFunc::constant(pow.clone()))).expect("same shape");
            pow = &pow * n;
        }
        acc
    }

    /// `m · self`.
    pub fn left_mul(&self, m: &RatFuncMatrix) -> Result<PowerAction> {
        let coeffs = self.coeffs.iter().map(|c| m.mul(c)).collect::<Result<_>>()?;
        Ok(PowerAction { rows: m.rows(), cols: self.cols, coeffs })
    }
}

#[derive(Serialize, Deserialize)]
struct RawDiffOp {
    rows: usize,
    cols: usize,
    coeffs: Vec<Vec<Vec<RatFunc>>>,
}

impl Serialize for DiffOp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|m| (0..m.rows()).map(|i| m.row(i).to_vec()).collect())
            .collect();
        RawDiffOp { rows: self.rows, cols: self.cols, coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffOp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawDiffOp::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .into_iter()
            .map(RatFuncMatrix::from_rows)
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        DiffOp::new(raw.rows, raw.cols, coeffs).map_err(D::Error::custom)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let scalar = self.rows == 1 && self.cols == 1;
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let body = if scalar {
                let e = c.get(0, 0);
                if k > 0 && e.is_one() {
                    String::new()
                } else {
                    format!("({e})")
                }
            } else {
                c.to_string()
            };
            match k {
                0 => write!(f, "{body}")?,
                1 if body.is_empty() => f.write_str("d")?,
                1 => write!(f, "{body}*d")?,
                _ if body.is_empty() => write!(f, "d^{k}")?,
                _ => write!(f, "{body}*d^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp({self})")
    }
}
