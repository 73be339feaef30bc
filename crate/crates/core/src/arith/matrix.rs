use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use super::{Field, GaussianRational, Poly, RatFunc};
use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

pub type RatFuncMatrix = Matrix<RatFunc>;
pub type ConstMatrix = Matrix<GaussianRational>;

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
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

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn try_map<U>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(vec![T::one(); n])
    }

    pub fn diagonal(diag: Vec<T>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (k, d) in diag.into_iter().enumerate() {
            m.set(k, k, d);
        }
        m
    }

    /// `c · I`.
    pub fn scalar(n: usize, c: T) -> Self {
        Self::diagonal(vec![c; n])
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Field::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        *e == T::one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    fn check_same_shape(&self, rhs: &Self, op: &str) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{op} of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs, "sum")?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs, "difference")?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        self.map(Field::neg)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.mul(c))
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(T::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect())
    }

    /// Index of the preferred pivot among rows `from..` in column `col`.
    fn pick_pivot(&self, col: usize, from: usize) -> Option<usize> {
        (from..self.rows)
            .filter(|&i| !self.get(i, col).is_zero())
            .min_by_key(|&i| self.get(i, col).pivot_weight())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = T::one();
        for k in 0..n {
            let Some(p) = m.pick_pivot(k, k) else {
                return Ok(T::zero());
            };
            if p != k {
                m.swap_rows(p, k);
                det = det.neg();
            }
            let piv = m.get(k, k).clone();
            det = det.mul(&piv);
            let piv_inv = piv.inv().expect("nonzero pivot");
            for i in k + 1..n {
                let factor = m.get(i, k).mul(&piv_inv);
                if factor.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = m.get(i, j).sub(&factor.mul(m.get(k, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss-Jordan elimination; `None` if singular.
    pub fn inverse(&self) -> Result<Option<Self>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for k in 0..n {
            let Some(p) = a.pick_pivot(k, k) else {
                return Ok(None);
            };
            a.swap_rows(p, k);
            inv.swap_rows(p, k);
            let piv_inv = a.get(k, k).inv().expect("nonzero pivot");
            for j in 0..n {
                a.set(k, j, a.get(k, j).mul(&piv_inv));
                inv.set(k, j, inv.get(k, j).mul(&piv_inv));
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let factor = a.get(i, k).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(i, j).sub(&factor.mul(a.get(k, j)));
                    a.set(i, j, v);
                    let w = inv.get(i, j).sub(&factor.mul(inv.get(k, j)));
                    inv.set(i, j, w);
                }
            }
        }
        Ok(Some(inv))
    }
}

impl RatFuncMatrix {
    pub fn derivative(&self) -> Self {
        self.map(RatFunc::derivative)
    }

    pub fn from_constants(m: &ConstMatrix) -> Self {
        m.map(|c| RatFunc::constant(c.clone()))
    }
}

/// Determinant of a matrix of polynomials by fraction-free (Bareiss) elimination.
pub fn poly_det(m: &Matrix<Poly>) -> Result<Poly> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Poly::one());
    }
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                return Ok(Poly::zero());
            };
            for j in 0..n {
                a.entries.swap(p * n + j, k * n + j);
            }
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(a.get(k, k) * a.get(i, j)) - &(a.get(i, k) * a.get(k, j));
                let v = num.exact_div(&prev).expect("Bareiss division is exact");
                a.set(i, j, v);
            }
            a.set(i, k, Poly::zero());
        }
        prev = a.get(k, k).clone();
    }
    let d = a.get(n - 1, n - 1).clone();
    Ok(if sign { -d } else { d })
}

#[derive(Deserialize)]
struct RawMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<'de, T: Clone + Deserialize<'de>> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawMatrix::<T>::deserialize(d)?;
        Matrix::from_vec(raw.rows, raw.cols, raw.entries).map_err(serde::de::Error::custom)
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.entries[i * self.cols + j])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_i64(n)
    }

    #[test]
    fn inverse_round_trip() {
        let m = ConstMatrix::from_rows(vec![vec![q(2), q(1)], vec![q(7), GaussianRational::i()]]).unwrap();
        let inv = m.inverse().unwrap().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = ConstMatrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]).unwrap();
        assert!(m.inverse().unwrap().is_none());
        assert!(m.det().unwrap().is_zero());
    }

    #[test]
    fn diagonal_ratfunc_inverse() {
        let r = RatFunc::r();
        let m = RatFuncMatrix::diagonal(vec![r.clone(), &r * &r]);
        let inv = m.inverse().unwrap().unwrap();
        assert_eq!(inv, RatFuncMatrix::diagonal(vec![RatFunc::r_pow(-1), RatFunc::r_pow(-2)]));
    }

    #[test]
    fn bareiss_matches_elimination() {
        // [[n, 1, 0], [2, n, 1], [0, 3, n]] has det n^3 - 5n
        let n = Poly::x();
        let c = |k: i64| Poly::from_i64s(&[k]);
        let m = Matrix::from_rows(vec![
            vec![n.clone(), c(1), Poly::zero()],
            vec![c(2), n.clone(), c(1)],
            vec![Poly::zero(), c(3), n.clone()],
        ])
        .unwrap();
        assert_eq!(poly_det(&m).unwrap(), Poly::from_i64s(&[0, -5, 0, 1]));
        let as_rf = m.map(|p| RatFunc::from_poly(p.clone()));
        assert_eq!(as_rf.det().unwrap(), RatFunc::from_poly(Poly::from_i64s(&[0, -5, 0, 1])));
    }

    #[test]
    fn bareiss_needs_row_swap() {
        let c = |k: i64| Poly::from_i64s(&[k]);
        let m = Matrix::from_rows(vec![vec![Poly::zero(), c(1)], vec![c(1), Poly::zero()]]).unwrap();
        assert_eq!(poly_det(&m).unwrap(), c(-1));
    }
}
