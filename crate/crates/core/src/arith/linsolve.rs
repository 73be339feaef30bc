use serde::{Deserialize, Serialize};

use super::{Field, GaussianRational, Matrix};
use crate::error::{Error, Result};

/// Full solution set of `A x = b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineSolutionSet<T = GaussianRational> {
    /// A solution, or `None` if the system is inconsistent.
    pub particular: Option<Vec<T>>,
    /// Basis of the null space of `A`.
    pub kernel_basis: Vec<Vec<T>>,
    pub rank: usize,
    /// For inconsistent systems, a row vector `y` with `yᵀA = 0` and `yᵀb = 1`.
    pub witness: Option<Vec<T>>,
}

impl<T: Field> AffineSolutionSet<T> {
    pub fn is_consistent(&self) -> bool {
        self.particular.is_some()
    }
}

/// Solves `A x = b` exactly by Gauss-Jordan elimination.
///
/// Pivots are chosen per column as the entry of least [`Field::pivot_weight`],
/// the topmost one on ties, so results are reproducible.
pub fn linsolve<T: Field>(a: &Matrix<T>, b: &[T]) -> Result<AffineSolutionSet<T>> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{m}x{n} system with right-hand side of length {}",
            b.len()
        )));
    }
    // Augmented [A | b | I]; the identity block records the row operations.
    let width = n + 1 + m;
    let mut rows: Vec<Vec<T>> = (0..m)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i].clone());
            row.extend((0..m).map(|k| if k == i { T::one() } else { T::zero() }));
            row
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m)
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| rows[i][c].pivot_weight())
        else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).take(width) {
                if !p.is_zero() {
                    *x = x.sub(&factor.mul(p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();

    let inconsistent = (rank..m).find(|&i| !rows[i][n].is_zero());
    let witness = inconsistent.map(|i| {
        let inv = rows[i][n].inv().expect("nonzero");
        rows[i][n + 1..].iter().map(|x| x.mul(&inv)).collect::<Vec<_>>()
    });

    let particular = witness.is_none().then(|| {
        let mut x = vec![T::zero(); n];
        for (k, &c) in pivots.iter().enumerate() {
            x[c] = rows[k][n].clone();
        }
        x
    });

    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let kernel_basis = (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![T::zero(); n];
            v[free] = T::one();
            for (k, &c) in pivots.iter().enumerate() {
                v[c] = rows[k][free].neg();
            }
            v
        })
        .collect();

    Ok(AffineSolutionSet { particular, kernel_basis, rank, witness })
}
