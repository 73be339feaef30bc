//! Reduction of block upper triangular systems `[[e0, Δ], [0, e1]]` to block
//! diagonal form, i.e. solving `e0∘δ = Δ + ε∘e1` for rational operators.

use serde::{Deserialize, Serialize};

use crate::arith::{GaussianRational, RatFunc, RatFuncMatrix};
use crate::diffop::{binomial, DiffOp};
use crate::error::{Error, Result};
use crate::laurent::Order;
use crate::ratsolve::{solve_rational, Multipliers, SolutionSpace};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangularSystem {
    pub e0: DiffOp,
    pub e1: DiffOp,
    #[serde(rename = "Delta")]
    pub delta: DiffOp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionPair {
    pub delta: DiffOp,
    pub epsilon: DiffOp,
}

impl TriangularSystem {
    pub fn new(e0: DiffOp, e1: DiffOp, delta: DiffOp) -> Result<Self> {
        if !e0.is_square() || !e1.is_square() {
            return Err(Error::DimensionMismatch("diagonal blocks must be square".into()));
        }
        if delta.rows() != e0.rows() || delta.cols() != e1.cols() {
            return Err(Error::DimensionMismatch(format!(
                "off-diagonal block is {}x{}, expected {}x{}",
                delta.rows(),
                delta.cols(),
                e0.rows(),
                e1.cols()
            )));
        }
        e0.monic_normalize()?;
        e1.monic_normalize()?;
        Ok(TriangularSystem { e0, e1, delta })
    }

    pub fn p0(&self) -> usize {
        self.e0.order().unwrap_or(0)
    }

    pub fn p1(&self) -> usize {
        self.e1.order().unwrap_or(0)
    }

    /// `e0∘δ − Δ − ε∘e1`.
    pub fn residual(&self, pair: &ReductionPair) -> Result<DiffOp> {
        self.e0
            .compose(&pair.delta)?
            .sub(&self.delta)?
            .sub(&pair.epsilon.compose(&self.e1)?)
    }

    pub fn is_satisfied_by(&self, pair: &ReductionPair) -> Result<bool> {
        Ok(self.residual(pair)?.is_zero())
    }

    /// The block operator `[[e0, Δ], [0, e1]]`.
    pub fn upper(&self) -> Result<DiffOp> {
        DiffOp::block(&[
            vec![self.e0.clone(), self.delta.clone()],
            vec![DiffOp::zero(self.e1.rows(), self.e0.cols()), self.e1.clone()],
        ])
    }

    /// The block operator `[[e0, 0], [0, e1]]`.
    pub fn diagonal(&self) -> Result<DiffOp> {
        DiffOp::block(&[
            vec![self.e0.clone(), DiffOp::zero(self.e0.rows(), self.e1.cols())],
            vec![DiffOp::zero(self.e1.rows(), self.e0.cols()), self.e1.clone()],
        ])
    }
}

/// Right-divides `δ` by `e1` to lower its order below `p1`, moving the
/// quotient into `ε`: with `δ = δ̃ + ε1∘e1`, the pair `(δ̃, ε − e0∘ε1)` solves
/// the same identity.
pub fn reduce_delta_order(sys: &TriangularSystem, delta: &DiffOp, epsilon: &DiffOp) -> Result<ReductionPair> {
    let input = ReductionPair { delta: delta.clone(), epsilon: epsilon.clone() };
    if !sys.is_satisfied_by(&input)? {
        return Err(Error::Precondition("the given pair does not satisfy e0∘δ = Δ + ε∘e1".into()));
    }
    let (delta_red, eps1) = delta.right_divide(&sys.e1)?;
    let epsilon_red = epsilon.sub(&sys.e0.compose(&eps1)?)?;
    let out = ReductionPair { delta: delta_red, epsilon: epsilon_red };
    debug_assert!(sys.is_satisfied_by(&out)?);
    Ok(out)
}

/// Either the unique `ε` for a given `δ`, or the nonzero remainder that rules
/// one out.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reconstruction {
    Epsilon(DiffOp),
    Obstruction(DiffOp),
}

/// Right-divides `e0∘δ − Δ` by `e1`: a zero remainder leaves `ε` as the quotient.
pub fn reconstruct_epsilon(sys: &TriangularSystem, delta: &DiffOp) -> Result<Reconstruction> {
    if delta.rows() != sys.e0.cols() || delta.cols() != sys.e1.rows() {
        return Err(Error::DimensionMismatch("δ does not fit between e1 and e0".into()));
    }
    let lhs = sys.e0.compose(delta)?.sub(&sys.delta)?;
    let (g, q) = lhs.right_divide(&sys.e1)?;
    Ok(if g.is_zero() { Reconstruction::Epsilon(q) } else { Reconstruction::Obstruction(g) })
}

/// The other member `(δ + α∘e1, ε + e0∘α)` of the gauge family of a solution.
pub fn gauge_shift(pair: &ReductionPair, alpha: &DiffOp, sys: &TriangularSystem) -> Result<ReductionPair> {
    Ok(ReductionPair {
        delta: pair.delta.add(&alpha.compose(&sys.e1)?)?,
        epsilon: pair.epsilon.add(&sys.e0.compose(alpha)?)?,
    })
}

/// The rational ODE system on the coefficients of `δ = Σ_{k<p1} δ_k d^k`
/// equivalent to `rem(e0∘δ − Δ, e1) = 0`. The unknown vector stacks the
/// matrices `δ_0, …, δ_{p1−1}`, each row-major.
pub fn decoupling_system(sys: &TriangularSystem) -> Result<(DiffOp, Vec<RatFunc>)> {
    let (n0, n1) = (sys.e0.rows(), sys.e1.rows());
    let (p0, p1) = (sys.p0(), sys.p1());
    if p1 == 0 {
        return Err(Error::OrderTooLow(1));
    }
    if sys.delta.order().is_some_and(|o| o >= p0 + p1) {
        return Err(Error::Precondition(format!("Δ must have order below {}", p0 + p1)));
    }
    // rem_table[l][m]: coefficient of d^m in the remainder of I·d^l modulo e1
    let mut rem_table = Vec::with_capacity(p0 + p1);
    for l in 0..p0 + p1 {
        let (g, _) = DiffOp::derivative(n1, l).right_divide(&sys.e1)?;
        rem_table.push((0..p1).map(|m| g.coeff(m)).collect::<Vec<_>>());
    }
    let block = n0 * n1;
    let dim = p1 * block;
    let idx = |k: usize, a: usize, b: usize| k * block + a * n1 + b;
    let mut coeffs = vec![RatFuncMatrix::zeros(dim, dim); p0 + 1];
    for (j, cj) in coeffs.iter_mut().enumerate() {
        for i in j..=p0 {
            let ci = sys.e0.coeff(i);
            if ci.is_zero() {
                continue;
            }
            let bin = RatFunc::constant(binomial(i, j));
            for k in 0..p1 {
                let rho = &rem_table[i - j + k];
                for (m, rho_m) in rho.iter().enumerate() {
                    if rho_m.is_zero() {
                        continue;
                    }
                    for a2 in 0..n0 {
                        for a in 0..n0 {
                            let c = ci.get(a2, a);
                            if c.is_zero() {
                                continue;
                            }
                            let c = c * &bin;
                            for b in 0..n1 {
                                for b2 in 0..n1 {
                                    let r = rho_m.get(b, b2);
                                    if r.is_zero() {
                                        continue;
                                    }
                                    let cell = cj.get_mut(idx(m, a2, b2), idx(k, a, b));
                                    *cell = &*cell + &(&c * r);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let op = DiffOp::new(dim, dim, coeffs)?;
    let (rem, _) = sys.delta.right_divide(&sys.e1)?;
    let mut rhs = vec![RatFunc::zero(); dim];
    for m in 0..p1 {
        let cm = rem.coeff(m);
        for a in 0..n0 {
            for b in 0..n1 {
                rhs[idx(m, a, b)] = cm.get(a, b).clone();
            }
        }
    }
    Ok((op, rhs))
}

/// Reassembles `δ = Σ_k δ_k d^k` from the stacked unknown vector.
pub fn delta_from_vector(x: &[RatFunc], n0: usize, n1: usize, p1: usize) -> Result<DiffOp> {
    if x.len() != p1 * n0 * n1 {
        return Err(Error::DimensionMismatch("coefficient vector does not match δ".into()));
    }
    let coeffs = x
        .chunks(n0 * n1)
        .map(|c| RatFuncMatrix::from_vec(n0, n1, c.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    DiffOp::new(n0, n1, coeffs)
}

/// The two block operators and their inverses relating the triangular and the
/// diagonal systems.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceWitness {
    pub forward: DiffOp,
    pub backward: DiffOp,
    pub source_transform: DiffOp,
    pub source_inverse: DiffOp,
}

fn unipotent(n0: usize, n1: usize, x: &DiffOp) -> Result<DiffOp> {
    DiffOp::block(&[vec![DiffOp::identity(n0), x.clone()], vec![DiffOp::zero(n1, n0), DiffOp::identity(n1)]])
}

impl EquivalenceWitness {
    pub fn new(sys: &TriangularSystem, pair: &ReductionPair) -> Result<Self> {
        let (n0, n1) = (sys.e0.rows(), sys.e1.rows());
        Ok(EquivalenceWitness {
            forward: unipotent(n0, n1, &pair.delta)?,
            backward: unipotent(n0, n1, &pair.delta.neg())?,
            source_transform: unipotent(n0, n1, &pair.epsilon)?,
            source_inverse: unipotent(n0, n1, &pair.epsilon.neg())?,
        })
    }

    /// Checks both commuting squares and that the horizontal arrows are
    /// mutually inverse.
    pub fn verify(&self, sys: &TriangularSystem) -> Result<bool> {
        let n = sys.e0.rows() + sys.e1.rows();
        let id = DiffOp::identity(n);
        let upper = sys.upper()?;
        let diag = sys.diagonal()?;
        let inverses = self.forward.compose(&self.backward)? == id
            && self.backward.compose(&self.forward)? == id
            && self.source_transform.compose(&self.source_inverse)? == id
            && self.source_inverse.compose(&self.source_transform)? == id;
        let first = diag.compose(&self.forward)? == self.source_transform.compose(&upper)?;
        let second = upper.compose(&self.backward)? == self.source_inverse.compose(&diag)?;
        Ok(inverses && first && second)
    }
}

/// Evidence that no rational reduction exists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonexistenceCertificate {
    pub lower: Order,
    pub upper: Order,
    #[serde(rename = "R")]
    pub r: RatFuncMatrix,
    /// `y` with `yᵀA = 0`, `yᵀb = 1` for the ansatz system, when one was built.
    pub witness: Option<Vec<GaussianRational>>,
    /// The remainder of `−Δ` modulo `e1`, i.e. the obstruction at `δ = 0`.
    pub remainder: DiffOp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Decision {
    Reducible {
        pair: ReductionPair,
        unique: bool,
        /// Homogeneous solutions `δ` (with their `ε`) spanning the freedom.
        kernel: Vec<ReductionPair>,
        solution: Box<SolutionSpace>,
    },
    Irreducible {
        certificate: NonexistenceCertificate,
        solution: Box<SolutionSpace>,
    },
}

fn pair_from_vector(sys: &TriangularSystem, homogeneous: &TriangularSystem, x: &[RatFunc]) -> Result<ReductionPair> {
    let delta = delta_from_vector(x, sys.e0.rows(), sys.e1.rows(), sys.p1())?;
    match reconstruct_epsilon(homogeneous, &delta)? {
        Reconstruction::Epsilon(epsilon) => {
            let pair = ReductionPair { delta, epsilon };
            if !homogeneous.is_satisfied_by(&pair)? {
                return Err(Error::Internal("reconstructed pair fails the operator identity".into()));
            }
            Ok(pair)
        }
        Reconstruction::Obstruction(_) => {
            Err(Error::Internal("solution of the decoupling system leaves a remainder".into()))
        }
    }
}

/// Decides whether `e0∘δ = Δ + ε∘e1` has a rational solution, by solving the
/// decoupling system for the coefficients of `δ`.
pub fn decide_reduction(sys: &TriangularSystem, multipliers: &Multipliers) -> Result<Decision> {
    let (op, rhs) = decoupling_system(sys)?;
    let solution = solve_rational(&op, &rhs, multipliers)?;
    match &solution.particular {
        Some(x) => {
            let pair = pair_from_vector(sys, sys, x)?;
            let homogeneous =
                TriangularSystem { delta: DiffOp::zero(sys.delta.rows(), sys.delta.cols()), ..sys.clone() };
            let kernel = solution
                .kernel_basis
                .iter()
                .map(|k| pair_from_vector(sys, &homogeneous, k))
                .collect::<Result<Vec<_>>>()?;
            Ok(Decision::Reducible { pair, unique: kernel.is_empty(), kernel, solution: Box::new(solution) })
        }
        None => {
            let (remainder, _) = sys.delta.neg().right_divide(&sys.e1)?;
            let certificate = NonexistenceCertificate {
                lower: solution.lower,
                upper: solution.upper,
                r: solution.r.clone(),
                witness: solution.witness.clone(),
                remainder,
            };
            Ok(Decision::Irreducible { certificate, solution: Box::new(solution) })
        }
    }
}
