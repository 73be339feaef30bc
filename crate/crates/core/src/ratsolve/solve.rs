use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::charmatrix::{leading_bound, trailing_bound, CharMatrix};
use super::multipliers::{matrix_order, resolve_multipliers, MultiplierPair};
use crate::arith::{gaussian_roots, linsolve, ConstMatrix, GaussianRational, Poly, RatFunc, RatFuncMatrix};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::laurent::{valuation, vector_order, ExpansionPoint, Order};

/// Multipliers supplied by the caller, plus whether the diagonal search may be
/// used where none are supplied or the supplied ones fail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Multipliers {
    pub pairs: Vec<MultiplierPair>,
    pub search: bool,
}

impl Default for Multipliers {
    fn default() -> Self {
        Multipliers { pairs: Vec::new(), search: true }
    }
}

impl Multipliers {
    pub fn new(pairs: Vec<MultiplierPair>) -> Self {
        Multipliers { pairs, search: true }
    }

    pub fn at(&self, point: &ExpansionPoint) -> Vec<MultiplierPair> {
        self.pairs.iter().filter(|p| &p.point == point).cloned().collect()
    }
}

/// What was learned at one expansion point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointAnalysis {
    pub point: ExpansionPoint,
    pub multipliers: MultiplierPair,
    pub char_matrix: CharMatrix,
    /// Order of `T⁻¹v` at the point.
    pub source_order: Order,
    /// Bound on the order of `S⁻¹u` from the characteristic exponents.
    pub bound: Order,
    /// The resulting bound on the order of `u` itself.
    pub solution_bound: Order,
}

fn analyse_point(e: &DiffOp, v: &[RatFunc], point: &ExpansionPoint, supplied: &[MultiplierPair], search: bool) -> Result<PointAnalysis> {
    let (pair, cm) = resolve_multipliers(e, point, supplied, search)?;
    let t_inv = pair.t.inverse()?.ok_or_else(|| Error::Internal("validated T is singular".into()))?;
    let source_order = vector_order(&t_inv.mul_vec(v)?, point).global;
    let bound = if point.is_infinity() { trailing_bound(&cm, source_order) } else { leading_bound(&cm, source_order) };
    let s_order = matrix_order(&pair.s, point);
    let solution_bound = if bound.is_finite() { bound + s_order } else { bound };
    Ok(PointAnalysis { point: point.clone(), multipliers: pair, char_matrix: cm, source_order, bound, solution_bound })
}

fn sort_key(g: &GaussianRational) -> (num_rational::BigRational, num_rational::BigRational) {
    (g.re().clone(), g.im().clone())
}

/// Finite points where a rational solution of `e[u] = v` may have a pole: the
/// poles of `P·v` and of the coefficients of the monic tail.
pub fn pole_candidates(e: &DiffOp, v: &[RatFunc]) -> Result<Vec<GaussianRational>> {
    let monic = e.monic_normalize()?;
    let mut dens: Vec<Poly> = monic.p.mul_vec(v)?.iter().map(|f| f.denom().clone()).collect();
    for c in monic.tail.coeffs() {
        dens.extend(c.entries().iter().map(|f| f.denom().clone()));
    }
    let den = dens.iter().fold(Poly::one(), |acc, d| Poly::lcm(&acc, d));
    let (mut roots, rest) = gaussian_roots(&den)?;
    if !rest.is_one() {
        return Err(Error::UnsupportedPole(rest.to_string()));
    }
    roots.sort_by_key(sort_key);
    Ok(roots)
}

/// A scalar universal multiplier `R = c(r)·I` together with the local data used
/// to build it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniversalMultiplier {
    pub scalar: RatFunc,
    pub matrix: RatFuncMatrix,
    pub points: Vec<PointAnalysis>,
    /// Some point admits no nonzero solution at all.
    pub forces_zero: bool,
}

/// Builds `R = Π_{ρ≠0} (r-ρ)^{k_ρ}` where `k_ρ` bounds the order at `ρ` of
/// every rational solution (leading bound of `S_ρ⁻¹u` plus the order of
/// `S_ρ`), so that `R⁻¹u` is regular away from 0.
pub fn universal_multiplier(e: &DiffOp, v: &[RatFunc], multipliers: &Multipliers) -> Result<UniversalMultiplier> {
    let mut scalar = RatFunc::one();
    let mut points = Vec::new();
    let mut forces_zero = false;
    for rho in pole_candidates(e, v)? {
        if rho.is_zero() {
            continue;
        }
        let point = ExpansionPoint::Finite(rho.clone());
        let analysis = analyse_point(e, v, &point, &multipliers.at(&point), multipliers.search)?;
        match analysis.solution_bound {
            Order::Finite(k) => scalar = &scalar * &RatFunc::power_of_linear(&rho, k),
            _ => forces_zero = true,
        }
        points.push(analysis);
    }
    let matrix = RatFuncMatrix::scalar(e.cols(), scalar.clone());
    Ok(UniversalMultiplier { scalar, matrix, points, forces_zero })
}

/// The rational solution space of `e[u] = v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionSpace {
    /// Universal multiplier: every solution is `R` times a Laurent polynomial.
    #[serde(rename = "R")]
    pub r: RatFuncMatrix,
    /// Bounds on the exponents of that Laurent polynomial.
    pub lower: Order,
    pub upper: Order,
    pub particular: Option<Vec<RatFunc>>,
    pub kernel_basis: Vec<Vec<RatFunc>>,
    /// Local analyses: the poles absorbed into `R`, then `0` and `∞` for `e∘R`.
    pub analysis: Vec<PointAnalysis>,
    /// For an inconsistent ansatz system `A x = b`: `y` with `yᵀA = 0`, `yᵀb = 1`.
    pub witness: Option<Vec<GaussianRational>>,
}

impl SolutionSpace {
    pub fn is_solvable(&self) -> bool {
        self.particular.is_some()
    }

    pub fn is_unique(&self) -> bool {
        self.particular.is_some() && self.kernel_basis.is_empty()
    }
}

/// Solutions of `e[u] = v` of the form `Σ_{n=lo}^{hi} u_n r^n` (constant
/// vectors `u_n`), found by clearing denominators and equating coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzSolution {
    pub particular: Option<Vec<RatFunc>>,
    pub kernel_basis: Vec<Vec<RatFunc>>,
    pub witness: Option<Vec<GaussianRational>>,
    pub unknowns: usize,
    pub equations: usize,
}

pub fn solve_laurent_ansatz(e: &DiffOp, v: &[RatFunc], lo: i64, hi: i64) -> Result<AnsatzSolution> {
    if v.len() != e.rows() {
        return Err(Error::DimensionMismatch("source length differs from operator rows".into()));
    }
    let size = e.cols();
    let exps: Vec<i64> = if hi >= lo { (lo..=hi).collect() } else { Vec::new() };
    let mut basis = Vec::with_capacity(exps.len() * size);
    let mut columns = Vec::with_capacity(exps.len() * size);
    for &n in &exps {
        for j in 0..size {
            let mut u = vec![RatFunc::zero(); size];
            u[j] = RatFunc::r_pow(n);
            columns.push(e.apply(&u)?);
            basis.push(u);
        }
    }
    let unknowns = columns.len();
    let mut a_rows: Vec<Vec<GaussianRational>> = Vec::new();
    let mut b: Vec<GaussianRational> = Vec::new();
    for (i, vi) in v.iter().enumerate() {
        let den = columns
            .iter()
            .map(|c| c[i].denom())
            .chain(std::iter::once(vi.denom()))
            .fold(Poly::one(), |acc, d| Poly::lcm(&acc, d));
        let clear = |f: &RatFunc| f.numer() * &den.exact_div(f.denom()).expect("lcm is a multiple");
        let nums: Vec<Poly> = columns.iter().map(|c| clear(&c[i])).collect();
        let rhs = clear(vi);
        let top = nums.iter().chain(std::iter::once(&rhs)).filter_map(Poly::degree).max();
        let Some(top) = top else { continue };
        for k in 0..=top {
            a_rows.push(nums.iter().map(|p| p.coeff(k)).collect());
            b.push(rhs.coeff(k));
        }
    }
    let equations = a_rows.len();
    let a = ConstMatrix::from_fn(equations, unknowns, |r, c| a_rows[r][c].clone());
    let sol = linsolve(&a, &b)?;
    let combine = |x: &[GaussianRational]| -> Vec<RatFunc> {
        let mut u = vec![RatFunc::zero(); size];
        for (coef, bvec) in x.iter().zip(&basis) {
            if coef.is_zero() {
                continue;
            }
            for (uj, bj) in u.iter_mut().zip(bvec) {
                if !bj.is_zero() {
                    *uj = &*uj + &bj.scale(coef);
                }
            }
        }
        u
    };
    Ok(AnsatzSolution {
        particular: sol.particular.as_deref().map(combine),
        kernel_basis: sol.kernel_basis.iter().map(|k| combine(k)).collect(),
        witness: sol.witness,
        unknowns,
        equations,
    })
}

fn residual_is_zero(e: &DiffOp, u: &[RatFunc], v: &[RatFunc]) -> Result<bool> {
    Ok(e.apply(u)?.iter().zip(v).all(|(a, b)| a == b))
}

/// All rational solutions of `e[u] = v`.
pub fn solve_rational(e: &DiffOp, v: &[RatFunc], multipliers: &Multipliers) -> Result<SolutionSpace> {
    if !e.is_square() {
        return Err(Error::DimensionMismatch("solve_rational needs a square operator".into()));
    }
    if v.len() != e.rows() {
        return Err(Error::DimensionMismatch("source length differs from operator rows".into()));
    }
    let size = e.cols();
    let v_is_zero = v.iter().all(RatFunc::is_zero);
    let um = universal_multiplier(e, v, multipliers)?;
    let mut analysis = um.points.clone();

    let trivial = |lower: Order, upper: Order, analysis: Vec<PointAnalysis>| SolutionSpace {
        r: um.matrix.clone(),
        lower,
        upper,
        particular: v_is_zero.then(|| vec![RatFunc::zero(); size]),
        kernel_basis: Vec::new(),
        analysis,
        witness: None,
    };
    if um.forces_zero {
        return Ok(trivial(Order::PosInf, Order::NegInf, analysis));
    }

    let e_t = e.compose(&DiffOp::multiplication(um.matrix.clone()))?;
    let origin = ExpansionPoint::zero();
    let at_origin = analyse_point(&e_t, v, &origin, &multipliers.at(&origin), multipliers.search)?;

    // Multipliers supplied for e stay valid for e∘R at infinity once T absorbs r^K.
    let k = valuation(&um.scalar, &ExpansionPoint::Infinity).finite().expect("nonzero multiplier");
    let shifted: Vec<MultiplierPair> = multipliers
        .at(&ExpansionPoint::Infinity)
        .into_iter()
        .map(|p| MultiplierPair { t: p.t.scale(&RatFunc::r_pow(k)), ..p })
        .collect();
    let at_inf = analyse_point(&e_t, v, &ExpansionPoint::Infinity, &shifted, multipliers.search)?;

    let (lower, upper) = (at_origin.solution_bound, at_inf.solution_bound);
    analysis.push(at_origin);
    analysis.push(at_inf);
    let (Order::Finite(lo), Order::Finite(hi)) = (lower, upper) else {
        return Ok(trivial(lower, upper, analysis));
    };
    log::info!("ansatz exponents {lo}..={hi}, R = {}", um.scalar);

    let ans = solve_laurent_ansatz(&e_t, v, lo, hi)?;
    let lift = |u: &[RatFunc]| -> Vec<RatFunc> { u.iter().map(|x| x * &um.scalar).collect() };
    let particular = ans.particular.as_deref().map(lift);
    let kernel_basis: Vec<Vec<RatFunc>> = ans.kernel_basis.iter().map(|k| lift(k)).collect();

    if let Some(p) = &particular {
        if !residual_is_zero(e, p, v)? {
            return Err(Error::Internal("particular solution fails the residual check".into()));
        }
    }
    let zero = vec![RatFunc::zero(); e.rows()];
    for k in &kernel_basis {
        if !residual_is_zero(e, k, &zero)? {
            return Err(Error::Internal("kernel vector fails the residual check".into()));
        }
    }
    Ok(SolutionSpace { r: um.matrix, lower, upper, particular, kernel_basis, analysis, witness: ans.witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_i64(n)
    }

    #[test]
    fn candidates() {
        let d = DiffOp::derivative(1, 1);
        let v = [RatFunc::power_of_linear(&q(3), -1)];
        assert_eq!(pole_candidates(&d, &v).unwrap(), vec![q(3)]);
        assert!(pole_candidates(&DiffOp::derivative(1, 2), &[RatFunc::r_pow(2)]).unwrap().is_empty());
    }

    #[test]
    fn unsupported_pole() {
        let den = Poly::from_i64s(&[-2, 0, 1]);
        let v = [RatFunc::new(Poly::one(), den).unwrap()];
        assert!(matches!(pole_candidates(&DiffOp::derivative(1, 1), &v), Err(Error::UnsupportedPole(_))));
    }

    #[test]
    fn multiplier_for_simple_pole() {
        // e = d - 1/(r-1), solutions c (r-1)
        let e = DiffOp::scalar(vec![-RatFunc::power_of_linear(&q(1), -1), RatFunc::one()]);
        let v = [RatFunc::zero()];
        let s1 = MultiplierPair::new(
            ExpansionPoint::Finite(q(1)),
            RatFuncMatrix::scalar(1, RatFunc::power_of_linear(&q(1), 1)),
            RatFuncMatrix::identity(1),
        )
        .unwrap();
        let um = universal_multiplier(&e, &v, &Multipliers::new(vec![s1])).unwrap();
        assert_eq!(um.scalar, RatFunc::power_of_linear(&q(1), 1));
        let sol = solve_rational(&e, &v, &Multipliers::default()).unwrap();
        assert_eq!(sol.kernel_basis.len(), 1);
        let k = &sol.kernel_basis[0][0];
        assert_eq!(&(k / &RatFunc::power_of_linear(&q(1), 1)).as_constant().is_some(), &true);
    }

    #[test]
    fn no_candidates_gives_identity() {
        let um = universal_multiplier(&DiffOp::derivative(1, 1), &[RatFunc::r()], &Multipliers::default()).unwrap();
        assert!(um.matrix.is_identity());
    }

    #[test]
    fn derivative_of_square() {
        let sol = solve_rational(&DiffOp::derivative(1, 1), &[RatFunc::r().scale(&q(2))], &Multipliers::default()).unwrap();
        let p = sol.particular.clone().unwrap();
        assert_eq!(p, vec![RatFunc::r_pow(2)]);
        assert_eq!(sol.kernel_basis, vec![vec![RatFunc::one()]]);
    }

    #[test]
    fn constants_in_kernel() {
        let sol = solve_rational(&DiffOp::derivative(1, 1), &[RatFunc::zero()], &Multipliers::default()).unwrap();
        assert_eq!(sol.particular, Some(vec![RatFunc::zero()]));
        assert_eq!(sol.kernel_basis, vec![vec![RatFunc::one()]]);
    }

    #[test]
    fn inconsistent_source() {
        // u' = 1/r has no rational solution
        let sol = solve_rational(&DiffOp::derivative(1, 1), &[RatFunc::r_pow(-1)], &Multipliers::default()).unwrap();
        assert!(sol.particular.is_none());
        assert!(sol.witness.is_some());
    }
}
