//! Spin-s Regge-Wheeler operators on Schwarzschild and the reduction of the
//! triangular systems they form.
//!
//! Conventions: `f = 1 - 2M/r`, `f1 = 2M/r`, `B = l(l+1)`, and
//! `D_s = ∂_r f ∂_r - (B + (1 - s²) f1)/r² + ω²/f`. Off-diagonal operators are
//! first order and written `Δ = (Δ1 r∂_r + Δ0)/r²`, `δ = δ1 r∂_r + δ0`.

mod expr;
mod fixture;

pub use expr::{parse_expr, Env};
pub use fixture::{ExampleFixture, Expectation, OperatorExpr};

use serde::{Deserialize, Serialize};

use crate::arith::{gaussian_roots, GaussianRational, Matrix, Poly, RatFunc, RatFuncMatrix};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::laurent::{vector_order, ExpansionPoint, Order};
use crate::ratsolve::{
    char_matrix, leading_bound, solve_laurent_ansatz, trailing_bound, CharMatrix, MultiplierPair, Multipliers,
};
use crate::triangular::{reconstruct_epsilon, EquivalenceWitness, Reconstruction, ReductionPair, TriangularSystem};

fn q(n: i64) -> GaussianRational {
    GaussianRational::from_i64(n)
}

fn c(x: &GaussianRational) -> RatFunc {
    RatFunc::constant(x.clone())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RWParams {
    #[serde(rename = "M")]
    pub m: GaussianRational,
    pub omega: GaussianRational,
    pub l: u32,
    #[serde(rename = "A_l", default, skip_serializing_if = "Option::is_none")]
    pub a_l: Option<GaussianRational>,
}

impl RWParams {
    pub fn new(m: GaussianRational, omega: GaussianRational, l: u32) -> Result<Self> {
        let p = RWParams { m, omega, l, a_l: None };
        p.validate()?;
        Ok(p)
    }

    pub fn with_a_l(mut self, a_l: GaussianRational) -> Self {
        self.a_l = Some(a_l);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if num_traits::Zero::is_zero(&self.omega) {
            return Err(Error::Precondition("omega must be nonzero".into()));
        }
        if num_traits::Zero::is_zero(&self.m) {
            return Err(Error::Precondition("M must be nonzero".into()));
        }
        Ok(())
    }

    pub fn b_l(&self) -> GaussianRational {
        q(i64::from(self.l) * (i64::from(self.l) + 1))
    }

    pub fn env(&self) -> Env {
        Env { m: self.m.clone(), omega: self.omega.clone(), l: self.l, a_l: self.a_l.clone() }
    }

    pub fn f1(&self) -> RatFunc {
        &c(&(&self.m * &q(2))) * &RatFunc::r_pow(-1)
    }

    pub fn f(&self) -> RatFunc {
        &RatFunc::one() - &self.f1()
    }

    pub fn horizon(&self) -> GaussianRational {
        &self.m * &q(2)
    }
}

/// `D_s` as a scalar second order operator.
pub fn regge_wheeler(s: &GaussianRational, p: &RWParams) -> Result<DiffOp> {
    p.validate()?;
    let (f, f1) = (p.f(), p.f1());
    let r2inv = RatFunc::r_pow(-2);
    let spin = &RatFunc::one() - &c(&(s * s));
    let potential = &(&c(&p.b_l()) + &(&spin * &f1)) * &r2inv;
    let omega2 = c(&(&p.omega * &p.omega));
    let c0 = &(&omega2 / &f) - &potential;
    Ok(DiffOp::scalar(vec![c0, f.derivative(), f]))
}

/// The 2×2 system on `(δ0, δ1)` with source `(Δ0, Δ1)` whose rational
/// solutions are exactly the `δ` solving `D_{s0}∘δ = Δ + ε∘D_{s1}`.
pub fn rw_decoupling_system(s0: &GaussianRational, s1: &GaussianRational, p: &RWParams) -> Result<DiffOp> {
    p.validate()?;
    let (f, f1, r) = (p.f(), p.f1(), RatFunc::r());
    let r2 = RatFunc::r_pow(2);
    let b = c(&p.b_l());
    let w2 = c(&(&p.omega * &p.omega));
    let d = c(&(&(s0 * s0) - &(s1 * s1)));
    let t1 = c(&(&GaussianRational::from_i64(1) - &(s1 * s1)));
    let two = RatFunc::from_i64(2);
    let zero = RatFunc::zero();

    let c2 = RatFuncMatrix::scalar(2, &f * &r2);
    let w2r2 = &w2 * &r2;
    let c1 = RatFuncMatrix::from_rows(vec![
        vec![f1.clone(), &(&(-&(&two * &w2r2)) / &f) + &(&two * &(&b + &(&f1 * &t1)))],
        vec![&two * &f, &(&two * &f) - &f1],
    ])?
    .scale(&r);
    let f_sq = &f * &f;
    let c0 = RatFuncMatrix::from_rows(vec![
        vec![
            &f1 * &d,
            &(&(&(&two * &w2r2) * &(&f1 - &f)) / &f_sq) - &(&(&f1 / &f) * &(&b + &t1)),
        ],
        vec![zero, &f1 * &(&d + &f.inv().expect("f is nonzero"))],
    ])?;
    DiffOp::new(2, 2, vec![c0, c1, c2])
}

/// The same system assembled from the generic construction: the decoupling
/// system `L` of `(D_{s0}, D_{s1})` on the unknowns `(δ0, r δ1)`, rescaled to
/// `diag(r², r)·L∘diag(1, r)`.
pub fn rw_generic_system(s0: &GaussianRational, s1: &GaussianRational, p: &RWParams) -> Result<DiffOp> {
    let sys = TriangularSystem::new(regge_wheeler(s0, p)?, regge_wheeler(s1, p)?, DiffOp::zero(1, 1))?;
    let (l, _) = crate::triangular::decoupling_system(&sys)?;
    let left = RatFuncMatrix::diagonal(vec![RatFunc::r_pow(2), RatFunc::r()]);
    let right = DiffOp::multiplication(RatFuncMatrix::diagonal(vec![RatFunc::one(), RatFunc::r()]));
    l.left_mul(&left)?.compose(&right)
}

/// The off-diagonal source `Δ = (Δ1 r∂_r + Δ0)/r²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RWDelta {
    #[serde(rename = "Delta0")]
    pub delta0: RatFunc,
    #[serde(rename = "Delta1")]
    pub delta1: RatFunc,
}

impl RWDelta {
    pub fn new(delta0: RatFunc, delta1: RatFunc) -> Self {
        RWDelta { delta0, delta1 }
    }

    pub fn zero() -> Self {
        RWDelta::new(RatFunc::zero(), RatFunc::zero())
    }

    /// From the operator `X ∂_r + Y`.
    pub fn from_coefficients(dr: &RatFunc, id: &RatFunc) -> Self {
        RWDelta::new(id * &RatFunc::r_pow(2), dr * &RatFunc::r())
    }

    pub fn from_diffop(op: &DiffOp) -> Result<Self> {
        if op.rows() != 1 || op.cols() != 1 || op.order().is_some_and(|k| k > 1) {
            return Err(Error::Precondition("Δ must be a scalar operator of order at most 1".into()));
        }
        Ok(RWDelta::from_coefficients(&op.entry_coeff(0, 0, 1), &op.entry_coeff(0, 0, 0)))
    }

    pub fn to_diffop(&self) -> DiffOp {
        DiffOp::scalar(vec![&self.delta0 * &RatFunc::r_pow(-2), &self.delta1 * &RatFunc::r_pow(-1)])
    }

    /// The source vector `(Δ0, Δ1)` of the decoupling system.
    pub fn source(&self) -> Vec<RatFunc> {
        vec![self.delta0.clone(), self.delta1.clone()]
    }

    /// Rejects poles away from `r = 0` and `r = 2M`.
    pub fn check_poles(&self, p: &RWParams) -> Result<()> {
        let den = Poly::lcm(self.delta0.denom(), self.delta1.denom());
        let (roots, rest) = gaussian_roots(&den)?;
        let allowed = [GaussianRational::from_i64(0), p.horizon()];
        match roots.iter().find(|z| !allowed.contains(z)) {
            Some(z) => Err(Error::UnsupportedPole(format!("Δ has a pole at r = {z}"))),
            None if !rest.is_one() => Err(Error::UnsupportedPole(format!("Δ has poles at the roots of {rest}"))),
            None => Ok(()),
        }
    }
}

/// `δ = δ1 r∂_r + δ0`.
pub fn rw_delta_operator(delta0: &RatFunc, delta1: &RatFunc) -> DiffOp {
    DiffOp::scalar(vec![delta0.clone(), delta1 * &RatFunc::r()])
}

/// `ε = δ1 r∂_r + [2∂_r(r δ1) - (f1/f) δ1 + δ0]`, the partner of `δ`.
pub fn rw_epsilon(delta0: &RatFunc, delta1: &RatFunc, p: &RWParams) -> DiffOp {
    let r_d1 = delta1 * &RatFunc::r();
    let c0 = &(&(&RatFunc::from_i64(2) * &r_d1.derivative()) - &(&(&p.f1() / &p.f()) * delta1)) + delta0;
    DiffOp::scalar(vec![c0, r_d1])
}

/// The three singular points of the system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RWPoint {
    Origin,
    Horizon,
    Infinity,
}

impl RWPoint {
    pub const ALL: [RWPoint; 3] = [RWPoint::Origin, RWPoint::Horizon, RWPoint::Infinity];

    pub fn expansion_point(self, p: &RWParams) -> ExpansionPoint {
        match self {
            RWPoint::Origin => ExpansionPoint::zero(),
            RWPoint::Horizon => ExpansionPoint::Finite(p.horizon()),
            RWPoint::Infinity => ExpansionPoint::Infinity,
        }
    }
}

/// Tabulated multipliers at a singular point, with the characteristic matrix
/// and determinant they are expected to produce.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RWTable {
    pub multipliers: MultiplierPair,
    pub char_matrix: Matrix<Poly>,
    pub det: Poly,
}

pub fn rw_multipliers(point: RWPoint, s0: &GaussianRational, s1: &GaussianRational, p: &RWParams) -> Result<RWTable> {
    p.validate()?;
    let n = Poly::x();
    let k = |x: GaussianRational| Poly::constant(x);
    let (m, w) = (&p.m, &p.omega);
    let (s0sq, s1sq) = (s0 * s0, s1 * s1);
    let ep = point.expansion_point(p);
    match point {
        RWPoint::Origin => {
            let shift = k(&s1sq - &s0sq);
            let n2 = &n * &n;
            let two_n = n.scale(&q(2));
            let entries = Matrix::from_rows(vec![
                vec![&(&n2 - &two_n) + &shift, two_n.scale(&(&s1sq - &q(1)))],
                vec![two_n.clone(), &(&n2 + &two_n) + &shift],
            ])?
            .map(|e| e.scale(&(m * &q(-2))));
            let mut det = k(&(m * m) * &q(4));
            for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                det = &det * &Poly::linear(&-(&(s0 * &q(a)) + &(s1 * &q(b))));
            }
            Ok(RWTable { multipliers: MultiplierPair::diagonal(ep, &[0, 0], &[-1, -1]), char_matrix: entries, det })
        }
        RWPoint::Horizon => {
            let two_m = c(&(m * &q(2)));
            let t = &RatFunc::r() - &two_m;
            let s = RatFuncMatrix::diagonal(vec![&t / &two_m, &(&t * &t) / &(&two_m * &two_m)]);
            // the target multiplier that reproduces E_n below is diag(1, (r-2M)/2M)
            let tm = RatFuncMatrix::diagonal(vec![RatFunc::one(), &t / &two_m]);
            let n1 = &n + &Poly::one();
            let n1sq = &n1 * &n1;
            let mw = &(m * m) * &(w * w);
            let entries = Matrix::from_rows(vec![
                vec![n1sq.clone(), n1.scale(&(&mw * &q(-8)))],
                vec![n1.scale(&q(2)), n1sq.clone()],
            ])?;
            let det = &n1sq * &(&n1sq + &k(&mw * &q(16)));
            Ok(RWTable { multipliers: MultiplierPair::new(ep, s, tm)?, char_matrix: entries, det })
        }
        RWPoint::Infinity => {
            let n1 = &n + &Poly::one();
            let w2 = w * w;
            let entries = Matrix::from_rows(vec![
                vec![Poly::zero(), n1.scale(&(&w2 * &q(-2)))],
                vec![n.scale(&q(2)), &n * &n1],
            ])?;
            let det = (&n * &n1).scale(&(&w2 * &q(4)));
            Ok(RWTable { multipliers: MultiplierPair::diagonal(ep, &[0, 0], &[2, 0]), char_matrix: entries, det })
        }
    }
}

/// All three tabulated pairs, for use with the generic solver.
pub fn rw_multiplier_set(s0: &GaussianRational, s1: &GaussianRational, p: &RWParams) -> Result<Multipliers> {
    let pairs = RWPoint::ALL
        .iter()
        .map(|&pt| rw_multipliers(pt, s0, s1, p).map(|t| t.multipliers))
        .collect::<Result<Vec<_>>>()?;
    Ok(Multipliers { pairs, search: false })
}

/// Characteristic matrices of the system at the three points, computed from
/// the tabulated multipliers.
pub fn rw_char_matrices(s0: &GaussianRational, s1: &GaussianRational, p: &RWParams) -> Result<Vec<(RWPoint, CharMatrix)>> {
    let e = rw_decoupling_system(s0, s1, p)?;
    RWPoint::ALL
        .iter()
        .map(|&pt| Ok((pt, char_matrix(&e, &rw_multipliers(pt, s0, s1, p)?.multipliers)?)))
        .collect()
}

/// Degree bounds for the rational solutions `(δ0, δ1) = R·ũ`, `ũ` a Laurent
/// polynomial with exponents in `ansatz_lower..=ansatz_upper`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RWBounds {
    /// Leading order of `T_0⁻¹Δ` at 0.
    pub m_check: Order,
    /// Trailing order of `T_∞⁻¹Δ` at ∞.
    pub m_hat: Order,
    /// Leading order of `T_{2M}⁻¹Δ` at 2M.
    pub m_horizon: Order,
    /// `min(-1, m_horizon)`.
    pub m: i64,
    /// `ň = min({m̌} ∪ σ̌_0)`.
    pub lower: Order,
    /// `n̂ = max({m̂} ∪ σ̂_∞)`.
    pub upper: Order,
    /// `R = f^{m+1}`.
    #[serde(rename = "R")]
    pub r: RatFunc,
    pub ansatz_lower: Order,
    pub ansatz_upper: Order,
    pub exponents: Vec<(RWPoint, Vec<i64>)>,
}

pub fn rw_bounds(delta: &RWDelta, s0: &GaussianRational, s1: &GaussianRational, p: &RWParams) -> Result<RWBounds> {
    delta.check_poles(p)?;
    let e = rw_decoupling_system(s0, s1, p)?;
    let v = delta.source();
    let mut orders = Vec::new();
    let mut cms = Vec::new();
    for pt in RWPoint::ALL {
        let pair = rw_multipliers(pt, s0, s1, p)?.multipliers;
        let cm = char_matrix(&e, &pair)?;
        let t_inv = pair.t.inverse()?.ok_or_else(|| Error::Internal("tabulated T is singular".into()))?;
        orders.push(vector_order(&t_inv.mul_vec(&v)?, &pair.point).global);
        cms.push(cm);
    }
    let (m_check, m_horizon, m_hat) = (orders[0], orders[1], orders[2]);
    let lower = leading_bound(&cms[0], m_check);
    let upper = trailing_bound(&cms[2], m_hat);
    let m = match leading_bound(&cms[1], m_horizon) {
        Order::Finite(k) => k.min(-1),
        _ => -1,
    };
    let r = p.f().powi(m + 1).expect("f is nonzero");
    let ansatz_lower = if lower.is_finite() { lower + Order::Finite(m + 1) } else { lower };
    let exponents = RWPoint::ALL.iter().zip(&cms).map(|(&pt, cm)| (pt, cm.exponents.clone())).collect();
    Ok(RWBounds { m_check, m_hat, m_horizon, m, lower, upper, r, ansatz_lower, ansatz_upper: upper, exponents })
}

/// A solution `(δ0, δ1)` with its operators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RWSolution {
    pub delta0: RatFunc,
    pub delta1: RatFunc,
    pub delta: DiffOp,
    pub epsilon: DiffOp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RWOutcome {
    Reducible {
        solution: RWSolution,
        unique: bool,
        /// Solutions of the homogeneous problem `Δ = 0`.
        kernel: Vec<RWSolution>,
        bounds: RWBounds,
    },
    Irreducible {
        bounds: RWBounds,
        /// `y` with `yᵀA = 0`, `yᵀb = 1` for the ansatz system, when one was built.
        witness: Option<Vec<crate::arith::GaussianRational>>,
        /// Remainder of `-Δ` modulo `D_{s1}`: the obstruction at `δ = 0`.
        remainder: DiffOp,
    },
}

impl RWOutcome {
    pub fn is_reducible(&self) -> bool {
        matches!(self, RWOutcome::Reducible { .. })
    }

    pub fn bounds(&self) -> &RWBounds {
        match self {
            RWOutcome::Reducible { bounds, .. } | RWOutcome::Irreducible { bounds, .. } => bounds,
        }
    }
}

fn checked_solution(sys: &TriangularSystem, d: &[RatFunc], p: &RWParams) -> Result<RWSolution> {
    let delta = rw_delta_operator(&d[0], &d[1]);
    let epsilon = rw_epsilon(&d[0], &d[1], p);
    match reconstruct_epsilon(sys, &delta)? {
        Reconstruction::Epsilon(eps) if eps == epsilon => {}
        Reconstruction::Epsilon(eps) => {
            return Err(Error::Internal(format!("ε from division ({eps}) differs from the closed form ({epsilon})")))
        }
        Reconstruction::Obstruction(g) => return Err(Error::Internal(format!("δ leaves the remainder {g}"))),
    }
    let pair = ReductionPair { delta: delta.clone(), epsilon: epsilon.clone() };
    if !sys.is_satisfied_by(&pair)? || !EquivalenceWitness::new(sys, &pair)?.verify(sys)? {
        return Err(Error::Internal("operator identity fails for a computed solution".into()));
    }
    Ok(RWSolution { delta0: d[0].clone(), delta1: d[1].clone(), delta, epsilon })
}

/// Solves `D_{s0}∘δ = Δ + ε∘D_{s1}` for rational `δ`, `ε`, or shows that no
/// solution exists.
pub fn rw_reduce(delta: &RWDelta, s0: &GaussianRational, s1: &GaussianRational, p: &RWParams) -> Result<RWOutcome> {
    let bounds = rw_bounds(delta, s0, s1, p)?;
    let e = rw_decoupling_system(s0, s1, p)?;
    let v = delta.source();
    let v_zero = v.iter().all(RatFunc::is_zero);
    let (particular, kernel, witness) = match (bounds.ansatz_lower, bounds.ansatz_upper) {
        (Order::Finite(lo), Order::Finite(hi)) if lo <= hi => {
            log::info!("ansatz exponents {lo}..={hi}, R = {}", bounds.r);
            let e_t = e.compose(&DiffOp::multiplication(RatFuncMatrix::scalar(2, bounds.r.clone())))?;
            let ans = solve_laurent_ansatz(&e_t, &v, lo, hi)?;
            let lift = |u: &Vec<RatFunc>| u.iter().map(|x| x * &bounds.r).collect::<Vec<_>>();
            (ans.particular.as_ref().map(lift), ans.kernel_basis.iter().map(lift).collect(), ans.witness)
        }
        _ => (v_zero.then(|| vec![RatFunc::zero(); 2]), Vec::new(), None),
    };
    let delta_op = delta.to_diffop();
    let sys = TriangularSystem::new(regge_wheeler(s0, p)?, regge_wheeler(s1, p)?, delta_op.clone())?;
    match particular {
        Some(d) => {
            if e.apply(&d)? != v {
                return Err(Error::Internal("particular solution fails the residual check".into()));
            }
            let solution = checked_solution(&sys, &d, p)?;
            let homogeneous = TriangularSystem { delta: DiffOp::zero(1, 1), ..sys.clone() };
            let kernel = kernel.iter().map(|k| checked_solution(&homogeneous, k, p)).collect::<Result<Vec<_>>>()?;
            Ok(RWOutcome::Reducible { solution, unique: kernel.is_empty(), kernel, bounds })
        }
        None => {
            let (remainder, _) = delta_op.neg().right_divide(&sys.e1)?;
            Ok(RWOutcome::Irreducible { bounds, witness, remainder })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub holds: bool,
    pub residual: DiffOp,
}

/// Checks `D_{s0}∘c - f1/r² - c∘D_{s1} = 0` with `c = 1/(s0² - s1²)`, i.e. that
/// `δ = ε = c` reduces the source `f1/r²` for any pair of spins.
pub fn general_identity_check(s0: &GaussianRational, s1: &GaussianRational, p: &RWParams) -> Result<IdentityCheck> {
    let diff = &(s0 * s0) - &(s1 * s1);
    let coef = diff.inv().ok_or_else(|| Error::Precondition("the identity needs s0² ≠ s1²".into()))?;
    let cop = DiffOp::scalar(vec![c(&coef)]);
    let source = DiffOp::scalar(vec![&p.f1() * &RatFunc::r_pow(-2)]);
    let residual = regge_wheeler(s0, p)?
        .compose(&cop)?
        .sub(&source)?
        .sub(&cop.compose(&regge_wheeler(s1, p)?)?)?;
    Ok(IdentityCheck { holds: residual.is_zero(), residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(l: u32) -> RWParams {
        RWParams::new(q(1), q(1), l).unwrap()
    }

    #[test]
    fn operator_shape() {
        let p = params(2);
        let d1 = regge_wheeler(&q(1), &p).unwrap();
        assert_eq!(d1.entry_coeff(0, 0, 2), p.f());
        let w2_over_f = &RatFunc::one() / &p.f();
        let b_term = &RatFunc::from_i64(6) * &RatFunc::r_pow(-2);
        assert_eq!(d1.entry_coeff(0, 0, 0), &w2_over_f - &b_term);
        let d0 = regge_wheeler(&q(0), &p).unwrap();
        let diff = d0.sub(&d1).unwrap();
        assert_eq!(diff, DiffOp::scalar(vec![-(&p.f1() * &RatFunc::r_pow(-2))]));
        assert!(regge_wheeler(&q(0), &RWParams { omega: q(0), ..p }).is_err());
    }

    #[test]
    fn system_entries() {
        let p = params(2);
        let e = rw_decoupling_system(&q(0), &q(1), &p).unwrap();
        assert_eq!(e.entry_coeff(1, 0, 1), &(&RatFunc::from_i64(2) * &p.f()) * &RatFunc::r());
        assert!(e.entry_coeff(1, 0, 0).is_zero());
    }

    #[test]
    fn system_matches_generic_construction() {
        for l in [1, 2] {
            for (s0, s1) in [(0, 1), (0, 0), (1, 2), (3, 0)] {
                let p = params(l);
                let (s0, s1) = (q(s0), q(s1));
                assert_eq!(rw_decoupling_system(&s0, &s1, &p).unwrap(), rw_generic_system(&s0, &s1, &p).unwrap());
            }
        }
    }

    #[test]
    fn delta_round_trip() {
        let d = RWDelta::new(RatFunc::r(), RatFunc::from_i64(3));
        assert_eq!(RWDelta::from_diffop(&d.to_diffop()).unwrap(), d);
    }

    #[test]
    fn tables_reproduce() {
        let p = RWParams::new(q(1), GaussianRational::from_frac(1, 2), 2).unwrap();
        for (s0, s1) in [(0, 1), (2, 3), (1, 1)] {
            let (s0, s1) = (q(s0), q(s1));
            for pt in RWPoint::ALL {
                let table = rw_multipliers(pt, &s0, &s1, &p).unwrap();
                let e = rw_decoupling_system(&s0, &s1, &p).unwrap();
                let cm = char_matrix(&e, &table.multipliers).unwrap();
                assert_eq!(cm.entries, table.char_matrix, "{pt:?}");
                assert_eq!(cm.det, table.det, "{pt:?}");
            }
        }
    }

    #[test]
    fn example_one_bounds_and_solution() {
        let p = params(2);
        let delta = RWDelta::new(p.f1(), RatFunc::zero());
        let b = rw_bounds(&delta, &q(0), &q(1), &p).unwrap();
        assert_eq!((b.m_check, b.m_hat), (Order::Finite(0), Order::Finite(-3)));
        assert_eq!((b.lower, b.upper), (Order::Finite(-1), Order::Finite(0)));
        assert!(b.r.is_one());
        let RWOutcome::Reducible { solution, unique, .. } = rw_reduce(&delta, &q(0), &q(1), &p).unwrap() else {
            panic!("expected a solution");
        };
        assert!(unique);
        assert_eq!(solution.delta, DiffOp::scalar(vec![RatFunc::from_i64(-1)]));
        assert_eq!(solution.epsilon, DiffOp::scalar(vec![RatFunc::from_i64(-1)]));
    }

    #[test]
    fn example_three_has_no_solution() {
        let p = params(2);
        let d0 = -(&p.f1() * &(&c(&p.b_l()) + &(&p.f1() / &RatFunc::from_i64(2))));
        let delta = RWDelta::new(d0, RatFunc::zero());
        let out = rw_reduce(&delta, &q(0), &q(0), &p).unwrap();
        assert!(!out.is_reducible());
        assert_eq!((out.bounds().lower, out.bounds().upper), (Order::Finite(-1), Order::Finite(0)));
    }

    #[test]
    fn homogeneous_bounds() {
        let p = params(2);
        let b = rw_bounds(&RWDelta::zero(), &q(1), &q(2), &p).unwrap();
        assert_eq!((b.lower, b.upper), (Order::Finite(-3), Order::Finite(0)));
    }

    #[test]
    fn identity() {
        let p = params(2);
        assert!(general_identity_check(&q(2), &q(3), &p).unwrap().holds);
        assert!(general_identity_check(&GaussianRational::from_frac(1, 2), &GaussianRational::from_frac(3, 2), &p).unwrap().holds);
        assert!(matches!(general_identity_check(&q(1), &q(-1), &p), Err(Error::Precondition(_))));
    }

    #[test]
    fn foreign_pole_rejected() {
        let p = params(2);
        let delta = RWDelta::new(RatFunc::power_of_linear(&q(5), -1), RatFunc::zero());
        assert!(matches!(rw_bounds(&delta, &q(0), &q(1), &p), Err(Error::UnsupportedPole(_))));
    }
}
