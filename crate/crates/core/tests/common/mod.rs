//! Independent oracles and random problem generators shared by the property
//! tests and the acceptance suite.
#![allow(dead_code)]

use num_traits::Zero;
use rand::Rng;
use rode_core::arith::{linsolve, ConstMatrix};
use rode_core::ratsolve::{pole_candidates, SolutionSpace};
use rode_core::reggewheeler::{regge_wheeler, rw_delta_operator, RWDelta};
use rode_core::{DiffOp, GaussianRational, Order, Poly, RatFunc, RatFuncMatrix, RWParams};

pub fn q(n: i64) -> GaussianRational {
    GaussianRational::from_i64(n)
}

pub fn gauss(re: i64, im: i64) -> GaussianRational {
    &q(re) + &(&GaussianRational::i() * &q(im))
}

pub fn random_gauss(rng: &mut impl Rng, bound: i64, complex: bool) -> GaussianRational {
    let im = if complex { rng.gen_range(-bound..=bound) } else { 0 };
    gauss(rng.gen_range(-bound..=bound), im)
}

pub fn random_poly(rng: &mut impl Rng, max_deg: usize, bound: i64, complex: bool) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    Poly::new((0..=deg).map(|_| random_gauss(rng, bound, complex)).collect())
}

pub fn random_nonzero_poly(rng: &mut impl Rng, max_deg: usize, bound: i64, complex: bool) -> Poly {
    loop {
        let p = random_poly(rng, max_deg, bound, complex);
        if !p.is_zero() {
            return p;
        }
    }
}

/// A product of up to `k` linear factors `r - ρ` with `ρ` from a small set.
pub fn random_split_poly(rng: &mut impl Rng, k: usize) -> Poly {
    let roots = [0, 1, -1, 2];
    let n = rng.gen_range(0..=k);
    let mut p = Poly::constant(q(rng.gen_range(1..=3)));
    for _ in 0..n {
        p = &p * &Poly::linear(&q(roots[rng.gen_range(0..roots.len())]));
    }
    p
}

/// A rational function with poles only at 0 and 1.
pub fn random_rational(rng: &mut impl Rng, complex: bool) -> RatFunc {
    let num = random_poly(rng, 3, 3, complex);
    let den = &Poly::x().pow(rng.gen_range(0..=2)) * &Poly::linear(&q(1)).pow(rng.gen_range(0..=1));
    RatFunc::new(num, den).unwrap()
}

/// A scalar operator of order 1 or 2 whose leading coefficient splits over
/// the integers.
pub fn random_scalar_operator(rng: &mut impl Rng, complex: bool) -> DiffOp {
    let order = rng.gen_range(1..=2);
    let mut coeffs: Vec<RatFunc> = (0..order).map(|_| RatFunc::from_poly(random_poly(rng, 2, 3, complex))).collect();
    coeffs.push(RatFunc::from_poly(random_split_poly(rng, 2)));
    DiffOp::scalar(coeffs)
}

/// A first order 2×2 system `P(r)·d + A(r)`.
pub fn random_system_operator(rng: &mut impl Rng, complex: bool) -> DiffOp {
    let p = RatFunc::from_poly(random_split_poly(rng, 2));
    let a = RatFuncMatrix::from_fn(2, 2, |_, _| RatFunc::from_poly(random_poly(rng, 1, 3, complex)));
    DiffOp::new(2, 2, vec![a, RatFuncMatrix::scalar(2, p)]).unwrap()
}

pub fn random_problem(rng: &mut impl Rng, system: bool) -> (DiffOp, Vec<RatFunc>, Vec<RatFunc>) {
    let complex = rng.gen_bool(0.3);
    let e = if system { random_system_operator(rng, complex) } else { random_scalar_operator(rng, complex) };
    let u: Vec<RatFunc> = (0..e.cols()).map(|_| random_rational(rng, complex)).collect();
    let v = e.apply(&u).unwrap();
    (e, u, v)
}

fn numerator_degree_bound(fs: &[&RatFunc]) -> (Poly, usize) {
    let den = fs.iter().fold(Poly::one(), |acc, f| Poly::lcm(&acc, f.denom()));
    let dd = den.degree().unwrap_or(0);
    let deg = fs
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| f.numer().degree().unwrap_or(0) + dd - f.denom().degree().unwrap_or(0))
        .max()
        .unwrap_or(0);
    (den, deg)
}

/// Solves `Σ c_k cols[k] = target` for constants `c_k` by evaluating both
/// sides at enough sample points to pin down every numerator.
pub fn collocation_solve(cols: &[Vec<RatFunc>], target: &[RatFunc]) -> rode_core::AffineSolutionSet {
    let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..target.len() {
        let mut fs: Vec<&RatFunc> = cols.iter().map(|c| &c[i]).collect();
        fs.push(&target[i]);
        let (den, deg) = numerator_degree_bound(&fs);
        let mut x = 7i64;
        let mut taken = 0;
        while taken <= deg {
            x += 1;
            let pt = q(x);
            if den.eval(&pt).is_zero() {
                continue;
            }
            rows.push(cols.iter().map(|c| c[i].eval(&pt).unwrap()).collect());
            rhs.push(target[i].eval(&pt).unwrap());
            taken += 1;
        }
    }
    let a = ConstMatrix::from_fn(rows.len(), cols.len(), |r, c| rows[r][c].clone());
    linsolve(&a, &rhs).unwrap()
}

/// Brute-force rational solutions `R·Σ_{lo..=hi} u_n r^n` of `e[u] = v`,
/// solved by collocation.
pub fn bruteforce(e: &DiffOp, v: &[RatFunc], r: &RatFunc, lo: i64, hi: i64) -> (bool, usize) {
    let mut cols = Vec::new();
    for n in lo..=hi {
        for j in 0..e.cols() {
            let mut u = vec![RatFunc::zero(); e.cols()];
            u[j] = r * &RatFunc::r_pow(n);
            cols.push(e.apply(&u).unwrap());
        }
    }
    let sol = collocation_solve(&cols, v);
    (sol.particular.is_some(), sol.kernel_basis.len())
}

/// The bounds of a solver run widened by `w` on every side: `w` more powers of
/// `r` at 0 and ∞ and `w` more pole order at each other candidate (with the
/// top exponent raised to match the larger denominator).
pub fn widened(e: &DiffOp, v: &[RatFunc], space: &SolutionSpace, w: i64) -> (RatFunc, i64, i64) {
    let mut r = space.r.get(0, 0).clone();
    let mut extra = 0;
    for rho in pole_candidates(e, v).unwrap() {
        if !rho.is_zero() {
            r = &r * &RatFunc::power_of_linear(&rho, -w);
            extra += w;
        }
    }
    let lo = match space.lower {
        Order::Finite(k) => k - w,
        _ => -w,
    };
    let hi = match space.upper {
        Order::Finite(k) => k + w + extra,
        _ => w + extra,
    };
    (r, lo, hi)
}

/// True when `target - particular` lies in the span of the kernel basis.
pub fn contains(space: &SolutionSpace, target: &[RatFunc]) -> bool {
    let Some(p) = &space.particular else { return false };
    let diff: Vec<RatFunc> = target.iter().zip(p).map(|(a, b)| a - b).collect();
    if diff.iter().all(RatFunc::is_zero) {
        return true;
    }
    if space.kernel_basis.is_empty() {
        return false;
    }
    collocation_solve(&space.kernel_basis, &diff).particular.is_some()
}

/// Decides whether `D_{s0}∘δ = Δ + ε∘D_{s1}` has a solution with
/// `(δ0, δ1) = R·Σ_{lo..=hi} c_n r^n`, using the remainder of the operator
/// identity modulo `D_{s1}` directly (not the 2×2 system).
pub fn rw_remainder_oracle(delta: &RWDelta, s0: &GaussianRational, s1: &GaussianRational, p: &RWParams, r: &RatFunc, lo: i64, hi: i64) -> bool {
    let d0 = regge_wheeler(s0, p).unwrap();
    let d1 = regge_wheeler(s1, p).unwrap();
    let remainder = |op: DiffOp| -> Vec<RatFunc> {
        let (g, _) = op.right_divide(&d1).unwrap();
        vec![g.entry_coeff(0, 0, 0), g.entry_coeff(0, 0, 1)]
    };
    let mut cols = Vec::new();
    for n in lo..=hi {
        let basis = r * &RatFunc::r_pow(n);
        cols.push(remainder(d0.compose(&rw_delta_operator(&basis, &RatFunc::zero())).unwrap()));
        cols.push(remainder(d0.compose(&rw_delta_operator(&RatFunc::zero(), &basis)).unwrap()));
    }
    let target = remainder(delta.to_diffop());
    collocation_solve(&cols, &target).particular.is_some()
}
