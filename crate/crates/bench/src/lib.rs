//! Fixed inputs for the benchmarks.

use rode_core::reggewheeler::RWDelta;
use rode_core::{DiffOp, GaussianRational, Poly, RWParams, RatFunc, RatFuncMatrix};

pub fn q(n: i64) -> GaussianRational {
    GaussianRational::from_i64(n)
}

fn rat(num: &[i64], den: &[i64]) -> RatFunc {
    RatFunc::new(Poly::from_i64s(num), Poly::from_i64s(den)).unwrap()
}

/// A second order scalar operator with poles at 0 and 1.
pub fn scalar_operator() -> DiffOp {
    DiffOp::scalar(vec![rat(&[2, -1], &[0, 1]), rat(&[1, 0, 3], &[-1, 1]), rat(&[0, 0, 1], &[1])])
}

/// `(r^2 - r) d + A(r)` on 2-vectors.
pub fn system_operator() -> DiffOp {
    let a = RatFuncMatrix::from_rows(vec![
        vec![rat(&[1, 2], &[1]), rat(&[-3], &[1])],
        vec![rat(&[0, 1], &[1]), rat(&[2, -1], &[1])],
    ])
    .unwrap();
    DiffOp::new(2, 2, vec![a, RatFuncMatrix::scalar(2, rat(&[0, -1, 1], &[1]))]).unwrap()
}

/// A planted rational solution and its image.
pub fn planted(e: &DiffOp) -> (Vec<RatFunc>, Vec<RatFunc>) {
    let u: Vec<RatFunc> = (0..e.cols()).map(|k| rat(&[1, k as i64, 2], &[0, 0, -1, 1])).collect();
    let v = e.apply(&u).unwrap();
    (u, v)
}

pub fn schwarzschild(l: u32) -> RWParams {
    RWParams::new(q(1), q(1), l).unwrap()
}

/// `Δ = f1/r²`.
pub fn simple_source(p: &RWParams) -> RWDelta {
    RWDelta::new(p.f1(), RatFunc::zero())
}
