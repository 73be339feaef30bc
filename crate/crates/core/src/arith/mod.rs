//! Exact arithmetic over Q(i): scalars, polynomials, rational functions,
//! matrices and linear systems.

mod field;
mod gaussian;
mod linsolve;
mod matrix;
mod poly;
mod ratfunc;
mod roots;

pub use field::Field;
pub use gaussian::{rat_arith, ArithOp, GaussianRational};
pub use linsolve::{linsolve, AffineSolutionSet};
pub use matrix::{poly_det, ConstMatrix, Matrix, RatFuncMatrix};
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use roots::{gaussian_roots, integer_roots};
