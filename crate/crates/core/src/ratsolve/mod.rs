//! Rational solutions of `e[u] = v`: characteristic matrices from
//! multipliers, order bounds at `0` and `∞`, pole localization, a universal
//! multiplier, and the final finite ansatz.

mod charmatrix;
mod multipliers;
mod solve;

pub use charmatrix::{char_matrix, leading_bound, trailing_bound, CharMatrix};
pub use multipliers::{complete_target, matrix_order, resolve_multipliers, search_multipliers, MultiplierPair};
pub use solve::{
    pole_candidates, solve_laurent_ansatz, solve_rational, universal_multiplier, AnsatzSolution, Multipliers,
    PointAnalysis, SolutionSpace, UniversalMultiplier,
};
