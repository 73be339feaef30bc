pub mod arith;
pub mod diffop;
pub mod error;
pub mod laurent;
pub mod ratsolve;
pub mod reggewheeler;
pub mod triangular;

pub use arith::{AffineSolutionSet, GaussianRational, Matrix, Poly, RatFunc, RatFuncMatrix};
pub use diffop::{DiffOp, MonicForm, PowerAction};
pub use error::{Error, Result};
pub use laurent::{ExpansionPoint, LaurentExpansion, Order};
pub use ratsolve::{CharMatrix, MultiplierPair, Multipliers, SolutionSpace};
pub use triangular::{Decision, EquivalenceWitness, ReductionPair, TriangularSystem};
pub use reggewheeler::{RWDelta, RWOutcome, RWParams};
