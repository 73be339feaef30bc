use std::path::Path;

use serde::{Deserialize, Serialize};

use super::expr::{parse_expr, Env};
use super::{RWDelta, RWParams};
use crate::arith::{GaussianRational, RatFunc};
use crate::error::{Error, Result};

/// A first order scalar operator `dr·∂_r + id`, with both coefficients given
/// as expressions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorExpr {
    pub dr: String,
    pub id: String,
}

impl OperatorExpr {
    /// The coefficients `(dr, id)`.
    pub fn eval(&self, env: &Env) -> Result<(RatFunc, RatFunc)> {
        Ok((parse_expr(&self.dr, env)?, parse_expr(&self.id, env)?))
    }

    /// Reads the operator as a source `Δ`.
    pub fn as_source(&self, env: &Env) -> Result<RWDelta> {
        let (dr, id) = self.eval(env)?;
        Ok(RWDelta::from_coefficients(&dr, &id))
    }

    /// Reads the operator as `δ = δ1 r∂_r + δ0` and returns `(δ0, δ1)`.
    pub fn as_delta_pair(&self, env: &Env) -> Result<(RatFunc, RatFunc)> {
        let (dr, id) = self.eval(env)?;
        Ok((id, &dr * &RatFunc::r_pow(-1)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Unique,
    None,
}

/// A worked reduction problem: spins, source, and the expected outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleFixture {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub s0: i64,
    pub s1: i64,
    #[serde(rename = "Delta")]
    pub delta: OperatorExpr,
    pub expect: Expectation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_delta: Option<OperatorExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_epsilon: Option<OperatorExpr>,
    /// A corrected transcription of `reference_delta`, see `note`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_delta_amended: Option<OperatorExpr>,
    /// An expression in `B` for the value of `A` under which the source and
    /// the amended reference agree.
    #[serde(rename = "A_l_consistent", default, skip_serializing_if = "Option::is_none")]
    pub a_l_consistent: Option<String>,
}

impl ExampleFixture {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn spins(&self) -> (GaussianRational, GaussianRational) {
        (GaussianRational::from_i64(self.s0), GaussianRational::from_i64(self.s1))
    }

    pub fn uses_a_l(&self) -> bool {
        let mentions = |e: &OperatorExpr| [&e.dr, &e.id].iter().any(|s| mentions_symbol(s, "A"));
        mentions(&self.delta) || self.reference_delta.as_ref().is_some_and(mentions)
    }

    pub fn source(&self, p: &RWParams) -> Result<RWDelta> {
        self.delta.as_source(&p.env())
    }

    /// The consistent value of `A` at the given `l`, if the fixture has one.
    pub fn consistent_a_l(&self, p: &RWParams) -> Result<Option<GaussianRational>> {
        let Some(src) = &self.a_l_consistent else { return Ok(None) };
        let v = parse_expr(src, &p.env())?;
        v.as_constant().map(Some).ok_or_else(|| Error::Parse(format!("A_l_consistent is not constant: {v}")))
    }
}

fn mentions_symbol(src: &str, sym: &str) -> bool {
    src.split(|c: char| !(c.is_alphanumeric() || c == '_')).any(|w| w == sym)
}
