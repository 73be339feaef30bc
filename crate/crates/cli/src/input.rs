//! Input files. Everything is UTF-8 JSON with exact numbers written as strings.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use rode_core::reggewheeler::{Env, ExampleFixture, OperatorExpr};
use rode_core::{DiffOp, GaussianRational, MultiplierPair, Multipliers, RWDelta, RWParams, RatFunc, TriangularSystem};

use crate::Failure;

fn default_search() -> bool {
    true
}

/// An operator together with whatever is known about its local behaviour.
///
/// A bare operator file (`{rows, cols, coeffs}`) reads as a system with no
/// multipliers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub operator: DiffOp,
    #[serde(default)]
    pub multipliers: Vec<MultiplierPair>,
    #[serde(default = "default_search")]
    pub search: bool,
    /// Schwarzschild parameters, when the system came from `rw-system`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<RWParams>,
}

impl SystemFile {
    pub fn bare(operator: DiffOp) -> Self {
        SystemFile { operator, multipliers: Vec::new(), search: true, params: None }
    }

    pub fn multiplier_set(&self) -> Multipliers {
        Multipliers { pairs: self.multipliers.clone(), search: self.search }
    }
}

/// `e0∘δ = Δ + ε∘e1` as read from a `reduce --upper` file.
#[derive(Clone, Debug, Deserialize)]
pub struct UpperFile {
    pub e0: DiffOp,
    pub e1: DiffOp,
    #[serde(rename = "Delta")]
    pub delta: DiffOp,
    #[serde(default)]
    pub multipliers: Vec<MultiplierPair>,
    #[serde(default = "default_search")]
    pub search: bool,
}

/// What a `--delta` file turned out to be.
#[derive(Clone, Debug)]
pub enum DeltaInput {
    Fixture(Box<ExampleFixture>),
    Expr(OperatorExpr),
    Exact(RWDelta),
}

impl DeltaInput {
    pub fn source(&self, env: &Env) -> Result<RWDelta, Failure> {
        Ok(match self {
            DeltaInput::Fixture(fx) => fx.delta.as_source(env)?,
            DeltaInput::Expr(e) => e.as_source(env)?,
            DeltaInput::Exact(d) => d.clone(),
        })
    }

    pub fn fixture(&self) -> Option<&ExampleFixture> {
        match self {
            DeltaInput::Fixture(fx) => Some(fx),
            _ => None,
        }
    }
}

pub fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn decode<T: serde::de::DeserializeOwned>(v: Value, path: &Path) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn has(v: &Value, key: &str) -> bool {
    v.get(key).is_some()
}

pub fn load_system(path: &Path) -> Result<SystemFile, Failure> {
    let v = read_json(path)?;
    if has(&v, "operator") {
        decode(v, path)
    } else {
        decode(v, path).map(SystemFile::bare)
    }
}

/// A list of pairs, a single pair, or `{pairs, search}`.
pub fn load_multipliers(path: &Path) -> Result<Multipliers, Failure> {
    let v = read_json(path)?;
    if v.is_array() {
        decode(v, path).map(Multipliers::new)
    } else if has(&v, "pairs") {
        decode(v, path)
    } else {
        decode(v, path).map(|p: MultiplierPair| Multipliers::new(vec![p]))
    }
}

pub fn load_delta(path: &Path) -> Result<DeltaInput, Failure> {
    let v = read_json(path)?;
    if has(&v, "Delta0") {
        decode(v, path).map(DeltaInput::Exact)
    } else if has(&v, "Delta") {
        decode(v, path).map(|fx| DeltaInput::Fixture(Box::new(fx)))
    } else if has(&v, "dr") {
        decode(v, path).map(DeltaInput::Expr)
    } else if has(&v, "coeffs") {
        let op: DiffOp = decode(v, path)?;
        Ok(DeltaInput::Exact(RWDelta::from_diffop(&op)?))
    } else {
        Err(Failure::Input(format!("{}: not a fixture, operator expression or operator", path.display())))
    }
}

/// A right-hand side: a list of rational functions, or any `--delta` file
/// (read as the source `(Δ0, Δ1)`; expressions need `params`).
pub fn load_rhs(path: &Path, params: Option<&RWParams>) -> Result<Vec<RatFunc>, Failure> {
    let v = read_json(path)?;
    if v.is_array() {
        return decode(v, path);
    }
    let delta = load_delta(path)?;
    if let DeltaInput::Exact(d) = &delta {
        return Ok(d.source());
    }
    let p = params.ok_or_else(|| {
        Failure::Input(format!("{}: expressions need Schwarzschild parameters in the system file", path.display()))
    })?;
    Ok(delta.source(&p.env())?.source())
}

pub fn load_upper(path: &Path) -> Result<(TriangularSystem, Multipliers), Failure> {
    let f: UpperFile = decode(read_json(path)?, path)?;
    let sys = TriangularSystem::new(f.e0, f.e1, f.delta)?;
    Ok((sys, Multipliers { pairs: f.multipliers, search: f.search }))
}

/// Reads `0`, `inf`, a Gaussian rational, or `2M` (and `kM` generally).
pub fn parse_point(s: &str, m: Option<&GaussianRational>) -> Result<rode_core::ExpansionPoint, Failure> {
    let s = s.trim();
    if let Some(k) = s.strip_suffix('M') {
        let m = m.ok_or_else(|| Failure::Input(format!("point {s} needs --M or parameters in the system file")))?;
        let k: GaussianRational = if k.is_empty() { GaussianRational::from_i64(1) } else { k.parse()? };
        return Ok(rode_core::ExpansionPoint::Finite(&k * m));
    }
    Ok(s.parse()?)
}
