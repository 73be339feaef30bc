use std::fmt;

use serde::{Deserialize, Serialize};

use rode_core::reggewheeler::RWSolution;
use rode_core::{
    CharMatrix, Decision, ExpansionPoint, GaussianRational, Matrix, MultiplierPair, Poly, RWDelta, RWOutcome,
    RWParams, RatFunc, SolutionSpace,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentsReport {
    pub point: ExpansionPoint,
    pub multipliers: MultiplierPair,
    pub char_matrix: CharMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub rhs: Vec<RatFunc>,
    pub solution: SolutionSpace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReduceReport {
    pub decision: Decision,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RwReport {
    pub s0: GaussianRational,
    pub s1: GaussianRational,
    pub params: RWParams,
    #[serde(rename = "Delta")]
    pub delta: RWDelta,
    pub outcome: RWOutcome,
    /// Whether the solution equals the fixture's reference δ, when it has one
    /// that can be evaluated at these parameters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_matches: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amended_reference_matches: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Report {
    Exponents(ExponentsReport),
    Solve(SolveReport),
    Reduce(ReduceReport),
    Rw(Box<RwReport>),
}

impl Report {
    /// Nonexistence is a verdict, reported with its own exit code.
    pub fn exit_code(&self) -> i32 {
        let negative = match self {
            Report::Exponents(_) => false,
            Report::Solve(s) => !s.solution.is_solvable(),
            Report::Reduce(r) => matches!(r.decision, Decision::Irreducible { .. }),
            Report::Rw(r) => !r.outcome.is_reducible(),
        };
        if negative {
            3
        } else {
            0
        }
    }
}

fn poly_matrix_in_n(m: &Matrix<Poly>) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let row: Vec<String> = m.row(i).iter().map(|p| p.display_in("n").to_string()).collect();
            format!("[{}]", row.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn vector(v: &[RatFunc]) -> String {
    let items: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", items.join(", "))
}

fn exponents(v: &[i64]) -> String {
    format!("{v:?}")
}

fn write_char_matrix(f: &mut fmt::Formatter<'_>, cm: &CharMatrix) -> fmt::Result {
    writeln!(f, "E_n = {}", poly_matrix_in_n(&cm.entries))?;
    writeln!(f, "det E_n = {}", cm.det.display_in("n"))?;
    writeln!(f, "integer exponents: {}", exponents(&cm.exponents))
}

fn write_space(f: &mut fmt::Formatter<'_>, s: &SolutionSpace) -> fmt::Result {
    for a in &s.analysis {
        writeln!(f, "at {}: exponents {}, bound {}", a.point, exponents(&a.char_matrix.exponents), a.solution_bound)?;
    }
    writeln!(f, "ansatz exponents: {} ..= {}", s.lower, s.upper)?;
    writeln!(f, "R = {}", s.r.get(0, 0))?;
    match &s.particular {
        Some(p) => writeln!(f, "particular solution: {}", vector(p))?,
        None => writeln!(f, "no rational solution")?,
    }
    if s.is_solvable() {
        if s.kernel_basis.is_empty() {
            writeln!(f, "kernel: {{0}}")?;
        } else {
            writeln!(f, "kernel basis:")?;
            for k in &s.kernel_basis {
                writeln!(f, "  {}", vector(k))?;
            }
        }
    }
    if let Some(y) = &s.witness {
        let items: Vec<String> = y.iter().map(ToString::to_string).collect();
        writeln!(f, "certificate: y^T A = 0, y^T b = 1 with y = [{}]", items.join(", "))?;
    }
    Ok(())
}

fn write_rw_solution(f: &mut fmt::Formatter<'_>, s: &RWSolution, indent: &str) -> fmt::Result {
    writeln!(f, "{indent}delta0 = {}, delta1 = {}", s.delta0, s.delta1)?;
    writeln!(f, "{indent}delta = {}", s.delta)?;
    writeln!(f, "{indent}epsilon = {}", s.epsilon)
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Report::Exponents(r) => {
                writeln!(f, "point: {}", r.point)?;
                writeln!(f, "S = {}", r.multipliers.s)?;
                writeln!(f, "T = {}", r.multipliers.t)?;
                write_char_matrix(f, &r.char_matrix)
            }
            Report::Solve(r) => {
                writeln!(f, "rhs: {}", vector(&r.rhs))?;
                write_space(f, &r.solution)
            }
            Report::Reduce(r) => match &r.decision {
                Decision::Reducible { pair, unique, kernel, solution } => {
                    write_space(f, solution)?;
                    writeln!(f, "verdict: reducible{}", if *unique { " (unique)" } else { "" })?;
                    writeln!(f, "delta = {}", pair.delta)?;
                    writeln!(f, "epsilon = {}", pair.epsilon)?;
                    for k in kernel {
                        writeln!(f, "homogeneous: delta = {}, epsilon = {}", k.delta, k.epsilon)?;
                    }
                    Ok(())
                }
                Decision::Irreducible { certificate, solution } => {
                    write_space(f, solution)?;
                    writeln!(f, "verdict: no rational reduction")?;
                    writeln!(f, "remainder of -Delta modulo e1: {}", certificate.remainder)
                }
            },
            Report::Rw(r) => {
                let p = &r.params;
                write!(f, "s0 = {}, s1 = {}, M = {}, omega = {}, l = {}", r.s0, r.s1, p.m, p.omega, p.l)?;
                match &p.a_l {
                    Some(a) => writeln!(f, ", A_l = {a}")?,
                    None => writeln!(f)?,
                }
                writeln!(f, "Delta0 = {}, Delta1 = {}", r.delta.delta0, r.delta.delta1)?;
                let b = r.outcome.bounds();
                for (pt, ex) in &b.exponents {
                    writeln!(f, "exponents at {}: {}", pt_name(*pt), exponents(ex))?;
                }
                writeln!(f, "bounds: lower {}, upper {}, m = {}, R = {}", b.lower, b.upper, b.m, b.r)?;
                match &r.outcome {
                    RWOutcome::Reducible { solution, unique, kernel, .. } => {
                        writeln!(f, "verdict: reducible{}", if *unique { " (unique)" } else { "" })?;
                        write_rw_solution(f, solution, "")?;
                        for k in kernel {
                            writeln!(f, "homogeneous solution:")?;
                            write_rw_solution(f, k, "  ")?;
                        }
                    }
                    RWOutcome::Irreducible { remainder, witness, .. } => {
                        writeln!(f, "verdict: no rational solution")?;
                        writeln!(f, "remainder of -Delta modulo D_s1: {remainder}")?;
                        if let Some(y) = witness {
                            writeln!(f, "inconsistent ansatz, certificate of length {}", y.len())?;
                        }
                    }
                }
                if let Some(m) = r.reference_matches {
                    writeln!(f, "matches reference delta: {m}")?;
                }
                if let Some(m) = r.amended_reference_matches {
                    writeln!(f, "matches amended reference delta: {m}")?;
                }
                Ok(())
            }
        }
    }
}

fn pt_name(p: rode_core::reggewheeler::RWPoint) -> &'static str {
    use rode_core::reggewheeler::RWPoint;
    match p {
        RWPoint::Origin => "r = 0",
        RWPoint::Horizon => "r = 2M",
        RWPoint::Infinity => "r = inf",
    }
}
