//! Command-line front end for `rode-core`.

pub mod input;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rode_core::ratsolve::{char_matrix, search_multipliers, solve_rational};
use rode_core::reggewheeler::{rw_decoupling_system, rw_delta_operator, rw_multiplier_set, rw_reduce, RWOutcome};
use rode_core::triangular::decide_reduction;
use rode_core::{GaussianRational, MultiplierPair, RWParams};

use input::{load_delta, load_multipliers, load_rhs, load_system, load_upper, parse_point, SystemFile};
pub use report::{ExponentsReport, ReduceReport, Report, RwReport, SolveReport};

/// Why a run did not produce a report.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Core(#[from] rode_core::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Core(rode_core::Error::Internal(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "rode", version, about = "Exact rational solutions of linear ODE systems")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// More log output (RODE_LOG takes precedence).
    #[arg(long, short, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Schwarzschild {
    #[arg(long = "M", alias = "m", default_value = "1")]
    pub m: GaussianRational,
    #[arg(long, default_value = "1")]
    pub omega: GaussianRational,
    #[arg(long, default_value_t = 2)]
    pub l: u32,
    #[arg(long = "Al", alias = "A_l")]
    pub a_l: Option<GaussianRational>,
}

impl Schwarzschild {
    pub fn params(&self) -> Result<RWParams, Failure> {
        let p = RWParams::new(self.m.clone(), self.omega.clone(), self.l)?;
        Ok(match &self.a_l {
            Some(a) => p.with_a_l(a.clone()),
            None => p,
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Characteristic matrix and integer exponents at a point.
    Exponents {
        #[arg(long)]
        system: PathBuf,
        /// `0`, `2M`, `inf`, or any Gaussian rational.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Value of M for `--point 2M` when the system file has none.
        #[arg(long = "M", alias = "m")]
        m: Option<GaussianRational>,
        /// Search diagonal multipliers when the file supplies none.
        #[arg(long)]
        search: bool,
    },
    /// All rational solutions of `e[u] = v`.
    Solve {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long)]
        multipliers: Option<PathBuf>,
    },
    /// Decide whether a triangular system `[[e0, Delta], [0, e1]]` decouples.
    Reduce {
        #[arg(long)]
        upper: PathBuf,
    },
    /// Regge-Wheeler reduction `D_s0∘δ = Δ + ε∘D_s1`.
    Rw {
        /// Defaults to the spins of a fixture file.
        #[arg(long, allow_hyphen_values = true)]
        s0: Option<GaussianRational>,
        #[arg(long, allow_hyphen_values = true)]
        s1: Option<GaussianRational>,
        #[command(flatten)]
        params: Schwarzschild,
        #[arg(long)]
        delta: PathBuf,
    },
    /// Write the Regge-Wheeler decoupling system with its tabulated multipliers.
    RwSystem {
        #[arg(long, allow_hyphen_values = true)]
        s0: GaussianRational,
        #[arg(long, allow_hyphen_values = true)]
        s1: GaussianRational,
        #[command(flatten)]
        params: Schwarzschild,
    },
}

/// Output of one invocation.
#[derive(Debug)]
pub enum Output {
    Report(Box<Report>),
    System(Box<SystemFile>),
}

impl Output {
    pub fn exit_code(&self) -> i32 {
        match self {
            Output::Report(r) => r.exit_code(),
            Output::System(_) => 0,
        }
    }

    pub fn render(&self, format: Format) -> String {
        let json = match self {
            Output::Report(r) => serde_json::to_string_pretty(r),
            Output::System(s) => serde_json::to_string_pretty(s),
        }
        .expect("reports serialize");
        match (self, format) {
            (Output::Report(r), Format::Text) => format!("{r}\n```json\n{json}\n```\n"),
            _ => format!("{json}\n"),
        }
    }
}

fn exponents(system: &SystemFile, point: &str, m: Option<&GaussianRational>, search: bool) -> Result<Report, Failure> {
    let m = m.or(system.params.as_ref().map(|p| &p.m));
    let point = parse_point(point, m)?;
    let e = &system.operator;
    let supplied = system.multipliers.iter().find(|p| p.point == point).cloned();
    let (pair, cm) = match supplied {
        Some(pair) => {
            let cm = char_matrix(e, &pair)?;
            (pair, cm)
        }
        None if search => search_multipliers(e, &point)?,
        None => {
            if !e.is_square() {
                return Err(Failure::Input("default multipliers need a square operator".into()));
            }
            let pair = MultiplierPair::identity(point.clone(), e.rows());
            let cm = char_matrix(e, &pair)?;
            (pair, cm)
        }
    };
    Ok(Report::Exponents(ExponentsReport { point, multipliers: pair, char_matrix: cm }))
}

fn rw(
    s0: Option<GaussianRational>,
    s1: Option<GaussianRational>,
    params: &Schwarzschild,
    delta: &std::path::Path,
) -> Result<Report, Failure> {
    let p = params.params()?;
    let input = load_delta(delta)?;
    let fixture = input.fixture();
    let spin = |given: Option<GaussianRational>, from: fn(&rode_core::reggewheeler::ExampleFixture) -> i64, name| {
        given
            .or_else(|| fixture.map(|fx| GaussianRational::from_i64(from(fx))))
            .ok_or_else(|| Failure::Input(format!("--{name} is required unless the delta file is a fixture")))
    };
    let s0 = spin(s0, |fx| fx.s0, "s0")?;
    let s1 = spin(s1, |fx| fx.s1, "s1")?;
    let source = input.source(&p.env())?;
    let outcome = rw_reduce(&source, &s0, &s1, &p)?;

    let matches = |expr: Option<&rode_core::reggewheeler::OperatorExpr>| -> Option<bool> {
        let (d0, d1) = expr?.as_delta_pair(&p.env()).ok()?;
        Some(match &outcome {
            RWOutcome::Reducible { solution, unique: true, .. } => solution.delta == rw_delta_operator(&d0, &d1),
            _ => false,
        })
    };
    let reference_matches = fixture.and_then(|fx| matches(fx.reference_delta.as_ref()));
    let amended_reference_matches = fixture.and_then(|fx| matches(fx.reference_delta_amended.as_ref()));
    Ok(Report::Rw(Box::new(RwReport {
        s0,
        s1,
        params: p,
        delta: source,
        outcome,
        reference_matches,
        amended_reference_matches,
    })))
}

pub fn run(command: &Command) -> Result<Output, Failure> {
    let report = match command {
        Command::Exponents { system, point, m, search } => exponents(&load_system(system)?, point, m.as_ref(), *search)?,
        Command::Solve { system, rhs, multipliers } => {
            let sys = load_system(system)?;
            let v = load_rhs(rhs, sys.params.as_ref())?;
            let mut mult = sys.multiplier_set();
            if let Some(path) = multipliers {
                let extra = load_multipliers(path)?;
                mult.pairs.extend(extra.pairs);
                mult.search &= extra.search;
            }
            let solution = solve_rational(&sys.operator, &v, &mult)?;
            Report::Solve(SolveReport { rhs: v, solution })
        }
        Command::Reduce { upper } => {
            let (sys, mult) = load_upper(upper)?;
            Report::Reduce(ReduceReport { decision: decide_reduction(&sys, &mult)? })
        }
        Command::Rw { s0, s1, params, delta } => rw(s0.clone(), s1.clone(), params, delta)?,
        Command::RwSystem { s0, s1, params } => {
            let p = params.params()?;
            let operator = rw_decoupling_system(s0, s1, &p)?;
            let m = rw_multiplier_set(s0, s1, &p)?;
            return Ok(Output::System(Box::new(SystemFile {
                operator,
                multipliers: m.pairs,
                search: m.search,
                params: Some(p),
            })));
        }
    };
    Ok(Output::Report(Box::new(report)))
}
