//! `quadcoh`: command-line driver. Reports go to stdout as JSON, a short
//! summary goes to stderr.

mod commands;
mod selftest;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quadcoh::quadmap::{FamilyKind, QuadraticMap};
use quadcoh::Error;
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "quadcoh", version, about = "Bockstein-closed quadratic maps over F_2")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Truncation degree for quotient algebras and spectral pages.
    #[arg(long, global = true, default_value_t = 12)]
    pub max_degree: usize,
    /// Largest group order to construct.
    #[arg(long, global = true, default_value_t = 1 << 16)]
    pub group_cap: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Read the quadratic map from this file instead of stdin.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// The quadratic map as inline JSON.
    #[arg(long, global = true, conflicts_with = "input")]
    pub map: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bockstein closedness, 2-power exactness and regularity.
    Check,
    /// Solve β(q) = Lq.
    SolveL,
    /// Dimensions and monomial bases of A*(Q).
    Quotient,
    /// H^p(Q, U) for p up to --max-p.
    Cohomology {
        /// trivial, L, sym:<i>, or a path to {"R": [[...]]}.
        #[arg(long, default_value = "trivial")]
        module: String,
        #[arg(long, default_value_t = 3)]
        max_p: usize,
    },
    /// Build G(Q), verify it and report invariants.
    Group {
        /// Write the multiplication table (`a b ab` per line) here.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Lift a morphism of quadratic maps to a group homomorphism.
    Realize {
        /// JSON with "target" (a map) and bit matrices "f_w", "f_v".
        #[arg(long)]
        morphism: PathBuf,
    },
    /// Betti numbers of G(Q) against the predicted Poincaré series.
    Betti {
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// The pages B_1 and B_2.
    B2 {
        /// `zero` or a path to a JSON list of degree-3 polynomials.
        #[arg(long, default_value = "zero")]
        eta: String,
    },
    /// Classify η in H^3(Q, L).
    Obstruct {
        #[arg(long)]
        eta: String,
    },
    /// Print a standard family member as a quadratic map.
    Family { kind: FamilyKind, size: usize },
    /// Run the invariant battery.
    Selftest {
        /// Random instances per property.
        #[arg(long, default_value_t = 200)]
        instances: usize,
    },
}

/// What a command produced.
pub struct Outcome {
    pub report: Value,
    pub summary: String,
    /// A mathematically negative answer (exit code 1).
    pub negative: bool,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Math(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } | Error::TruncationExceeded { .. } => 3,
        Error::Parse { .. }
        | Error::VariableOutOfRange { .. }
        | Error::DimensionMismatch { .. }
        | Error::NotQuadratic(_)
        | Error::InvalidMap(_)
        | Error::Refused(_) => 2,
        _ => 1,
    }
}

pub fn read_map(opts: &GlobalOpts) -> Result<QuadraticMap, Failure> {
    let text = if let Some(inline) = &opts.map {
        inline.clone()
    } else if let Some(path) = &opts.input {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
    } else {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        buf
    };
    if text.trim().is_empty() {
        return Err(Failure::Usage("no quadratic map given on stdin, --input or --map".into()));
    }
    Ok(QuadraticMap::from_json(&text)?)
}

fn render_text(value: &Value) -> String {
    match value {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}: {v}"))
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Family { kind, size } => commands::family(*kind, *size),
        Command::Selftest { instances } => Ok(selftest::run(opts.seed, *instances)),
        Command::Check => commands::check(&read_map(opts)?),
        Command::SolveL => commands::solve_l(&read_map(opts)?),
        Command::Quotient => commands::quotient(&read_map(opts)?, opts),
        Command::Cohomology { module, max_p } => commands::cohomology(&read_map(opts)?, opts, module, *max_p),
        Command::Group { table } => commands::group(&read_map(opts)?, opts, table.as_deref()),
        Command::Realize { morphism } => commands::realize(&read_map(opts)?, opts, morphism),
        Command::Betti { degree } => commands::betti(&read_map(opts)?, opts, *degree),
        Command::B2 { eta } => commands::b2(&read_map(opts)?, opts, eta),
        Command::Obstruct { eta } => commands::obstruct(&read_map(opts)?, opts, eta),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            match cli.opts.format {
                Format::Json => println!("{}", outcome.report),
                Format::Text => println!("{}", render_text(&outcome.report)),
            }
            eprintln!("{}", outcome.summary);
            ExitCode::from(u8::from(outcome.negative))
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Math(e)) => {
            println!("{}", serde_json::json!({ "error": e.to_string() }));
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
