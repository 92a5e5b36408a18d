//! `blockeq`: command-line access to the blocked-equivalence engine.
//!
//! Every subcommand reads JSON files (`-` for stdin) and writes one JSON
//! document. Exit codes: 0 yes or plain result, 1 no, 2 unknown, 64 usage
//! error, 65 malformed input.

mod input;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blockeq_core::equiv::{decide_blocked_equivalence, decide_with_unit, EquivalenceGroup, Side};
use blockeq_core::intmat::{cokernel, smith_normal_form};
use blockeq_core::quiver::{build_kweb, decide_kweb_isomorphism, decide_rep_isomorphism};
use blockeq_core::sft::{bowen_franks, decide_flow_equivalence, parry_sullivan};
use blockeq_core::{Error, ExecMode, FgAbelianGroup, SearchBudget, Verdict, VerdictStatus};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use input::{read_blocked, read_json, read_vector, Schema};

const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

#[derive(Parser)]
#[command(name = "blockeq", version, about = "Exact decisions for poset-blocked integer matrices")]
struct Cli {
    #[command(flatten)]
    budget: BudgetArgs,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, global = true, default_value_t = 8)]
    max_depth: usize,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_nodes: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Run searches on a single thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Gl,
    Sl,
    Unit,
}

impl From<GroupArg> for EquivalenceGroup {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::Gl => EquivalenceGroup::Gl,
            GroupArg::Sl => EquivalenceGroup::Sl,
            GroupArg::Unit => EquivalenceGroup::UnitRestricted,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    /// U A V = B
    Uav,
    /// U A V^-1 = B
    UavInv,
}

#[derive(Subcommand)]
enum Command {
    /// Smith normal form U A V = S.
    Snf { matrix: PathBuf },
    /// Cokernel Z^m / im A.
    Cokernel { matrix: PathBuf },
    /// Bowen-Franks group cok(I - A) of an SFT.
    Bf { sft: PathBuf },
    /// Parry-Sullivan number det(I - A) of an SFT.
    Ps { sft: PathBuf },
    /// Flow equivalence of two SFTs.
    FlowEq { a: PathBuf, b: PathBuf },
    /// Blocked equivalence of two blocked matrices (a plain matrix is one block).
    BlockedEq {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = GroupArg::Gl)]
        group: GroupArg,
        #[arg(long, value_enum, default_value_t = SideArg::Uav)]
        side: SideArg,
    },
    /// Blocked equivalence U A V^-1 = B with the unit-vector condition on x, y.
    UnitEq {
        a: PathBuf,
        b: PathBuf,
        x: PathBuf,
        y: PathBuf,
        #[arg(long, value_enum, default_value_t = GroupArg::Unit)]
        group: GroupArg,
    },
    /// K-web of a blocked matrix, or isomorphism of the K-webs of two.
    Kweb { b: PathBuf, other: Option<PathBuf> },
    /// Isomorphism of two representations of a quiver.
    RepIso { quiver: PathBuf, rep1: PathBuf, rep2: PathBuf },
    /// Checks a file against an input schema.
    Validate {
        #[arg(long, value_enum)]
        schema: Schema,
        file: PathBuf,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn data(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_DATA, message: format!("{}: {e}", path.display()) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::InvalidBudget(_)) { EXIT_USAGE } else { EXIT_DATA };
        Failure { code, message: e.to_string() }
    }
}

/// Result document and the exit code it implies.
struct Outcome {
    json: String,
    code: u8,
}

impl Outcome {
    fn plain(value: &impl Serialize) -> Self {
        Outcome { json: serde_json::to_string(value).expect("results serialize"), code: 0 }
    }

    fn verdict(v: &Verdict) -> Self {
        let code = match v.status {
            VerdictStatus::Yes => 0,
            VerdictStatus::No => 1,
            VerdictStatus::Unknown => 2,
        };
        Outcome { json: serde_json::to_string(v).expect("verdicts serialize"), code }
    }
}

#[derive(Serialize)]
struct CokernelOut {
    cokernel: FgAbelianGroup,
}

#[derive(Serialize)]
struct BowenFranksOut {
    bowen_franks: FgAbelianGroup,
}

#[derive(Serialize)]
struct ParrySullivanOut {
    parry_sullivan: String,
}

#[derive(Serialize)]
struct ValidateOut {
    schema: String,
    valid: bool,
}

#[derive(Serialize)]
struct SnfOut {
    #[serde(flatten)]
    decomposition: blockeq_core::intmat::SmithDecomposition,
    diagonal: Vec<String>,
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let b = &cli.budget;
    let exec = if b.sequential { ExecMode::Sequential } else { ExecMode::Parallel };
    let budget = SearchBudget::new(b.max_depth, b.max_nodes, b.seed)?.with_exec(exec);
    Ok(match &cli.command {
        Command::Snf { matrix } => {
            let a = read_json(matrix)?;
            let decomposition = smith_normal_form(&a);
            let diagonal = decomposition.diagonal().iter().map(ToString::to_string).collect();
            Outcome::plain(&SnfOut { decomposition, diagonal })
        }
        Command::Cokernel { matrix } => Outcome::plain(&CokernelOut { cokernel: cokernel(&read_json(matrix)?) }),
        Command::Bf { sft } => Outcome::plain(&BowenFranksOut { bowen_franks: bowen_franks(&read_json(sft)?) }),
        Command::Ps { sft } => {
            Outcome::plain(&ParrySullivanOut { parry_sullivan: parry_sullivan(&read_json(sft)?).to_string() })
        }
        Command::FlowEq { a, b } => {
            Outcome::verdict(&decide_flow_equivalence(&read_json(a)?, &read_json(b)?, &budget)?)
        }
        Command::BlockedEq { a, b, group, side } => {
            let side = match side {
                SideArg::Uav => Side::Uav,
                SideArg::UavInv => Side::UavInverse,
            };
            let v = decide_blocked_equivalence(&read_blocked(a)?, &read_blocked(b)?, (*group).into(), side, &budget)?;
            Outcome::verdict(&v)
        }
        Command::UnitEq { a, b, x, y, group } => {
            let v = decide_with_unit(
                &read_blocked(a)?,
                &read_blocked(b)?,
                &read_vector(x)?,
                &read_vector(y)?,
                (*group).into(),
                &budget,
            )?;
            Outcome::verdict(&v)
        }
        Command::Kweb { b, other } => {
            let w = build_kweb(&read_blocked(b)?)?;
            match other {
                None => Outcome::plain(&w.document()),
                Some(path) => {
                    Outcome::verdict(&decide_kweb_isomorphism(&w, &build_kweb(&read_blocked(path)?)?, &budget)?)
                }
            }
        }
        Command::RepIso { quiver, rep1, rep2 } => {
            let q = read_json(quiver)?;
            Outcome::verdict(&decide_rep_isomorphism(&read_json(rep1)?, &read_json(rep2)?, &q, &budget)?)
        }
        Command::Validate { schema, file } => {
            schema.check(file)?;
            Outcome::plain(&ValidateOut { schema: schema.name(), valid: true })
        }
    })
}

fn emit(path: Option<&Path>, json: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, format!("{json}\n")),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{json}")?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let Format::Json = cli.format;
    match execute(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(cli.output.as_deref(), &outcome.json) {
                eprintln!("blockeq: cannot write output: {e}");
                return ExitCode::from(EXIT_DATA);
            }
            ExitCode::from(outcome.code)
        }
        Err(f) => {
            eprintln!("blockeq: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
