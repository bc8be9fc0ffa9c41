//! Command-line front end: `analyze`, `simulate` and `oracle`.
//!
//! Exit codes: 0 synchronizes, 1 does not, 2 input error, 3 internal
//! consistency violation. `simulate` exits 0 on success.

mod parse;
mod report;

pub use parse::{parse_system, ParseError, SystemFile};
pub use report::{
    CrossCheckDocument, OracleDocument, QDocument, ReportDocument, TerminalDocument,
    VerdictDocument, VerdictPair,
};

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::dynamics::{self, DEFAULT_STATE_LIMIT};
use crate::network::{analyze, BasisChoice};
use crate::Error;

pub const EXIT_SYNC: i32 = 0;
pub const EXIT_NOT_SYNC: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ffsync",
    version,
    about = "Synchronization analysis of linear networks over F_p"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide synchronization and consensus and print a JSON report.
    Analyze {
        file: PathBuf,
        /// Source of the W1 basis used to express Q.
        #[arg(long, value_enum, default_value_t = BasisArg::Canonical)]
        basis: BasisArg,
    },
    /// Print a trajectory as a CSV table.
    Simulate {
        file: PathBuf,
        /// Initial state, comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        x0: Vec<String>,
        #[arg(long)]
        steps: usize,
    },
    /// Run the definitional oracles and compare with the criteria.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        state_limit: u64,
        /// Skip state-space enumeration.
        #[arg(long)]
        algebraic_only: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    /// The `basis=` block of the system file.
    Paper,
    Canonical,
}

/// A failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn input(msg: impl ToString) -> Self {
        Self {
            code: EXIT_INPUT,
            msg: msg.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Consistency(_) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            msg: e.to_string(),
        }
    }
}

fn load(path: &Path) -> Result<SystemFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_system(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn sync_code(sync: bool) -> i32 {
    if sync {
        EXIT_SYNC
    } else {
        EXIT_NOT_SYNC
    }
}

/// Report for a parsed file, as printed by `analyze`.
pub fn analyze_document(file: &SystemFile, basis: BasisArg) -> crate::Result<ReportDocument> {
    let choice = match basis {
        BasisArg::Canonical => BasisChoice::Canonical,
        BasisArg::Paper => BasisChoice::Explicit(file.basis.clone().ok_or_else(|| {
            Error::Precondition("--basis paper requires a `basis=` block in the file".into())
        })?),
    };
    Ok(ReportDocument::from(&analyze(&file.system, &choice)?))
}

fn cmd_analyze(path: &Path, basis: BasisArg, out: &mut dyn Write) -> Result<i32, Failure> {
    let file = load(path)?;
    let doc = analyze_document(&file, basis)?;
    let json = serde_json::to_string_pretty(&doc).expect("report serializes");
    writeln!(out, "{json}").map_err(Failure::input)?;
    Ok(sync_code(doc.verdicts.synchronizes))
}

fn parse_x0(tokens: &[String]) -> Result<Vec<u64>, Failure> {
    tokens
        .iter()
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Failure::input(format!("--x0: `{t}` is not a non-negative integer")))
        })
        .collect()
}

fn cmd_simulate(
    path: &Path,
    x0: &[String],
    steps: usize,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let file = load(path)?;
    let sys = &file.system;
    let x0 = parse_x0(x0)?;
    let tr =
        dynamics::simulate(sys, &x0, steps).map_err(|e| Failure::input(format!("--x0: {e}")))?;
    let mut header = vec!["t".to_string()];
    for i in 1..=sys.agents() {
        for k in 1..=sys.agent_dim() {
            header.push(format!("x{i}_{k}"));
        }
    }
    let mut text = header.join(",");
    text.push('\n');
    for (t, x) in tr.states.iter().enumerate() {
        text.push_str(&t.to_string());
        for v in x {
            text.push(',');
            text.push_str(&v.to_string());
        }
        text.push('\n');
    }
    let sync = tr.sync_time.map_or("none".to_string(), |t| t.to_string());
    let cycle = tr.cycle.map_or("cycle=none".to_string(), |c| {
        format!("cycle_start={} period={}", c.start, c.period)
    });
    text.push_str(&format!("# sync_time={sync} {cycle}\n"));
    out.write_all(text.as_bytes()).map_err(Failure::input)?;
    Ok(EXIT_SYNC)
}

fn cmd_oracle(
    path: &Path,
    state_limit: u64,
    algebraic_only: bool,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let file = load(path)?;
    let sys = &file.system;
    let algebraic = VerdictPair {
        sync: dynamics::oracle_sync_algebraic(sys)?,
        consensus: dynamics::oracle_consensus_algebraic(sys)?,
    };
    let (exhaustive, states) = if algebraic_only {
        (None, None)
    } else {
        let sync = dynamics::oracle_sync_exhaustive(sys, state_limit).map_err(|e| match e {
            Error::StateLimit { .. } => {
                Failure::input(format!("{e}; raise --state-limit or pass --algebraic-only"))
            }
            other => other.into(),
        })?;
        let consensus = dynamics::oracle_consensus_exhaustive(sys, state_limit)?;
        let states = (sys.field().modulus()).pow(sys.dim() as u32);
        (Some(VerdictPair { sync, consensus }), Some(states))
    };
    let analysis = VerdictPair {
        sync: sys.check_theorem2()?,
        consensus: sys.check_consensus()?,
    };
    let agree = algebraic == analysis && exhaustive.is_none_or(|e| e == analysis);
    let doc = OracleDocument {
        p: sys.field().modulus(),
        n: sys.agents(),
        m: sys.agent_dim(),
        algebraic,
        exhaustive,
        states,
        analysis,
        agree,
    };
    let json = serde_json::to_string_pretty(&doc).expect("report serializes");
    writeln!(out, "{json}").map_err(Failure::input)?;
    Ok(if agree {
        sync_code(analysis.sync)
    } else {
        EXIT_INTERNAL
    })
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Analyze { file, basis } => cmd_analyze(file, *basis, out),
        Command::Simulate { file, x0, steps } => cmd_simulate(file, x0, *steps, out),
        Command::Oracle {
            file,
            state_limit,
            algebraic_only,
        } => cmd_oracle(file, *state_limit, *algebraic_only, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}
