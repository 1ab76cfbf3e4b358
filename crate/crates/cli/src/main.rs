//! Batch front end: loads models from JSON files, runs one check or
//! extension, and prints a JSON report on standard output.
//!
//! Exit codes: 0 on success, 1 for malformed input, 2 when a mathematical
//! precondition fails (sure loss, no invariant dominator, zero lower
//! probability of the observation, a failed example replay).

mod commands;
mod error;
mod replay;
mod report;
mod schema;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use imprecise_core::shift::ShiftParams;
use serde_json::Value;

use crate::commands::{Ctx, InvarianceMode, ShiftOp};
use crate::error::CliError;
use crate::report::{Render, Report};

#[derive(Debug, Parser)]
#[command(name = "imprecise", version, about = "Exact coherent lower previsions from the command line")]
struct Cli {
    /// Also render every rational with this many decimal digits.
    #[arg(long, global = true, value_name = "DIGITS")]
    decimal: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Does the assessment avoid sure loss?
    Asl { model: PathBuf },
    /// Is the assessment coherent?
    Coherence { model: PathBuf },
    /// Natural extension of the assessment to a gamble.
    Natex {
        model: PathBuf,
        #[arg(long)]
        gamble: PathBuf,
    },
    /// Extreme points of the credal set.
    Vertices { model: PathBuf },
    /// Weak and strong invariance under a monoid.
    Invariance {
        model: PathBuf,
        #[arg(long)]
        monoid: PathBuf,
        /// Only credal-level weak invariance.
        #[arg(long, conflicts_with = "strong")]
        weak: bool,
        /// Only strong invariance.
        #[arg(long)]
        strong: bool,
    },
    /// Strongly invariant natural extension.
    Invnatex {
        model: PathBuf,
        #[arg(long)]
        monoid: PathBuf,
        #[arg(long)]
        gamble: PathBuf,
    },
    /// Mixture lower prevision up to a depth.
    Mixture {
        model: PathBuf,
        #[arg(long)]
        monoid: PathBuf,
        #[arg(long)]
        gamble: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// Shift-invariant functionals of a sequence gamble.
    Shift {
        gamble: PathBuf,
        #[arg(long, value_enum, default_value = "lnex")]
        op: ShiftOp,
        /// Largest moving-window length.
        #[arg(long, default_value_t = 50)]
        nmax: usize,
        /// Use only this many entries of a truncated sequence.
        #[arg(long)]
        trunc: Option<usize>,
        /// Largest residue modulus.
        #[arg(long, default_value_t = 100)]
        mmax: usize,
    },
    /// Exchangeable models.
    Exchange {
        #[command(subcommand)]
        action: ExchangeCommand,
    },
    /// Choquet integral of a gamble with respect to a set function.
    Choquet {
        set_function: PathBuf,
        #[arg(long)]
        gamble: PathBuf,
    },
    /// Replay a worked example and check its values.
    Examples {
        /// One of the example names, or `all`.
        name: String,
    },
    /// Check that a file is a well-formed input document.
    Validate { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum ExchangeCommand {
    /// Predictive lower prevision after observing a sample.
    Update { scenario: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Asl { .. } => "asl",
            Command::Coherence { .. } => "coherence",
            Command::Natex { .. } => "natex",
            Command::Vertices { .. } => "vertices",
            Command::Invariance { .. } => "invariance",
            Command::Invnatex { .. } => "invnatex",
            Command::Mixture { .. } => "mixture",
            Command::Shift { .. } => "shift",
            Command::Exchange { .. } => "exchange update",
            Command::Choquet { .. } => "choquet",
            Command::Examples { .. } => "examples",
            Command::Validate { .. } => "validate",
        }
    }
}

fn execute(command: &Command, ctx: &mut Ctx) -> Result<Value, CliError> {
    match command {
        Command::Asl { model } => commands::asl(ctx, model),
        Command::Coherence { model } => commands::coherence(ctx, model),
        Command::Natex { model, gamble } => commands::natex(ctx, model, gamble),
        Command::Vertices { model } => commands::vertices(ctx, model),
        Command::Invariance {
            model,
            monoid,
            weak,
            strong,
        } => {
            let mode = match (weak, strong) {
                (true, _) => InvarianceMode::Weak,
                (_, true) => InvarianceMode::Strong,
                _ => InvarianceMode::All,
            };
            commands::invariance(ctx, model, monoid, mode)
        }
        Command::Invnatex { model, monoid, gamble } => commands::invnatex(ctx, model, monoid, gamble),
        Command::Mixture {
            model,
            monoid,
            gamble,
            depth,
        } => commands::mixture(ctx, model, monoid, gamble, *depth),
        Command::Shift {
            gamble,
            op,
            nmax,
            trunc,
            mmax,
        } => {
            let params = ShiftParams {
                n_max: *nmax,
                truncation: *trunc,
                m_max: *mmax,
            };
            commands::shift(ctx, gamble, *op, &params)
        }
        Command::Exchange {
            action: ExchangeCommand::Update { scenario },
        } => commands::exchange_update(ctx, scenario),
        Command::Choquet { set_function, gamble } => commands::choquet(ctx, set_function, gamble),
        Command::Examples { name } => examples(ctx, name),
        Command::Validate { file } => commands::validate(ctx, file),
    }
}

fn examples(ctx: &mut Ctx, name: &str) -> Result<Value, CliError> {
    let checks = replay::run(name)?;
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.ok())
        .map(|c| format!("{}: expected {}, got {}", c.name, c.expected, c.actual))
        .collect();
    if !failed.is_empty() {
        return Err(CliError::Precondition(failed.join("; ")));
    }
    let columns = ["check", "expected", "actual", "ok"].map(String::from).to_vec();
    Ok(ctx.render.table(columns, checks.iter().map(replay::Check::row).collect()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut report = Report::new(cli.command.name());
    let mut ctx = Ctx {
        report: &mut report,
        render: Render { decimal: cli.decimal },
    };
    let code = match execute(&cli.command, &mut ctx) {
        Ok(result) => {
            report.result = Some(result);
            0
        }
        Err(e) => {
            report.exact = false;
            report.diagnostics.push(format!("error: {e}"));
            e.exit_code()
        }
    };
    let text = serde_json::to_string_pretty(&report).expect("reports serialise");
    println!("{text}");
    ExitCode::from(code as u8)
}
