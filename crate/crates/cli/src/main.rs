use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use fairdiv::formats::{Report, Verdict};
use fairdiv::oracles::DEFAULT_NODE_BUDGET;

mod commands;

#[derive(Parser)]
#[command(name = "fairdiv")]
#[command(about = "Leximin allocation, Pareto/envy checks and hardness-reduction harnesses")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Leximin-optimal allocation of a max-atomic instance
    SolveLeximin {
        instance: PathBuf,
        /// Decide whether some allocation is strictly leximin-better than this vector
        #[arg(
            long = "K",
            alias = "k",
            value_delimiter = ',',
            allow_hyphen_values = true
        )]
        k: Option<Vec<String>>,
    },
    /// Is the document's allocation Pareto-optimal (additive)
    CheckPareto {
        instance: PathBuf,
        #[arg(long, env = "FAIRDIV_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Is the document's allocation envy-free
    CheckEnvy { instance: PathBuf },
    /// Search for an envy-free Pareto-optimal allocation (additive)
    FindEef {
        instance: PathBuf,
        #[arg(long, env = "FAIRDIV_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Encode a DIMACS 3CNF formula as a Pareto-optimality instance
    ReducePo {
        formula: PathBuf,
        /// Write the instance document here and print a report instead
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a forall-exists DIMACS formula as an EEF-existence instance
    ReduceEef {
        formula: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a reduction end to end against the exhaustive oracles
    VerifyReduction {
        which: Which,
        formula: PathBuf,
        #[arg(long, env = "FAIRDIV_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Try every choice setting of each X∀-allocation, not only the default
        #[arg(long)]
        all_flags: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Po,
    Eef,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let name = command_name(&cli.command);
    let start = Instant::now();
    let mut report = match run(cli.command) {
        Ok(Some(report)) => report,
        Ok(None) => return ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fairdiv {name}: {e:#}");
            let mut report = Report::new(name, Verdict::Error);
            report.error = Some(format!("{e:#}"));
            report
        }
    };
    report.stats.elapsed_ms = start.elapsed().as_millis() as u64;
    println!("{}", report.to_json());
    ExitCode::from(report.exit_code() as u8)
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::SolveLeximin { .. } => "solve-leximin",
        Command::CheckPareto { .. } => "check-pareto",
        Command::CheckEnvy { .. } => "check-envy",
        Command::FindEef { .. } => "find-eef",
        Command::ReducePo { .. } => "reduce-po",
        Command::ReduceEef { .. } => "reduce-eef",
        Command::VerifyReduction { .. } => "verify-reduction",
    }
}

/// `None` when the command already wrote its output (a bare instance document).
fn run(command: Command) -> anyhow::Result<Option<Report>> {
    use commands::*;
    Ok(match command {
        Command::SolveLeximin { instance, k } => Some(solve_leximin(&instance, k.as_deref())?),
        Command::CheckPareto { instance, budget } => Some(check_pareto(&instance, budget)?),
        Command::CheckEnvy { instance } => Some(check_envy(&instance)?),
        Command::FindEef { instance, budget } => Some(find_eef(&instance, budget)?),
        Command::ReducePo { formula, out } => reduce_po(&formula, out.as_deref())?,
        Command::ReduceEef { formula, out } => reduce_eef(&formula, out.as_deref())?,
        Command::VerifyReduction {
            which: Which::Po,
            formula,
            budget,
            ..
        } => Some(verify_po(&formula, budget)?),
        Command::VerifyReduction {
            which: Which::Eef,
            formula,
            budget,
            all_flags,
        } => Some(verify_eef(&formula, budget, all_flags)?),
    })
}
