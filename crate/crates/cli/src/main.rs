//! Batch driver for the strong-field atom experiments.
//!
//! Exit status: 0 on success, 1 when a computation fails, 2 on usage errors.

mod config;
mod error;
mod eval;
mod scans;
mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use config::{resolve, Common};
use error::CliError;
use scans::ScanOutput;

#[derive(Debug, Parser)]
#[command(name = "hfatom", version, about = "Strong-field atom limit experiments")]
struct Cli {
    /// Largest few-body grid dimension (overrides HFATOM_MAX_DIM)
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Field ladder of e^B_{Z,N}(y⊥) against its limit
    LimitScan {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: scans::LimitArgs,
    },
    /// Hyper-strong minimizer against the closed form, and the large-Z trend
    MeanfieldScan {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: scans::MeanfieldArgs,
    },
    /// Lower bound, numeric energy and comparison-model upper bound
    BoundsReport {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: scans::BoundsArgs,
    },
    /// Circle averages of E_{Z,1}(x⊥) against centre values
    SuperharmonicCheck {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: scans::SuperharmonicArgs,
    },
    /// Exploratory ionization energies ê(Z,N−1) − ê(Z,N)
    UnbindingScan {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: scans::UnbindingArgs,
    },
    /// Evaluate one operation and print JSON
    Eval {
        #[command(subcommand)]
        op: eval::EvalOp,
    },
}

fn scan<P, A>(
    name: &str,
    common: &Common,
    args: &A,
    run: fn(&P) -> Result<ScanOutput, CliError>,
) -> Result<(), CliError>
where
    P: DeserializeOwned + Serialize,
    A: Serialize,
{
    let (params, config) = resolve::<P, A>(name, common, args)?;
    let out = run(&params)?;
    table::emit(&out.table, &config, out.summary)?;
    if out.failed_rows > 0 {
        return Err(CliError::Failed(format!(
            "{} row(s) failed; see the status column",
            out.failed_rows
        )));
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    if let Some(d) = cli.max_dim {
        // Set before any worker thread exists.
        std::env::set_var(hfatom::fewbody::MAX_DIMENSION_ENV, d.to_string());
    }
    match &cli.command {
        Command::LimitScan { common, args } => scan("limit-scan", common, args, scans::limit_scan),
        Command::MeanfieldScan { common, args } => scan("meanfield-scan", common, args, scans::meanfield_scan),
        Command::BoundsReport { common, args } => scan("bounds-report", common, args, scans::bounds_report),
        Command::SuperharmonicCheck { common, args } => {
            scan("superharmonic-check", common, args, scans::superharmonic_check)
        }
        Command::UnbindingScan { common, args } => scan("unbinding-scan", common, args, scans::unbinding_scan),
        Command::Eval { op } => {
            let v = eval::run(op)?;
            let text = serde_json::to_string_pretty(&v).expect("JSON values always serialize");
            writeln!(std::io::stdout(), "{text}")?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hfatom: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
