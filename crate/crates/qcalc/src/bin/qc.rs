//! `qc`: dimension checking, unit conversion and natural-unit reduction over
//! plain-text system definition files.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qcalc::cli::{
    check_report, convert_report, eval_report, info_report, iso_report, reduce_system, CliError,
};
use qcalc::SystemDef;

#[derive(Parser)]
#[command(
    name = "qc",
    about = "Exact quantity calculus: check dimensions, convert units, reduce to natural units",
    version
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Show a system's generators, units and constants
    Info { file: PathBuf },
    /// Print the dimension of an expression
    Check { file: PathBuf, expr: String },
    /// Evaluate an expression in coherent units
    Eval { file: PathBuf, expr: String },
    /// Express a quantity as a multiple of a target unit
    Convert {
        file: PathBuf,
        expr: String,
        /// Target unit expression
        #[arg(long)]
        to: String,
    },
    /// Quotient the system so the listed constants become 1
    Reduce {
        file: PathBuf,
        /// Comma-separated constant names to set to 1
        #[arg(long, value_delimiter = ',')]
        kill: Vec<String>,
        /// Write the reduced system file here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether two systems are isomorphic
    Iso { left: PathBuf, right: PathBuf },
}

fn load(path: &PathBuf) -> Result<SystemDef, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    SystemDef::parse(&text).map_err(CliError::from)
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Info { file } => Ok(info_report(&load(&file)?)),
        Command::Check { file, expr } => check_report(&load(&file)?, &expr),
        Command::Eval { file, expr } => eval_report(&load(&file)?, &expr),
        Command::Convert { file, expr, to } => convert_report(&load(&file)?, &expr, &to),
        Command::Reduce { file, kill, out } => {
            let output = reduce_system(&load(&file)?, &kill)?;
            match out {
                Some(path) => {
                    fs::write(&path, &output.system_text).map_err(|e| {
                        CliError::Io(format!("cannot write {}: {e}", path.display()))
                    })?;
                    Ok(format!("{}wrote {}\n", output.report, path.display()))
                }
                None => Ok(format!("{}\n{}", output.report, output.system_text)),
            }
        }
        Command::Iso { left, right } => Ok(iso_report(&load(&left)?, &load(&right)?)),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args.command) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            let colored = std::env::var("QC_COLOR").as_deref() == Ok("1");
            if colored {
                eprintln!("\x1b[31merror:\x1b[0m {err}");
            } else {
                eprintln!("error: {err}");
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
