use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cpindex_cli::{render, render_summary, run_batch, run_path, CliError, Flags, Format, TOL_OVERRIDE_ENV};

#[derive(Parser)]
#[command(name = "cpindex", version, about = "Conjugate points, Maslov and Conley–Zehnder indices of constant symplectic systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one problem file.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Analyze every *.json problem file in a directory.
    Batch {
        dir: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Print the JSON Schema of problem files.
    Schema,
}

#[derive(Args)]
struct Common {
    /// Eigenvalue clustering tolerance.
    #[arg(long)]
    tol_eig: Option<f64>,
    /// Relative singular-value rank tolerance.
    #[arg(long)]
    tol_rank: Option<f64>,
    /// Oracle grid intervals on [0, T].
    #[arg(long)]
    grid: Option<usize>,
    /// Skip the definitional oracle.
    #[arg(long)]
    no_oracle: bool,
    /// Include wall-clock timings (makes reports non-reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Report file for `analyze`; output directory for `batch`.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn flags(&self) -> Flags {
        Flags {
            tol_eig: self.tol_eig,
            tol_rank: self.tol_rank,
            grid: self.grid,
            no_oracle: self.no_oracle,
            timing: self.timing,
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::schema(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let env = std::env::var(TOL_OVERRIDE_ENV).ok();
    match cli.command {
        Command::Schema => {
            print!("{}", cpindex_cli::PROBLEM_SCHEMA);
            Ok(0)
        }
        Command::Analyze { file, common } => {
            let outcome = run_path(&file, &common.flags(), env.as_deref());
            if let Err(e) = &outcome {
                eprintln!("cpindex: {}: {e}", file.display());
            }
            emit(&render(&outcome, common.format), common.out.as_ref())?;
            Ok(cpindex_cli::exit_code(&outcome))
        }
        Command::Batch { dir, common } => {
            let summary = run_batch(&dir, common.out.as_deref(), &common.flags(), env.as_deref(), common.format)?;
            print!("{}", render_summary(&summary, common.format));
            Ok(summary.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("cpindex: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
