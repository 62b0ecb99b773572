use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use coext::verify::OracleTnorm;
use coext_cli::{run, Command};

/// Build left-continuous t-norms from finite quotients and verify them.
#[derive(Parser)]
#[command(name = "coext", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Check a table against the tomonoid axioms
    Check { spec: PathBuf },
    /// List the filters of a table and the quotient by each
    Filters { spec: PathBuf },
    /// Validate a coextension spec and print its case assignments
    Build { spec: PathBuf },
    /// Evaluate the constructed operation at one point
    Eval { spec: PathBuf, a: f64, b: f64 },
    /// Export operation values over a grid as CSV
    Grid {
        spec: PathBuf,
        #[arg(long, default_value_t = 101)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the axiom and left-continuity checks
    Verify {
        spec: PathBuf,
        #[arg(long, default_value_t = 201)]
        n: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the constructed operation against a reference closed form
    OracleCompare {
        spec: PathBuf,
        #[arg(long)]
        oracle: String,
        #[arg(long, default_value_t = 1001)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the quotient table by sampling the constructed operation
    Recover { spec: PathBuf },
    /// List every tomonoid table on the n-chain
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Commands::Check { spec } => Command::Check { spec },
        Commands::Filters { spec } => Command::Filters { spec },
        Commands::Build { spec } => Command::Build { spec },
        Commands::Eval { spec, a, b } => Command::Eval { spec, a, b },
        Commands::Grid { spec, n, out } => Command::Grid { spec, n, out },
        Commands::Verify { spec, n, tol, out } => Command::Verify { spec, n, tol, out },
        Commands::OracleCompare {
            spec,
            oracle,
            n,
            out,
        } => match OracleTnorm::from_str(&oracle) {
            Ok(oracle) => Command::OracleCompare {
                spec,
                oracle,
                n,
                out,
            },
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        },
        Commands::Recover { spec } => Command::Recover { spec },
        Commands::Enumerate { n, out } => Command::Enumerate { n, out },
    };
    match run(command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprint!("{}", e.message());
            if !e.message().ends_with('\n') {
                eprintln!();
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
