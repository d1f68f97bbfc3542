use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use caustica::cli::{self, ExperimentConfig};
use caustica::Error;

#[derive(Parser)]
#[command(name = "caustica", version, about = "Caustics laboratory for 1-D quadratic Lagrangians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config file.
    Run {
        config: PathBuf,
        /// Output directory for the CSV/JSON reports.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Worker threads for scan points (falls back to CAUSTICA_THREADS).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Validate a config file without running it.
    Validate { config: PathBuf },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::Parse(_) | Error::InvalidProfile(_) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            threads,
        } => {
            let threads = threads.or_else(|| {
                std::env::var("CAUSTICA_THREADS")
                    .ok()
                    .and_then(|v| v.parse().ok())
            });
            let config = match ExperimentConfig::from_path(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(exit_code_for(&e));
                }
            };
            match cli::run(&config, &out, threads) {
                Ok(artifacts) => {
                    println!("wrote {}", artifacts.csv_path.display());
                    println!("wrote {}", artifacts.json_path.display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(exit_code_for(&e))
                }
            }
        }
        Command::Validate { config } => match ExperimentConfig::from_path(&config) {
            Ok(_) => {
                println!("ok");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(exit_code_for(&e))
            }
        },
    }
}
