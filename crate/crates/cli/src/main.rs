use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use contractive_cli::run_file;
use contractive_core::gallery::registry;

/// Fixed-point experiments for contractive nonself mappings.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Output directory, overriding `output` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// RNG seed, overriding `seed` in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the gallery mappings and their parameters.
    ListMaps,
}

fn main() -> anyhow::Result<ExitCode> {
    match Cli::parse().command {
        Command::ListMaps => {
            for spec in registry() {
                print!("{spec}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { config, out, seed } => match run_file(&config, out.as_deref(), seed) {
            Ok(outcome) => {
                for f in &outcome.failures {
                    eprintln!("invariant failed: {f}");
                }
                for f in &outcome.files {
                    println!("{}", f.display());
                }
                Ok(if outcome.passed {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                })
            }
            Err(e) => {
                eprintln!("error: {e}");
                Ok(ExitCode::from(2))
            }
        },
    }
}
