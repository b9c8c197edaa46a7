use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tpslab::cli::{self, Format};

#[derive(Parser)]
#[command(
    name = "tpslab",
    version,
    about = "Run tensor-product-structure experiment suites"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suite described by a config file.
    Run {
        config: PathBuf,
        /// Result path; defaults to the config's output.path, else stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Check a config file without running it.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = match args.command {
        Command::Run {
            config,
            output,
            format,
        } => cli::run(&config, output.as_deref(), format).map(|report| {
            for c in &report.checks {
                eprintln!("{} {} ({:e})", c.verdict, c.name, c.measured);
            }
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            report.exit_code()
        }),
        Command::Validate { config } => cli::validate(&config).map(|_| {
            eprintln!("{}: ok", config.display());
            0
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
