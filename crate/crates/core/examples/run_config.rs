//! Runs a suite from a config file (default: the qubit demo) and prints the
//! verdicts without writing a document.

use tpslab::cli::{execute, ExperimentConfig, Suite};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => ExperimentConfig::from_toml(&std::fs::read_to_string(path)?)?,
        None => ExperimentConfig::reference(Suite::QubitDemo, 11),
    };
    let report = execute(&cfg)?;
    for c in &report.checks {
        println!("{} {:<45} {:.3e}", c.verdict, c.name, c.measured);
    }
    std::process::exit(report.exit_code());
}
