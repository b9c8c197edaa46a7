//! Config-driven experiment runner behind the `tpslab` binary.
//!
//! A run reads a TOML [`ExperimentConfig`], executes one suite and writes a
//! result document (JSON, or CSV of the time series). Exit codes: 0 when every
//! check passes, 1 when a check fails, 2 for configuration and I/O errors, 3
//! when a numerical guard trips.

pub mod config;
pub mod suites;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Number, Value};

use crate::error::Error;
use crate::scattering::Diagnostic;

pub use config::{ExperimentConfig, Format, OutputSpec, Suite};
pub use suites::{Check, Relation, Series, SuiteOutcome};

pub const SCHEMA_VERSION: u32 = 1;
pub const LIBRARY_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}", join(.0))]
    Config(Vec<Diagnostic>),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("check {check}: {source}")]
    Suite { check: &'static str, source: Error },
}

fn join(d: &[Diagnostic]) -> String {
    d.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Suite { source, .. } => match source {
                Error::NumericalGuard(_)
                | Error::NotNormalized(_)
                | Error::NotUnitary(_)
                | Error::NotHermitian(_)
                | Error::NotOrthonormal(_) => 3,
                _ => 2,
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Library {
    pub name: &'static str,
    pub version: &'static str,
}

/// The result document.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub library: Library,
    pub suite: Suite,
    pub config: ExperimentConfig,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub tables: std::collections::BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<Series>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    /// JSON with every float written to 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        fix_floats(&mut v);
        let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
        s.push('\n');
        s
    }

    /// The time series as CSV, or the check table when the suite has none.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        match &self.series {
            Some(series) => {
                let names: Vec<&String> = series.keys().collect();
                // time first, remaining columns in name order
                let mut order: Vec<&String> = names.iter().copied().filter(|n| *n == "t").collect();
                order.extend(names.iter().copied().filter(|n| *n != "t"));
                let rows = series.values().map(Vec::len).max().unwrap_or(0);
                s.push_str(
                    &order
                        .iter()
                        .map(|n| n.as_str())
                        .collect::<Vec<_>>()
                        .join(","),
                );
                s.push('\n');
                for r in 0..rows {
                    let line: Vec<String> = order
                        .iter()
                        .map(|n| series[*n].get(r).map_or_else(String::new, |x| float17(*x)))
                        .collect();
                    s.push_str(&line.join(","));
                    s.push('\n');
                }
            }
            None => {
                s.push_str("check,verdict,measured,relation,bound\n");
                for c in &self.checks {
                    let rel = match c.relation {
                        Relation::Below => "<",
                        Relation::Above => ">",
                    };
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{}",
                        c.name,
                        c.verdict,
                        float17(c.measured),
                        rel,
                        float17(c.bound)
                    );
                }
            }
        }
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

/// `x` with 17 significant digits, exact on round trip.
pub fn float17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "Infinity".into()
    } else {
        "-Infinity".into()
    }
}

fn fix_floats(v: &mut Value) {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            if let Some(x) = n.as_f64() {
                *n = float17(x)
                    .parse::<Number>()
                    .expect("finite floats are JSON numbers");
            }
        }
        Value::Array(a) => a.iter_mut().for_each(fix_floats),
        Value::Object(o) => o.values_mut().for_each(fix_floats),
        _ => {}
    }
}

/// Reads and parses a config file.
pub fn load(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    ExperimentConfig::from_toml(&text).map_err(|d| CliError::Config(vec![d]))
}

/// Parses and checks a config file without running it.
pub fn validate(path: &Path) -> Result<ExperimentConfig, CliError> {
    let cfg = load(path)?;
    let diags = cfg.diagnostics();
    if diags.is_empty() {
        Ok(cfg)
    } else {
        Err(CliError::Config(diags))
    }
}

/// Executes the configured suite.
pub fn execute(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let diags = cfg.diagnostics();
    if !diags.is_empty() {
        return Err(CliError::Config(diags));
    }
    let wrap = |check: &'static str| move |source: Error| CliError::Suite { check, source };
    let outcome = match cfg.suite {
        Suite::QubitDemo => suites::qubit_demo(cfg.qubit_demo.as_ref().expect("validated"))
            .map_err(wrap("qubit-demo"))?,
        Suite::GalileanCheck => {
            suites::galilean_check(cfg.galilean_check.as_ref().expect("validated"))
                .map_err(wrap("galilean-check"))?
        }
        Suite::SplitCheck => suites::split_check(cfg.split_check.as_ref().expect("validated"))
            .map_err(wrap("split-check"))?,
        Suite::Scatter => {
            suites::scatter(cfg.scatter.as_ref().expect("validated")).map_err(wrap("scatter"))?
        }
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        library: Library {
            name: env!("CARGO_PKG_NAME"),
            version: LIBRARY_VERSION,
        },
        suite: cfg.suite,
        config: cfg.clone(),
        passed: outcome.checks.iter().all(Check::passed),
        checks: outcome.checks,
        warnings: outcome.warnings,
        tables: outcome.tables,
        series: outcome.series,
    })
}

/// Writes `contents` through a temporary file in the target directory and
/// renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file()
            .set_permissions(std::fs::Permissions::from_mode(0o644))
            .map_err(io)?;
    }
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Runs `config_path` and writes the document to `output` (or the config's
/// output path, or stdout). Returns the report so callers can print verdicts.
pub fn run(
    config_path: &Path,
    output: Option<&Path>,
    format: Option<Format>,
) -> Result<Report, CliError> {
    let cfg = load(config_path)?;
    let report = execute(&cfg)?;
    let format = format.unwrap_or(cfg.output.format);
    let text = report.render(format);
    match output
        .map(Path::to_path_buf)
        .or_else(|| cfg.output.path.clone())
    {
        Some(path) => write_atomic(&path, &text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io {
                    path: "<stdout>".into(),
                    message: e.to_string(),
                })?;
        }
    }
    Ok(report)
}
