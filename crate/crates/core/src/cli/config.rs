//! Experiment configuration documents (TOML).

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::scattering::split::SplitModelConfig;
use crate::scattering::{Diagnostic, Potential, PotentialShape, ScatteringConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    QubitDemo,
    GalileanCheck,
    SplitCheck,
    Scatter,
}

impl Suite {
    pub fn key(self) -> &'static str {
        match self {
            Suite::QubitDemo => "qubit-demo",
            Suite::GalileanCheck => "galilean-check",
            Suite::SplitCheck => "split-check",
            Suite::Scatter => "scatter",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitDemoParams {
    pub seed: u64,
    #[serde(default = "defaults::rotations")]
    pub rotations: usize,
    #[serde(default = "defaults::random_states")]
    pub random_states: usize,
    /// Tolerance on the entropy table.
    #[serde(default = "defaults::entropy_tolerance")]
    pub entropy_tolerance: f64,
    /// Tolerance on rotation locality and entropy invariance.
    #[serde(default = "defaults::invariance_tolerance")]
    pub invariance_tolerance: f64,
    /// Smallest PQ entropy change that at least one rotation must produce.
    #[serde(default = "defaults::pq_sensitivity")]
    pub pq_sensitivity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GalileanParams {
    pub seed: u64,
    #[serde(default = "defaults::points_per_axis")]
    pub points_per_axis: usize,
    #[serde(default = "defaults::spacing")]
    pub spacing: f64,
    #[serde(default = "defaults::mass")]
    pub mass: f64,
    #[serde(default)]
    pub internal_energy: f64,
    #[serde(default = "defaults::spin")]
    pub spin: f64,
    /// Elements whose action on the probes is checked.
    #[serde(default = "defaults::elements")]
    pub elements: usize,
    /// Leading elements whose operator is materialized for the locality test.
    #[serde(default = "defaults::materialized")]
    pub materialized: usize,
    #[serde(default = "defaults::probes")]
    pub probes: usize,
    /// Largest boost, in grid points per axis.
    #[serde(default = "defaults::max_shift")]
    pub max_shift: i64,
    #[serde(default = "defaults::entropy_tolerance")]
    pub tolerance: f64,
    /// Largest `j₁, j₂` for the Clebsch-Gordan orthogonality check.
    #[serde(default = "defaults::max_j")]
    pub max_j: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitParams {
    pub seed: u64,
    #[serde(default = "defaults::split_dims")]
    pub external_dims: Vec<usize>,
    #[serde(default = "defaults::split_dims")]
    pub internal_dims: Vec<usize>,
    #[serde(default = "defaults::split_times")]
    pub times: Vec<f64>,
    #[serde(default = "defaults::random_states")]
    pub probes: usize,
    #[serde(default = "defaults::invariance_tolerance")]
    pub tolerance: f64,
    /// Optional physical two-body model checked alongside the random ones.
    pub model: Option<SplitModelConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterChecks {
    #[serde(default = "defaults::max_norm_drift")]
    pub max_norm_drift: f64,
    #[serde(default = "defaults::max_momentum_drift")]
    pub max_momentum_drift: f64,
    #[serde(default = "defaults::max_initial_entropy")]
    pub max_initial_entropy: f64,
    #[serde(default = "defaults::min_peak_entropy")]
    pub min_peak_entropy: f64,
    #[serde(default = "defaults::min_final_entropy")]
    pub min_final_entropy: f64,
    #[serde(default = "defaults::max_ie_drift")]
    pub max_ie_drift: f64,
}

impl Default for ScatterChecks {
    fn default() -> Self {
        Self {
            max_norm_drift: defaults::max_norm_drift(),
            max_momentum_drift: defaults::max_momentum_drift(),
            max_initial_entropy: defaults::max_initial_entropy(),
            min_peak_entropy: defaults::min_peak_entropy(),
            min_final_entropy: defaults::min_final_entropy(),
            max_ie_drift: defaults::max_ie_drift(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterParams {
    pub model: ScatteringConfig,
    #[serde(default)]
    pub checks: ScatterChecks,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: Suite,
    #[serde(default)]
    pub output: OutputSpec,
    pub qubit_demo: Option<QubitDemoParams>,
    pub galilean_check: Option<GalileanParams>,
    pub split_check: Option<SplitParams>,
    pub scatter: Option<ScatterParams>,
}

mod defaults {
    pub fn rotations() -> usize {
        50
    }
    pub fn random_states() -> usize {
        20
    }
    pub fn entropy_tolerance() -> f64 {
        1e-10
    }
    pub fn invariance_tolerance() -> f64 {
        1e-9
    }
    pub fn pq_sensitivity() -> f64 {
        0.01
    }
    pub fn points_per_axis() -> usize {
        8
    }
    pub fn spacing() -> f64 {
        0.5
    }
    pub fn mass() -> f64 {
        2.0
    }
    pub fn spin() -> f64 {
        0.5
    }
    pub fn elements() -> usize {
        100
    }
    pub fn materialized() -> usize {
        10
    }
    pub fn probes() -> usize {
        4
    }
    pub fn max_shift() -> i64 {
        2
    }
    pub fn max_j() -> f64 {
        2.0
    }
    pub fn split_dims() -> Vec<usize> {
        vec![8, 16, 32]
    }
    pub fn split_times() -> Vec<f64> {
        vec![0.1, 1.0, 10.0]
    }
    pub fn max_norm_drift() -> f64 {
        1e-10
    }
    pub fn max_momentum_drift() -> f64 {
        1e-8
    }
    pub fn max_initial_entropy() -> f64 {
        1e-6
    }
    pub fn min_peak_entropy() -> f64 {
        0.1
    }
    pub fn min_final_entropy() -> f64 {
        1e-4
    }
    pub fn max_ie_drift() -> f64 {
        1e-5
    }
}

/// Longest side of the dense matrices a suite may build.
const DENSE_SIDE_CAP: usize = 4096;

impl ExperimentConfig {
    /// Parses a TOML document. Schema violations are reported with their
    /// line and column.
    pub fn from_toml(text: &str) -> std::result::Result<Self, Diagnostic> {
        toml::from_str(text).map_err(|e| {
            let field = match e.span() {
                Some(span) => {
                    let (line, column) = line_column(text, span.start);
                    format!("line {line}, column {column}")
                }
                None => "document".to_string(),
            };
            Diagnostic {
                field,
                message: e.message().trim().to_string(),
            }
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs serialize")
    }

    /// Every violated invariant, located by dotted field path.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut push = |field: String, message: String| out.push(Diagnostic { field, message });
        let table = self.suite.key().replace('-', "_");
        let missing = format!("suite {} needs a [{table}] table", self.suite.key());
        match self.suite {
            Suite::QubitDemo => match &self.qubit_demo {
                None => push(table.clone(), missing.clone()),
                Some(p) => {
                    if p.rotations == 0 {
                        push("qubit_demo.rotations".into(), "must be at least 1".into());
                    }
                    for (name, v) in [
                        ("entropy_tolerance", p.entropy_tolerance),
                        ("invariance_tolerance", p.invariance_tolerance),
                        ("pq_sensitivity", p.pq_sensitivity),
                    ] {
                        if !(v.is_finite() && v > 0.0) {
                            push(
                                format!("qubit_demo.{name}"),
                                format!("must be positive, got {v}"),
                            );
                        }
                    }
                }
            },
            Suite::GalileanCheck => match &self.galilean_check {
                None => push(table.clone(), missing.clone()),
                Some(p) => {
                    let n = p.points_per_axis;
                    if n < 2 || n % 2 != 0 {
                        push(
                            "galilean_check.points_per_axis".into(),
                            format!("must be even and at least 2, got {n}"),
                        );
                    }
                    for (name, v) in [
                        ("spacing", p.spacing),
                        ("mass", p.mass),
                        ("tolerance", p.tolerance),
                    ] {
                        if !(v.is_finite() && v > 0.0) {
                            push(
                                format!("galilean_check.{name}"),
                                format!("must be positive, got {v}"),
                            );
                        }
                    }
                    if !p.internal_energy.is_finite() {
                        push(
                            "galilean_check.internal_energy".into(),
                            "must be finite".into(),
                        );
                    }
                    if !(p.spin >= 0.0 && (2.0 * p.spin).fract() == 0.0) {
                        push(
                            "galilean_check.spin".into(),
                            format!("must be a nonnegative half-integer, got {}", p.spin),
                        );
                    }
                    if !(p.max_j >= 0.0 && (2.0 * p.max_j).fract() == 0.0 && p.max_j <= 10.0) {
                        push(
                            "galilean_check.max_j".into(),
                            format!("must be a half-integer in [0, 10], got {}", p.max_j),
                        );
                    }
                    if p.materialized > p.elements {
                        push(
                            "galilean_check.materialized".into(),
                            format!(
                                "cannot exceed elements ({}), got {}",
                                p.elements, p.materialized
                            ),
                        );
                    }
                    if p.max_shift < 0 {
                        push(
                            "galilean_check.max_shift".into(),
                            "must be nonnegative".into(),
                        );
                    }
                    let dim = n.pow(3) * (2.0 * p.spin.max(0.0) + 1.0) as usize;
                    if p.materialized > 0 && dim > DENSE_SIDE_CAP {
                        push(
                            "galilean_check.points_per_axis".into(),
                            format!("momentum ⊗ spin dimension {dim} exceeds the dense cap {DENSE_SIDE_CAP}"),
                        );
                    }
                }
            },
            Suite::SplitCheck => match &self.split_check {
                None => push(table.clone(), missing.clone()),
                Some(p) => {
                    for (name, dims) in [
                        ("external_dims", &p.external_dims),
                        ("internal_dims", &p.internal_dims),
                    ] {
                        if dims.is_empty() || dims.contains(&0) {
                            push(
                                format!("split_check.{name}"),
                                "must list positive dimensions".into(),
                            );
                        }
                    }
                    let max = |d: &[usize]| d.iter().copied().max().unwrap_or(0);
                    let side = max(&p.external_dims) * max(&p.internal_dims);
                    if side > crate::scattering::split::SPLIT_DENSE_CAP {
                        push(
                            "split_check.internal_dims".into(),
                            format!(
                                "product dimension {side} exceeds the dense cap {}",
                                crate::scattering::split::SPLIT_DENSE_CAP
                            ),
                        );
                    }
                    if p.times.iter().any(|t| !t.is_finite()) {
                        push("split_check.times".into(), "must be finite".into());
                    }
                    if !(p.tolerance.is_finite() && p.tolerance > 0.0) {
                        push(
                            "split_check.tolerance".into(),
                            format!("must be positive, got {}", p.tolerance),
                        );
                    }
                    if let Some(m) = &p.model {
                        let cap = crate::scattering::split::SPLIT_FACTOR_CAP;
                        for (name, d) in [
                            ("external_points", m.external_points),
                            ("internal_points", m.internal_points),
                        ] {
                            if d == 0 || d > cap {
                                push(
                                    format!("split_check.model.{name}"),
                                    format!("must be in 1..={cap}, got {d}"),
                                );
                            }
                        }
                        for (k, mass) in m.masses.iter().enumerate() {
                            if !(mass.is_finite() && *mass > 0.0) {
                                push(
                                    format!("split_check.model.masses[{k}]"),
                                    format!("must be positive, got {mass}"),
                                );
                            }
                        }
                        if !(m.length.is_finite() && m.length > 0.0) {
                            push(
                                "split_check.model.length".into(),
                                format!("must be positive, got {}", m.length),
                            );
                        }
                    }
                }
            },
            Suite::Scatter => match &self.scatter {
                None => push(table.clone(), missing.clone()),
                Some(p) => {
                    for d in p.model.diagnostics() {
                        push(format!("scatter.model.{}", d.field), d.message);
                    }
                    let c = &p.checks;
                    for (name, v) in [
                        ("max_norm_drift", c.max_norm_drift),
                        ("max_momentum_drift", c.max_momentum_drift),
                        ("max_initial_entropy", c.max_initial_entropy),
                        ("max_ie_drift", c.max_ie_drift),
                    ] {
                        if !(v.is_finite() && v > 0.0) {
                            push(
                                format!("scatter.checks.{name}"),
                                format!("must be positive, got {v}"),
                            );
                        }
                    }
                }
            },
        }
        out
    }

    /// Reference configuration of a suite, with the given seed where one is
    /// used.
    pub fn reference(suite: Suite, seed: u64) -> Self {
        let mut cfg = Self {
            suite,
            output: OutputSpec::default(),
            qubit_demo: None,
            galilean_check: None,
            split_check: None,
            scatter: None,
        };
        match suite {
            Suite::QubitDemo => {
                cfg.qubit_demo = Some(QubitDemoParams {
                    seed,
                    rotations: defaults::rotations(),
                    random_states: defaults::random_states(),
                    entropy_tolerance: defaults::entropy_tolerance(),
                    invariance_tolerance: defaults::invariance_tolerance(),
                    pq_sensitivity: defaults::pq_sensitivity(),
                })
            }
            Suite::GalileanCheck => {
                cfg.galilean_check = Some(GalileanParams {
                    seed,
                    points_per_axis: defaults::points_per_axis(),
                    spacing: defaults::spacing(),
                    mass: defaults::mass(),
                    internal_energy: 0.0,
                    spin: defaults::spin(),
                    elements: defaults::elements(),
                    materialized: defaults::materialized(),
                    probes: defaults::probes(),
                    max_shift: defaults::max_shift(),
                    tolerance: defaults::entropy_tolerance(),
                    max_j: defaults::max_j(),
                })
            }
            Suite::SplitCheck => {
                cfg.split_check = Some(SplitParams {
                    seed,
                    external_dims: defaults::split_dims(),
                    internal_dims: defaults::split_dims(),
                    times: defaults::split_times(),
                    probes: defaults::random_states(),
                    tolerance: defaults::invariance_tolerance(),
                    model: Some(SplitModelConfig {
                        masses: [1.0, 2.0],
                        external_points: 16,
                        internal_points: 32,
                        length: 20.0,
                        potential: Potential {
                            shape: PotentialShape::GaussianWell,
                            strength: -2.0,
                            width: 1.0,
                        },
                    }),
                })
            }
            Suite::Scatter => {
                cfg.scatter = Some(ScatterParams {
                    model: ScatteringConfig::reference(),
                    checks: ScatterChecks::default(),
                })
            }
        }
        cfg
    }
}

/// One-based line and column of a byte offset.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}
