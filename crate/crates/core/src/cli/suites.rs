//! The four experiment suites. Each returns its checks plus any tables and
//! time series for the result document.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::galilean::angular::{clebsch_gordan_matrix, doubled};
use crate::galilean::{
    apply_galilean, check_momentum_spin_locality, GalileanElement, MomentumGrid, MomentumSpinState,
    ParticleSpec,
};
use crate::linalg::{entanglement_entropy, matmul_adjoint_left, Bipartition, CMatrix, StateVector};
use crate::qubits::{
    ab_tps, bell_basis, bell_csco, computational_basis, csco_check, pq_tps, rotation_rep,
    sampled_rotation_rep,
};
use crate::random;
use crate::scattering::split::{build_split_model, verify_split_factorization, SplitHamiltonian};
use crate::scattering::{run as run_scattering, Trajectory};
use crate::tps::{entanglement_in_tps, is_local_unitary, is_symmetry_invariant};

use super::config::{GalileanParams, QubitDemoParams, ScatterParams, SplitParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">")]
    Above,
}

/// A measured quantity compared against a bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: &'static str,
    pub measured: f64,
    pub relation: Relation,
    pub bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn below(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(
            name.into(),
            measured,
            Relation::Below,
            bound,
            measured < bound,
        )
    }

    pub fn above(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(
            name.into(),
            measured,
            Relation::Above,
            bound,
            measured > bound,
        )
    }

    fn new(name: String, measured: f64, relation: Relation, bound: f64, pass: bool) -> Self {
        Self {
            name,
            verdict: if pass { "PASS" } else { "FAIL" },
            measured,
            relation,
            bound,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == "PASS"
    }
}

/// Named columns of equal length.
pub type Series = BTreeMap<String, Vec<f64>>;

#[derive(Debug, Default)]
pub struct SuiteOutcome {
    pub checks: Vec<Check>,
    pub tables: BTreeMap<String, Value>,
    pub series: Option<Series>,
    pub warnings: Vec<String>,
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

#[derive(Serialize)]
struct EntropyRow {
    state: String,
    ab: f64,
    pq: f64,
}

pub fn qubit_demo(p: &QubitDemoParams) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (ab, pq) = (ab_tps(), pq_tps());
    let cut = Bipartition::first(1);

    csco_check(&bell_basis(), &bell_csco())?;

    let comp_names = ["|00>", "|01>", "|10>", "|11>"];
    let bell_names = ["|Phi+>", "|Phi->", "|Psi+>", "|Psi->"];
    let mut rows = Vec::new();
    let mut table = |names: [&str; 4], states: Vec<StateVector>| -> Result<Vec<(f64, f64)>> {
        let mut values = Vec::new();
        for (name, s) in names.iter().zip(&states) {
            let e_ab = entanglement_in_tps(s, &ab, &cut)?;
            let e_pq = entanglement_in_tps(s, &pq, &cut)?;
            rows.push(EntropyRow {
                state: name.to_string(),
                ab: e_ab,
                pq: e_pq,
            });
            values.push((e_ab, e_pq));
        }
        Ok(values)
    };
    let comp = table(comp_names, computational_basis())?;
    let bell = table(bell_names, bell_basis())?;
    out.tables.insert(
        "entropy".into(),
        serde_json::to_value(&rows).expect("rows serialize"),
    );

    let tol = p.entropy_tolerance;
    out.checks.push(Check::below(
        "computational-states-ab-separable",
        max_of(comp.iter().map(|v| v.0)),
        tol,
    ));
    out.checks.push(
        Check::below(
            "computational-states-pq-maximally-entangled",
            max_of(comp.iter().map(|v| (v.1 - 1.0).abs())),
            tol,
        )
        .with_note("largest |S_PQ - 1| over the computational basis"),
    );
    out.checks.push(
        Check::below(
            "bell-states-ab-maximally-entangled",
            max_of(bell.iter().map(|v| (v.0 - 1.0).abs())),
            tol,
        )
        .with_note("largest |S_AB - 1| over the Bell basis"),
    );
    out.checks.push(Check::below(
        "bell-states-pq-separable",
        max_of(bell.iter().map(|v| v.1)),
        tol,
    ));

    let generators = is_symmetry_invariant(&ab, &sampled_rotation_rep(), &cut)?;
    out.checks.push(Check::below(
        "rotation-generators-sum-local-ab",
        max_of(
            generators
                .generators
                .iter()
                .map(|v| if v.pass { v.residual } else { f64::INFINITY }),
        ),
        p.invariance_tolerance,
    ));

    let probes: Vec<StateVector> = (0..p.random_states)
        .map(|_| random::state(&mut rng, &[2, 2]))
        .collect();
    let before: Vec<f64> = probes
        .iter()
        .map(|s| entanglement_entropy(s, &cut))
        .collect::<Result<_>>()?;
    let zero = StateVector::basis(vec![2, 2], 0)?;
    let pq_zero = entanglement_in_tps(&zero, &pq, &cut)?;
    let (mut worst_local, mut worst_change, mut pq_change): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut rotations = Vec::new();
    for _ in 0..p.rotations {
        let axis = random::unit_axis(&mut rng);
        let angle = rng.random_range(0.0..std::f64::consts::TAU);
        let u = rotation_rep(axis, angle)?;
        let locality = is_local_unitary(&u, &ab, &cut)?;
        worst_local = worst_local.max(if locality.is_local() {
            locality.residual()
        } else {
            f64::INFINITY
        });
        for (s, e0) in probes.iter().zip(&before) {
            let e = entanglement_entropy(&s.apply_unitary(&u)?, &cut)?;
            worst_change = worst_change.max((e - e0).abs());
        }
        let dpq = (entanglement_in_tps(&zero.apply_unitary(&u)?, &pq, &cut)? - pq_zero).abs();
        pq_change = pq_change.max(dpq);
        rotations.push(json!({"axis": axis, "angle": angle, "pq_entropy_change_of_00": dpq}));
    }
    out.tables
        .insert("rotations".into(), Value::Array(rotations));
    out.checks.push(Check::below(
        "rotations-local-ab",
        worst_local,
        p.invariance_tolerance,
    ));
    out.checks.push(Check::below(
        "rotations-preserve-ab-entropy",
        worst_change,
        p.invariance_tolerance,
    ));
    out.checks.push(
        Check::above(
            "rotations-change-pq-entropy-of-00",
            pq_change,
            p.pq_sensitivity,
        )
        .with_note("largest PQ entropy change of |00> over the sampled rotations"),
    );
    Ok(out)
}

pub fn galilean_check(p: &GalileanParams) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let spec = ParticleSpec::new(p.mass, p.internal_energy, p.spin)?;
    let grid = MomentumGrid::new(p.points_per_axis, p.spacing)?;
    let dims = [grid.len(), spec.spin_dim()];
    let probes: Vec<MomentumSpinState> = (0..p.probes)
        .map(|_| MomentumSpinState::from_state(grid, spec.two_s(), &random::state(&mut rng, &dims)))
        .collect::<Result<_>>()?;
    let elements: Vec<GalileanElement> = (0..p.elements)
        .map(|k| {
            GalileanElement::random_compatible(&mut rng, &grid, p.mass, p.max_shift)
                .labeled(format!("g{k}"))
        })
        .collect();

    let cut = Bipartition::first(1);
    let before: Vec<f64> = probes
        .iter()
        .map(|s| entanglement_entropy(&s.to_state()?, &cut))
        .collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    let mut per_element = Vec::with_capacity(elements.len());
    for g in &elements {
        let mut change: f64 = 0.0;
        for (s, e0) in probes.iter().zip(&before) {
            let e = entanglement_entropy(&apply_galilean(g, &spec, s)?.to_state()?, &cut)?;
            change = change.max((e - e0).abs());
        }
        worst = worst.max(change);
        per_element.push(json!({
            "label": g.label,
            "time": g.time,
            "translation": g.translation,
            "boost": g.boost,
            "rotation": g.rotation.matrix(),
            "entropy_change": change,
        }));
    }
    out.tables
        .insert("elements".into(), Value::Array(per_element));
    out.checks.push(Check::below(
        "momentum-spin-entropy-invariant",
        worst,
        p.tolerance,
    ));

    if p.materialized > 0 {
        let report =
            check_momentum_spin_locality(&spec, &grid, &elements[..p.materialized], &probes)?;
        let measured = if report.all_local {
            report.worst_residual
        } else {
            f64::INFINITY
        };
        out.checks.push(
            Check::below(
                "materialized-operators-local",
                measured,
                p.tolerance.max(1e-9),
            )
            .with_note(format!(
                "{} of {} operators factor across momentum | spin",
                report.elements.iter().filter(|v| v.local).count(),
                report.elements.len()
            )),
        );
        out.tables.insert(
            "locality".into(),
            serde_json::to_value(&report).expect("report serializes"),
        );
    }

    let two_max = doubled(p.max_j).unwrap_or(0).max(0) as u32;
    let mut cg = 0.0f64;
    for j1 in 0..=two_max {
        for j2 in 0..=two_max {
            let m: CMatrix = clebsch_gordan_matrix(j1, j2);
            let d = m.nrows();
            let dev = matmul_adjoint_left(&m, &m) - CMatrix::identity(d, d);
            cg = cg.max(dev.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    out.checks
        .push(Check::below("clebsch-gordan-orthogonal", cg, 1e-12));
    Ok(out)
}

pub fn split_check(p: &SplitParams) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (mut worst_fact, mut worst_entropy, mut worst_sum): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut rows = Vec::new();
    let mut record = |name: String, sh: &SplitHamiltonian, rng: &mut ChaCha8Rng| -> Result<()> {
        let r = verify_split_factorization(sh, &p.times, p.probes, rng)?;
        worst_fact = worst_fact.max(max_of(r.factorization_residuals.iter().copied()));
        worst_entropy = worst_entropy.max(r.max_entropy_deviation);
        worst_sum = worst_sum.max(r.sum_local_residual);
        rows.push(json!({"hamiltonian": name, "dims": sh.dims(), "report": r}));
        Ok(())
    };
    for &dp in &p.external_dims {
        for &dq in &p.internal_dims {
            let sh = SplitHamiltonian::random(&mut rng, dp, dq);
            record(format!("random {dp}x{dq}"), &sh, &mut rng)?;
        }
    }
    if let Some(model) = &p.model {
        let sh = build_split_model(model)?;
        record("two-body model".into(), &sh, &mut rng)?;
    }
    out.tables.insert("hamiltonians".into(), Value::Array(rows));
    out.checks.push(Check::below(
        "hamiltonians-sum-local",
        worst_sum,
        p.tolerance,
    ));
    out.checks.push(Check::below(
        "evolution-factorizes",
        worst_fact,
        p.tolerance,
    ));
    out.checks.push(Check::below(
        "ie-entropy-constant",
        worst_entropy,
        p.tolerance,
    ));
    Ok(out)
}

pub fn scatter(p: &ScatterParams) -> Result<SuiteOutcome> {
    let traj = run_scattering(&p.model)?;
    Ok(scatter_outcome(p, &traj))
}

/// Checks and series of a finished scattering run.
pub fn scatter_outcome(p: &ScatterParams, traj: &Trajectory) -> SuiteOutcome {
    let mut out = SuiteOutcome::default();
    let s = &traj.summary;
    let c = &p.checks;
    out.checks
        .push(Check::below("norm-drift", s.norm_drift, c.max_norm_drift));
    out.checks.push(Check::below(
        "total-momentum-drift",
        s.momentum_drift,
        c.max_momentum_drift,
    ));
    out.checks.push(Check::below(
        "initial-interparticle-entropy",
        s.initial_interparticle_entropy,
        c.max_initial_entropy,
    ));
    out.checks.push(Check::above(
        "peak-interparticle-entropy",
        s.peak_interparticle_entropy,
        c.min_peak_entropy,
    ));
    out.checks.push(Check::above(
        "final-interparticle-entropy",
        s.final_interparticle_entropy,
        c.min_final_entropy,
    ));
    match s.ie_drift {
        Some(d) => out
            .checks
            .push(Check::below("ie-entropy-drift", d, c.max_ie_drift)),
        None => out
            .warnings
            .push("unequal masses: the internal/external entropy is not tracked".into()),
    }
    if s.boundary_warning {
        out.warnings.push(format!(
            "boundary contact: tail mass near the box edge reached {:e}",
            s.max_boundary_mass
        ));
    }
    out.tables.insert(
        "summary".into(),
        serde_json::to_value(s).expect("summary serializes"),
    );

    let mut series = Series::new();
    let mut col = |name: &str, f: &dyn Fn(&crate::scattering::Sample) -> f64| {
        series.insert(name.to_string(), traj.samples.iter().map(f).collect());
    };
    col("t", &|x| x.t);
    col("interparticle_entropy", &|x| x.interparticle_entropy);
    if s.ie_drift.is_some() {
        col("ie_entropy", &|x| x.ie_entropy.unwrap_or(f64::NAN));
    }
    col("norm", &|x| x.norm);
    col("total_momentum", &|x| x.total_momentum);
    col("energy", &|x| x.energy);
    col("boundary_mass", &|x| x.boundary_mass);
    out.series = Some(series);
    out
}
