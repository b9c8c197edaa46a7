use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_tpslab");

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs")
}

fn tpslab(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn reference_scatter() -> String {
    std::fs::read_to_string(configs().join("scatter_reference.toml")).unwrap()
}

#[test]
fn version_flag() {
    let o = tpslab(&["--version"]);
    assert!(o.status.success());
    assert_eq!(
        String::from_utf8_lossy(&o.stdout).trim(),
        format!("tpslab {}", env!("CARGO_PKG_VERSION"))
    );
}

#[test]
fn shipped_configs_validate() {
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let o = tpslab(&["validate", path.to_str().unwrap()]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}: {}",
            path.display(),
            stderr(&o)
        );
    }
}

#[test]
fn non_power_of_two_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "n100.toml",
        &reference_scatter().replace("sites = 128", "sites = 100"),
    );
    let o = tpslab(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("scatter.model.sites"), "{err}");
}

#[test]
fn overlapping_packets_cite_the_overlap() {
    let dir = tempfile::tempdir().unwrap();
    let text = reference_scatter()
        .replace("center = -12.0", "center = -1.0")
        .replace("center = 12.0", "center = 1.0")
        .replace("t_final = 12.0", "t_final = 1.0");
    let p = write(dir.path(), "overlap.toml", &text);
    let o = tpslab(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("scatter.model.packets: initial packets overlap"),
        "{err}"
    );
}

#[test]
fn parse_errors_report_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "bad.toml",
        "suite = \"scatter\"\n\n[scatter.model]\nsites = 12x\n",
    );
    let o = tpslab(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4, column"), "{}", stderr(&o));

    let p = write(
        dir.path(),
        "unknown.toml",
        "suite = \"qubit-demo\"\n[qubit_demo]\nseed = 1\nrotation = 3\n",
    );
    let o = tpslab(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("line 4, column 1") && err.contains("rotation"),
        "{err}"
    );
}

#[test]
fn missing_suite_table_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "empty.toml", "suite = \"split-check\"\n");
    let o = tpslab(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("split_check"));
    let o = tpslab(&["run", dir.path().join("absent.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn qubit_demo_reports_the_entropy_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.json");
    let o = tpslab(&[
        "run",
        configs().join("qubit_demo.toml").to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["library"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["config"]["qubit_demo"]["seed"], 11);
    let table = doc["tables"]["entropy"].as_array().unwrap();
    assert_eq!(table.len(), 8);
    for row in &table[..4] {
        assert!(row["ab"].as_f64().unwrap().abs() < 1e-12);
    }
    for row in &table[4..] {
        assert!((row["ab"].as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert!(row["pq"].as_f64().unwrap().abs() < 1e-12);
    }
    // every |jk⟩ is an eigenvector of σz⊗σz, a P-local operator, so its PQ
    // entropy vanishes and the reciprocity check cannot pass
    let failing: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["verdict"] == "FAIL")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["computational-states-pq-maximally-entangled"]);
    assert_eq!(doc["passed"], false);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.json");
    tpslab(&[
        "run",
        configs().join("qubit_demo.toml").to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&out).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    let bound = doc["checks"][0]["bound"].to_string();
    assert_eq!(bound, "1.0000000000000000e-10");
    let angle = doc["tables"]["rotations"][0]["angle"].to_string();
    let mantissa = angle.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{angle}");
    let x: f64 = angle.parse().unwrap();
    assert_eq!(
        format!("{x:.16e}").split('e').next(),
        angle.split('e').next()
    );
}

#[test]
fn galilean_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("galilean_check.toml");
    let mut docs = Vec::new();
    for name in ["a.json", "b.json"] {
        let out = dir.path().join(name);
        let o = tpslab(&[
            "run",
            cfg.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        docs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(docs[0], docs[1]);
    let doc: Value = serde_json::from_slice(&docs[0]).unwrap();
    assert_eq!(doc["config"]["galilean_check"]["seed"], 7);
    for v in doc["tables"]["locality"]["elements"].as_array().unwrap() {
        assert_eq!(v["local"], true);
    }
    assert_eq!(doc["tables"]["elements"].as_array().unwrap().len(), 100);
}

#[test]
fn stdout_and_csv_outputs() {
    let cfg = configs().join("qubit_demo.toml");
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(&cfg)
        .unwrap()
        .replace("path = \"qubit_demo.json\"\n", "")
        .replace("format = \"json\"", "format = \"csv\"");
    let p = write(dir.path(), "q.toml", &text);
    let o = tpslab(&["run", p.to_str().unwrap()]);
    let csv = String::from_utf8(o.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("check,verdict,measured,relation,bound"));
    assert_eq!(lines.count(), 8);

    let o = tpslab(&["run", p.to_str().unwrap(), "--format", "json"]);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["suite"], "qubit-demo");
}

#[test]
fn scatter_csv_series_and_guard() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let cfg = configs().join("scatter_barrier_fast.toml");
    let o = tpslab(&[
        "run",
        cfg.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("t,"), "{header}");
    assert!(header.contains("interparticle_entropy") && header.contains("ie_entropy"));
    assert_eq!(csv.lines().count(), 1 + 61);

    // second-order splitting with a coarse step trips the energy guard
    let text = std::fs::read_to_string(&cfg)
        .unwrap()
        .replace("dt = 0.01", "dt = 0.1\norder = 2\nsample_every = 1")
        .replace("[scatter.checks]", "[scatter.checks]\n");
    let p = write(dir.path(), "guard.toml", &text);
    let out = dir.path().join("g.json");
    let o = tpslab(&[
        "run",
        p.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("check scatter: numerical guard"));
    assert!(!out.exists());
}
