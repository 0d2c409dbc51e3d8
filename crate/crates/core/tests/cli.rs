use std::path::Path;
use std::process::{Command, Output};

use qdblab::cli::model::{matrix_to_json, ModelSpec, SCHEMA};
use qdblab::cli::{ModelFile, SWEEP_HEADER};
use qdblab::matlin::{c, ComplexMatrix};
use qdblab::states::HamiltonianSpec;

fn qdblab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdblab")).args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_model(dir: &Path, name: &str, model: ModelSpec) -> String {
    let f = ModelFile { schema: SCHEMA, model, beta_f: None, metadata: Default::default() };
    let p = dir.join(name);
    f.save(&p).unwrap();
    p.to_str().unwrap().to_string()
}

fn csv_column(text: &str, name: &str) -> Vec<String> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(k).unwrap().to_string()).collect()
}

#[test]
fn non_psd_kossakowski_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let mut k = ComplexMatrix::identity(3);
    k[(0, 0)] = c(-0.1, 0.0);
    let path = write_model(
        tmp.path(),
        "bad.json",
        ModelSpec::Lindblad {
            hamiltonian: matrix_to_json(HamiltonianSpec::qubit(1.0).matrix()),
            kossakowski: Some(matrix_to_json(&k)),
            basis: None,
            jumps: None,
        },
    );
    let out = qdblab(&["check", &path]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("KossakowskiNotPSD"), "{}", stderr(&out));
}

#[test]
fn non_trace_preserving_kraus_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let path = write_model(
        tmp.path(),
        "kraus.json",
        ModelSpec::Kraus {
            hamiltonian: matrix_to_json(HamiltonianSpec::qubit(1.0).matrix()),
            ops: vec![matrix_to_json(&ComplexMatrix::identity(2).scale_re(0.9))],
        },
    );
    let out = qdblab(&["check", &path]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("NotTracePreserving"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let garbage = tmp.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(qdblab(&["check", garbage.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(qdblab(&["check", tmp.path().join("missing.json").to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(qdblab(&["example", "b", "--s-grid", "0,2"]).status.code(), Some(2));
    assert_eq!(qdblab(&["example", "b", "--tol-qdb", "0"]).status.code(), Some(2));
    assert_eq!(qdblab(&["frobnicate"]).status.code(), Some(2));
    let out = qdblab(&["sweep", "b", "--param", "nu", "--range", "0:1:3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("UnknownParameter"));
}

#[test]
fn example_verdicts() {
    let b: serde_json::Value = serde_json::from_slice(&qdblab(&["example", "b"]).stdout).unwrap();
    assert_eq!(b["classification"], "FPT");
    assert_eq!(b["qdb1"]["pass"], true);
    assert_eq!(b["qdb2"]["pass"], true);
    assert!(b["qfr_max_deviation"].as_f64().unwrap() < 1e-9);

    let c: serde_json::Value = serde_json::from_slice(&qdblab(&["example", "c"]).stdout).unwrap();
    assert_eq!(c["classification"], "FPT");
    assert_eq!(c["qdb1"]["pass"], false);
    assert_eq!(c["qdb2"]["pass"], false);
    assert!(c["qfr_max_deviation"].as_f64().unwrap() < 1e-9);
}

#[test]
fn constant_q_gives_unit_correction() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qdblab(&["example", "a", "--constant-q", "--out", tmp.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(tmp.path().join("exchange.csv")).unwrap();
    let f = csv_column(&csv, "F_tau");
    assert_eq!(f.len(), 40);
    for x in f {
        assert!((x.parse::<f64>().unwrap() - 1.0).abs() < 1e-12, "{x}");
    }
    let verdict: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("verdict.json")).unwrap()).unwrap();
    assert_eq!(verdict["classification"], "FPT");
}

#[test]
fn empty_sweep_is_header_only() {
    let out = qdblab(&["sweep", "c", "--param", "nu", "--range", "0.5:1.5:0"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), format!("{SWEEP_HEADER}\n"));
}

#[test]
fn nu_sweep_crosses_threshold_at_qdb_point() {
    let p = qdblab::examples::ExampleCParams::default_instance(1.0, 1.0).unwrap();
    let alpha = p.alpha;
    let range = format!("{}:{}:5", alpha - 0.02, alpha + 0.02);
    let out = qdblab(&["sweep", "c", "--param", "nu", "--range", &range, "--tau-grid", "0.5,5"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let pass = csv_column(&text, "qdb1_pass");
    assert_eq!(pass, ["false", "false", "true", "false", "false"]);
    let res: Vec<f64> = csv_column(&text, "qdb1_max_residual").iter().map(|x| x.parse().unwrap()).collect();
    assert!(res[0] > res[1] && res[1] > res[2] && res[2] < res[3] && res[3] < res[4], "{res:?}");
}

#[test]
fn beta_i_sweep_tracks_prediction() {
    let out = qdblab(&["sweep", "b", "--param", "beta_i", "--range", "0:3:4", "--tau-grid", "0.1,1,10"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let r = csv_column(&text, "R_last");
    for (k, x) in r.iter().enumerate() {
        let beta_i = k as f64;
        let expect = (beta_i - 1.0_f64).exp();
        assert!((x.parse::<f64>().unwrap() / expect - 1.0).abs() < 1e-9, "beta_i {beta_i}: {x}");
    }
}

#[test]
fn sweep_is_deterministic_and_written_to_out() {
    let tmp = tempfile::tempdir().unwrap();
    let args = |d: &str| {
        vec!["sweep".to_string(), "a".into(), "--param".into(), "omega".into(), "--range".into(), "0.5:2:4".into(), "--out".into(), d.into()]
    };
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for d in [&a, &b] {
        let argv = args(d.to_str().unwrap());
        let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
        assert!(qdblab(&argv).status.success());
    }
    let x = std::fs::read(a.join("sweep.csv")).unwrap();
    assert_eq!(x, std::fs::read(b.join("sweep.csv")).unwrap());
    assert_eq!(String::from_utf8(x).unwrap().lines().count(), 5);
}

#[test]
fn json_format() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qdblab(&["example", "b", "--format", "json", "--tau-grid", "log:0.1:10:5", "--out", tmp.path().to_str().unwrap()]);
    assert!(out.status.success());
    let rows: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("exchange.json")).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 5);
    assert!(rows[0].get("F_tau").is_some());
}

#[test]
fn kraus_model_checks_as_channel() {
    let tmp = tempfile::tempdir().unwrap();
    let p = qdblab::examples::ExampleAParams::with_constant_q(1.0, 1.0).unwrap();
    let f = ModelFile::from_channel(&p.channel(1.0).unwrap(), &p.hamiltonian()).with_beta_f(1.0);
    let path = tmp.path().join("a.json");
    f.save(&path).unwrap();
    let out = qdblab(&["check", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["classification"], "FPT");
    assert!(v["qfr_max_deviation"].as_f64().unwrap() < 1e-9);
}
