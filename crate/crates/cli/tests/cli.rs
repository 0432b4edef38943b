use std::path::Path;
use std::process::{Command, Output};

fn dtc(args: &[&str], workers: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dtc"));
    cmd.args(args).env_remove("DTC_WORKERS");
    if let Some(w) = workers {
        cmd.env("DTC_WORKERS", w);
    }
    cmd.output().expect("binary runs")
}

fn write_spec(dir: &Path, text: &str) -> String {
    let path = dir.join("spec.json");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn schema_violation_exits_2_with_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), r#"{"model": {"n_qubits": 4, "epsilon": "big"}}"#);
    let o = dtc(&["run", &spec], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("model.epsilon"), "{}", stderr(&o));

    let spec = write_spec(dir.path(), r#"{"model": {"n_qubits": 4}, "analyses": ["sweep"]}"#);
    let o = dtc(&["run", &spec], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sweep"));
}

#[test]
fn unknown_preset_exits_2_and_lists_presets() {
    let o = dtc(&["preset", "fig7"], None);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    for name in ["echo", "fig2-dtc", "fig3-sweep", "s1-neel", "s4-tomography"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn capability_violation_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let spec = write_spec(
        dir.path(),
        r#"{"model": {"n_qubits": 6, "coherent_errors": {"kind": "random", "amplitude": 0.1}}, "engine": "fermion"}"#,
    );
    let o = dtc(&["run", &spec, "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    let spec = write_spec(dir.path(), r#"{"model": {"n_qubits": 6}, "engine": "fermion", "noise": {"eta0": 0.01}}"#);
    assert_eq!(dtc(&["run", &spec, "--out", out.to_str().unwrap()], None).status.code(), Some(3));

    let spec = write_spec(dir.path(), r#"{"model": {"n_qubits": 30, "coherent_errors": {"kind": "random", "amplitude": 0.1}}}"#);
    assert_eq!(dtc(&["run", &spec, "--out", out.to_str().unwrap()], None).status.code(), Some(3));
}

#[test]
fn run_writes_artifacts_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let spec = write_spec(
        dir.path(),
        r#"{"seed": 5, "model": {"n_qubits": 6, "epsilon": 0.05, "coherent_errors": {"kind": "random", "amplitude": 0.12}},
            "noise": {"eta0": 0.03, "eta1": 0.02, "depol_rate": 0.005, "shots": 4096, "trajectories": 16},
            "mitigation": {}, "analyses": ["autocorrelator", "spectrum", "variance_h", "decay"]}"#,
    );
    let o = dtc(&["run", &spec, "--out", out.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["panels.csv", "panels.json", "autocorrelator.csv", "spectra.csv", "decay.csv", "summary.json", "manifest.json"] {
        assert!(out.join(f).exists(), "missing {f}");
    }
    let panels = std::fs::read_to_string(out.join("panels.csv")).unwrap();
    assert!(panels.starts_with("step,qubit,value,stage,retained\n"));
    for stage in ["raw", "measurement-corrected", "fully-mitigated"] {
        assert!(panels.contains(stage));
    }
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["root_seed"], 5);
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn outputs_do_not_depend_on_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        r#"{"seed": 2, "model": {"n_qubits": 6, "coherent_errors": {"kind": "random", "amplitude": 0.12}},
            "noise": {"eta0": 0.03, "depol_rate": 0.01, "shots": 2000, "trajectories": 12},
            "analyses": ["autocorrelator", "sweep"], "sweep": {"epsilons": [0.05, 0.3], "realizations": 3}}"#,
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(dtc(&["run", &spec, "--out", a.to_str().unwrap()], Some("1")).status.success());
    assert!(dtc(&["run", &spec, "--out", b.to_str().unwrap()], Some("4")).status.success());
    for f in ["panels.csv", "autocorrelator.csv", "phase_diagram.csv", "manifest.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn preset_print_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = dtc(&["preset", "fig2-thermal", "--print", "--seed", "11"], None);
    assert!(o.status.success());
    let spec = dtc_cli::parse_spec(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    assert_eq!(spec.model.epsilon, 0.5);
    assert_eq!(spec.seed, 11);
    let path = write_spec(dir.path(), std::str::from_utf8(&o.stdout).unwrap());
    let o = dtc(&["run", &path, "--steps", "20", "--out", dir.path().join("o").to_str().unwrap()], None);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn tomo_and_sweep_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t");
    let o = dtc(&["tomo", "--preset", "s4-tomography", "--exact", "--out", out.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(out.join("tomography.csv")).unwrap();
    assert_eq!(csv.lines().count(), 64);
    assert!(!out.join("panels.csv").exists());

    let o = dtc(&["sweep", "--preset", "echo"], None);
    assert_eq!(o.status.code(), Some(2));
}
