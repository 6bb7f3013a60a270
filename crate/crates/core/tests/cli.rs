use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn groupquant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groupquant"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("groupquant-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn strip_timing(report: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(report).unwrap();
    v["timing_ms"] = 0.into();
    v
}

#[test]
fn list_names_builtins() {
    let out = groupquant(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let names: Vec<&str> = text.lines().collect();
    assert_eq!(
        names,
        [
            "spin",
            "phase",
            "pedagogy_z4",
            "coherent_d4",
            "coherent_bt24"
        ]
    );
}

#[test]
fn builtins_pass() {
    for name in [
        "spin",
        "phase",
        "pedagogy_z4",
        "coherent_d4",
        "coherent_bt24",
    ] {
        let out = groupquant(&["verify", "--scenario", name]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report["scenario"], name);
        assert!(report["checks"]
            .as_array()
            .unwrap()
            .iter()
            .all(|c| c["passed"] == true));
    }
    let out = groupquant(&["verify", "--scenario", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let reports: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(reports.len(), 5);
}

#[test]
fn spin_and_phase_commands() {
    let out = groupquant(&["spin", "--j", "0.5", "--ax", "0", "--ay", "0", "--az", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["checks"].as_array().unwrap().len() >= 6);

    let out = groupquant(&[
        "spin", "--j", "1.5", "--ax", "-0.3", "--ay", "0.2", "--az", "-1", "--reduce",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    assert_eq!(groupquant(&["phase", "--n", "5"]).status.code(), Some(0));
}

#[test]
fn invalid_input_exits_2() {
    let empty = scratch("empty.json");
    fs::write(&empty, "").unwrap();
    let out = groupquant(&["verify", "--config", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot parse configuration"));

    assert_eq!(
        groupquant(&["verify", "--scenario", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(groupquant(&["verify"]).status.code(), Some(2));
    assert_eq!(groupquant(&["phase", "--n", "1"]).status.code(), Some(2));
    let bad_spin = groupquant(&["spin", "--j", "0.3", "--ax", "0", "--ay", "0", "--az", "1"]);
    assert_eq!(bad_spin.status.code(), Some(2));
    let zero = groupquant(&["spin", "--j", "1", "--ax", "0", "--ay", "0", "--az", "0"]);
    assert_eq!(zero.status.code(), Some(2));
    assert_eq!(groupquant(&["frobnicate"]).status.code(), Some(2));

    let bad_params = scratch("bad_params.json");
    fs::write(
        &bad_params,
        r#"{"scenario": "phase", "params": {"n": "eight"}}"#,
    )
    .unwrap();
    let out = groupquant(&["verify", "--config", bad_params.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_check_exits_1() {
    let config = scratch("strict.json");
    fs::write(
        &config,
        r#"{"scenario": "phase", "params": {"n": 4}, "tolerances": {"mutually-unbiased": -1.0}}"#,
    )
    .unwrap();
    let out = groupquant(&["verify", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let check = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "mutually-unbiased")
        .unwrap();
    assert_eq!(check["passed"], false);
    assert_eq!(
        report["config_echo"]["tolerances"]["mutually-unbiased"],
        -1.0
    );
}

#[test]
fn out_file_and_determinism() {
    let config = scratch("spin.json");
    fs::write(
        &config,
        r#"{"scenario": "spin", "params": {"j": 1, "reduce": true}, "seed": 99}"#,
    )
    .unwrap();
    let first = scratch("first.json");
    let second = scratch("second.json");
    for path in [&first, &second] {
        let out = groupquant(&[
            "verify",
            "--scenario",
            "spin",
            "--config",
            config.to_str().unwrap(),
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let a = fs::read_to_string(&first).unwrap();
    let b = fs::read_to_string(&second).unwrap();
    assert_eq!(strip_timing(&a), strip_timing(&b));
    let report = strip_timing(&a);
    assert_eq!(report["seed"], 99);
    assert_eq!(report["config_echo"]["seed"], 99);
    let keys: Vec<&String> = report.as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 5);
    // Floats carry 17 significant digits.
    assert!(a.contains("\"tolerance\": 1.0000000000000000e-10"), "{a}");

    let out = groupquant(&[
        "verify",
        "--scenario",
        "phase",
        "--config",
        config.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn global_tolerance_override() {
    let out = groupquant(&["verify", "--scenario", "coherent_d4", "--tolerance", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["tolerance"] == 0.5));
    assert_eq!(
        groupquant(&["verify", "--scenario", "phase", "--tolerance", "-1"])
            .status
            .code(),
        Some(2)
    );
}
