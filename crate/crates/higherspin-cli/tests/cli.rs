//! End-to-end tests of the command-line interface.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_higherspin"))
}

fn tmpdir(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("higherspin-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn verify_small_grid_exits_zero_and_writes_report() {
    let dir = tmpdir("verify");
    let out = dir.join("report.json");
    let output = bin()
        .args([
            "verify",
            "--suite",
            "kernel,reduction",
            "--m",
            "3",
            "--k",
            "0,1",
            "--seed",
            "7",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["mode"], "exact");
    assert_eq!(report["grid"]["seed"], 7);
    let checks = report["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert_ne!(c["status"], "fail", "check failed: {c}");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_reports_guard_skips_loudly() {
    // (m, k) = (4, 1) kills m + 6k - 10: third-order checks must skip with
    // the constant named.
    let dir = tmpdir("skips");
    let out = dir.join("report.json");
    let output = bin()
        .args([
            "verify", "--suite", "lemmas3", "--m", "4", "--k", "1", "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let checks = report["checks"].as_array().unwrap();
    let grand = checks
        .iter()
        .find(|c| c["name"] == "grand_commutator_d3")
        .expect("grand commutator record present");
    assert_eq!(grand["status"], "skip");
    let note = grand["note"].as_str().unwrap();
    assert!(
        note.contains("m+6k-10"),
        "note must name the constant: {note}"
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_suite_is_a_config_error() {
    let output = bin()
        .args(["verify", "--suite", "nonsense", "--m", "3", "--k", "0"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_modulo_timing() {
    let dir = tmpdir("determinism");
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    for out in [&a, &b] {
        let status = bin()
            .args([
                "verify", "--suite", "clifford", "--m", "3,4", "--k", "0", "--seed", "11", "--out",
            ])
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let strip = |path: &std::path::Path| {
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        for c in v["checks"].as_array_mut().unwrap() {
            c.as_object_mut().unwrap().remove("millis");
        }
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(&a), strip(&b));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_file_is_overridden_by_flags_and_round_trips() {
    let dir = tmpdir("config");
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "m = 5\nk = 2\nseed = 3\nxdeg = 2\nsuites = kernel\n").unwrap();
    // Flag overrides m; file supplies the rest.
    let output = bin()
        .args(["verify", "--config"])
        .arg(&cfg)
        .args(["--m", "3", "--dump-config"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let dump = String::from_utf8_lossy(&output.stdout);
    assert!(dump.contains("m = 3"), "{dump}");
    assert!(dump.contains("k = 2"), "{dump}");
    assert!(dump.contains("seed = 3"), "{dump}");
    assert!(dump.contains("suites = kernel"), "{dump}");
    // The dump itself parses back.
    let cfg2 = dir.join("dumped.cfg");
    std::fs::write(&cfg2, dump.as_bytes()).unwrap();
    let output2 = bin()
        .args(["verify", "--config"])
        .arg(&cfg2)
        .arg("--dump-config")
        .output()
        .unwrap();
    assert!(output2.status.success());
    assert_eq!(dump, String::from_utf8_lossy(&output2.stdout));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn report_dir_env_var_relocates_relative_outputs() {
    let dir = tmpdir("envdir");
    let output = bin()
        .args([
            "verify",
            "--suite",
            "kernel",
            "--m",
            "3",
            "--k",
            "0",
            "--out",
            "env-report.json",
        ])
        .env("HIGHERSPIN_REPORT_DIR", &dir)
        .output()
        .unwrap();
    assert!(output.status.success());
    assert!(dir.join("env-report.json").exists());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn catalog_lists_checks_with_anchors() {
    let output = bin().args(["catalog", "--json"]).output().unwrap();
    assert!(output.status.success());
    let entries: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    let entries = entries.as_array().unwrap();
    assert!(entries.len() > 30);
    let names: Vec<&str> = entries
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    for expected in [
        "grand_commutator_d3",
        "grand_commutator_d4",
        "j3_involution",
        "almansi_fischer",
        "d4_defining_vs_twistor",
        "kernel_reproduces_mk",
    ] {
        assert!(names.contains(&expected), "missing {expected}");
    }
    // every entry has a non-empty anchor formula
    for e in entries {
        assert!(!e["anchor"].as_str().unwrap().is_empty());
    }
}

#[test]
fn fundsol_emits_zero_rendering() {
    let output = bin()
        .args(["fundsol", "--which", "d4", "--m", "3", "--k", "1"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("D4 applied   = 0"), "{text}");
    assert!(text.contains("|x|^"), "{text}");
}

#[test]
fn fundsol_rejects_guarded_parameters() {
    // D3 needs m + 6k - 10 nonzero; (4, 1) is the guarded point.
    let output = bin()
        .args(["fundsol", "--which", "d3", "--m", "4", "--k", "1"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("m+6k-10"), "{err}");
}

#[test]
fn spaces_emits_dimensions() {
    let output = bin()
        .args(["spaces", "--m", "3", "--k", "2"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    let spaces = doc["spaces"].as_array().unwrap();
    let dim_of = |tag: &str| {
        spaces
            .iter()
            .find(|s| s["tag"] == tag)
            .map(|s| s["dim"].as_u64().unwrap())
            .unwrap()
    };
    assert_eq!(dim_of("P_k"), 6);
    assert_eq!(dim_of("H_k"), 5);
    assert_eq!(dim_of("M_k"), 5);
}

#[test]
fn render_op_shows_concrete_coefficients() {
    let output = bin()
        .args(["render-op", "--name", "d3", "--m", "3", "--k", "1"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("4/5 <u,Dx><Du,Dx>Dx"), "{text}");
    assert!(text.contains("x-order:  3"), "{text}");
}

#[test]
fn float_mode_never_gates() {
    let dir = tmpdir("floatmode");
    let out = dir.join("float.json");
    let output = bin()
        .args([
            "verify",
            "--suite",
            "reduction",
            "--m",
            "3",
            "--k",
            "0",
            "--mode",
            "float",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["mode"], "float");
    std::fs::remove_dir_all(&dir).ok();
}
