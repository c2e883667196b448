use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn ctl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctl"))
        .current_dir(root())
        .args(args)
        .output()
        .expect("failed to spawn ctl")
}

/// Compares stdout with `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn assert_golden(name: &str, args: &[&str]) {
    let out = ctl(args);
    assert!(
        out.status.success(),
        "ctl {args:?} failed\nstatus: {:?}\nstderr:\n{}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    let path = root().join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &out.stdout).unwrap();
    }
    let expected = fs::read(&path)
        .unwrap_or_else(|_| panic!("failed to read golden file {}", path.display()));
    assert!(
        out.stdout == expected,
        "stdout of ctl {args:?} differs from {}",
        path.display()
    );
}

#[test]
fn golden_list_modules() {
    assert_golden(
        "list_modules_a3.json",
        &["list-modules", "--algebra", "builtin:A3", "--triple", "gorenstein"],
    );
}

#[test]
fn golden_ext_table() {
    assert_golden(
        "ext_table_k_k.json",
        &["compute", "--algebra", "builtin:A1", "--triple", "gorenstein", "--no-timestamps", "ext-table", "k", "k"],
    );
}

#[test]
fn golden_z_pd() {
    assert_golden(
        "z_pd_k.json",
        &["compute", "--algebra", "builtin:A1", "--triple", "trivial", "--no-timestamps", "z-pd", "k"],
    );
}

#[test]
fn golden_ho_hom() {
    assert_golden(
        "ho_hom_k_k.json",
        &["compute", "--algebra", "builtin:A1", "--triple", "gorenstein", "--no-timestamps", "ho-hom", "k", "k"],
    );
}

#[test]
fn golden_full_run() {
    assert_golden(
        "run_a1_gorenstein.json",
        &["run", "--algebra", "builtin:A1", "--triple", "gorenstein", "--seed", "42", "--no-timestamps"],
    );
}

#[test]
fn out_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, jobs) in [(&a, "1"), (&b, "3")] {
        let out = ctl(&[
            "run", "--algebra", "builtin:A2", "--triple", "trivial", "--seed", "9", "--jobs", jobs,
            "--no-timestamps", "--out", path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn timestamps_are_opt_out() {
    let out = ctl(&["run", "--algebra", "builtin:A1", "--suite", "prop_2_2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["env"]["timestamp"].is_u64());
    assert!(v["records"][0]["timing_ms"].is_u64());
}

#[test]
fn json_inputs_match_builtin() {
    let from_files = ctl(&[
        "run", "--algebra", "data/dual_numbers.json", "--triple", "data/projective_triple.json",
        "--suite", "prop_2_2,def_4_3_balance,thm_4_6", "--no-timestamps",
    ]);
    let builtin = ctl(&[
        "run", "--algebra", "builtin:A1", "--triple", "trivial",
        "--suite", "prop_2_2,def_4_3_balance,thm_4_6", "--no-timestamps",
    ]);
    assert!(from_files.status.success() && builtin.status.success());
    let a: serde_json::Value = serde_json::from_slice(&from_files.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&builtin.stdout).unwrap();
    assert_eq!(a["records"], b["records"]);
    assert_eq!(a["env"]["triple"], "projective-all-injective");
}

#[test]
fn gorenstein_a2_notes_coincidence() {
    let out = ctl(&["run", "--algebra", "builtin:A2", "--suite", "prop_2_2", "--no-timestamps"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let notes = v["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n == "triple coincides with trivial triple on registry"));
}

#[test]
fn config_errors_exit_2() {
    let out = ctl(&["run", "--algebra", "data/nonassociative.json"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("associativity fails at (e1·e1)·e1"), "{err}");

    let out = ctl(&["run", "--algebra", "builtin:A7"]);
    assert_eq!(out.status.code(), Some(2));

    let out = ctl(&["compute", "--algebra", "builtin:A1", "ho-hom", "k", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));

    let out = ctl(&["run", "--algebra", "builtin:A1", "--suite", "prop_9_9"]);
    assert_eq!(out.status.code(), Some(2));

    let out = ctl(&["run", "--algebra", "data/missing.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_validate_against_shipped_schema() {
    let out = ctl(&["run", "--algebra", "builtin:A3", "--suite", "prop_4_2,cor_4_8", "--no-timestamps"]);
    let schema: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(root().join("schema/report.schema.json")).unwrap()).unwrap();
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(jsonschema::is_valid(&schema, &report));
}
