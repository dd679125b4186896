use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vdc-audit"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn single_emits_one_record() {
    let (code, stdout, stderr) = run(&[
        "single",
        "--c",
        "101",
        "--kernel",
        "kl2-product",
        "--M",
        "25",
        "--N",
        "25",
        "--k",
        "1",
        "--scheme",
        "random-signs",
        "--seed",
        "1",
    ]);
    assert_eq!(code, 0, "{stderr}");
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 1);
    let rec: Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(rec["c"], 101);
    assert_eq!(rec["M"], 25);
    assert_eq!(rec["L"], 4);
    assert_eq!(rec["terms"].as_array().unwrap().len(), 2);
    let total = rec["rhs_total"].as_f64().unwrap();
    let pre = rec["prefactor"].as_f64().unwrap();
    let sum: f64 = rec["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["value"].as_f64().unwrap())
        .sum();
    assert!((pre * sum - total).abs() <= 1e-12 * total);
    assert!(rec["trivial_ratio"].as_f64().unwrap() <= 1.0);
    assert!(stderr.contains("argmax"));
}

#[test]
fn missing_required_flag_is_a_usage_error() {
    let (code, _, stderr) = run(&["single", "--kernel", "kl2-product"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--c"), "{stderr}");
    assert!(stderr.to_lowercase().contains("usage"));
}

#[test]
fn budget_exhaustion_exits_3() {
    let (code, stdout, stderr) = run(&["single", "--k", "3", "--c", "512", "--budget", "1000"]);
    assert_eq!(code, 3, "{stderr}");
    assert!(stdout.is_empty());
    assert!(stderr.contains("4913"));
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(
        run(&["single", "--c", "12", "--kernel", "kl2-product"]).0,
        2
    );
    assert_eq!(run(&["single", "--c", "12", "--kernel", "nope"]).0, 2);
    assert_eq!(run(&["single", "--c", "12", "--scheme", "nope"]).0, 2);
}

#[test]
fn kernel_dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.txt");
    let p = path.to_str().unwrap();
    assert_eq!(
        run(&[
            "kernel",
            "dump",
            "--c",
            "13",
            "--kernel",
            "kl2-twist",
            "--out",
            p
        ])
        .0,
        0
    );
    let file_kernel = format!("file:{p}");
    let (code, a, _) = run(&[
        "single",
        "--c",
        "13",
        "--kernel",
        &file_kernel,
        "--M",
        "3",
        "--N",
        "3",
    ]);
    assert_eq!(code, 0);
    let (_, b, _) = run(&[
        "single",
        "--c",
        "13",
        "--kernel",
        "kl2-twist",
        "--M",
        "3",
        "--N",
        "3",
    ]);
    let (a, b): (Value, Value) = (
        serde_json::from_str(&a).unwrap(),
        serde_json::from_str(&b).unwrap(),
    );
    assert_eq!(a["rhs_total"], b["rhs_total"]);
    assert_eq!(a["lhs_abs"], b["lhs_abs"]);
    // A file kernel must match the requested modulus.
    assert_eq!(run(&["single", "--c", "11", "--kernel", &file_kernel]).0, 2);
}

#[test]
fn kernel_check_reports_weil_bound() {
    let (code, stdout, _) = run(&["kernel", "check", "--c", "101", "--kernel", "kl3-product"]);
    assert_eq!(code, 0);
    let rec: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(rec["weil_bound"]["holds"], true);
    assert!(rec["weil_bound"]["oracle_error"].as_f64().unwrap() < 1e-9);
    assert_eq!(rec["passed"], true);
    let (code, stdout, _) = run(&[
        "kernel",
        "check",
        "--c",
        "16",
        "--kernel",
        "random-unimodular:2",
    ]);
    assert_eq!(code, 0);
    let rec: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(rec["within_size_assumption"], true);
}

#[test]
fn poisson_check_passes() {
    for c in ["7", "12"] {
        let (code, stdout, _) = run(&["poisson", "check", "--c", c, "--seed", "5"]);
        assert_eq!(code, 0, "{stdout}");
        let rec: Value = serde_json::from_str(&stdout).unwrap();
        assert!(rec["residual"].as_f64().unwrap() < 1e-6);
    }
}

#[test]
fn grid_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    let out = dir.path().join("out.csv");
    std::fs::write(
        &spec,
        r#"{"moduli": [11, 13], "kernels": ["constant"], "schemes": ["all-ones"],
            "seeds": [1], "sizes": [[2, 3]]}"#,
    )
    .unwrap();
    let (code, _, stderr) = run(&[
        "grid",
        spec.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--workers",
        "2",
    ]);
    assert_eq!(code, 0, "{stderr}");
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 3);

    std::fs::write(
        &spec,
        r#"{"moduli": [11], "kernels": ["constant"], "schemes": ["all-ones"],
            "seeds": [1], "sizes": [[2, 9]]}"#,
    )
    .unwrap();
    let (code, _, stderr) = run(&["grid", spec.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("ratio band"));
}
