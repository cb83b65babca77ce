//! End-to-end tests of the `seqspace` binary: exit-code contract, JSON
//! shapes, determinism, and file ingestion.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_seqspace"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn norm_marcinkiewicz_matches_closed_form() {
    let out = run(&[
        "norm",
        "--space",
        "marcinkiewicz",
        "--weight",
        "power:theta=0.5",
        "--vec",
        "1 1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["space"], "marcinkiewicz");
    assert!((doc["norm"].as_f64().unwrap() - 2.0f64.sqrt()).abs() <= 1e-12);
    assert_eq!(doc["support_size"], 2);
}

#[test]
fn norm_orlicz_matches_two_norm() {
    let out = run(&["norm", "--space", "orlicz", "--fn", "power:p=2", "--vec", "1 1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert!((doc["norm"].as_f64().unwrap() - 2.0f64.sqrt()).abs() <= 1e-9);
}

#[test]
fn empty_vector_has_zero_norm() {
    for space in ["marcinkiewicz", "lorentz1", "linf"] {
        let mut args = vec!["norm", "--space", space, "--vec", ""];
        if space != "linf" {
            args.extend(["--weight", "harmonic"]);
        }
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "space {space}");
        assert_eq!(stdout_json(&out)["norm"], 0.0, "space {space}");
    }
}

#[test]
fn musielak_constant_family_agrees_with_orlicz() {
    let orlicz = stdout_json(&run(&[
        "norm", "--space", "orlicz", "--fn", "power:p=2", "--vec", "3 4",
    ]));
    let musielak = stdout_json(&run(&[
        "norm", "--space", "musielak", "--fn", "power:p=2", "--vec", "3 4",
    ]));
    let a = orlicz["norm"].as_f64().unwrap();
    let b = musielak["norm"].as_f64().unwrap();
    assert!((a - b).abs() <= 1e-9 * a, "{a} vs {b}");
}

#[test]
fn vector_files_are_ingested_in_both_formats() {
    let dir = std::env::temp_dir().join(format!("seqspace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let text_path = dir.join("f.txt");
    std::fs::write(&text_path, "1 1\n2 1\n").unwrap();
    let json_path = dir.join("f.json");
    std::fs::write(&json_path, r#"{"entries":[[1,1.0],[2,1.0]]}"#).unwrap();
    for path in [&text_path, &json_path] {
        let out = run(&[
            "norm",
            "--space",
            "marcinkiewicz",
            "--weight",
            "power:theta=0.5",
            "--vec",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let doc = stdout_json(&out);
        assert!((doc["norm"].as_f64().unwrap() - 2.0f64.sqrt()).abs() <= 1e-12);
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bad_literal_exits_2() {
    let out = run(&["norm", "--space", "orlicz", "--fn", "power:q=2", "--vec", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn short_musielak_family_exits_3() {
    let out = run(&[
        "norm",
        "--space",
        "musielak",
        "--fn",
        "power:p=2;power:p=4",
        "--vec",
        "1 1 1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn criteria_reports_expected_verdicts() {
    let out = run(&["criteria", "--weight", "harmonic"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let lechner = doc["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["criterion"] == "lechner-marcinkiewicz")
        .expect("lechner report present");
    assert_eq!(lechner["verdict"], "fails");

    let out = run(&["criteria", "--orliczfn", "power:p=2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let lechner = doc["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["criterion"] == "lechner-orlicz")
        .expect("lechner report present");
    assert_eq!(lechner["verdict"], "holds");
    assert!((doc["indices"]["alpha"].as_f64().unwrap() - 2.0).abs() <= 0.05);
}

#[test]
fn degenerate_function_makes_every_criterion_inconclusive() {
    let out = run(&["criteria", "--orliczfn", "finf"]);
    assert_eq!(out.status.code(), Some(4));
    let doc = stdout_json(&out);
    for c in doc["criteria"].as_array().unwrap() {
        assert_eq!(c["verdict"], "inconclusive");
    }
}

#[test]
fn verify_suite_passes_and_is_deterministic() {
    let args = ["verify", "--suite", "duality", "--scale", "samples=60"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let doc = stdout_json(&a);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["seed"], 7);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout, "repeat runs must be byte-identical");
}

#[test]
fn verify_rejects_unknown_suite_and_bad_scale() {
    assert_eq!(run(&["verify", "--suite", "mystery"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--suite", "duality", "--scale", "bogus=3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "--suite", "duality", "--scale", "j"]).status.code(),
        Some(2)
    );
}

#[test]
fn interleavemap_matches_documented_example() {
    let out = run(&[
        "construct",
        "interleavemap",
        "--blocks",
        "1,3;2",
        "--targets",
        "odd;even",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["map"], serde_json::json!([1, 2, 3]));
}

#[test]
fn malformed_partition_exits_2() {
    let out = run(&[
        "construct",
        "interleavemap",
        "--blocks",
        "1,4;2",
        "--targets",
        "odd;even",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn blockfamily_members_are_disjoint_and_unit_norm() {
    let out = run(&[
        "construct",
        "blockfamily",
        "--weight",
        "powerderiv:a=0.5",
        "--blocks",
        "3",
        "--len",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let members = doc["members"].as_array().unwrap();
    assert_eq!(members.len(), 3);
    let mut seen = std::collections::BTreeSet::new();
    for m in members {
        for entry in m["entries"].as_array().unwrap() {
            let idx = entry[0].as_u64().unwrap();
            assert!(seen.insert(idx), "index {idx} appears in two members");
        }
    }
}

#[test]
fn output_flag_honors_output_dir_env() {
    let dir = std::env::temp_dir().join(format!("seqspace-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = bin()
        .args(["norm", "--space", "linf", "--vec", "5 1", "--output", "report.json"])
        .env("SEQSPACE_OUTPUT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let body = std::fs::read_to_string(dir.join("report.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(doc["norm"], 5.0);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn csv_format_is_a_flat_projection() {
    let out = run(&[
        "norm",
        "--space",
        "linf",
        "--vec",
        "2 1",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("space,params,norm,support_size"));
    assert_eq!(lines.next(), Some("linf,,2,2"));
}