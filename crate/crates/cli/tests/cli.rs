use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn npc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_npc"))
        .args(args)
        .output()
        .expect("run npc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn prove_to(dir: &Path, sequent: &str) -> std::path::PathBuf {
    let path = dir.join("proof.json");
    let out = npc(&[
        "prove",
        "--n",
        "2",
        sequent,
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    path
}

#[test]
fn prove_then_check_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for sequent in [
        "|-1 q(X,e1,e1)",
        "X, Y |-1 X",
        "|-2 X, X^[2,1]",
        "q(X, Y, Z) |-1 q(X, Y, Z)",
    ] {
        let path = prove_to(dir.path(), sequent);
        let out = npc(&["check", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{sequent}: {}", stderr(&out));
        assert!(stdout(&out).starts_with("ok:"));
    }
}

#[test]
fn prove_three_dimensional() {
    let out = npc(&["prove", "--n", "3", "|-2 X, X^[2,3,1], X^[3,1,2]"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = npc(&["prove", "--n", "3", "|-2 X, X^[2,3,1]"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("refuted:"));
}

#[test]
fn invalid_sequent_prints_counterexample() {
    let out = npc(&["valid", "--n", "2", "|-1 X"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("X=2"), "{}", stdout(&out));
    assert!(!stderr(&out).is_empty());
    let out = npc(&["valid", "|-1 X, X^[2,1]"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn mutated_proof_is_rejected_with_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = prove_to(dir.path(), "X, Y |-1 X");
    let mut file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let leaf = &mut file["proof"]["premises"][0];
    assert_eq!(leaf["rule"], "Id");
    leaf["params"]["rho"] = serde_json::json!([2, 1]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, file.to_string()).unwrap();
    let out = npc(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("root.0"), "{}", stderr(&out));
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{\"format_version\": 1}").unwrap();
    assert_eq!(
        npc(&["check", junk.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        npc(&["check", "/nonexistent/proof.json"]).status.code(),
        Some(2)
    );
    assert_eq!(npc(&["valid", "|-3 X"]).status.code(), Some(2));
    assert_eq!(npc(&["valid", "--n", "7", "|-1 X"]).status.code(), Some(2));
    assert_eq!(
        npc(&["eval", "q(X,Y,e2)", "--env", "X=1"]).status.code(),
        Some(2)
    );
    assert_eq!(npc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        npc(&["translate", "X", "--dir", "sideways"]).status.code(),
        Some(2)
    );
}

#[test]
fn eval_and_translate() {
    let out = npc(&["eval", "q(X, Y, e2)", "--env", "X=1,Y=2"]);
    assert_eq!((out.status.code(), stdout(&out).trim()), (Some(0), "2"));
    let out = npc(&["translate", "--dir", "pc-to-2pc", "X & ~Y"]);
    assert_eq!(stdout(&out).trim(), "q(X, Y^[2,1], e2)");
    let out = npc(&["translate", "--dir", "2pc-to-pc", "q(X, Y, Z^[2,1])"]);
    assert_eq!(stdout(&out).trim(), "X & Y | ~X & ~Z");
}

#[test]
fn algebra_reports() {
    for check in ["identities", "multideals", "iso"] {
        let out = npc(&["algebra", check, "--n", "3", "--points", "2"]);
        assert_eq!(out.status.code(), Some(0), "{check}: {}", stdout(&out));
    }
}

#[test]
fn enumerate_small_family() {
    let out = npc(&[
        "enumerate",
        "--vars",
        "1",
        "--pool",
        "4",
        "--max-size",
        "2",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["agree"], true);
    assert_eq!(v["matrix"]["proved_invalid"], 0);
}

#[test]
fn json_output_is_deterministic() {
    let runs = [
        vec!["--json", "prove", "q(X, Y, e2) |-2 X^[2,1], Y^[2,1]"],
        vec!["--json", "valid", "X |-1 Y"],
        vec!["--json", "algebra", "identities", "--points", "2"],
        vec![
            "--json",
            "enumerate",
            "--vars",
            "1",
            "--pool",
            "3",
            "--max-size",
            "2",
        ],
    ];
    for args in runs {
        let a = npc(&args);
        let b = npc(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        serde_json::from_slice::<Value>(&a.stdout).expect("one JSON object");
    }
}
