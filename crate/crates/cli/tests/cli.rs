use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn iwc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_iwc")).args(args).output().expect("run iwc");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("iwc-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let (code, out, err) = iwc(&all);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}")))
}

#[test]
fn catalog_lists_both_fields() {
    let (code, v) = json(&["catalog", "list"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v["algebras"].as_array().unwrap().iter().map(|a| a["name"].as_str().unwrap()).collect();
    for n in ["2A2.1", "A4.10", "so3+A1", "2g2.1", "g1+g3.2", "g4.1"] {
        assert!(names.contains(&n), "{n}");
    }
    let (code, out, _) = iwc(&["catalog", "show", "g4.1"]);
    assert_eq!(code, 0);
    assert!(out.contains("[e2,e4] = e1"), "{out}");
}

#[test]
fn validate_exit_codes() {
    let good = temp_file("h3.json", r#"{"dim": 3, "brackets": [{"i": 1, "j": 2, "k": 3, "c": "1"}]}"#);
    let bad = temp_file(
        "bad.json",
        r#"{"dim": 3, "brackets": [{"i": 1, "j": 2, "k": 3, "c": "1"}, {"i": 2, "j": 3, "k": 2, "c": "1"}, {"i": 1, "j": 3, "k": 1, "c": "1"}]}"#,
    );
    let garbage = temp_file("garbage.json", "not json");
    assert_eq!(iwc(&["validate", good.to_str().unwrap()]).0, 0);
    assert_eq!(iwc(&["validate", bad.to_str().unwrap()]).0, 1);
    assert_eq!(iwc(&["validate", garbage.to_str().unwrap()]).0, 2);
}

#[test]
fn contract_by_signature() {
    let (code, v) = json(&["contract", "--algebra", "so3", "--signature", "1,1,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["matched"], "heisenberg3");
    let (code, v) = json(&["contract", "--algebra", "so3", "--signature", "0,0,1"]);
    assert_eq!(code, 1);
    assert_eq!(v["limit_exists"], false);
}

#[test]
fn verify_literature_matrix() {
    let a = temp_file("a.json", "[[1,0,0,1],[0,0,1,0],[0,0,0,1],[0,1,1,1]]");
    let a = a.to_str().unwrap();
    for field in ["Q", "Q(i)"] {
        let (src, tgt) = if field == "Q" { ("2A2.1", "A4.1") } else { ("2g2.1", "g4.1") };
        for sig in ["3,2,1,1", "4,3,2,1"] {
            let (code, v) = json(&["--field", field, "verify", "--source", src, "--target", tgt, "--matrix", a, "--signature", sig]);
            assert_eq!(code, 0, "{field} {sig}");
            assert_eq!(v["exact_match"], true);
        }
    }
    let (code, _, _) = iwc(&["verify", "--source", "2A2.1", "--target", "A4.1", "--matrix", a, "--signature", "2,1,0,1"]);
    assert_eq!(code, 1);
}

#[test]
fn derivations_and_signatures() {
    let (code, v) = json(&["derivations", "g4.1"]);
    assert_eq!(code, 0);
    assert_eq!(v["dim"], 7);
    let (_, v) = json(&["signatures", "g4.1", "--max", "2"]);
    let sigs: Vec<Value> = v["signatures"].as_array().unwrap().clone();
    assert!(sigs.contains(&serde_json::json!([2, 1, 1, 0])));
    assert!(!sigs.contains(&serde_json::json!([2, 2, 1, 0])));
}

#[test]
fn certify_fixtures() {
    let (code, v) = json(&["certify", "--fixture", "G41-2101"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["kind"], "complex-infeasible");
    let (code, v) = json(&["certify", "--fixture", "G41-3211"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["kind"], "feasible-witness");
    let (code, v) = json(&["certify", "--fixture", "SO3-2101"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["kind"], "real-branch");
    let holds: Vec<bool> = v["sub_claims"].as_array().unwrap().iter().map(|c| c["holds"].as_bool().unwrap()).collect();
    assert_eq!(holds, [true, false, true]);
    assert_eq!(iwc(&["certify", "--fixture", "nope"]).0, 2);
}

#[test]
fn certify_generated_systems() {
    let (code, v) = json(&["certify", "--generate", "so3,heisenberg3,1,0,1", "--real-branch"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["kind"], "real-branch");
    let (code, v) = json(&["certify", "--generate", "so3,heisenberg3,1,1,2"]);
    assert_eq!(code, 1);
    assert_eq!(v["certificate"]["kind"], "feasible-witness");
    let (code, _, err) = iwc(&["certify", "--generate", "so3,heisenberg3,1,1"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn scan_so3_to_heisenberg() {
    let (code, v) = json(&["scan", "--source", "so3", "--target", "heisenberg3", "--max", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["minimal_feasible"], serde_json::json!([2, 1, 1]));
    let (code, out, _) = iwc(&["scan", "--source", "so3", "--target", "heisenberg3", "--max", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("no feasible signature"), "{out}");
}

#[test]
fn unknown_algebra_is_invalid_input() {
    let (code, _, err) = iwc(&["derivations", "g9.9"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"), "{err}");
}
