use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use twoseg::cli::{
    CheckSelection, Direction, StructureDocument, Verdict, cmd_check, cmd_derive, cmd_example,
};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn twoseg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twoseg"))
        .args(args)
        .env_remove("TWOSEG_LEVEL")
        .output()
        .expect("binary runs")
}

fn load(name: &str) -> StructureDocument {
    StructureDocument::parse(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("twoseg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn shipped_documents_round_trip() {
    for entry in std::fs::read_dir(data("")).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = StructureDocument::parse(&text).unwrap();
        assert_eq!(doc.to_json(), text, "{}", path.display());
    }
}

#[test]
fn shipped_documents_match_the_catalog() {
    let cases = [
        ("point", 4),
        ("cyclic-group", 4),
        ("pair-groupoid", 4),
        ("interval", 4),
        ("chain", 4),
        ("building", 4),
        ("twisted-z3", 4),
        ("symmetric-group", 4),
        ("graph-path", 4),
        ("no-lift", 2),
        ("coskeleton-no-lift", 3),
    ];
    for (name, level) in cases {
        let doc = cmd_example(name, None, level).unwrap();
        assert_eq!(
            doc.to_json(),
            std::fs::read_to_string(data(&format!("{name}.json"))).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn cyclic_group_passes_every_check() {
    let out = twoseg(&["check", data("cyclic-group.json").to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let report = cmd_check(&load("cyclic-group.json"), CheckSelection::default()).unwrap();
    assert!(report.checks.iter().all(|c| c.verdict != Verdict::Fail));
}

#[test]
fn coskeleton_fails_two_segal_with_a_witness() {
    let out = twoseg(&[
        "check",
        "--2segal",
        "--json",
        data("coskeleton-no-lift.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let check = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "2segal")
        .unwrap();
    assert_eq!(check["verdict"], "fail");
    assert!(!check["witness"].is_null());
}

#[test]
fn corrupted_face_table_fails() {
    let mut doc: Value =
        serde_json::from_str(&std::fs::read_to_string(data("cyclic-group.json")).unwrap()).unwrap();
    let entry = &mut doc["face"][2][1][0];
    *entry = Value::from((entry.as_u64().unwrap() + 1) % 2);
    let path = scratch("corrupt.json", &serde_json::to_string(&doc).unwrap());
    let out = twoseg(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL  simplicial"));
}

#[test]
fn missing_gamma_block_is_skipped() {
    let out = twoseg(&[
        "check",
        "--gamma",
        data("pair-groupoid.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("SKIP  gamma"));
}

#[test]
fn malformed_input_exits_two_with_context() {
    let path = scratch(
        "broken.json",
        "{\n  \"schema_version\": 1,\n  \"levels\": [1,\n}\n",
    );
    let out = twoseg(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(" | "));
    assert_eq!(
        twoseg(&["check", "/nonexistent/doc.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn derive_round_trips() {
    let cyclic = load("interval.json");
    let frobenius = cmd_derive(&cyclic, Direction::ParacyclicToFrobenius).unwrap();
    assert!(frobenius.paracyclic.is_none() && frobenius.counit.is_some());
    let back = cmd_derive(&frobenius, Direction::FrobeniusToParacyclic).unwrap();
    assert_eq!(back.to_json(), cyclic.to_json());

    let gamma = load("cyclic-group.json");
    let commutative = cmd_derive(&gamma, Direction::GammaToCommutative).unwrap();
    let back = cmd_derive(&commutative, Direction::CommutativeToGamma).unwrap();
    assert_eq!(back.gamma, gamma.gamma);
}

#[test]
fn search_lift_verdicts() {
    let no_lift = data("no-lift.json");
    let out = twoseg(&["search-lift", no_lift.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let verdict: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(verdict["verdict"], "no lift");
    let out = twoseg(&["search-lift", "--budget", "3", no_lift.to_str().unwrap()]);
    let verdict: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(verdict["verdict"], "budget exceeded");
}

#[test]
fn level_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_twoseg"))
        .args(["example", "point"])
        .env("TWOSEG_LEVEL", "3")
        .output()
        .unwrap();
    let doc = StructureDocument::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(doc.simplicial().unwrap().top(), 3);
}
