use std::fs;
use std::process::{Command, Output};

const BH3_PAIRS: &str = "(1,0,0):(0,0,0),(3,0,0):(2,0,0),(1,2,0):(0,1,0)";
const BH2_PAIRS: &str = "(1,0):(0,0),(3,0):(2,0),(1,2):(0,1)";

fn bhdpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhdpc")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn construct_prints_a_verified_cover() {
    let out = bhdpc(&["construct", "--n", "3", "--pairs", BH3_PAIRS]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["verified"], true);
    assert_eq!(doc["n"], 3);
    assert_eq!(doc["pairs"][0][0], "(1,0,0)");
    let total: usize = doc["paths"].as_array().unwrap().iter().map(|p| p.as_array().unwrap().len()).sum();
    assert_eq!(total, 64);
}

#[test]
fn construct_rejects_bad_input() {
    let low = bhdpc(&["construct", "--n", "2", "--pairs", BH2_PAIRS]);
    assert_eq!(low.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&low.stderr).contains("n >= 3"));
    for pairs in ["(1,0,0)-(0,0,0)", "(1,0,0):(0,0,0),(3,0,0):(2,0,0)", "(0,0,0):(1,0,0),(3,0,0):(2,0,0),(1,2,0):(0,1,0)", "((1,0,0):(0,0,0)"] {
        assert_eq!(bhdpc(&["construct", "--n", "3", "--pairs", pairs]).status.code(), Some(2), "{pairs}");
    }
    assert_eq!(bhdpc(&["construct", "--n", "3"]).status.code(), Some(2));
}

#[test]
fn budget_override() {
    let bad = Command::new(env!("CARGO_BIN_EXE_bhdpc"))
        .args(["construct", "--n", "3", "--pairs", BH3_PAIRS])
        .env("BHDPC_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let starved = Command::new(env!("CARGO_BIN_EXE_bhdpc"))
        .args(["construct", "--n", "3", "--pairs", BH3_PAIRS])
        .env("BHDPC_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(starved.status.code(), Some(3));
    assert!(stdout(&starved).is_empty());
}

#[test]
fn cover_round_trips_through_verify_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cover.json");
    let out = bhdpc(&["construct", "--n", "3", "--pairs", BH3_PAIRS]);
    fs::write(&file, &out.stdout).unwrap();
    let file = file.to_str().unwrap();

    let checked = bhdpc(&["verify", "--cover", file]);
    assert_eq!(checked.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&checked)).unwrap();
    assert_eq!(report["covered"], 64);

    let dot = stdout(&bhdpc(&["export", "--cover", file, "--dot"]));
    assert!(dot.starts_with("graph cover_BH_3 {"));
    assert_eq!(dot.matches("penwidth=3").count(), 61);

    let mut doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    doc["paths"][0].as_array_mut().unwrap().pop();
    let broken = dir.path().join("broken.json");
    fs::write(&broken, doc.to_string()).unwrap();
    let failed = bhdpc(&["verify", "--cover", broken.to_str().unwrap()]);
    assert_eq!(failed.status.code(), Some(1));
    assert!(stdout(&failed).contains("\"passed\": false"));
}

#[test]
fn oracle_answers() {
    let no = bhdpc(&["oracle", "--n", "2", "--pairs", BH2_PAIRS]);
    assert_eq!(no.status.code(), Some(0));
    assert_eq!(stdout(&no).trim(), "NO paired 3-DPC exists");

    let yes = bhdpc(&["oracle", "--n", "2", "--pairs", "(1,0):(0,0),(3,0):(2,0),(1,1):(0,1)"]);
    assert!(stdout(&yes).starts_with("YES"));

    let t3 = bhdpc(&["oracle", "--n", "2", "--pairs", "(1,0):(0,0),(3,0):(2,0)", "--find-t3", "--s3", "(1,1)"]);
    assert!(stdout(&t3).contains("(0,1)"));

    assert_eq!(bhdpc(&["oracle", "--n", "3", "--pairs", BH3_PAIRS]).status.code(), Some(2));
}

#[test]
fn validate_tables_summary() {
    let out = bhdpc(&["validate-tables"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("rows 240, valid 231, corrupted 9, repaired 9, unrepairable 0"));

    let json: serde_json::Value = serde_json::from_str(&stdout(&bhdpc(&["validate-tables", "--json"]))).unwrap();
    assert_eq!(json["summary"]["corrupted"], 9);
    assert_eq!(json["rows"].as_array().unwrap().len(), 240);

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    assert_eq!(bhdpc(&["validate-tables", "--file", empty.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn export_graphs() {
    let bh1 = stdout(&bhdpc(&["export", "--n", "1", "--dot"]));
    assert_eq!(bh1.matches(" -- ").count(), 4);
    assert_eq!(bh1.matches("style=filled").count(), 4);

    let bh2 = stdout(&bhdpc(&["export", "--n", "2", "--dot", "--partition", "1"]));
    assert_eq!(bh2.matches("subgraph cluster_").count(), 4);
    assert_eq!(bh2.matches(" -- ").count(), 32);
    assert_eq!(bh2.matches("style=dashed").count(), 16);

    assert_eq!(bhdpc(&["export", "--n", "2"]).status.code(), Some(2));
    assert_eq!(bhdpc(&["export", "--n", "2", "--dot", "--partition", "2"]).status.code(), Some(2));
}

#[test]
fn selftest_is_deterministic() {
    let a = bhdpc(&["selftest", "--n", "3", "--samples", "40", "--seed", "5"]);
    let b = bhdpc(&["selftest", "--n", "3", "--samples", "40", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("40/40 verified"));
}
