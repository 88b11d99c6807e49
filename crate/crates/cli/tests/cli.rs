use std::fs;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

fn propsel(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_propsel"));
    cmd.args(args).stdout(Stdio::piped()).stderr(Stdio::piped());
    cmd.stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() });
    let mut child = cmd.spawn().expect("binary runs");
    if let Some(text) = stdin {
        use std::io::Write;
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = propsel(args, None);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn fixture(dir: &TempDir, args: &[&str]) -> String {
    let mut full = vec!["fixture"];
    full.extend_from_slice(args);
    let text = ok(&full);
    write(dir, &format!("{}.json", args.join("_").replace('-', "_")), &text)
}

fn strings(v: &Value) -> Vec<String> {
    serde_json::from_value(v.clone()).unwrap()
}

const COMMITTEE: &str = r#"{
  "schema": 1,
  "candidates": [{"id": "a"}, {"id": "b"}, {"id": "c"}],
  "voters": [
    {"id": "v1", "approves": ["a", "b"]},
    {"id": "v2", "approves": ["a"]},
    {"id": "v3", "approves": ["c"]}
  ],
  "constraints": {"kind": "committee", "k": 2}
}"#;

#[test]
fn pav_on_a_committee_file() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "e.json", COMMITTEE);
    let rep = json(&ok(&["rule", &file, "pav"]));
    // a+b: 1 + 3/2 = 5/2; a+c: 1 + 1 + 1 = 3
    assert_eq!(strings(&rep["outcome"]), ["a", "c"]);
    assert_eq!(rep["score"], "3");
    assert_eq!(rep["schema"], 1);
}

#[test]
fn phragmen_on_the_pjr_fixture() {
    let dir = TempDir::new().unwrap();
    let file = fixture(&dir, &["phragmen-pjr-cex"]);
    let rep = json(&ok(&["rule", &file, "phragmen"]));
    assert_eq!(strings(&rep["outcome"]), ["x1"]);
    let trace = &rep["trace"];
    assert_eq!(trace["events"][0]["time"], "1/9");
    assert_eq!(trace["removals"].as_array().unwrap().len(), 2);
    let audit = json(&ok(&["audit", &file, "pjr", "--outcome", "x1"]));
    assert_eq!(audit["verdict"], "violated");
}

#[test]
fn pav_fixture_audit_and_verify() {
    let dir = TempDir::new().unwrap();
    let file = fixture(&dir, &["pav-ejr-cex"]);
    let rep = ok(&["audit", &file, "ejr", "--outcome", "y1,y2"]);
    let v = json(&rep);
    assert_eq!(v["verdict"], "violated");
    assert_eq!(v["witness"]["claim"]["ell"], 1);
    assert_eq!(v["witness"]["group"].as_array().unwrap().len(), 7);
    let rep_file = write(&dir, "audit.json", &rep);
    assert_eq!(json(&ok(&["verify", &file, &rep_file]))["verified"], true);

    // a tampered witness no longer re-derives
    let tampered = rep.replace("\"ell\": 1", "\"ell\": 2");
    let bad = write(&dir, "bad.json", &tampered);
    assert_eq!(propsel(&["verify", &file, &bad], None).status.code(), Some(1));
}

#[test]
fn every_report_reverifies() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "e.json", COMMITTEE);
    let reports = [
        ok(&["rule", &file, "pav"]),
        ok(&["rule", &file, "phragmen"]),
        ok(&["rule", &file, "greedy-cohesive"]),
        ok(&["check", &file, "matroid"]),
        ok(&["check", &file, "feasible", "a,b"]),
        ok(&["audit", &file, "core", "--outcome", "b,c"]),
        ok(&["audit", &file, "fjr", "--outcome", "b"]),
    ];
    for (n, rep) in reports.iter().enumerate() {
        let path = write(&dir, &format!("r{n}.json"), rep);
        assert_eq!(json(&ok(&["verify", &file, &path]))["verified"], true, "{rep}");
    }
}

#[test]
fn pjr_never_stricter_than_ejr() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "e.json", COMMITTEE);
    for outcome in ["a,b", "a,c", "b,c", "a", ""] {
        let ejr = json(&ok(&["audit", &file, "ejr", "--outcome", outcome]));
        let pjr = json(&ok(&["audit", &file, "pjr", "--outcome", outcome]));
        if ejr["verdict"] == "satisfied" {
            assert_eq!(pjr["verdict"], "satisfied", "{outcome}");
        }
    }
}

#[test]
fn ranking_witness() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "r.json",
        r#"{"schema": 1, "candidates": [], "voters": [{"id": "v", "approves": ["1>2"]}],
            "constraints": {"kind": "ranking", "items": ["1", "2", "3"]}}"#,
    );
    let rep = json(&ok(&["check", &file, "matroid"]));
    assert_eq!(rep["matroid"], false);
    assert_eq!(strings(&rep["witness"]["x"]), ["1>2", "2>3"]);
    assert_eq!(strings(&rep["witness"]["y"]), ["1>2", "3>1", "3>2"]);
}

#[test]
fn sp_fixture_pipes_into_check() {
    let election = ok(&["fixture", "sp-not-fjr", "--n", "30"]);
    let out = propsel(&["check", "-", "sp"], Some(&election));
    assert_eq!(out.status.code(), Some(0));
    let rep = json(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rep["verdict"], "pass");
    let names: Vec<&str> = rep["conditions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["condition"].as_str().unwrap())
        .collect();
    assert!(["sp1", "sp2", "sp3", "sp4"].iter().all(|c| names.contains(c)));

    let literal = ok(&["fixture", "sp-not-fjr-literal", "--n", "30"]);
    let out = propsel(&["check", "-", "sp"], Some(&literal));
    let rep = json(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rep["verdict"], "fail");
}

#[test]
fn separate_price_file() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "e.json", COMMITTEE);
    // one candidate per voter-approved pair, priced at one
    let prices = r#"{"schema": 1, "outcome": ["a", "c"],
        "prices": {"a": "1", "b": "1", "c": "1"},
        "payments": {"v1": {"a": "1/2"}, "v2": {"a": "1/2"}, "v3": {"c": "1"}}}"#;
    let pf = write(&dir, "p.json", prices);
    let rep = json(&ok(&["check", &file, "sp", &pf]));
    let sp3 = rep["conditions"].as_array().unwrap().iter().find(|c| c["condition"] == "sp3").unwrap();
    // v1 keeps 1/2 and alone approves b at price 1
    assert_eq!(sp3["holds"], true);
    let path = write(&dir, "sp.json", &serde_json::to_string(&rep).unwrap());
    assert_eq!(json(&ok(&["verify", &file, &path]))["verified"], true);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{\"schema\": 1,\n  \"candidates\": [}");
    let out = propsel(&["rule", &bad, "pav"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2 column"));

    let file = write(&dir, "e.json", COMMITTEE);
    let out = propsel(&["audit", &file, "ejr", "--outcome", "a,b,c"], None);
    assert_eq!(out.status.code(), Some(3));

    let out = propsel(&["fixture", "pav-ejr-cex", "--n", "6"], None);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n-too-small"));
    assert_eq!(propsel(&["fixture", "nope"], None).status.code(), Some(4));
    assert_eq!(propsel(&["fixture", "sp-not-fjr", "--n", "15"], None).status.code(), Some(4));

    let out = propsel(&["--cap", "2", "check", &file, "matroid"], None);
    assert_eq!(out.status.code(), Some(5));

    assert_eq!(propsel(&["rule", &file, "unknown-rule"], None).status.code(), Some(2));
    assert_eq!(propsel(&["audit", &file, "ejr", "--outcome", "zz"], None).status.code(), Some(2));
}

#[test]
fn fixtures_round_trip_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cases: &[&[&str]] = &[
        &["pav-ejr-cex"],
        &["pav-ejr-cex", "--domain", "ranking"],
        &["pav-ejr-cex", "--domain", "negative-votes"],
        &["pav-ejr-cex", "--domain", "judgment"],
        &["phragmen-pjr-cex"],
        &["weighted-phragmen", "--g", "4"],
        &["sp-not-fjr"],
        &["sp-not-fjr-literal"],
        &["random", "--seed", "7", "--n", "6", "--m", "5"],
    ];
    for args in cases {
        let first = fixture(&dir, args);
        let emitted = fs::read_to_string(&first).unwrap();
        let value: propsel_cli::files::ElectionFile = serde_json::from_str(&emitted).unwrap();
        let election = value.to_election().unwrap();
        let mut again = propsel_cli::files::ElectionFile::from_election(&election);
        again.fixture = value.fixture.clone();
        again.reference = value.reference.clone();
        assert_eq!(propsel_cli::files::to_json(&again), emitted, "{args:?}");
        assert_eq!(propsel_cli::files::to_json(&value), emitted, "{args:?}");
    }
}

#[test]
fn random_fixture_matches_golden_file() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/random_seed1.json");
    assert_eq!(ok(&["fixture", "random", "--seed", "1"]), fs::read_to_string(golden).unwrap());
    assert_ne!(ok(&["fixture", "random", "--seed", "1"]), ok(&["fixture", "random", "--seed", "2"]));
}

#[test]
fn additive_and_weighted_files_round_trip() {
    let text = r#"{
  "schema": 1,
  "candidates": [
    {
      "id": "a",
      "weight": "3/2"
    },
    {
      "id": "b"
    }
  ],
  "voters": [
    {
      "id": "v1",
      "utilities": {
        "a": "2",
        "b": "1/3"
      }
    }
  ],
  "constraints": {
    "kind": "budget",
    "limit": "2"
  },
  "utility_mode": "additive"
}
"#;
    let file: propsel_cli::files::ElectionFile = serde_json::from_str(text).unwrap();
    let e = file.to_election().unwrap();
    assert_eq!(propsel_cli::files::to_json(&propsel_cli::files::ElectionFile::from_election(&e)), text);
}

#[test]
fn text_format() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "e.json", COMMITTEE);
    let out = ok(&["rule", &file, "pav", "--format", "text"]);
    assert!(out.contains("outcome: {a, c}"));
    assert!(out.contains("score: 3"));
}
