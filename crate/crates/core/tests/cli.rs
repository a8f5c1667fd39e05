use serde_json::Value;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gaugelike"))
}

fn write(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(cfg: &Path, out: &Path) -> i32 {
    bin().arg("run").arg(cfg).arg("--out").arg(out).output().unwrap().status.code().unwrap()
}

fn load(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

const CERT: &str = r#"{"task":"certificate","lattice":{"kind":"parallelogram","L":3,"row_shift":1},
    "model":{"kind":"pcm","couplings":{"jx":1,"jy":0.5}}}"#;
const CENSUS: &str = r#"{"task":"census","lattice":{"kind":"square_open","L":3},
    "model":{"kind":"pcm","couplings":{"jx":1,"jy":0.5}}}"#;

#[test]
fn certificate_run() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write(d.path(), "c.json", CERT);
    assert_eq!(run(&cfg, &d.path().join("out")), 0);
    let rec = load(&d.path().join("out/certificate.json"));
    assert_eq!(rec["payload"]["M"], 3);
    assert_eq!(rec["payload"]["bound"], 8);
    assert_eq!(rec["status"], "pass");
    assert!(rec["config_digest"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn census_run() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write(d.path(), "s.json", CENSUS);
    assert_eq!(run(&cfg, d.path()), 0);
    let rec = load(&d.path().join("census.json"));
    assert_eq!(rec["payload"]["M"], 1);
    assert_eq!(rec["payload"]["census"]["levels"][0]["multiplicity"], 2);
}

#[test]
fn config_and_budget_errors() {
    let d = tempfile::tempdir().unwrap();
    let missing = write(
        d.path(),
        "m.json",
        r#"{"task":"census","lattice":{"kind":"square_open"},"model":{"kind":"pcm"}}"#,
    );
    assert_eq!(run(&missing, &d.path().join("a")), 2);
    let rec = load(&d.path().join("a/census.json"));
    assert_eq!(rec["status"], "error");
    assert_eq!(rec["error"]["kind"], "config");

    let junk = write(d.path(), "j.json", r#"{"task":"census","bogus":true}"#);
    assert_eq!(run(&junk, &d.path().join("j")), 2);
    assert_eq!(load(&d.path().join("j/error.json"))["error"]["kind"], "config");

    let big = write(
        d.path(),
        "b.json",
        r#"{"task":"census","lattice":{"kind":"square_open","L":3},"model":{"kind":"pcm","couplings":{"jx":1,"jy":0.5}},
            "solver":{"max_total_dim":256}}"#,
    );
    assert_eq!(run(&big, &d.path().join("b")), 3);
    let rec = load(&d.path().join("b/census.json"));
    assert_eq!(rec["error"]["kind"], "budget");
}

#[test]
fn repeated_runs_are_identical() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write(d.path(), "s.json", CENSUS);
    assert_eq!(run(&cfg, &d.path().join("1")), 0);
    assert_eq!(run(&cfg, &d.path().join("2")), 0);
    let (a, b) = (load(&d.path().join("1/census.json")), load(&d.path().join("2/census.json")));
    assert_eq!(a["payload"].to_string(), b["payload"].to_string());
    assert_eq!(a["config_digest"], b["config_digest"]);
}

#[test]
fn sweep_collects_every_point() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write(d.path(), "s.json", CENSUS);
    let out = d.path().join("sw");
    let st = bin()
        .args(["sweep"])
        .arg(&cfg)
        .args(["--axis", "L=2,3", "--axis", "ratio=0.5,1.0", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    for i in 0..4 {
        assert_eq!(load(&out.join(format!("point_{i:03}.json")))["status"], "pass");
    }
    let agg = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(agg.lines().count(), 5);

    // the L=3, ratio=0.5 point must match a standalone run of the same config
    assert_eq!(run(&cfg, &d.path().join("single")), 0);
    let single = load(&d.path().join("single/census.json"));
    let point = load(&out.join("point_002.json"));
    assert_eq!(single["payload"].to_string(), point["payload"].to_string());
    assert_eq!(single["config_digest"], point["config_digest"]);
}

#[test]
fn sweep_isolates_failing_points() {
    let d = tempfile::tempdir().unwrap();
    let cfg_spec = write(
        d.path(),
        "e.json",
        r#"{"task":"spectrum","lattice":{"kind":"square_open","L":2},"model":{"kind":"pcm","couplings":{"jx":1,"jy":0.5}},
            "solver":{"max_total_dim":4096}}"#,
    );
    let out = d.path().join("sw");
    let st = bin()
        .arg("sweep")
        .arg(&cfg_spec)
        .args(["--axis", "L=2,3,4", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(3));
    let recs: Vec<Value> = (0..3).map(|i| load(&out.join(format!("point_{i:03}.json")))).collect();
    assert_eq!(recs[0]["status"], "pass");
    assert_eq!(recs[1]["status"], "pass");
    assert_eq!(recs[2]["error"]["kind"], "budget");
    assert!(out.join("point_000.csv").exists());
}
