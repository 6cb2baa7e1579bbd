use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn natext(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_natext"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn natext")
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<String> {
    let body = fs::read_to_string(path).unwrap();
    let mut lines = body.lines();
    assert!(lines.next().unwrap().starts_with("# manifest: "));
    lines.skip(1).map(str::to_string).collect()
}

#[test]
fn generate_then_stats() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&natext(d, &["generate", "--max", "1000000", "--out", "c.nt"]));
    assert!(d.join("c.nt.idx").exists());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("c.nt.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["corpus"]["max_position"], 1_000_000);

    ok(&natext(d, &["stats", "--in", "c.nt", "--checkpoints", "1e1..1e6", "--out", "out"]));
    let rows = csv_rows(&d.join("out/dictionary.csv"));
    assert_eq!(rows.last().unwrap(), "1000000,230,0.00023");
    assert_eq!(rows.first().unwrap(), "10,3,0.3");
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("out/stats.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["outputs"][0], "dictionary.csv");
    assert_eq!(
        manifest["corpus"]["sha256"],
        manifest_digest(&d.join("c.nt.manifest.json"))
    );
    assert!(d.join("out/heaps_fit.json").exists());
    assert!(d.join("out/entropy.csv").exists());

    let phrase = ok(&natext(d, &["phrase", "--in", "c.nt", "--query", "1100 1100"]));
    let v: serde_json::Value = serde_json::from_str(phrase.trim()).unwrap();
    assert_eq!(v["count"], 1);
    assert_eq!(v["first_position"], 8);
}

fn manifest_digest(path: &Path) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    v["corpus"]["sha256"].clone()
}

#[test]
fn analyses_on_small_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&natext(d, &["generate", "--max", "20000", "--out", "s.ntp", "--format", "packed"]));

    ok(&natext(d, &["symmetry", "--in", "s.ntp", "--start", "2", "--checkpoints", "10", "--k", "4"]));
    let rows = csv_rows(&d.join("symmetry.csv"));
    assert_eq!(rows, ["2,10,4,6,2,0.3333333333333333,packed,false"]);

    ok(&natext(d, &["zipf", "--in", "s.ntp", "--checkpoints", "10,100"]));
    let ranks = csv_rows(&d.join("ranks_10.csv"));
    assert_eq!(ranks, ["1,10,4,0.4", "2,1100,3,0.3", "3,1010,2,0.2"]);
    assert!(d.join("ranks_100.csv").exists());

    ok(&natext(d, &["compress", "--in", "s.ntp", "--checkpoints", "1000,10000", "--out", "cr"]));
    assert_eq!(csv_rows(&d.join("cr/compression.csv")).len(), 2);

    let out = ok(&natext(d, &["msd", "--in", "s.ntp", "--word", "1010", "--tmax", "1000"]));
    assert!(out.contains("gamma1="));
    let rows = csv_rows(&d.join("msd_1010.csv"));
    assert_eq!(rows.first().unwrap().split(',').next(), Some("1"));
    assert_eq!(rows.last().unwrap().split(',').next(), Some("1000"));

    ok(&natext(d, &["xmsd", "--in", "s.ntp", "--words", "10,1010"]));
    assert!(d.join("xmsd_10_1010.csv").exists());
    assert!(d.join("xmsd_10_1010_fit.json").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = natext(d, &["msd", "--word", "doesnotparse"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed"));
    assert_eq!(natext(d, &["stats", "--in", "c.nt", "--checkpoints", "0"]).status.code(), Some(2));
    assert_eq!(natext(d, &["frobnicate"]).status.code(), Some(2));

    let out = natext(d, &["stats", "--in", "missing.nt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("open corpus"));

    ok(&natext(d, &["generate", "--max", "100", "--out", "t.nt"]));
    let out = natext(d, &["stats", "--in", "t.nt", "--checkpoints", "1000"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn report_small() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = Command::new(env!("CARGO_BIN_EXE_natext"))
        .current_dir(d)
        .env("NATEXT_TMPDIR", d.join("scratch"))
        .args(["report", "--max", "20000", "--out", "rep"])
        .output()
        .unwrap();
    ok(&out);
    let checks: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("rep/report.json")).unwrap()).unwrap();
    let first = &checks[0];
    assert_eq!(first["name"], "dictionary size d(10)");
    assert_eq!(first["pass"], true);
    assert!(fs::read_to_string(d.join("rep/summary.md")).unwrap().contains("| check |"));
    // The scratch corpus is removed afterwards.
    assert_eq!(fs::read_dir(d.join("scratch")).unwrap().count(), 0);
}
