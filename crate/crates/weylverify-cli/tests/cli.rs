use std::process::{Command, Output};

use weylverify::catalog::{FamilyInstance, TorusChoice};
use weylverify::engine::{self, Status, VerificationReport};

fn weylverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weylverify"))
        .args(args)
        .env_remove("WEYLVERIFY_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn first_three_families_pass() {
    let out = weylverify(&["--families", "1,2,3", "--max-size", "6", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let reports: Vec<VerificationReport> = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r.status == Status::Pass));
    assert!(reports.iter().all(|r| r.final_set.len() as i64 == r.d_w));
}

#[test]
fn family5_parameter_sweep() {
    let out = weylverify(&["--families", "5", "--max-size", "5", "--torus-range", "-2..2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let reports: Vec<VerificationReport> = serde_json::from_str(&stdout(&out)).unwrap();
    let params: Vec<&VerificationReport> =
        reports.iter().filter(|r| r.instance.n == 5 && matches!(r.instance.torus, TorusChoice::Param(_))).collect();
    assert_eq!(params.len(), 5);
    assert!(params.iter().all(|r| r.status == Status::Pass && r.exclusions.len() == 1));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["--max-size", "1"][..],
        &["--box", "0"],
        &["--families", "0"],
        &["--format", "xml"],
        &["--torus-range", "3..1"],
        &["--jobs", "0"],
    ] {
        let out = weylverify(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_weylverify")).env("WEYLVERIFY_JOBS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["--families", "1,6,8", "--max-size", "4", "--format", "json"];
    let a = weylverify(&[&args[..], &["--jobs", "1"]].concat());
    let b = weylverify(&[&args[..], &["--jobs", "4"]].concat());
    let c = Command::new(env!("CARGO_BIN_EXE_weylverify")).args(args).env("WEYLVERIFY_JOBS", "3").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let table = ["--families", "7", "--max-size", "4"];
    assert_eq!(weylverify(&table).stdout, weylverify(&table).stdout);
}

#[test]
fn json_round_trips_and_matches_library() {
    let out = weylverify(&["--families", "1", "--max-size", "3", "--format", "json"]);
    let text = stdout(&out);
    let reports: Vec<VerificationReport> = serde_json::from_str(&text).unwrap();
    let mut again = serde_json::to_string_pretty(&reports).unwrap();
    again.push('\n');
    assert_eq!(again, text);

    let direct = engine::verify_instance(&FamilyInstance::full(1, 3, 3)).unwrap();
    let from_cli = reports.iter().find(|r| r.instance == direct.instance).unwrap();
    assert_eq!(*from_cli, direct);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let entry = v.as_array().unwrap().iter().find(|r| r["instance"]["m"] == 3 && r["instance"]["n"] == 3).unwrap();
    assert!(entry["final"].as_array().unwrap().contains(&serde_json::json!([2, -1, 0, 2, -1, 0])));
    for key in ["instance", "d_w", "candidates", "survivors", "exclusions", "final", "status"] {
        assert!(entry.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn csv_has_header_and_one_row_per_instance() {
    let out = weylverify(&["--families", "2", "--max-size", "4", "--format", "csv"]);
    let text = stdout(&out);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header[..5], ["family", "m", "n", "torus", "status"]);
    assert!(header.contains(&"final".to_string()));
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| &r[4] == "PASS"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = weylverify(&["--families", "3", "--max-size", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().last().unwrap().contains("0 FAIL"));

    let missing = dir.path().join("no/such/dir/report.json");
    let out = weylverify(&["--families", "3", "--max-size", "4", "--out", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}
