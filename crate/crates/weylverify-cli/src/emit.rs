use std::fmt::Write as _;

use serde::Serialize;
use weylverify::engine::{Status, VerificationReport};
use weylverify::rootdata::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

pub fn emit(reports: &[VerificationReport], format: Format) -> anyhow::Result<String> {
    match format {
        Format::Json => emit_json(reports),
        Format::Csv => emit_csv(reports),
        Format::Table => Ok(emit_table(reports)),
    }
}

pub fn emit_json(reports: &[VerificationReport]) -> anyhow::Result<String> {
    let mut out = serde_json::to_string_pretty(reports)?;
    out.push('\n');
    Ok(out)
}

#[derive(Serialize)]
struct CsvRow<'a> {
    family: u8,
    m: usize,
    n: usize,
    torus: String,
    status: Status,
    d_w: i64,
    d_w_closed: i64,
    candidates: usize,
    survivors: usize,
    group_survivors: usize,
    surplus: usize,
    exclusions: usize,
    filters_exact: bool,
    saturated: Option<bool>,
    saturated_bruteforce: Option<bool>,
    #[serde(rename = "final")]
    final_set: String,
    failures: &'a str,
}

fn weights_json(ws: &[Weight]) -> String {
    serde_json::to_string(ws).expect("weights serialize")
}

pub fn emit_csv(reports: &[VerificationReport]) -> anyhow::Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let joined: Vec<String> = reports.iter().map(|r| r.failures.join("; ")).collect();
    for (r, failures) in reports.iter().zip(&joined) {
        writer.serialize(CsvRow {
            family: r.instance.family,
            m: r.instance.m,
            n: r.instance.n,
            torus: r.instance.torus.to_string(),
            status: r.status,
            d_w: r.d_w,
            d_w_closed: r.d_w_closed,
            candidates: r.candidates.len(),
            survivors: r.survivors.len(),
            group_survivors: r.group_survivors.len(),
            surplus: r.surplus.len(),
            exclusions: r.exclusions.len(),
            filters_exact: r.filters_exact,
            saturated: r.saturated,
            saturated_bruteforce: r.saturated_bruteforce,
            final_set: weights_json(&r.final_set),
            failures,
        })?;
    }
    if reports.is_empty() {
        // serialize() writes the header lazily; keep it for empty runs
        writer.write_record(CSV_HEADER)?;
    }
    Ok(String::from_utf8(writer.into_inner()?)?)
}

pub const CSV_HEADER: [&str; 17] = [
    "family",
    "m",
    "n",
    "torus",
    "status",
    "d_w",
    "d_w_closed",
    "candidates",
    "survivors",
    "group_survivors",
    "surplus",
    "exclusions",
    "filters_exact",
    "saturated",
    "saturated_bruteforce",
    "final",
    "failures",
];

fn opt(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "-",
    }
}

pub fn emit_table(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>6} {:>3} {:>3} {:<10} {:<13} {:>4} {:>6} {:>7} {:>9}",
        "family", "m", "n", "torus", "status", "d_W", "|final|", "surplus", "saturated"
    );
    for r in reports {
        let m = if r.instance.m == 0 { "-".to_string() } else { r.instance.m.to_string() };
        let _ = writeln!(
            out,
            "{:>6} {:>3} {:>3} {:<10} {:<13} {:>4} {:>6} {:>7} {:>9}",
            r.instance.family,
            m,
            r.instance.n,
            r.instance.torus.to_string(),
            r.status.to_string(),
            r.d_w,
            r.final_set.len(),
            r.surplus.len(),
            opt(r.saturated),
        );
        for f in &r.failures {
            let _ = writeln!(out, "       ! {f}");
        }
    }
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let _ = writeln!(
        out,
        "{} reports: {} PASS, {} SURPLUS, {} FAIL, {} NON-SPHERICAL",
        reports.len(),
        count(Status::Pass),
        count(Status::Surplus),
        count(Status::Fail),
        count(Status::NonSpherical)
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use weylverify::catalog::{FamilyInstance, TorusChoice};
    use weylverify::engine::verify_instance;

    fn sample() -> Vec<VerificationReport> {
        vec![
            verify_instance(&FamilyInstance::full(1, 3, 3)).unwrap(),
            verify_instance(&FamilyInstance::single(5, 5, TorusChoice::Param(-1))).unwrap(),
        ]
    }

    #[test]
    fn json_round_trip() {
        let reports = sample();
        let text = emit_json(&reports).unwrap();
        let back: Vec<VerificationReport> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, reports);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v[0]["status"], "PASS");
        assert_eq!(v[0]["final"][0], serde_json::json!([-1, 2, -1, -1, 2, -1]));
        assert_eq!(v[0]["final"][1], serde_json::json!([2, -1, 0, 2, -1, 0]));
        assert_eq!(v[1]["instance"]["torus"], "param:-1");
        assert_eq!(v[1]["exclusions"][0]["es"], serde_json::json!([true, true, true, true]));
    }

    #[test]
    fn csv_header_and_rows() {
        let text = emit_csv(&sample()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(lines.count(), 2);
        let empty = emit_csv(&[]).unwrap();
        assert_eq!(empty.trim_end(), CSV_HEADER.join(","));
    }

    #[test]
    fn table_summary() {
        let text = emit_table(&sample());
        assert!(text.lines().last().unwrap().starts_with("2 reports: 2 PASS"));
    }
}
