use std::process::{Command, Output};

use gfcount::report::{parse_document, sort_reports};
use gfcount::verify::ReferenceValues;

fn gfcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfcount"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const SMALL: [&str; 6] = ["--n-max", "4", "--prime", "2", "--prime", "3"];

fn small(cmd: &[&str]) -> Output {
    let args: Vec<&str> = cmd.iter().chain(SMALL.iter()).copied().collect();
    gfcount(&args)
}

#[test]
fn passing_run_exits_zero() {
    let out = small(&["verify", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains(" passed, 0 failed"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["tori", "count", "--bogus"],
        vec!["--prime", "4", "tori", "count"],
        vec!["--n-max", "0", "tori", "count"],
        vec!["--budget", "1", "sqfree", "count"],
        vec!["frobnicate"],
        vec!["verify", "all", "--fixture", "/nonexistent/fixture.json"],
    ] {
        assert_eq!(gfcount(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn corrupted_fixture_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let mut values = ReferenceValues::default();
    values.sequence_a_prefix[5] += 1;
    std::fs::write(&path, serde_json::to_string(&values).unwrap()).unwrap();
    let out = small(&["verify", "all", "--fixture", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("quad-excess-finite-n"), "{err}");
    assert!(err.contains("sequence-a-prefix"), "{err}");
}

#[test]
fn unknown_fixture_field_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("extra.json");
    std::fs::write(&path, r#"{"not_a_constant": 3}"#).unwrap();
    let out = small(&["verify", "all", "--fixture", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_output_is_reproducible() {
    let a = small(&["verify", "all", "--format", "json"]);
    let b = small(&["verify", "all", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let doc = parse_document(&stdout(&a)).unwrap();
    assert!(doc.reports.iter().all(|r| r.pass && r.elapsed_ms == 0));
    let mut sorted = doc.reports.clone();
    sort_reports(&mut sorted);
    assert_eq!(doc.reports, sorted);
}

#[test]
fn csv_header_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tori.csv");
    let out = small(&["tori", "count", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("identity_name,n,"), "{text}");
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn squarefree_count_table() {
    let out = gfcount(&["sqfree", "count", "--n-max", "5", "--prime", "3"]);
    let text = stdout(&out);
    let row = text.lines().find(|l| l.starts_with("5 ")).unwrap();
    let cells: Vec<&str> = row.split("  ").map(str::trim).filter(|c| !c.is_empty()).collect();
    assert_eq!(cells, ["5", "q^5 - q^4", "q^5 - q^4", "162", "162"]);
}

#[test]
fn quad_excess_small_cases() {
    let text = stdout(&gfcount(&["sqfree", "quad-excess", "--n-max", "3", "--prime", "2"]));
    let row = |n: &str| text.lines().find(|l| l.starts_with(n)).unwrap().to_string();
    assert!(row("2 ").contains(" 0 "));
    assert!(row("3 ").contains("1 / q"));
    assert!(row("3 ").trim_end().ends_with("1/2"));
}

#[test]
fn moebius_sums_vanish() {
    let out = gfcount(&["sqfree", "mu-sum", "--n-max", "6", "--prime", "2", "--format", "json"]);
    let doc = parse_document(&stdout(&out)).unwrap();
    let symbolic: Vec<_> = doc
        .reports
        .iter()
        .filter(|r| r.identity_name == "mobius-signed-sum")
        .collect();
    assert_eq!(symbolic.len(), 6);
    for r in symbolic.iter().skip(1) {
        assert_eq!(r.lhs_rendered, "0");
    }
}

#[test]
fn tori_tables() {
    let count = stdout(&gfcount(&["tori", "count", "--n-max", "5"]));
    assert!(count.lines().any(|l| l.starts_with("5 ") && l.contains("q^20")), "{count}");

    let types = stdout(&gfcount(&["tori", "types", "--n", "3"]));
    assert!(types.contains("(2,1)"));
    assert!(types.contains("1/2*q^6 - 1/2*q^3"));
    let total = types.lines().find(|l| l.starts_with("total")).unwrap();
    assert!(total.contains("q^6") && total.contains("64"));

    let bias = stdout(&gfcount(&["tori", "bias", "--n-max", "4"]));
    assert!(bias.lines().any(|l| l.starts_with("4 ") && l.contains("q^6")), "{bias}");
}

#[test]
fn global_flags_after_subcommand() {
    let a = gfcount(&["tori", "euler", "--n-max", "6"]);
    let b = gfcount(&["--n-max", "6", "tori", "euler"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
