//! Frozen F1 results. Set `CALMINE_BLESS=1` to rewrite the files from the oracle.

use std::path::PathBuf;

use calmine::fixtures::{f1, june_2015};
use calmine::metrics::evaluate;
use calmine::oracle::{emit_goldens, f1_cases, oracle_evaluate, parse_goldens, render_outcome};
use calmine::report::{build_report, build_report_with, render_json, ReportOptions};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// Reads a frozen file, first rewriting it from `fresh` when blessing.
fn frozen(name: &str, fresh: impl FnOnce() -> String) -> String {
    let path = data(name);
    if std::env::var_os("CALMINE_BLESS").is_some() {
        std::fs::write(&path, fresh()).unwrap();
    }
    std::fs::read_to_string(&path).unwrap()
}

fn golden_text() -> String {
    frozen("f1.golden", || emit_goldens(&f1(), &f1_cases()))
}

fn oracle_report(paper_exact: bool) -> String {
    let opts = ReportOptions { paper_exact, ..ReportOptions::new(june_2015()) };
    render_json(&build_report_with(&f1(), &opts, oracle_evaluate).unwrap())
}

fn engine_report(paper_exact: bool) -> String {
    let opts = ReportOptions { paper_exact, ..ReportOptions::new(june_2015()) };
    render_json(&build_report(&f1(), &opts).unwrap())
}

#[test]
fn oracle_still_produces_the_frozen_file() {
    assert_eq!(emit_goldens(&f1(), &f1_cases()), golden_text());
}

#[test]
fn engine_reproduces_every_golden_line() {
    let snap = f1();
    let lines = parse_goldens(&golden_text()).unwrap();
    let cases = f1_cases();
    assert_eq!(lines.len(), cases.len());
    for (case, line) in cases.iter().zip(&lines) {
        assert_eq!(case.name, line.name);
        let got = render_outcome(&evaluate(&snap, case.metric, &case.params));
        assert_eq!(got, line.json, "{}", case.name);
    }
}

#[test]
fn engine_report_matches_frozen_oracle_report() {
    let want = frozen("f1_report.json", || oracle_report(false));
    assert_eq!(oracle_report(false), want);
    assert_eq!(engine_report(false), want);
}

#[test]
fn engine_paper_exact_report_matches_frozen_oracle_report() {
    let want = frozen("f1_report_paper_exact.json", || oracle_report(true));
    assert_eq!(oracle_report(true), want);
    assert_eq!(engine_report(true), want);
}
