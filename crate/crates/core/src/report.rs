//! Verification records and their serialized forms (JSON, CSV, text table).

use std::collections::BTreeMap;
use std::fmt::{self, Display};
use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::Result;

/// Named parameters of one check (`n`, `q`, `order`, ...), kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Params(BTreeMap<String, ParamValue>);

/// A parameter value. Integers sort numerically, so `n = 10` follows `n = 9`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Text(String),
}

impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        ParamValue::Int(v as i64)
    }
}

impl From<u64> for ParamValue {
    fn from(v: u64) -> Self {
        ParamValue::Int(v as i64)
    }
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_string())
    }
}

impl From<String> for ParamValue {
    fn from(v: String) -> Self {
        ParamValue::Text(v)
    }
}

impl Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Text(v) => f.write_str(v),
        }
    }
}

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<ParamValue>) -> Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&ParamValue> {
        self.0.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &ParamValue)> {
        self.0.iter()
    }
}

impl Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Outcome of comparing two exact renderings of one identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_name: String,
    pub parameters: Params,
    pub lhs_rendered: String,
    pub rhs_rendered: String,
    pub pass: bool,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    /// Passes iff both sides render identically.
    pub fn compare(name: &str, parameters: Params, lhs: impl Display, rhs: impl Display) -> Self {
        let lhs_rendered = lhs.to_string();
        let rhs_rendered = rhs.to_string();
        VerificationReport {
            identity_name: name.to_string(),
            parameters,
            pass: lhs_rendered == rhs_rendered,
            lhs_rendered,
            rhs_rendered,
            elapsed_ms: 0,
        }
    }

    /// A report that failed before a comparison could be made.
    pub fn failure(name: &str, parameters: Params, reason: impl Display) -> Self {
        VerificationReport {
            identity_name: name.to_string(),
            parameters,
            lhs_rendered: format!("error: {reason}"),
            rhs_rendered: String::new(),
            pass: false,
            elapsed_ms: 0,
        }
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed_ms = start.elapsed().as_millis() as u64;
        self
    }

    fn sort_key(&self) -> (&str, &Params) {
        (&self.identity_name, &self.parameters)
    }
}

/// Sorts by identity name, then parameters.
pub fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let passed = reports.iter().filter(|r| r.pass).count();
        Summary {
            passed,
            failed: reports.len() - passed,
        }
    }
}

/// Top-level JSON document: `{ "config", "reports", "summary" }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDocument<C> {
    pub config: C,
    pub reports: Vec<VerificationReport>,
    pub summary: Summary,
}

impl<C: Serialize> ReportDocument<C> {
    pub fn new(config: C, mut reports: Vec<VerificationReport>) -> Self {
        sort_reports(&mut reports);
        let summary = Summary::of(&reports);
        ReportDocument {
            config,
            reports,
            summary,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

/// CSV with columns `identity_name, n, q, lhs, rhs, pass`.
pub fn write_csv<W: Write>(reports: &[VerificationReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["identity_name", "n", "q", "lhs", "rhs", "pass"])?;
    for r in reports {
        let field = |k: &str| r.parameters.get(k).map(|v| v.to_string()).unwrap_or_default();
        w.write_record([
            r.identity_name.as_str(),
            &field("n"),
            &field("q"),
            &r.lhs_rendered,
            &r.rhs_rendered,
            if r.pass { "true" } else { "false" },
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Column-aligned text table.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

impl Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols = self.headers.len();
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate().take(cols) {
                widths[i] = widths[i].max(cell.chars().count());
            }
        }
        let line = |f: &mut fmt::Formatter<'_>, cells: &[String]| -> fmt::Result {
            let padded: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{c:<w$}", w = widths[i]))
                .collect();
            writeln!(f, "{}", padded.join("  ").trim_end())
        };
        line(f, &self.headers)?;
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        line(f, &rule)?;
        for row in &self.rows {
            line(f, row)?;
        }
        Ok(())
    }
}

/// One line per report, for the default text output of `verify all`.
pub fn report_table(reports: &[VerificationReport]) -> Table {
    let mut t = Table::new(&["identity", "parameters", "lhs", "rhs", "pass"]);
    for r in reports {
        t.push(vec![
            r.identity_name.clone(),
            r.parameters.to_string(),
            r.lhs_rendered.clone(),
            r.rhs_rendered.clone(),
            if r.pass { "ok" } else { "FAIL" }.to_string(),
        ]);
    }
    t
}

/// Reports with `elapsed_ms` zeroed, for byte-for-byte comparisons.
pub fn without_timing(reports: &[VerificationReport]) -> Vec<VerificationReport> {
    reports
        .iter()
        .cloned()
        .map(|mut r| {
            r.elapsed_ms = 0;
            r
        })
        .collect()
}

/// Reads a JSON document back, with the configuration left untyped.
pub fn parse_document(text: &str) -> Result<ReportDocument<Value>> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_renderings_match() {
        let ok = VerificationReport::compare("x", Params::new(), "q^2", "q^2");
        assert!(ok.pass);
        let bad = VerificationReport::compare("x", Params::new(), "q^2", "q^2 + 0");
        assert!(!bad.pass);
    }

    #[test]
    fn sorting_is_numeric_in_n() {
        let mut reports: Vec<_> = [10usize, 2, 9]
            .iter()
            .map(|&n| VerificationReport::compare("b", Params::new().with("n", n), 1, 1))
            .chain(std::iter::once(VerificationReport::compare(
                "a",
                Params::new().with("n", 50usize),
                1,
                1,
            )))
            .collect();
        sort_reports(&mut reports);
        let order: Vec<String> = reports
            .iter()
            .map(|r| format!("{} {}", r.identity_name, r.parameters))
            .collect();
        assert_eq!(order, ["a n=50", "b n=2", "b n=9", "b n=10"]);
    }

    #[test]
    fn csv_columns() {
        let r = VerificationReport::compare(
            "squarefree-count",
            Params::new().with("n", 5usize).with("q", 3usize),
            "162",
            "162",
        );
        let mut buf = Vec::new();
        write_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "identity_name,n,q,lhs,rhs,pass\nsquarefree-count,5,3,162,162,true\n"
        );
    }

    #[test]
    fn json_round_trip() {
        let r = VerificationReport::compare("t", Params::new().with("n", 3usize), "q^6", "q^6");
        let doc = ReportDocument::new(serde_json::json!({"n_max": 3}), vec![r.clone()]);
        let back = parse_document(&doc.to_json().unwrap()).unwrap();
        assert_eq!(back.reports, vec![r]);
        assert_eq!(back.summary, Summary { passed: 1, failed: 0 });
    }

    #[test]
    fn table_alignment() {
        let mut t = Table::new(&["n", "value"]);
        t.push(vec!["10".into(), "q^2".into()]);
        assert_eq!(t.to_string(), "n   value\n--  -----\n10  q^2\n");
    }
}
