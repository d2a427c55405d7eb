//! Tab-separated reports with a comment preamble.

use std::fmt::Write as _;

use qg_core::checks::{Check, Outcome};

/// Twelve significant digits, printed in the shortest form that reads back
/// to the rounded value.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let a = rounded.abs();
    if (1e-3..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub struct Report {
    preamble: Vec<String>,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    failed: bool,
}

impl Report {
    pub fn new(command: &str, digest: &str, path: &str, params: &[(&str, String)]) -> Self {
        let mut preamble = vec![format!("qg {command}"), format!("input {path} sha256:{digest}")];
        for (k, v) in params {
            preamble.push(format!("param {k}={v}"));
        }
        Report { preamble, header: Vec::new(), rows: Vec::new(), failed: false }
    }

    /// Report with the `kind name lhs relation rhs status` layout.
    pub fn checks(command: &str, digest: &str, path: &str, params: &[(&str, String)]) -> Self {
        let mut r = Report::new(command, digest, path, params);
        r.header = vec!["kind", "name", "lhs", "relation", "rhs", "status"];
        r
    }

    pub fn set_header(&mut self, header: Vec<&'static str>) {
        self.header = header;
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.preamble.push(line.into());
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn fail(&mut self) {
        self.failed = true;
    }

    pub fn failed(&self) -> bool {
        self.failed
    }

    pub fn value(&mut self, name: &str, v: impl Into<String>) {
        self.rows.push(vec!["value".into(), name.into(), v.into(), String::new(), String::new(), String::new()]);
    }

    pub fn check(&mut self, c: &Check) {
        let (lhs, rhs) = (num(c.lhs), num(c.rhs));
        let (lhs, rhs, status) = match &c.outcome {
            Outcome::Pass => (lhs, rhs, "PASS".to_string()),
            Outcome::Fail => {
                self.failed = true;
                (lhs, rhs, "FAIL".to_string())
            }
            Outcome::Skipped(why) => (String::new(), String::new(), format!("SKIP {why}")),
        };
        self.rows.push(vec!["check".into(), c.name.clone(), lhs, c.relation.to_string(), rhs, status]);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for p in &self.preamble {
            writeln!(out, "# {p}").unwrap();
        }
        writeln!(out, "{}", self.header.join("\t")).unwrap();
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|c| c.replace(['\t', '\n'], " ")).collect();
            writeln!(out, "{}", cells.join("\t")).unwrap();
        }
        out
    }
}
