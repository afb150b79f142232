//! Experiment reports: named tables, pass/fail verdicts, and two
//! serializations (CSV per table, and a single self-describing text
//! document that parses back).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let idx = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[idx].as_str()).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    /// Stable identifier, e.g. `dirichlet_bound`.
    pub name: String,
    /// Human-readable formula this verdict checks.
    pub check: String,
    pub pass: bool,
    /// Slack of the tightest instance, when meaningful.
    pub margin: Option<f64>,
    pub details: String,
}

impl Verdict {
    pub fn new(
        name: impl Into<String>,
        check: impl Into<String>,
        pass: bool,
        margin: Option<f64>,
        details: impl Into<String>,
    ) -> Self {
        Verdict {
            name: name.into(),
            check: check.into(),
            pass,
            margin,
            details: details.into(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    /// Echo of the manifest that produced this report, in original order.
    pub manifest_echo: Vec<(String, String)>,
    pub tables: Vec<Table>,
    pub verdicts: Vec<Verdict>,
    /// Wall-clock seconds per phase; excluded from determinism comparisons.
    pub timings: Vec<(String, f64)>,
}

impl Report {
    pub fn manifest_value(&self, key: &str) -> Option<&str> {
        self.manifest_echo
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// Single self-describing document. Timings are emitted but set apart so
    /// consumers can strip them when comparing runs.
    pub fn to_structured_text(&self) -> String {
        let mut out = String::new();
        out.push_str("# diolab report v1\n");
        out.push_str("[manifest]\n");
        for (k, v) in &self.manifest_echo {
            let _ = writeln!(out, "{k} = {v}");
        }
        for t in &self.tables {
            let _ = writeln!(out, "[table {}]", t.name);
            let _ = writeln!(out, "{}", t.columns.join(","));
            for row in &t.rows {
                let _ = writeln!(out, "{}", row.join(","));
            }
        }
        out.push_str("[verdicts]\n");
        for v in &self.verdicts {
            let margin = match v.margin {
                Some(m) => format!("{m}"),
                None => "-".to_string(),
            };
            let _ = writeln!(
                out,
                "{}|{}|{}|{}|{}",
                v.name,
                if v.pass { "pass" } else { "FAIL" },
                margin,
                v.check,
                v.details
            );
        }
        out.push_str("[timings]\n");
        for (k, secs) in &self.timings {
            let _ = writeln!(out, "{k} = {secs:.3}");
        }
        out.push_str("[end]\n");
        out
    }

    /// Same document with the volatile timing section removed.
    pub fn to_comparable_text(&self) -> String {
        let full = self.to_structured_text();
        match full.find("[timings]") {
            Some(pos) => format!("{}[end]\n", &full[..pos]),
            None => full,
        }
    }

    pub fn from_structured_text(text: &str) -> Result<Report> {
        let mut report = Report::default();
        #[derive(PartialEq)]
        enum Section {
            None,
            Manifest,
            Table,
            Verdicts,
            Timings,
        }
        let mut section = Section::None;
        let mut cur_table: Option<Table> = None;
        let mut want_header = false;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.starts_with('#') || line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                if let Some(t) = cur_table.take() {
                    report.tables.push(t);
                }
                if line == "[manifest]" {
                    section = Section::Manifest;
                } else if let Some(name) = line
                    .strip_prefix("[table ")
                    .and_then(|s| s.strip_suffix(']'))
                {
                    section = Section::Table;
                    cur_table = Some(Table {
                        name: name.to_string(),
                        columns: Vec::new(),
                        rows: Vec::new(),
                    });
                    want_header = true;
                } else if line == "[verdicts]" {
                    section = Section::Verdicts;
                } else if line == "[timings]" {
                    section = Section::Timings;
                } else if line == "[end]" {
                    section = Section::None;
                } else {
                    return Err(Error::MalformedReport(format!(
                        "unknown section at line {}",
                        lineno + 1
                    )));
                }
                continue;
            }
            match section {
                Section::Manifest => {
                    let (k, v) = split_kv(line, lineno)?;
                    report.manifest_echo.push((k, v));
                }
                Section::Table => {
                    let t = cur_table.as_mut().expect("inside table");
                    let cells: Vec<String> = line.split(',').map(|s| s.to_string()).collect();
                    if want_header {
                        t.columns = cells;
                        want_header = false;
                    } else {
                        if cells.len() != t.columns.len() {
                            return Err(Error::MalformedReport(format!(
                                "row width mismatch in table {} at line {}",
                                t.name,
                                lineno + 1
                            )));
                        }
                        t.rows.push(cells);
                    }
                }
                Section::Verdicts => {
                    let parts: Vec<&str> = line.splitn(5, '|').collect();
                    if parts.len() != 5 {
                        return Err(Error::MalformedReport(format!(
                            "bad verdict at line {}",
                            lineno + 1
                        )));
                    }
                    let margin = if parts[2] == "-" {
                        None
                    } else {
                        Some(parts[2].parse::<f64>().map_err(|_| {
                            Error::MalformedReport(format!("bad margin at line {}", lineno + 1))
                        })?)
                    };
                    report.verdicts.push(Verdict {
                        name: parts[0].to_string(),
                        pass: parts[1] == "pass",
                        margin,
                        check: parts[3].to_string(),
                        details: parts[4].to_string(),
                    });
                }
                Section::Timings => {
                    let (k, v) = split_kv(line, lineno)?;
                    report
                        .timings
                        .push((k, v.parse::<f64>().unwrap_or(f64::NAN)));
                }
                Section::None => {
                    return Err(Error::MalformedReport(format!(
                        "content outside any section at line {}",
                        lineno + 1
                    )));
                }
            }
        }
        if let Some(t) = cur_table.take() {
            report.tables.push(t);
        }
        Ok(report)
    }

    /// One CSV per table plus a verdicts CSV. Returns the written paths.
    pub fn emit_csv(&self, dir: &Path, prefix: &str) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.to_path_buf(),
            source: e,
        })?;
        let mut written = Vec::new();
        for t in &self.tables {
            let path = dir.join(format!("{prefix}_{}.csv", t.name));
            let mut body = t.columns.join(",");
            body.push('\n');
            for row in &t.rows {
                body.push_str(&row.join(","));
                body.push('\n');
            }
            fs::write(&path, body).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            written.push(path);
        }
        let path = dir.join(format!("{prefix}_verdicts.csv"));
        let mut body = String::from("name,pass,margin,check\n");
        for v in &self.verdicts {
            let margin = v.margin.map(|m| m.to_string()).unwrap_or_default();
            let _ = writeln!(
                body,
                "{},{},{},{}",
                v.name,
                if v.pass { "pass" } else { "FAIL" },
                margin,
                v.check.replace(',', ";")
            );
        }
        fs::write(&path, body).map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        })?;
        written.push(path);
        Ok(written)
    }
}

fn split_kv(line: &str, lineno: usize) -> Result<(String, String)> {
    match line.split_once('=') {
        Some((k, v)) => Ok((k.trim().to_string(), v.trim().to_string())),
        None => Err(Error::MalformedReport(format!(
            "expected key = value at line {}",
            lineno + 1
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> Report {
        Report {
            manifest_echo: vec![
                ("kind".into(), "best_approx".into()),
                ("seed".into(), "42".into()),
            ],
            tables: vec![Table {
                name: "best_approx".into(),
                columns: vec!["i".into(), "Y".into(), "M".into()],
                rows: vec![
                    vec!["1".into(), "1".into(), "4.1e-1±0".into()],
                    vec!["2".into(), "2".into(), "1.7e-1±0".into()],
                ],
            }],
            verdicts: vec![
                Verdict::new("dirichlet_bound", "M_i <= Y_{i+1}^{-n/m}", true, Some(0.25), "0 violations of 1"),
                Verdict::new("growth_step", "Y_{i+3^(m+n)} >= 2 Y_{i+1}", true, None, "not applicable"),
            ],
            timings: vec![("build".into(), 0.123)],
        }
    }

    #[test]
    fn structured_round_trip() {
        let r = sample_report();
        let text = r.to_structured_text();
        let back = Report::from_structured_text(&text).unwrap();
        assert_eq!(back.manifest_echo, r.manifest_echo);
        assert_eq!(back.verdicts, r.verdicts);
        assert_eq!(back.tables, r.tables);
    }

    #[test]
    fn comparable_text_strips_timings() {
        let r = sample_report();
        let cmp = r.to_comparable_text();
        assert!(!cmp.contains("[timings]"));
        assert!(cmp.contains("[verdicts]"));
    }

    #[test]
    fn csv_emission_counts_files() {
        let r = sample_report();
        let dir = tempfile::tempdir().unwrap();
        let files = r.emit_csv(dir.path(), "t").unwrap();
        // one table + verdicts
        assert_eq!(files.len(), 2);
        for f in files {
            assert!(f.exists());
        }
    }

    #[test]
    fn empty_verdicts_csv_has_header() {
        let mut r = sample_report();
        r.verdicts.clear();
        let dir = tempfile::tempdir().unwrap();
        let files = r.emit_csv(dir.path(), "t").unwrap();
        let verdicts = files.last().unwrap();
        let body = std::fs::read_to_string(verdicts).unwrap();
        assert_eq!(body, "name,pass,margin,check\n");
    }
}
