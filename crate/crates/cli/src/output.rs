//! Tables and machine-readable reports in three output formats.

use std::fmt::Write as _;

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Json,
    Csv,
    #[default]
    Pretty,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Table { title: title.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// The result of one command. `ok == false` maps to exit code 1.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub ok: bool,
    pub tables: Vec<Table>,
    pub data: Value,
    pub messages: Vec<String>,
}

impl Report {
    pub fn new(command: &str, ok: bool, data: impl Serialize) -> Result<Self> {
        Ok(Report { command: command.into(), ok, tables: Vec::new(), data: serde_json::to_value(data)?, messages: Vec::new() })
    }

    pub fn table(mut self, t: Table) -> Self {
        self.tables.push(t);
        self
    }

    pub fn message(mut self, m: impl Into<String>) -> Self {
        self.messages.push(m.into());
        self
    }

    pub fn render(&self, emit: Emit) -> Result<String> {
        match emit {
            Emit::Json => {
                let v = serde_json::json!({
                    "command": self.command,
                    "status": if self.ok { "pass" } else { "fail" },
                    "messages": self.messages,
                    "result": self.data,
                });
                Ok(serde_json::to_string_pretty(&v)? + "\n")
            }
            Emit::Csv => {
                let mut out = String::new();
                for (i, t) in self.tables.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    writeln!(out, "# {}", t.title)?;
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(&t.columns)?;
                    for r in &t.rows {
                        w.write_record(r)?;
                    }
                    out.push_str(&String::from_utf8(w.into_inner()?)?);
                }
                Ok(out)
            }
            Emit::Pretty => {
                let mut out = String::new();
                for t in &self.tables {
                    out.push_str(&pretty(t));
                    out.push('\n');
                }
                for m in &self.messages {
                    writeln!(out, "{m}")?;
                }
                writeln!(out, "{}: {}", self.command, if self.ok { "PASS" } else { "FAIL" })?;
                Ok(out)
            }
        }
    }
}

fn pretty(t: &Table) -> String {
    let width = |s: &str| s.chars().count();
    let mut widths: Vec<usize> = t.columns.iter().map(|c| width(c)).collect();
    for r in &t.rows {
        for (w, x) in widths.iter_mut().zip(r) {
            *w = (*w).max(width(x));
        }
    }
    let line = |cells: &[String]| -> String {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{}{}", " ".repeat(w - width(c)), c))
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = format!("{}\n", t.title);
    out.push_str(&line(&t.columns));
    out.push_str(&line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>()));
    for r in &t.rows {
        out.push_str(&line(r));
    }
    out
}
