//! CSV tables with a JSON metadata sidecar.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

/// Header plus rows of already formatted cells; an empty cell marks a failed point.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to(&self, w: impl Write) -> Result<(), CliError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Shortest round-trip formatting; `None` becomes an empty cell.
pub fn cell(x: Option<f64>) -> String {
    x.map(|v| format!("{v:?}")).unwrap_or_default()
}

#[derive(Debug, Serialize)]
struct Sidecar<'a> {
    command: &'a str,
    scenario: &'a str,
    seed: u64,
    engine: String,
    git_rev: String,
    resolved_config: &'a RunConfig,
}

fn git_rev() -> String {
    std::process::Command::new("git")
        .args(["rev-parse", "--short", "HEAD"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .unwrap_or_else(|| "unknown".into())
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

/// Writes the table to `out` and its sidecar next to it, or the table alone to stdout.
pub fn emit(table: &Table, out: Option<&Path>, command: &str, seed: u64, cfg: &RunConfig) -> Result<(), CliError> {
    let Some(path) = out else {
        return table.write_to(std::io::stdout().lock());
    };
    table.write_to(std::fs::File::create(path)?)?;
    let meta = Sidecar {
        command,
        scenario: cfg.scenario.name(),
        seed,
        engine: format!("hqh {}", env!("CARGO_PKG_VERSION")),
        git_rev: git_rev(),
        resolved_config: cfg,
    };
    let text = serde_json::to_string_pretty(&meta).map_err(|e| CliError::Io(e.to_string()))?;
    std::fs::write(sidecar_path(path), text + "\n")?;
    Ok(())
}
