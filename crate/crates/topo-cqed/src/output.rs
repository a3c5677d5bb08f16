//! CSV tables and the JSON sidecar written next to them.

use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::RunConfig;

/// Twelve significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

/// One CSV file. `suffix` names secondary tables: the main output
/// `run.csv` gets a sibling `run_<suffix>.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub suffix: Option<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            suffix: None,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_header(header: Vec<String>) -> Self {
        Self {
            suffix: None,
            header,
            rows: Vec::new(),
        }
    }

    pub fn named(mut self, suffix: impl Into<String>) -> Self {
        self.suffix = Some(suffix.into());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn path_for(&self, main: &Path) -> PathBuf {
        match &self.suffix {
            None => main.to_path_buf(),
            Some(s) => {
                let stem = main.file_stem().and_then(|x| x.to_str()).unwrap_or("run");
                main.with_file_name(format!("{stem}_{s}.csv"))
            }
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)
            .with_context(|| format!("creating {}", path.display()))?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Column index by header name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

/// What a recipe produced.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub tables: Vec<Table>,
    /// Derived numbers recorded in the sidecar.
    pub summary: serde_json::Value,
    /// False when a check inside the recipe failed.
    pub ok: bool,
}

impl Artifacts {
    pub fn new(tables: Vec<Table>, summary: serde_json::Value) -> Self {
        Self {
            tables,
            summary,
            ok: true,
        }
    }
}

#[derive(Serialize)]
struct Sidecar<'a> {
    experiment: &'a str,
    version: &'a str,
    seed: u64,
    wall_time_s: f64,
    files: Vec<String>,
    parameters: &'a RunConfig,
    summary: &'a serde_json::Value,
}

pub fn sidecar_path(main: &Path) -> PathBuf {
    main.with_extension("json")
}

/// Write every table and the sidecar; returns the paths written.
pub fn write_all(
    main: &Path,
    experiment: &str,
    cfg: &RunConfig,
    seed: u64,
    artifacts: &Artifacts,
    wall: Duration,
) -> Result<Vec<PathBuf>> {
    if let Some(dir) = main.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut written = Vec::new();
    for t in &artifacts.tables {
        let p = t.path_for(main);
        t.write(&p)?;
        written.push(p);
    }
    let side = Sidecar {
        experiment,
        version: env!("CARGO_PKG_VERSION"),
        seed,
        wall_time_s: wall.as_secs_f64(),
        files: written
            .iter()
            .map(|p| p.file_name().unwrap_or_default().to_string_lossy().into_owned())
            .collect(),
        parameters: cfg,
        summary: &artifacts.summary,
    };
    let sp = sidecar_path(main);
    let text = serde_json::to_string_pretty(&side)?;
    std::fs::write(&sp, text + "\n").with_context(|| format!("writing {}", sp.display()))?;
    written.push(sp);
    Ok(written)
}
