//! The golden scenario corpus: locating it, running every file in it, and
//! aggregating one report.

use anyhow::{Context, Result};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

use crate::report::{Report, SCHEMA};
use crate::scenario::{run_scenario_file, RunOptions};

pub const CORPUS_DIR_ENV: &str = "FAM_CORPUS_DIR";

/// Corpus directory: explicit flag, then the environment override, then the
/// copy shipped next to this crate.
pub fn corpus_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.to_path_buf();
    }
    if let Ok(dir) = std::env::var(CORPUS_DIR_ENV) {
        return PathBuf::from(dir);
    }
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus"))
}

pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("listing corpus directory {}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    Ok(files)
}

pub struct CorpusOutcome {
    pub reports: Vec<Report>,
}

impl CorpusOutcome {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.all_pass())
    }

    pub fn to_value(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "corpus": self.reports.iter().map(|r| r.to_value()).collect::<Vec<_>>(),
            "pass": self.all_pass(),
        })
    }

    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_value()).expect("valid json");
        text.push('\n');
        text
    }
}

pub fn run_corpus(dir: &Path, options: RunOptions) -> Result<CorpusOutcome> {
    let files = corpus_files(dir)?;
    if files.is_empty() {
        anyhow::bail!("no scenario files in {}", dir.display());
    }
    let mut reports = Vec::new();
    for file in files {
        reports.push(run_scenario_file(&file, options)?);
    }
    Ok(CorpusOutcome { reports })
}
