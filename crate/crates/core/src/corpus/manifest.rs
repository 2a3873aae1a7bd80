use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectManifestEntry {
    pub project_id: String,
    /// Local checkout; relative paths are resolved against the manifest's directory.
    pub local_path: PathBuf,
    pub stars: u64,
    pub is_fork: bool,
    pub size_bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelectionCriteria {
    pub min_stars: u64,
    pub max_size_bytes: u64,
}

impl Default for SelectionCriteria {
    fn default() -> Self {
        SelectionCriteria { min_stars: 5, max_size_bytes: 300 << 20 }
    }
}

impl SelectionCriteria {
    pub fn accepts(&self, e: &ProjectManifestEntry) -> bool {
        e.stars >= self.min_stars && !e.is_fork && e.size_bytes <= self.max_size_bytes
    }
}

pub fn select_projects(entries: &[ProjectManifestEntry], criteria: &SelectionCriteria) -> Vec<ProjectManifestEntry> {
    entries.iter().filter(|e| criteria.accepts(e)).cloned().collect()
}

/// Reads a JSONL manifest, one entry per line; blank lines are skipped.
pub fn read_manifest(path: &Path) -> Result<Vec<ProjectManifestEntry>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let entry =
            serde_json::from_str(&line).map_err(|e| Error::data(format!("{}:{}: bad manifest entry: {e}", path.display(), i + 1)))?;
        out.push(entry);
    }
    Ok(out)
}

pub fn write_manifest(out: &mut impl Write, entries: &[ProjectManifestEntry]) -> std::io::Result<()> {
    for e in entries {
        writeln!(out, "{}", serde_json::to_string(e)?)?;
    }
    Ok(())
}

pub fn resolve_paths(entries: &mut [ProjectManifestEntry], base: &Path) {
    for e in entries {
        if e.local_path.is_relative() {
            e.local_path = base.join(&e.local_path);
        }
    }
}
