use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use super::manifest::ProjectManifestEntry;
use crate::apiseq::{build_import_table, extract_module, ProjectModules};
use crate::desc::extract_description;
use crate::error::{Error, Result};
use crate::pipeline::DescApiPair;
use crate::pysrc::{decode_file, parse_source, ParsedModule};

pub const SOURCE_EXTENSION: &str = "py";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MiningStats {
    pub projects: usize,
    pub files_seen: usize,
    pub parsed_ok: usize,
    pub encoding_errors: usize,
    pub syntax_errors: usize,
    pub functions_seen: usize,
    pub functions_with_apiseq: usize,
}

impl MiningStats {
    fn add(&mut self, o: &MiningStats) {
        self.projects += o.projects;
        self.files_seen += o.files_seen;
        self.parsed_ok += o.parsed_ok;
        self.encoding_errors += o.encoding_errors;
        self.syntax_errors += o.syntax_errors;
        self.functions_seen += o.functions_seen;
        self.functions_with_apiseq += o.functions_with_apiseq;
    }

    pub fn to_text(&self) -> String {
        format!(
            "projects\t{}\nfiles_seen\t{}\nparsed_ok\t{}\nencoding_errors\t{}\nsyntax_errors\t{}\nfunctions_seen\t{}\nfunctions_with_apiseq\t{}\n",
            self.projects,
            self.files_seen,
            self.parsed_ok,
            self.encoding_errors,
            self.syntax_errors,
            self.functions_seen,
            self.functions_with_apiseq
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MineOutput {
    pub records: Vec<DescApiPair>,
    pub stats: MiningStats,
}

struct SourceFile {
    project: usize,
    abs: PathBuf,
    rel: String,
}

/// Source files of one checkout as `/`-separated relative paths, sorted.
fn list_sources(root: &Path) -> Result<Vec<(PathBuf, String)>> {
    let meta = std::fs::metadata(root).map_err(|e| Error::io(root, e))?;
    if !meta.is_dir() {
        return Err(Error::io(root, std::io::Error::new(std::io::ErrorKind::NotADirectory, "project path is not a directory")));
    }
    let mut out = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).to_path_buf();
            Error::io(path, e.into())
        })?;
        if !entry.file_type().is_file() || entry.path().extension().is_none_or(|x| x != SOURCE_EXTENSION) {
            continue;
        }
        let rel = entry.path().strip_prefix(root).expect("walk stays under root");
        let rel: Vec<String> = rel.components().map(|c| c.as_os_str().to_string_lossy().into_owned()).collect();
        out.push((entry.into_path(), rel.join("/")));
    }
    out.sort_by(|a, b| a.1.cmp(&b.1));
    Ok(out)
}

/// Pairs of one decoded file plus its contribution to the statistics.
/// Decode and parse failures are counted, not returned.
pub fn mine_file(bytes: &[u8], rel_path: &str, project_id: &str, modules: &ProjectModules) -> (Vec<DescApiPair>, MiningStats) {
    let mut stats = MiningStats { files_seen: 1, ..MiningStats::default() };
    let parsed = decode_file(bytes, rel_path).and_then(|text| parse_source(&text, rel_path));
    let module = match parsed {
        Ok(m) => m,
        Err(Error::Encoding { .. }) => {
            stats.encoding_errors = 1;
            return (Vec::new(), stats);
        }
        Err(_) => {
            stats.syntax_errors = 1;
            return (Vec::new(), stats);
        }
    };
    stats.parsed_ok = 1;
    stats.functions_seen = module.functions.len();
    let pairs = module_pairs(&module, project_id, modules);
    stats.functions_with_apiseq = pairs.len();
    (pairs, stats)
}

/// Pairs of a parsed file: one per function or method with a nonempty API
/// sequence, in source order.
pub fn module_pairs(module: &ParsedModule, project_id: &str, modules: &ProjectModules) -> Vec<DescApiPair> {
    let table = build_import_table(module, modules);
    let seqs = extract_module(module, &table);
    module
        .functions
        .iter()
        .zip(seqs)
        .filter(|(_, apiseq)| !apiseq.is_empty())
        .map(|(unit, apiseq)| DescApiPair {
            desc: extract_description(unit).text,
            apiseq,
            project: project_id.to_string(),
            path: module.file_path.clone(),
            qualname: unit.qualname.clone(),
        })
        .collect()
}

/// Mines every project with `workers` threads. Records come out ordered by
/// project id, relative path and definition offset regardless of the
/// thread count.
pub fn mine(entries: &[ProjectManifestEntry], workers: usize) -> Result<MineOutput> {
    let mut order: Vec<&ProjectManifestEntry> = entries.iter().collect();
    order.sort_by(|a, b| a.project_id.cmp(&b.project_id));
    if let Some(w) = order.windows(2).find(|w| w[0].project_id == w[1].project_id) {
        return Err(Error::data(format!("duplicate project id {}", w[0].project_id)));
    }
    let mut files = Vec::new();
    let mut modules = Vec::with_capacity(order.len());
    for (i, e) in order.iter().enumerate() {
        let sources = list_sources(&e.local_path)?;
        modules.push(ProjectModules::from_paths(sources.iter().map(|s| s.1.as_str())));
        files.extend(sources.into_iter().map(|(abs, rel)| SourceFile { project: i, abs, rel }));
    }

    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let results: Vec<Result<(Vec<DescApiPair>, MiningStats)>> = pool.install(|| {
        files
            .par_iter()
            .map(|f| {
                let bytes = std::fs::read(&f.abs).map_err(|e| Error::io(&f.abs, e))?;
                Ok(mine_file(&bytes, &f.rel, &order[f.project].project_id, &modules[f.project]))
            })
            .collect()
    });

    let mut stats = MiningStats { projects: order.len(), ..MiningStats::default() };
    let mut records = Vec::new();
    for r in results {
        let (pairs, s) = r?;
        stats.add(&s);
        records.extend(pairs);
    }
    Ok(MineOutput { records, stats })
}
