//! Corpus ingestion and the on-disk formats: project manifests, mining,
//! JSONL pair records, and Gu-format exports.

mod config;
mod export;
mod manifest;
mod mine;
mod records;

pub use config::{load_config, Config};
pub use export::{export_gu_format, gu_lines, vocabulary, ExportSummary, APISEQ_VOCAB_CAP};
pub use manifest::{read_manifest, resolve_paths, select_projects, write_manifest, ProjectManifestEntry, SelectionCriteria};
pub use mine::{mine, mine_file, module_pairs, MineOutput, MiningStats};
pub use records::{parse_jsonl, read_gu_pairs, read_jsonl, read_token_lines, to_jsonl, write_file, write_jsonl};
