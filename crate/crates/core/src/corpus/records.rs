use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::pipeline::DescApiPair;
use crate::textproc::detokenize_apiseq;

/// Serializes records one per line with the fixed field order
/// desc, apiseq, project, path, qualname.
pub fn to_jsonl(pairs: &[DescApiPair]) -> String {
    let mut out = String::new();
    for p in pairs {
        out.push_str(&serde_json::to_string(p).expect("pair serializes"));
        out.push('\n');
    }
    out
}

/// Parses JSONL records; blank lines are skipped and every record needs a
/// nonempty apiseq.
pub fn parse_jsonl(text: &str, origin: &str) -> Result<Vec<DescApiPair>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let p: DescApiPair = serde_json::from_str(line).map_err(|e| Error::data(format!("{origin}:{}: {e}", i + 1)))?;
        if p.apiseq.is_empty() {
            return Err(Error::data(format!("{origin}:{}: empty apiseq", i + 1)));
        }
        out.push(p);
    }
    Ok(out)
}

pub fn read_jsonl(path: &Path) -> Result<Vec<DescApiPair>> {
    let text = read_text(path)?;
    parse_jsonl(&text, &path.display().to_string())
}

pub fn write_jsonl(path: &Path, pairs: &[DescApiPair]) -> Result<()> {
    write_file(path, to_jsonl(pairs).as_bytes())
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(bytes).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

fn read_text(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    String::from_utf8(bytes).map_err(|e| Error::data(format!("{}: not UTF-8: {e}", path.display())))
}

/// Whitespace-separated tokens of every line.
pub fn read_token_lines(path: &Path) -> Result<Vec<Vec<String>>> {
    let text = read_text(path)?;
    Ok(text.lines().map(|l| l.split_whitespace().map(str::to_string).collect()).collect())
}

/// Reads a line-aligned Gu-format pair of files as records. The desc line
/// becomes the description; provenance is the desc file name and line.
pub fn read_gu_pairs(desc_path: &Path, apiseq_path: &Path) -> Result<Vec<DescApiPair>> {
    let descs = read_token_lines(desc_path)?;
    let seqs = read_token_lines(apiseq_path)?;
    if descs.len() != seqs.len() {
        return Err(Error::data(format!(
            "{} has {} lines but {} has {}",
            desc_path.display(),
            descs.len(),
            apiseq_path.display(),
            seqs.len()
        )));
    }
    let name = desc_path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    descs
        .into_iter()
        .zip(seqs)
        .enumerate()
        .map(|(i, (d, s))| {
            let apiseq = detokenize_apiseq(&s)
                .filter(|c| !c.is_empty())
                .ok_or_else(|| Error::data(format!("{}:{}: malformed apiseq", apiseq_path.display(), i + 1)))?;
            Ok(DescApiPair { desc: d.join(" "), apiseq, project: String::new(), path: name.clone(), qualname: (i + 1).to_string() })
        })
        .collect()
}
