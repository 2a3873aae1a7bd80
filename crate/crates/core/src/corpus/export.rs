use std::collections::HashMap;
use std::path::Path;

use super::records::write_file;
use crate::error::Result;
use crate::pipeline::DescApiPair;
use crate::textproc::{desc_terms, tokenize_apiseq, SEPARATOR, SPECIAL_TOKENS};

pub const APISEQ_VOCAB_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExportSummary {
    pub train_lines: usize,
    pub test_lines: usize,
    pub desc_vocab: usize,
    pub apiseq_vocab: usize,
}

/// Desc and apiseq file contents for one split, line-aligned, LF-terminated.
pub fn gu_lines(pairs: &[DescApiPair]) -> (String, String) {
    let mut desc = String::new();
    let mut apiseq = String::new();
    for p in pairs {
        desc.push_str(&desc_terms(&p.desc).join(" "));
        desc.push('\n');
        apiseq.push_str(&tokenize_apiseq(&p.apiseq).join(" "));
        apiseq.push('\n');
    }
    (desc, apiseq)
}

/// Vocabulary file lines: `reserved` first, then the remaining tokens of
/// `texts` by descending frequency with ties in lexical order, truncated
/// to `cap` lines overall.
pub fn vocabulary<'a>(texts: impl IntoIterator<Item = &'a str>, reserved: &[&str], cap: Option<usize>) -> Vec<String> {
    let mut freq: HashMap<&str, usize> = HashMap::new();
    for text in texts {
        for t in text.split(' ').filter(|t| !t.is_empty()) {
            *freq.entry(t).or_default() += 1;
        }
    }
    let mut ranked: Vec<(&str, usize)> = freq.into_iter().filter(|(t, _)| !reserved.contains(t)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    let mut out: Vec<String> = reserved.iter().map(|s| s.to_string()).collect();
    out.extend(ranked.into_iter().map(|(t, _)| t.to_string()));
    if let Some(cap) = cap {
        out.truncate(cap);
    }
    out
}

/// Writes `train.desc.txt`, `train.apiseq.txt`, `test.desc.txt`,
/// `test.apiseq.txt`, `vocab.desc.txt` and `vocab.apiseq.txt` into `dir`.
/// Vocabularies count tokens over both splits.
pub fn export_gu_format(train: &[DescApiPair], test: &[DescApiPair], dir: &Path) -> Result<ExportSummary> {
    let (train_desc, train_api) = gu_lines(train);
    let (test_desc, test_api) = gu_lines(test);
    let specials: Vec<&str> = SPECIAL_TOKENS.to_vec();
    let mut api_reserved = specials.clone();
    api_reserved.push(SEPARATOR);
    let desc_vocab = vocabulary(train_desc.lines().chain(test_desc.lines()), &specials, None);
    let api_vocab = vocabulary(train_api.lines().chain(test_api.lines()), &api_reserved, Some(APISEQ_VOCAB_CAP));

    let join = |v: &[String]| v.iter().map(|t| format!("{t}\n")).collect::<String>();
    for (name, body) in [
        ("train.desc.txt", &train_desc),
        ("train.apiseq.txt", &train_api),
        ("test.desc.txt", &test_desc),
        ("test.apiseq.txt", &test_api),
        ("vocab.desc.txt", &join(&desc_vocab)),
        ("vocab.apiseq.txt", &join(&api_vocab)),
    ] {
        write_file(&dir.join(name), body.as_bytes())?;
    }
    Ok(ExportSummary { train_lines: train.len(), test_lines: test.len(), desc_vocab: desc_vocab.len(), apiseq_vocab: api_vocab.len() })
}
