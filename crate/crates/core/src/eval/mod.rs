//! Scoring of ranked hypotheses and test/corpus overlap analysis.

mod bleu;
mod overlap;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use bleu::{corpus_bleu4, ngram_stats, sentence_bleu4, NgramStats, SMOOTHING};
pub use overlap::{is_subsequence, overlap_report, CorpusEntry, OverlapQuery, OverlapReport};

use crate::error::{Error, Result};

pub const DEFAULT_KS: [usize; 3] = [1, 5, 10];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BleuLevel {
    Sentence,
    Corpus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuReport {
    /// Mean best-of-k BLEU-4 for each k.
    pub per_k: BTreeMap<usize, f64>,
    pub n_pairs: usize,
    pub smoothing: String,
    pub level: BleuLevel,
}

impl BleuReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.per_k {
            s.push_str(&format!("top-{k}\t{:.4}\n", v * 100.0));
        }
        s.push_str(&format!("pairs\t{}\nsmoothing\t{}\n", self.n_pairs, self.smoothing));
        s
    }
}

/// Mean over queries of the best sentence BLEU-4 among each query's first
/// `k` candidates, for every `k` in `ks`.
pub fn topk_bleu(candidates: &[Vec<Vec<String>>], refs: &[Vec<String>], ks: &[usize]) -> Result<BleuReport> {
    if candidates.len() != refs.len() {
        return Err(Error::data(format!("{} candidate lists for {} references", candidates.len(), refs.len())));
    }
    if let Some(q) = candidates.iter().position(Vec::is_empty) {
        return Err(Error::data(format!("query {q} has no candidates")));
    }
    let max_k = ks.iter().copied().max().unwrap_or(0);
    // Per query, the running best score after each candidate.
    let running: Vec<Vec<f64>> = candidates
        .par_iter()
        .zip(refs)
        .map(|(cands, r)| {
            let mut best = 0.0f64;
            cands
                .iter()
                .take(max_k)
                .map(|c| {
                    best = best.max(sentence_bleu4(c, r)?);
                    Ok(best)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let n = refs.len();
    let per_k = ks
        .iter()
        .map(|&k| {
            let sum: f64 = running.iter().map(|b| b[k.min(b.len()).max(1) - 1]).sum();
            (k, if n == 0 { 0.0 } else { sum / n as f64 })
        })
        .collect();
    Ok(BleuReport { per_k, n_pairs: n, smoothing: SMOOTHING.to_string(), level: BleuLevel::Sentence })
}

/// Corpus BLEU-4 of each query's first candidate, reported under k = 1.
pub fn top1_corpus_bleu(candidates: &[Vec<Vec<String>>], refs: &[Vec<String>]) -> Result<BleuReport> {
    if candidates.len() != refs.len() {
        return Err(Error::data("candidate and reference counts differ"));
    }
    let pairs: Vec<(&[String], &[String])> =
        candidates.iter().zip(refs).map(|(c, r)| (c.first().map_or(&[][..], Vec::as_slice), r.as_slice())).collect();
    Ok(BleuReport {
        per_k: BTreeMap::from([(1, corpus_bleu4(&pairs)?)]),
        n_pairs: refs.len(),
        smoothing: SMOOTHING.to_string(),
        level: BleuLevel::Corpus,
    })
}
