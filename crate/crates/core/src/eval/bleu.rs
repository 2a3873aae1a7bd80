//! Sentence- and corpus-level BLEU-4.
//!
//! Clipped n-gram precisions for n = 1..4 are combined by geometric mean and
//! multiplied by the brevity penalty `exp(1 - r/c)` when the hypothesis is
//! shorter than the reference. A zero match count for n >= 2 is smoothed to
//! `(0 + 1) / (total + 1)`; a zero unigram match count gives a score of 0.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};

pub const MAX_N: usize = 4;

/// Label stored with every report so scores under different smoothing
/// variants are never compared silently.
pub const SMOOTHING: &str = "add-one-on-zero-higher-order";

/// Clipped match and total counts per n-gram order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NgramStats {
    pub matches: [u64; MAX_N],
    pub totals: [u64; MAX_N],
    pub hyp_len: u64,
    pub ref_len: u64,
}

impl NgramStats {
    pub fn add(&mut self, other: &NgramStats) {
        for n in 0..MAX_N {
            self.matches[n] += other.matches[n];
            self.totals[n] += other.totals[n];
        }
        self.hyp_len += other.hyp_len;
        self.ref_len += other.ref_len;
    }

    pub fn score(&self) -> f64 {
        if self.hyp_len == 0 || self.matches[0] == 0 {
            return 0.0;
        }
        let mut log_sum = 0.0;
        for n in 0..MAX_N {
            let (m, t) = if n > 0 && self.matches[n] == 0 { (1, self.totals[n] + 1) } else { (self.matches[n], self.totals[n]) };
            log_sum += (m as f64 / t as f64).ln();
        }
        let bp = if self.hyp_len < self.ref_len { (1.0 - self.ref_len as f64 / self.hyp_len as f64).exp() } else { 1.0 };
        bp * (log_sum / MAX_N as f64).exp()
    }
}

fn ngram_counts<T: Eq + Hash>(tokens: &[T], n: usize) -> HashMap<&[T], u64> {
    let mut counts = HashMap::new();
    for g in tokens.windows(n) {
        *counts.entry(g).or_default() += 1;
    }
    counts
}

pub fn ngram_stats<T: Eq + Hash>(hyp: &[T], reference: &[T]) -> Result<NgramStats> {
    if reference.is_empty() {
        return Err(Error::EmptyReference);
    }
    let mut s = NgramStats { hyp_len: hyp.len() as u64, ref_len: reference.len() as u64, ..Default::default() };
    for n in 1..=MAX_N {
        let h = ngram_counts(hyp, n);
        let r = ngram_counts(reference, n);
        s.matches[n - 1] = h.iter().map(|(g, c)| (*c).min(r.get(g).copied().unwrap_or(0))).sum();
        s.totals[n - 1] = hyp.len().saturating_sub(n - 1) as u64;
    }
    Ok(s)
}

pub fn sentence_bleu4<T: Eq + Hash>(hyp: &[T], reference: &[T]) -> Result<f64> {
    Ok(ngram_stats(hyp, reference)?.score())
}

/// Corpus BLEU: counts summed over all pairs before combining.
pub fn corpus_bleu4<T: Eq + Hash>(pairs: &[(&[T], &[T])]) -> Result<f64> {
    let mut total = NgramStats::default();
    for (h, r) in pairs {
        total.add(&ngram_stats(h, r)?);
    }
    Ok(total.score())
}
