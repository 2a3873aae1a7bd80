//! Overlap between a test set and an external (docstring, code) corpus.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Greedy left-to-right check that `needle` occurs in `hay` in order, not
/// necessarily contiguously. Greedy matching is exact for this decision.
pub fn is_subsequence<T: PartialEq>(needle: &[T], hay: &[T]) -> bool {
    if needle.len() > hay.len() {
        return false;
    }
    let mut rest = needle.iter();
    let mut want = rest.next();
    for h in hay {
        match want {
            None => return true,
            Some(w) if w == h => want = rest.next(),
            Some(_) => {}
        }
    }
    want.is_none()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapQuery {
    pub desc_tokens: Vec<String>,
    pub apiseq_tokens: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub doc_tokens: Vec<String>,
    pub code_tokens: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OverlapReport {
    pub matched_desc: usize,
    pub matched_apiseq: usize,
    pub matched_pairs: usize,
    pub n_test: usize,
    pub n_corpus: usize,
}

pub fn overlap_report(test: &[OverlapQuery], corpus: &[CorpusEntry]) -> OverlapReport {
    let mut by_doc: HashMap<&[String], Vec<usize>> = HashMap::new();
    for (i, e) in corpus.iter().enumerate() {
        by_doc.entry(&e.doc_tokens).or_default().push(i);
    }
    let flags: Vec<(bool, bool, bool)> = test
        .par_iter()
        .map(|q| {
            let same_doc = by_doc.get(q.desc_tokens.as_slice());
            let desc = same_doc.is_some();
            let pair = same_doc.is_some_and(|ids| ids.iter().any(|&i| is_subsequence(&q.apiseq_tokens, &corpus[i].code_tokens)));
            let apiseq = pair || corpus.iter().any(|e| is_subsequence(&q.apiseq_tokens, &e.code_tokens));
            (desc, apiseq, pair)
        })
        .collect();
    OverlapReport {
        matched_desc: flags.iter().filter(|f| f.0).count(),
        matched_apiseq: flags.iter().filter(|f| f.1).count(),
        matched_pairs: flags.iter().filter(|f| f.2).count(),
        n_test: test.len(),
        n_corpus: corpus.len(),
    }
}
