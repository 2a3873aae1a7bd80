//! Filtering, vocabulary capping, deduplication and train/test splitting of
//! raw (description, API sequence) pairs.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use xxhash_rust::xxh3::xxh3_64_with_seed;

use crate::desc::split_name;
use crate::error::{Error, Result};
use crate::textproc::tokenize_desc;

/// One (desc, apiseq) pair with its provenance. Field order is the JSONL
/// field order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DescApiPair {
    pub desc: String,
    pub apiseq: Vec<String>,
    pub project: String,
    pub path: String,
    pub qualname: String,
}

impl DescApiPair {
    pub fn key(&self) -> PairKey<'_> {
        PairKey { desc: &self.desc, apiseq: &self.apiseq }
    }
}

/// Deduplication key: exact description text and call list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairKey<'a> {
    pub desc: &'a str,
    pub apiseq: &'a [String],
}

impl PairKey<'_> {
    /// Unambiguous byte encoding (length-prefixed fields).
    fn bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.desc.len() + 16 * self.apiseq.len() + 16);
        let mut field = |s: &str| {
            out.extend_from_slice(&(s.len() as u64).to_le_bytes());
            out.extend_from_slice(s.as_bytes());
        };
        field(self.desc);
        for call in self.apiseq {
            field(call);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WordMatch {
    /// The word must equal a whole token of the name or description.
    #[default]
    Token,
    /// Any case-insensitive substring occurrence counts.
    Substring,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub max_calls: usize,
    pub vocab_identifier_budget: usize,
    pub min_desc_words: usize,
    pub test_fraction: f64,
    pub split_seed: u64,
    pub test_word_filter: String,
    pub test_word_match: WordMatch,
    /// Skip deduplication and split raw occurrences, leaving duplicates on
    /// both sides of the split. Only for measuring leakage.
    pub keep_duplicates: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            max_calls: 14,
            vocab_identifier_budget: 9995,
            min_desc_words: 3,
            test_fraction: 0.04,
            split_seed: 0,
            test_word_filter: "test".to_string(),
            test_word_match: WordMatch::Token,
            keep_duplicates: false,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::Config(format!("test_fraction must be in (0, 1), got {}", self.test_fraction)));
        }
        if self.vocab_identifier_budget == 0 {
            return Err(Error::Config("vocab_identifier_budget must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCount {
    pub stage: String,
    pub input: usize,
    pub output: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StageStats {
    pub stages: Vec<StageCount>,
    pub train: usize,
    pub test: usize,
    pub accepted_modules: usize,
}

impl StageStats {
    fn record(&mut self, stage: &str, input: usize, output: usize) {
        self.stages.push(StageCount { stage: stage.to_string(), input, output });
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("stage\tinput\toutput\n");
        for c in &self.stages {
            let _ = writeln!(s, "{}\t{}\t{}", c.stage, c.input, c.output);
        }
        let _ = writeln!(s, "train\t{}", self.train);
        let _ = writeln!(s, "test\t{}", self.test);
        let _ = writeln!(s, "accepted_modules\t{}", self.accepted_modules);
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetBundle {
    pub train: Vec<DescApiPair>,
    pub test: Vec<DescApiPair>,
    pub accepted_modules: Vec<String>,
    pub stage_stats: StageStats,
}

/// Module of a call: everything before the last dot.
pub fn call_module(call: &str) -> &str {
    call.rsplit_once('.').map_or(call, |(m, _)| m)
}

pub fn filter_length(pairs: Vec<DescApiPair>, max_calls: usize) -> Vec<DescApiPair> {
    pairs.into_iter().filter(|p| p.apiseq.len() <= max_calls).collect()
}

/// Accepts modules by descending call count (ties by name) while the
/// distinct identifiers of accepted modules' calls fit in `budget`, then
/// drops pairs that call any other module.
pub fn cap_vocabulary(pairs: Vec<DescApiPair>, budget: usize) -> (Vec<String>, Vec<DescApiPair>) {
    let mut count: HashMap<&str, usize> = HashMap::new();
    let mut idents: HashMap<&str, HashSet<&str>> = HashMap::new();
    for p in &pairs {
        for call in &p.apiseq {
            let m = call_module(call);
            *count.entry(m).or_default() += 1;
            idents.entry(m).or_default().extend(call.split('.'));
        }
    }
    let mut order: Vec<(&str, usize)> = count.into_iter().collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));

    let mut union: HashSet<&str> = HashSet::new();
    let mut accepted: HashSet<&str> = HashSet::new();
    for (m, _) in &order {
        let ids = &idents[m];
        let added = ids.iter().filter(|i| !union.contains(*i)).count();
        if union.len() + added <= budget {
            union.extend(ids.iter().copied());
            accepted.insert(m);
        }
    }
    let modules: Vec<String> = order.iter().filter(|(m, _)| accepted.contains(m)).map(|(m, _)| m.to_string()).collect();
    let keep: Vec<bool> = pairs.iter().map(|p| p.apiseq.iter().all(|c| accepted.contains(call_module(c)))).collect();
    let kept = pairs.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect();
    (modules, kept)
}

/// Keeps the first occurrence of each key.
pub fn deduplicate(pairs: Vec<DescApiPair>) -> Vec<DescApiPair> {
    let mut seen: HashSet<Vec<u8>> = HashSet::with_capacity(pairs.len());
    pairs.into_iter().filter(|p| seen.insert(p.key().bytes())).collect()
}

pub fn filter_desc(pairs: Vec<DescApiPair>, min_words: usize) -> Vec<DescApiPair> {
    pairs.into_iter().filter(|p| p.desc.split_whitespace().count() >= min_words).collect()
}

fn mentions_word(p: &DescApiPair, word: &str, mode: WordMatch) -> bool {
    let word = word.to_lowercase();
    match mode {
        WordMatch::Substring => p.qualname.to_lowercase().contains(&word) || p.desc.to_lowercase().contains(&word),
        WordMatch::Token => {
            let in_name = p.qualname.split('.').any(|part| split_name(part).split(' ').any(|t| t == word));
            in_name || tokenize_desc(&p.desc).contains(&word)
        }
    }
}

pub fn filter_test_word(pairs: Vec<DescApiPair>, word: &str, mode: WordMatch) -> Vec<DescApiPair> {
    if word.is_empty() {
        return pairs;
    }
    pairs.into_iter().filter(|p| !mentions_word(p, word, mode)).collect()
}

/// Ranks items by seeded hash and returns a test-membership mask holding
/// exactly `round(fraction * n)` items.
fn hash_rank_mask(hashes: &[u64], fraction: f64) -> Vec<bool> {
    let n = hashes.len();
    let n_test = ((fraction * n as f64).round() as usize).min(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (hashes[i], i));
    let mut mask = vec![false; n];
    for &i in &order[..n_test] {
        mask[i] = true;
    }
    mask
}

fn partition(pairs: Vec<DescApiPair>, mask: &[bool]) -> (Vec<DescApiPair>, Vec<DescApiPair>) {
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (p, &t) in pairs.into_iter().zip(mask) {
        if t {
            test.push(p);
        } else {
            train.push(p);
        }
    }
    (train, test)
}

/// Deterministic split by seeded hash of the dedup key. Test pairs whose
/// key also occurs in train are removed.
pub fn split(pairs: Vec<DescApiPair>, test_fraction: f64, seed: u64) -> (Vec<DescApiPair>, Vec<DescApiPair>) {
    let hashes: Vec<u64> = pairs.iter().map(|p| xxh3_64_with_seed(&p.key().bytes(), seed)).collect();
    let mask = hash_rank_mask(&hashes, test_fraction);
    let (train, test) = partition(pairs, &mask);
    let train_keys: HashSet<Vec<u8>> = train.iter().map(|p| p.key().bytes()).collect();
    let test = test.into_iter().filter(|p| !train_keys.contains(&p.key().bytes())).collect();
    (train, test)
}

/// Split of a stream that still contains duplicates: each occurrence is
/// hashed separately, so copies of one pair land on both sides.
pub fn split_keep_duplicates(pairs: Vec<DescApiPair>, test_fraction: f64, seed: u64) -> (Vec<DescApiPair>, Vec<DescApiPair>) {
    let mut occurrence: HashMap<Vec<u8>, u64> = HashMap::new();
    let hashes: Vec<u64> = pairs
        .iter()
        .map(|p| {
            let mut bytes = p.key().bytes();
            let n = occurrence.entry(bytes.clone()).or_default();
            bytes.extend_from_slice(&n.to_le_bytes());
            *n += 1;
            xxh3_64_with_seed(&bytes, seed)
        })
        .collect();
    let mask = hash_rank_mask(&hashes, test_fraction);
    partition(pairs, &mask)
}

pub fn run_pipeline(raw: Vec<DescApiPair>, config: &PipelineConfig) -> Result<DatasetBundle> {
    config.validate()?;
    let mut stats = StageStats::default();

    let n = raw.len();
    let pairs = filter_length(raw, config.max_calls);
    stats.record("length", n, pairs.len());

    let n = pairs.len();
    let (accepted_modules, pairs) = cap_vocabulary(pairs, config.vocab_identifier_budget);
    stats.record("vocabulary", n, pairs.len());

    let n = pairs.len();
    let pairs = if config.keep_duplicates { pairs } else { deduplicate(pairs) };
    stats.record("dedup", n, pairs.len());

    let n = pairs.len();
    let pairs = filter_desc(pairs, config.min_desc_words);
    stats.record("desc_words", n, pairs.len());

    let n = pairs.len();
    let pairs = filter_test_word(pairs, &config.test_word_filter, config.test_word_match);
    stats.record("test_word", n, pairs.len());

    if pairs.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = pairs.len();
    let (train, test) = if config.keep_duplicates {
        split_keep_duplicates(pairs, config.test_fraction, config.split_seed)
    } else {
        split(pairs, config.test_fraction, config.split_seed)
    };
    stats.record("split", n, train.len() + test.len());
    stats.train = train.len();
    stats.test = test.len();
    stats.accepted_modules = accepted_modules.len();

    Ok(DatasetBundle { train, test, accepted_modules, stage_stats: stats })
}

/// Distinct identifiers across the calls of a pair set.
pub fn identifier_vocabulary<'a>(pairs: impl IntoIterator<Item = &'a DescApiPair>) -> BTreeMap<&'a str, usize> {
    let mut vocab = BTreeMap::new();
    for p in pairs {
        for call in &p.apiseq {
            for id in call.split('.') {
                *vocab.entry(id).or_default() += 1;
            }
        }
    }
    vocab
}
