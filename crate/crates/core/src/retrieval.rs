//! TF-IDF nearest-neighbour retrieval over training descriptions.
//!
//! Documents and queries are stemmed description terms weighted by raw term
//! frequency times `ln((1 + N) / (1 + df)) + 1` and L2-normalized, so the
//! dot product is the cosine similarity.

use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::DescApiPair;
use crate::textproc::{desc_terms, tokenize_apiseq};

pub const INDEX_FORMAT: &str = "apimine-tfidf";
pub const INDEX_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct RetrievalIndex {
    /// Term to term id; ids follow lexical order of the terms.
    pub vocabulary: BTreeMap<String, usize>,
    pub idf: Vec<f64>,
    /// Per term, (document, normalized weight) in ascending document order.
    pub postings: Vec<Vec<(usize, f64)>>,
    /// Per document, (term id, normalized weight) in ascending term order.
    pub vectors: Vec<Vec<(usize, f64)>>,
    pub pairs: Vec<DescApiPair>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hit<'a> {
    pub index: usize,
    pub pair: &'a DescApiPair,
    pub similarity: f64,
}

fn idf(n: usize, df: usize) -> f64 {
    ((1.0 + n as f64) / (1.0 + df as f64)).ln() + 1.0
}

/// Raw term frequencies of the known terms, keyed by term id.
fn term_counts(terms: &[String], vocabulary: &BTreeMap<String, usize>) -> BTreeMap<usize, f64> {
    let mut tf = BTreeMap::new();
    for t in terms {
        if let Some(&id) = vocabulary.get(t) {
            *tf.entry(id).or_insert(0.0) += 1.0;
        }
    }
    tf
}

fn weigh(tf: BTreeMap<usize, f64>, idf: &[f64]) -> Vec<(usize, f64)> {
    let mut v: Vec<(usize, f64)> = tf.into_iter().map(|(id, c)| (id, c * idf[id])).collect();
    let norm = v.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
    if norm > 0.0 {
        for (_, w) in &mut v {
            *w /= norm;
        }
    }
    v
}

pub fn build_index(train: Vec<DescApiPair>) -> Result<RetrievalIndex> {
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let docs: Vec<Vec<String>> = train.iter().map(|p| desc_terms(&p.desc)).collect();
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for d in &docs {
        let mut uniq: Vec<&str> = d.iter().map(String::as_str).collect();
        uniq.sort_unstable();
        uniq.dedup();
        for t in uniq {
            *df.entry(t).or_default() += 1;
        }
    }
    let n = docs.len();
    let vocabulary: BTreeMap<String, usize> = df.keys().enumerate().map(|(i, t)| (t.to_string(), i)).collect();
    let idf: Vec<f64> = df.values().map(|&d| idf(n, d)).collect();
    let vectors: Vec<Vec<(usize, f64)>> = docs.iter().map(|d| weigh(term_counts(d, &vocabulary), &idf)).collect();
    let mut postings = vec![Vec::new(); idf.len()];
    for (doc, v) in vectors.iter().enumerate() {
        for &(id, w) in v {
            postings[id].push((doc, w));
        }
    }
    Ok(RetrievalIndex { vocabulary, idf, postings, vectors, pairs: train })
}

impl RetrievalIndex {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn query_vector(&self, text: &str) -> Vec<(usize, f64)> {
        weigh(term_counts(&desc_terms(text), &self.vocabulary), &self.idf)
    }

    /// Cosine similarity of the query to every document.
    pub fn similarities(&self, text: &str) -> Vec<f64> {
        let mut scores = vec![0.0; self.pairs.len()];
        for (id, qw) in self.query_vector(text) {
            for &(doc, dw) in &self.postings[id] {
                scores[doc] += qw * dw;
            }
        }
        scores
    }

    /// Top `k` documents by similarity, ties by ascending index.
    pub fn query(&self, text: &str, k: usize) -> Vec<Hit<'_>> {
        let scores = self.similarities(text);
        let mut order: Vec<usize> = (0..scores.len()).collect();
        let k = k.min(order.len());
        let by_rank = |a: &usize, b: &usize| scores[*b].total_cmp(&scores[*a]).then(a.cmp(b));
        if k < order.len() && k > 0 {
            order.select_nth_unstable_by(k - 1, by_rank);
        }
        order.truncate(k);
        order.sort_by(by_rank);
        order.into_iter().map(|i| Hit { index: i, pair: &self.pairs[i], similarity: scores[i] }).collect()
    }

    /// Token streams of the top `k` apiseqs for each query's description,
    /// as candidates for [`crate::eval::topk_bleu`].
    pub fn candidates(&self, queries: &[DescApiPair], k: usize) -> Vec<Vec<Vec<String>>> {
        queries.par_iter().map(|q| self.query(&q.desc, k).iter().map(|h| tokenize_apiseq(&h.pair.apiseq)).collect()).collect()
    }

    /// Writes the versioned JSONL index: a header line, one line per term
    /// with its document frequency, then one line per indexed pair.
    pub fn save(&self, out: &mut impl Write) -> std::io::Result<()> {
        let header =
            Header { format: INDEX_FORMAT.to_string(), version: INDEX_VERSION, documents: self.pairs.len(), terms: self.vocabulary.len() };
        writeln!(out, "{}", serde_json::to_string(&header)?)?;
        for (term, &id) in &self.vocabulary {
            let row = TermRow { term: term.clone(), df: self.postings[id].len() };
            writeln!(out, "{}", serde_json::to_string(&row)?)?;
        }
        for p in &self.pairs {
            writeln!(out, "{}", serde_json::to_string(p)?)?;
        }
        Ok(())
    }

    /// Reads an index written by [`RetrievalIndex::save`]. Weights are
    /// recomputed from the pairs and checked against the stored terms.
    pub fn load(input: impl BufRead) -> Result<RetrievalIndex> {
        let mut lines = input.lines();
        let mut next = |what: &str| -> Result<String> {
            match lines.next() {
                Some(Ok(l)) => Ok(l),
                Some(Err(e)) => Err(Error::Data(format!("reading index: {e}"))),
                None => Err(Error::data(format!("index truncated before {what}"))),
            }
        };
        let header: Header = serde_json::from_str(&next("header")?).map_err(|e| Error::data(format!("index header: {e}")))?;
        if header.format != INDEX_FORMAT || header.version != INDEX_VERSION {
            return Err(Error::data(format!("unsupported index format {} version {}", header.format, header.version)));
        }
        let mut terms = Vec::with_capacity(header.terms);
        for i in 0..header.terms {
            let row: TermRow = serde_json::from_str(&next("terms")?).map_err(|e| Error::data(format!("index term {i}: {e}")))?;
            terms.push(row);
        }
        let mut pairs = Vec::with_capacity(header.documents);
        for i in 0..header.documents {
            let p: DescApiPair = serde_json::from_str(&next("pairs")?).map_err(|e| Error::data(format!("index pair {i}: {e}")))?;
            pairs.push(p);
        }
        let index = build_index(pairs)?;
        let stored: HashMap<&str, usize> = terms.iter().map(|t| (t.term.as_str(), t.df)).collect();
        let consistent = stored.len() == index.vocabulary.len()
            && index.vocabulary.iter().all(|(t, &id)| stored.get(t.as_str()) == Some(&index.postings[id].len()));
        if !consistent {
            return Err(Error::data("index terms do not match its documents"));
        }
        Ok(index)
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    documents: usize,
    terms: usize,
}

#[derive(Serialize, Deserialize)]
struct TermRow {
    term: String,
    df: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair(desc: &str, calls: &[&str]) -> DescApiPair {
        DescApiPair {
            desc: desc.into(),
            apiseq: calls.iter().map(|c| c.to_string()).collect(),
            project: "p".into(),
            path: "a.py".into(),
            qualname: "f".into(),
        }
    }

    fn toy() -> RetrievalIndex {
        build_index(vec![
            pair("copy a file to a directory", &["shutil.copy"]),
            pair("read a json file", &["json.load"]),
            pair("parse json string", &["json.loads"]),
        ])
        .unwrap()
    }

    /// Exhaustive cosine ranking from independently computed dense vectors.
    fn brute_force(index: &RetrievalIndex, text: &str) -> Vec<(usize, f64)> {
        let n = index.pairs.len();
        let dense = |terms: &[String]| {
            let mut v = vec![0.0; index.vocabulary.len()];
            for t in terms {
                if let Some(&id) = index.vocabulary.get(t) {
                    v[id] += 1.0;
                }
            }
            for (id, x) in v.iter_mut().enumerate() {
                let df = index
                    .pairs
                    .iter()
                    .filter(|p| desc_terms(&p.desc).contains(&index.vocabulary.iter().find(|e| *e.1 == id).unwrap().0.clone()))
                    .count();
                *x *= ((1.0 + n as f64) / (1.0 + df as f64)).ln() + 1.0;
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                v.iter_mut().for_each(|x| *x /= norm);
            }
            v
        };
        let q = dense(&desc_terms(text));
        let mut scored: Vec<(usize, f64)> = index
            .pairs
            .iter()
            .enumerate()
            .map(|(i, p)| (i, dense(&desc_terms(&p.desc)).iter().zip(&q).map(|(a, b)| a * b).sum()))
            .collect();
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        scored
    }

    #[test]
    fn single_pair_index() {
        let idx = build_index(vec![pair("open a socket", &["socket.socket"])]).unwrap();
        assert_eq!(idx.len(), 1);
        assert!(matches!(build_index(vec![]), Err(Error::EmptyDataset)));
    }

    #[test]
    fn duplicate_descs_both_indexed() {
        let idx = build_index(vec![pair("read a file", &["io.open"]), pair("read a file", &["os.open"])]).unwrap();
        let hits = idx.query("read a file", 2);
        assert_eq!(hits.iter().map(|h| h.index).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(hits[0].similarity, hits[1].similarity);
    }

    #[test]
    fn vocabulary_is_stemmed_doc_terms() {
        let idx = toy();
        assert!(idx.vocabulary.contains_key("directori"));
        assert!(!idx.vocabulary.contains_key("socket"));
        for v in &idx.vectors {
            let norm: f64 = v.iter().map(|(_, w)| w * w).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_desc_ranks_first() {
        let idx = toy();
        let hits = idx.query("read a json file", 3);
        assert_eq!(hits[0].index, 1);
        assert!((hits[0].similarity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unknown_terms_give_zero_in_index_order() {
        let idx = toy();
        let hits = idx.query("quantum teleportation", 5);
        assert_eq!(hits.iter().map(|h| h.index).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(hits.iter().all(|h| h.similarity == 0.0));
    }

    #[test]
    fn one_term_query_against_brute_force() {
        let idx = toy();
        // "json" occurs in docs 1 and 2; doc 2 is shorter so its weight is larger.
        let hits = idx.query("JSON", 3);
        let expected = brute_force(&idx, "JSON");
        assert_eq!(hits.iter().map(|h| h.index).collect::<Vec<_>>(), vec![2, 1, 0]);
        for (h, (i, s)) in hits.iter().zip(&expected) {
            assert_eq!(h.index, *i);
            assert!((h.similarity - s).abs() < 1e-12);
        }
    }

    #[test]
    fn save_load_round_trip() {
        let idx = toy();
        let mut buf = Vec::new();
        idx.save(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("{\"format\":\"apimine-tfidf\",\"version\":1,"));
        assert_eq!(RetrievalIndex::load(buf.as_slice()).unwrap(), idx);

        let bumped = text.replacen("\"version\":1", "\"version\":9", 1);
        assert!(matches!(RetrievalIndex::load(bumped.as_bytes()), Err(Error::Data(_))));
        let tampered = text.replacen("\"df\":1", "\"df\":7", 1);
        assert!(matches!(RetrievalIndex::load(tampered.as_bytes()), Err(Error::Data(_))));
        let cut: String = text.lines().take(3).map(|l| format!("{l}\n")).collect();
        assert!(matches!(RetrievalIndex::load(cut.as_bytes()), Err(Error::Data(_))));
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            docs in prop::collection::vec(prop::collection::vec(prop::sample::select(vec!["read", "file", "json", "parse", "write", "socket", "open"]), 0..6), 1..25),
            query in prop::collection::vec(prop::sample::select(vec!["read", "file", "json", "zebra", "open"]), 0..4),
            k in 1usize..30,
        ) {
            let pairs: Vec<_> = docs.iter().map(|d| pair(&d.join(" "), &["m.f"])).collect();
            let idx = build_index(pairs).unwrap();
            let q = query.join(" ");
            let hits = idx.query(&q, k);
            let expected = brute_force(&idx, &q);
            prop_assert_eq!(hits.len(), k.min(docs.len()));
            for (h, (_, s)) in hits.iter().zip(&expected) {
                prop_assert!((h.similarity - s).abs() < 1e-9);
            }
            // Order is by similarity then index.
            for w in hits.windows(2) {
                prop_assert!(w[0].similarity > w[1].similarity || (w[0].similarity == w[1].similarity && w[0].index < w[1].index));
            }
        }

        #[test]
        fn doubling_doc_text_keeps_ranking(
            docs in prop::collection::vec(prop::collection::vec(prop::sample::select(vec!["read", "file", "json", "parse", "write"]), 1..5), 1..12),
            query in prop::collection::vec(prop::sample::select(vec!["read", "file", "json"]), 1..3),
        ) {
            let once = build_index(docs.iter().map(|d| pair(&d.join(" "), &["m.f"])).collect()).unwrap();
            let twice = build_index(docs.iter().map(|d| pair(&format!("{0} {0}", d.join(" ")), &["m.f"])).collect()).unwrap();
            let q = query.join(" ");
            let a: Vec<usize> = once.query(&q, docs.len()).iter().map(|h| h.index).collect();
            let b: Vec<usize> = twice.query(&q, docs.len()).iter().map(|h| h.index).collect();
            prop_assert_eq!(a, b);
        }
    }
}
