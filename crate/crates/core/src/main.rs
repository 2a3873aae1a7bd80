use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use apimine::corpus::{
    export_gu_format, load_config, mine, read_gu_pairs, read_jsonl, read_manifest, read_token_lines, resolve_paths, select_projects,
    write_file, write_jsonl, write_manifest, Config,
};
use apimine::eval::{overlap_report, top1_corpus_bleu, topk_bleu, CorpusEntry, OverlapQuery, DEFAULT_KS};
use apimine::pipeline::{deduplicate, run_pipeline, split, split_keep_duplicates, StageCount, StageStats};
use apimine::retrieval::{build_index, RetrievalIndex};
use apimine::textproc::{tokenize_apiseq, tokenize_code, tokenize_desc};
use apimine::{Error, Result};

#[derive(Parser)]
#[command(name = "apimine", version, about = "Mine and evaluate (description, API sequence) pairs from Python projects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Keep manifest entries that pass the star, fork and size predicate.
    Select {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Extract raw pairs from the projects of a manifest.
    Mine {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Write mining statistics as JSON.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Filter, cap, deduplicate and split raw pairs.
    Pipeline {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Deduplicate and split an existing dataset (JSONL or a Gu-format pair of files).
    Split {
        #[command(flatten)]
        input: PairInput,
        #[arg(long)]
        out_dir: PathBuf,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Write Gu-format text and vocabulary files for a dataset directory.
    Export {
        /// Directory holding train.jsonl and test.jsonl.
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Score hypotheses with BLEU-4, from files or from a retrieval index.
    Eval {
        /// Hypotheses, `candidates` consecutive lines per query.
        #[arg(long, requires = "reference", conflicts_with_all = ["index", "test"])]
        hyp: Option<PathBuf>,
        #[arg(long = "ref")]
        reference: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        candidates: usize,
        #[arg(long, requires = "test")]
        index: Option<PathBuf>,
        /// Test pairs (JSONL) whose descriptions are used as queries.
        #[arg(long)]
        test: Option<PathBuf>,
        /// Values of k; defaults to those of 1, 5, 10 that are available.
        #[arg(long, value_delimiter = ',')]
        ks: Vec<usize>,
        /// Corpus-level BLEU of the first candidate instead of mean sentence BLEU.
        #[arg(long)]
        corpus_bleu: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Count test pairs whose desc or apiseq occurs in a code corpus.
    Overlap {
        #[arg(long)]
        test: PathBuf,
        /// JSONL with `docstring` and `code` string fields.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build a TF-IDF retrieval index over training pairs.
    Index {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the API sequences of the nearest training descriptions.
    Query {
        #[arg(long)]
        index: PathBuf,
        #[arg(short, long, default_value_t = 10)]
        k: usize,
        text: String,
    },
}

#[derive(Args)]
struct ConfigArg {
    /// TOML configuration; defaults apply to missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl ConfigArg {
    fn load(&self) -> Result<Config> {
        self.config.as_deref().map_or_else(|| Ok(Config::default()), load_config)
    }
}

#[derive(Args)]
#[group(required = true, multiple = true)]
struct PairInput {
    #[arg(long, conflicts_with_all = ["gu_desc", "gu_apiseq"])]
    input: Option<PathBuf>,
    #[arg(long, requires = "gu_apiseq")]
    gu_desc: Option<PathBuf>,
    #[arg(long, requires = "gu_desc")]
    gu_apiseq: Option<PathBuf>,
}

#[derive(Deserialize)]
struct CodeEntry {
    docstring: String,
    code: String,
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::data(e.to_string()))?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

fn write_stage_stats(dir: &Path, stats: &StageStats) -> Result<()> {
    write_file(&dir.join("stats.txt"), stats.to_text().as_bytes())?;
    write_json(&dir.join("stats.json"), stats)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Select { manifest, out, config } => {
            let config = config.load()?;
            let entries = read_manifest(&manifest)?;
            let kept = select_projects(&entries, &config.select);
            let mut buf = Vec::new();
            write_manifest(&mut buf, &kept).map_err(|e| Error::io(&out, e))?;
            write_file(&out, &buf)?;
            eprintln!("selected {} of {} projects", kept.len(), entries.len());
        }
        Command::Mine { manifest, out, workers, stats } => {
            let mut entries = read_manifest(&manifest)?;
            resolve_paths(&mut entries, manifest.parent().unwrap_or(Path::new(".")));
            let mined = mine(&entries, workers)?;
            write_jsonl(&out, &mined.records)?;
            if let Some(path) = stats {
                write_json(&path, &mined.stats)?;
            }
            eprint!("{}", mined.stats.to_text());
        }
        Command::Pipeline { input, out_dir, config } => {
            let config = config.load()?;
            let bundle = run_pipeline(read_jsonl(&input)?, &config.pipeline)?;
            create_dir(&out_dir)?;
            write_jsonl(&out_dir.join("train.jsonl"), &bundle.train)?;
            write_jsonl(&out_dir.join("test.jsonl"), &bundle.test)?;
            let modules: String = bundle.accepted_modules.iter().map(|m| format!("{m}\n")).collect();
            write_file(&out_dir.join("modules.txt"), modules.as_bytes())?;
            write_stage_stats(&out_dir, &bundle.stage_stats)?;
            eprint!("{}", bundle.stage_stats.to_text());
        }
        Command::Split { input, out_dir, config } => {
            let config = config.load()?.pipeline;
            let pairs = match (&input.input, &input.gu_desc, &input.gu_apiseq) {
                (Some(path), _, _) => read_jsonl(path)?,
                (None, Some(d), Some(a)) => read_gu_pairs(d, a)?,
                _ => return Err(Error::Config("give --input or both --gu-desc and --gu-apiseq".into())),
            };
            let mut stats = StageStats::default();
            let n = pairs.len();
            let (train, test) = if config.keep_duplicates {
                split_keep_duplicates(pairs, config.test_fraction, config.split_seed)
            } else {
                let unique = deduplicate(pairs);
                stats.stages.push(StageCount { stage: "dedup".into(), input: n, output: unique.len() });
                split(unique, config.test_fraction, config.split_seed)
            };
            stats.train = train.len();
            stats.test = test.len();
            create_dir(&out_dir)?;
            write_jsonl(&out_dir.join("train.jsonl"), &train)?;
            write_jsonl(&out_dir.join("test.jsonl"), &test)?;
            write_stage_stats(&out_dir, &stats)?;
            eprint!("{}", stats.to_text());
        }
        Command::Export { dataset, out_dir } => {
            let train = read_jsonl(&dataset.join("train.jsonl"))?;
            let test = read_jsonl(&dataset.join("test.jsonl"))?;
            create_dir(&out_dir)?;
            let s = export_gu_format(&train, &test, &out_dir)?;
            eprintln!("train {} test {} desc vocab {} apiseq vocab {}", s.train_lines, s.test_lines, s.desc_vocab, s.apiseq_vocab);
        }
        Command::Eval { hyp, reference, candidates, index, test, ks, corpus_bleu, json } => {
            if candidates == 0 {
                return Err(Error::Config("--candidates must be at least 1".into()));
            }
            let (cands, refs, available) = if let (Some(hyp), Some(reference)) = (hyp, reference) {
                let refs = read_token_lines(&reference)?;
                let hyps = read_token_lines(&hyp)?;
                if hyps.len() != refs.len() * candidates {
                    return Err(Error::data(format!(
                        "{} hypothesis lines for {} references with {candidates} candidates each",
                        hyps.len(),
                        refs.len()
                    )));
                }
                (hyps.chunks(candidates).map(<[_]>::to_vec).collect(), refs, candidates)
            } else if let (Some(index), Some(test)) = (index, test) {
                let index = load_index(&index)?;
                let test = read_jsonl(&test)?;
                let k = ks.iter().copied().chain(DEFAULT_KS).max().unwrap_or(1);
                let refs = test.iter().map(|p| tokenize_apiseq(&p.apiseq)).collect();
                (index.candidates(&test, k), refs, k)
            } else {
                return Err(Error::Config("give --hyp and --ref, or --index and --test".into()));
            };
            let ks: Vec<usize> = if ks.is_empty() { DEFAULT_KS.into_iter().filter(|&k| k <= available).collect() } else { ks };
            if ks.iter().any(|&k| k == 0 || k > available) {
                return Err(Error::Config(format!("every k must be between 1 and {available}")));
            }
            let report = if corpus_bleu { top1_corpus_bleu(&cands, &refs)? } else { topk_bleu(&cands, &refs, &ks)? };
            print!("{}", report.to_text());
            if let Some(path) = json {
                write_json(&path, &report)?;
            }
        }
        Command::Overlap { test, corpus, json } => {
            let test = read_jsonl(&test)?;
            let text = fs::read_to_string(&corpus).map_err(|e| Error::io(&corpus, e))?;
            let mut entries = Vec::new();
            for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
                let e: CodeEntry = serde_json::from_str(line).map_err(|e| Error::data(format!("{}:{}: {e}", corpus.display(), i + 1)))?;
                entries.push(CorpusEntry { doc_tokens: tokenize_desc(&e.docstring), code_tokens: tokenize_code(&e.code) });
            }
            let queries: Vec<OverlapQuery> = test
                .iter()
                .map(|p| OverlapQuery { desc_tokens: tokenize_desc(&p.desc), apiseq_tokens: tokenize_apiseq(&p.apiseq) })
                .collect();
            let r = overlap_report(&queries, &entries);
            println!(
                "matched_desc\t{}\nmatched_apiseq\t{}\nmatched_pairs\t{}\ntest\t{}\ncorpus\t{}",
                r.matched_desc, r.matched_apiseq, r.matched_pairs, r.n_test, r.n_corpus
            );
            if let Some(path) = json {
                write_json(&path, &r)?;
            }
        }
        Command::Index { train, out } => {
            let index = build_index(read_jsonl(&train)?)?;
            let mut buf = Vec::new();
            index.save(&mut buf).map_err(|e| Error::io(&out, e))?;
            write_file(&out, &buf)?;
            eprintln!("indexed {} pairs, {} terms", index.len(), index.vocabulary.len());
        }
        Command::Query { index, k, text } => {
            if k == 0 {
                return Err(Error::Config("-k must be at least 1".into()));
            }
            let index = load_index(&index)?;
            let mut out = std::io::stdout().lock();
            for (rank, hit) in index.query(&text, k).iter().enumerate() {
                writeln!(out, "{}\t{:.6}\t{}\t{}", rank + 1, hit.similarity, hit.pair.apiseq.join(" "), hit.pair.desc)
                    .map_err(|e| Error::io("<stdout>", e))?;
            }
        }
    }
    Ok(())
}

fn load_index(path: &Path) -> Result<RetrievalIndex> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    RetrievalIndex::load(BufReader::new(file))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
