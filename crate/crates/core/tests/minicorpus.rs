use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use apimine::corpus::{export_gu_format, mine, read_manifest, resolve_paths, select_projects, to_jsonl, MiningStats, SelectionCriteria};
use apimine::pipeline::{run_pipeline, PipelineConfig};

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/minicorpus")
}

fn selected() -> Vec<apimine::corpus::ProjectManifestEntry> {
    let manifest = corpus_dir().join("manifest.jsonl");
    let mut entries = read_manifest(&manifest).unwrap();
    resolve_paths(&mut entries, &corpus_dir());
    select_projects(&entries, &SelectionCriteria::default())
}

/// Every output file of mine, pipeline and export, by name.
fn run_all(workers: usize) -> BTreeMap<String, Vec<u8>> {
    let mined = mine(&selected(), workers).unwrap();
    let bundle = run_pipeline(mined.records.clone(), &PipelineConfig::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    export_gu_format(&bundle.train, &bundle.test, dir.path()).unwrap();
    let mut out = BTreeMap::new();
    out.insert("raw.jsonl".to_string(), to_jsonl(&mined.records).into_bytes());
    out.insert("mining.json".to_string(), serde_json::to_vec(&mined.stats).unwrap());
    out.insert("train.jsonl".to_string(), to_jsonl(&bundle.train).into_bytes());
    out.insert("test.jsonl".to_string(), to_jsonl(&bundle.test).into_bytes());
    out.insert("stats.txt".to_string(), bundle.stage_stats.to_text().into_bytes());
    out.insert("modules.txt".to_string(), bundle.accepted_modules.join("\n").into_bytes());
    for e in std::fs::read_dir(dir.path()).unwrap() {
        let e = e.unwrap();
        out.insert(e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap());
    }
    out
}

#[test]
fn selection_keeps_three_projects() {
    let ids: Vec<String> = selected().into_iter().map(|e| e.project_id).collect();
    assert_eq!(ids, ["acme-tools", "datakit", "webfetch"]);
}

#[test]
fn mining_statistics() {
    // 44 .py files in the selected projects; one Python 2 file and one
    // undeclared non-UTF-8 file; 144 defs by line count minus the two in
    // rejected files, of which Store.refresh only calls project code.
    let stats = mine(&selected(), 1).unwrap().stats;
    assert_eq!(
        stats,
        MiningStats {
            projects: 3,
            files_seen: 44,
            parsed_ok: 42,
            encoding_errors: 1,
            syntax_errors: 1,
            functions_seen: 142,
            functions_with_apiseq: 141,
        }
    );
    assert_eq!(stats.files_seen, stats.parsed_ok + stats.encoding_errors + stats.syntax_errors);
}

#[test]
fn records_are_canonically_ordered() {
    let recs = mine(&selected(), 4).unwrap().records;
    assert!(recs.iter().all(|r| !r.apiseq.is_empty()));
    let keys: Vec<(&str, &str)> = recs.iter().map(|r| (r.project.as_str(), r.path.as_str())).collect();
    assert!(keys.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn special_files() {
    let recs = mine(&selected(), 1).unwrap().records;
    let find = |q: &str| recs.iter().find(|r| r.qualname == q).unwrap_or_else(|| panic!("{q}"));
    assert_eq!(find("set_locale").desc, "Configure the numeric locale for the caf\u{e9} reports.");
    assert_eq!(find("describe_env").apiseq, ["sys.version.split", "os.getcwd"]);
    assert_eq!(find("dispatch").apiseq, ["os.path.isdir", "os.getcwd", "sys.exit"]);
    assert_eq!(find("Store.__init__").apiseq, ["os.path.expanduser", "os.path.join", "collections.OrderedDict"]);
    assert_eq!(
        find("Store.save").apiseq,
        ["os.path.dirname", "os.path.join", "json.dump", "os.path.dirname", "os.path.join", "os.replace"]
    );
    assert!(recs.iter().all(|r| r.qualname != "Store.refresh" && r.qualname != "show_env"));
}

#[test]
fn pipeline_stage_counts() {
    let mined = mine(&selected(), 1).unwrap();
    let bundle = run_pipeline(mined.records, &PipelineConfig::default()).unwrap();
    assert_eq!(
        bundle.stage_stats.to_text(),
        "stage\tinput\toutput\nlength\t141\t141\nvocabulary\t141\t141\ndedup\t141\t40\ndesc_words\t40\t35\ntest_word\t35\t33\nsplit\t33\t33\ntrain\t32\ntest\t1\naccepted_modules\t28\n"
    );
    let train: HashSet<_> = bundle.train.iter().map(|p| p.key()).collect();
    assert!(bundle.test.iter().all(|p| !train.contains(&p.key())));
}

#[test]
fn outputs_independent_of_worker_count() {
    let one = run_all(1);
    let eight = run_all(8);
    assert_eq!(one.keys().collect::<Vec<_>>(), eight.keys().collect::<Vec<_>>());
    for (name, bytes) in &one {
        assert!(eight[name] == *bytes, "{name} differs");
    }
    assert_eq!(one.len(), 12);
}
