//! C interface to apimine.
//!
//! Every function returns an [`ApimineStatus`]. On failure a message is
//! kept per thread and can be read with [`apimine_last_error`]. Strings
//! returned through out-parameters are owned by the caller and released
//! with [`apimine_string_free`]; indexes with [`apimine_index_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use apimine::apiseq::ProjectModules;
use apimine::corpus::{module_pairs, parse_jsonl, to_jsonl};
use apimine::eval::sentence_bleu4;
use apimine::pysrc::parse_source;
use apimine::retrieval::{build_index, RetrievalIndex};
use apimine::textproc::stem;
use apimine::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApimineStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    Encoding = 4,
    EmptyDataset = 5,
    EmptyReference = 6,
    Data = 7,
    Config = 8,
    Io = 9,
    Panic = 10,
}

/// Opaque TF-IDF retrieval index.
pub struct ApimineIndex {
    inner: RetrievalIndex,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let mut bytes = msg.into();
    bytes.retain(|&b| b != 0);
    let c = CString::new(bytes).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> ApimineStatus {
    match err {
        Error::Syntax { .. } => ApimineStatus::Syntax,
        Error::Encoding { .. } => ApimineStatus::Encoding,
        Error::EmptyDataset => ApimineStatus::EmptyDataset,
        Error::EmptyReference => ApimineStatus::EmptyReference,
        Error::Data(_) => ApimineStatus::Data,
        Error::Config(_) => ApimineStatus::Config,
        Error::Io { .. } => ApimineStatus::Io,
    }
}

struct Fail(ApimineStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, converting errors and panics into a status and last-error message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ApimineStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ApimineStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ApimineStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or point to a NUL-terminated string.
unsafe fn arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(ApimineStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail(ApimineStatus::InvalidUtf8, format!("{name}: {e}")))
}

fn check_out<T>(out: *mut T, name: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(ApimineStatus::NullArgument, format!("{name} is null")));
    }
    Ok(())
}

fn into_c(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s).map(CString::into_raw).map_err(|_| Fail(ApimineStatus::Data, "result contains a NUL byte".into()))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn apimine_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn apimine_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses one Python source file and writes its (desc, apiseq) pairs as
/// JSONL to `*out_jsonl`. No project modules are known, so every absolute
/// import counts as an API.
///
/// # Safety
/// `source` and `path` must be NUL-terminated strings; `out_jsonl` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn apimine_extract_pairs(source: *const c_char, path: *const c_char, out_jsonl: *mut *mut c_char) -> ApimineStatus {
    guard(|| {
        let source = arg(source, "source")?;
        let path = arg(path, "path")?;
        check_out(out_jsonl, "out_jsonl")?;
        let module = parse_source(source, path)?;
        let pairs = module_pairs(&module, "", &ProjectModules::default());
        *out_jsonl = into_c(to_jsonl(&pairs))?;
        Ok(())
    })
}

/// Porter stem of a lowercase word.
///
/// # Safety
/// `word` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn apimine_stem(word: *const c_char, out: *mut *mut c_char) -> ApimineStatus {
    guard(|| {
        let word = arg(word, "word")?;
        check_out(out, "out")?;
        *out = into_c(stem(word))?;
        Ok(())
    })
}

/// Sentence BLEU-4 of two space-separated token streams.
///
/// # Safety
/// `hyp` and `reference` must be NUL-terminated strings; `out` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn apimine_sentence_bleu4(hyp: *const c_char, reference: *const c_char, out: *mut f64) -> ApimineStatus {
    guard(|| {
        let hyp: Vec<&str> = arg(hyp, "hyp")?.split_whitespace().collect();
        let reference: Vec<&str> = arg(reference, "reference")?.split_whitespace().collect();
        check_out(out, "out")?;
        *out = sentence_bleu4(&hyp, &reference)?;
        Ok(())
    })
}

/// Builds an index from JSONL training pairs.
///
/// # Safety
/// `train_jsonl` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn apimine_index_build(train_jsonl: *const c_char, out: *mut *mut ApimineIndex) -> ApimineStatus {
    guard(|| {
        let text = arg(train_jsonl, "train_jsonl")?;
        check_out(out, "out")?;
        let index = build_index(parse_jsonl(text, "<train_jsonl>")?)?;
        *out = Box::into_raw(Box::new(ApimineIndex { inner: index }));
        Ok(())
    })
}

/// Loads an index file written by `apimine index` or [`apimine_index_save`].
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn apimine_index_load(path: *const c_char, out: *mut *mut ApimineIndex) -> ApimineStatus {
    guard(|| {
        let path = arg(path, "path")?;
        check_out(out, "out")?;
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let index = RetrievalIndex::load(std::io::BufReader::new(file))?;
        *out = Box::into_raw(Box::new(ApimineIndex { inner: index }));
        Ok(())
    })
}

/// # Safety
/// `index` must come from this library; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn apimine_index_save(index: *const ApimineIndex, path: *const c_char) -> ApimineStatus {
    guard(|| {
        let index = index.as_ref().ok_or_else(|| Fail(ApimineStatus::NullArgument, "index is null".into()))?;
        let path = arg(path, "path")?;
        let mut buf = Vec::new();
        index.inner.save(&mut buf).map_err(|e| Error::io(path, e))?;
        std::fs::write(path, buf).map_err(|e| Error::io(path, e))?;
        Ok(())
    })
}

/// Number of indexed pairs; 0 for a null index.
///
/// # Safety
/// `index` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn apimine_index_len(index: *const ApimineIndex) -> usize {
    index.as_ref().map_or(0, |i| i.inner.len())
}

/// Top `k` results for `text` as a JSON array of
/// `{"rank", "index", "similarity", "apiseq", "desc"}` objects.
///
/// # Safety
/// `index` must come from this library; `text` must be a NUL-terminated
/// string; `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn apimine_index_query(
    index: *const ApimineIndex,
    text: *const c_char,
    k: usize,
    out_json: *mut *mut c_char,
) -> ApimineStatus {
    guard(|| {
        let index = index.as_ref().ok_or_else(|| Fail(ApimineStatus::NullArgument, "index is null".into()))?;
        let text = arg(text, "text")?;
        check_out(out_json, "out_json")?;
        if k == 0 {
            return Err(Fail(ApimineStatus::Config, "k must be at least 1".into()));
        }
        let hits: Vec<serde_json::Value> = index
            .inner
            .query(text, k)
            .iter()
            .enumerate()
            .map(|(rank, h)| {
                serde_json::json!({
                    "rank": rank + 1,
                    "index": h.index,
                    "similarity": h.similarity,
                    "apiseq": h.pair.apiseq,
                    "desc": h.pair.desc,
                })
            })
            .collect();
        *out_json = into_c(serde_json::Value::Array(hits).to_string())?;
        Ok(())
    })
}

/// Releases an index. Null is ignored.
///
/// # Safety
/// `index` must be null or come from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn apimine_index_free(index: *mut ApimineIndex) {
    if !index.is_null() {
        drop(Box::from_raw(index));
    }
}
