//! Tokenization of descriptions, API sequences and code, plus stemming.

mod porter;

pub use porter::stem;

pub const PAD: &str = "<pad>";
pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
pub const UNK: &str = "<unk>";
pub const SPECIAL_TOKENS: [&str; 4] = [PAD, BOS, EOS, UNK];
/// Token between the identifiers of one API call.
pub const SEPARATOR: &str = ".";

/// Lowercases and splits on every non-alphanumeric character.
pub fn tokenize_desc(text: &str) -> Vec<String> {
    text.to_lowercase().split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()).map(str::to_string).collect()
}

/// Stems tokens made only of ASCII letters; other tokens pass through.
pub fn stem_tokens(tokens: &[String]) -> Vec<String> {
    tokens.iter().map(|t| if t.bytes().all(|b| b.is_ascii_lowercase()) { stem(t) } else { t.clone() }).collect()
}

/// Tokenized, stemmed description tokens as used for export and retrieval.
pub fn desc_terms(text: &str) -> Vec<String> {
    stem_tokens(&tokenize_desc(text))
}

/// `os.path.join` becomes `os . path . join`; calls are concatenated.
pub fn tokenize_apiseq<S: AsRef<str>>(calls: &[S]) -> Vec<String> {
    let mut out = Vec::new();
    for call in calls {
        for (i, ident) in call.as_ref().split('.').enumerate() {
            if i > 0 {
                out.push(SEPARATOR.to_string());
            }
            out.push(ident.to_string());
        }
    }
    out
}

/// Inverse of [`tokenize_apiseq`]: a call ends wherever two identifiers are
/// adjacent. Returns `None` for streams the tokenizer cannot produce.
pub fn detokenize_apiseq<S: AsRef<str>>(tokens: &[S]) -> Option<Vec<String>> {
    let mut calls: Vec<String> = Vec::new();
    let mut expect_ident = true;
    let mut after_sep = false;
    for t in tokens {
        let t = t.as_ref();
        if t == SEPARATOR {
            if expect_ident {
                return None;
            }
            expect_ident = true;
            after_sep = true;
        } else {
            if t.is_empty() {
                return None;
            }
            if after_sep {
                let last = calls.last_mut()?;
                last.push('.');
                last.push_str(t);
            } else {
                calls.push(t.to_string());
            }
            expect_ident = false;
            after_sep = false;
        }
    }
    if after_sep {
        return None;
    }
    Some(calls)
}

/// Code tokens for overlap matching: identifier runs (letters, digits,
/// underscores) and single punctuation characters; whitespace is dropped.
pub fn tokenize_code(code: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut ident = String::new();
    for c in code.chars() {
        if c.is_alphanumeric() || c == '_' {
            ident.push(c);
            continue;
        }
        if !ident.is_empty() {
            out.push(std::mem::take(&mut ident));
        }
        if !c.is_whitespace() {
            out.push(c.to_string());
        }
    }
    if !ident.is_empty() {
        out.push(ident);
    }
    out
}
