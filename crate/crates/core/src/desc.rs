//! Natural-language descriptions for function units.
//!
//! A description is the docstring's primary description (leading lines up
//! to a blank line or a parameter/return section) followed by its returns
//! description (the first `return`/`returns` block, normalized to start
//! with the word "return"). Functions without a usable docstring are
//! described by their split name.

use serde::{Deserialize, Serialize};

use crate::pysrc::FunctionUnit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Docstring,
    Name,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Description {
    pub text: String,
    pub source_kind: SourceKind,
}

const PARAM_WORDS: &[&str] = &["param", "params", "parameter", "parameters"];
const RETURN_WORDS: &[&str] = &["return", "returns"];

/// First whitespace-delimited word of the line with decorating colons
/// stripped, lowercased.
fn leading_keyword(line: &str) -> Option<String> {
    let word = line.split_whitespace().next()?;
    Some(word.trim_matches(':').to_lowercase())
}

fn is_param_line(line: &str) -> bool {
    leading_keyword(line).is_some_and(|w| PARAM_WORDS.contains(&w.as_str()))
}

fn is_return_line(line: &str) -> bool {
    leading_keyword(line).is_some_and(|w| RETURN_WORDS.contains(&w.as_str()))
}

fn is_blank(line: &str) -> bool {
    line.trim().is_empty()
}

fn squash<'a>(parts: impl IntoIterator<Item = &'a str>) -> String {
    parts.into_iter().flat_map(str::split_whitespace).collect::<Vec<_>>().join(" ")
}

pub fn primary_description(docstring: &str) -> String {
    let lines = docstring.lines().take_while(|l| !is_blank(l) && !is_param_line(l) && !is_return_line(l));
    squash(lines)
}

pub fn returns_description(docstring: &str) -> String {
    let mut lines = docstring.lines().skip_while(|l| !is_return_line(l));
    let Some(first) = lines.next() else {
        return String::new();
    };
    // Replace the decorated keyword (":returns:", "Returns:", "return")
    // with the bare word "return".
    let rest_of_first = first.trim_start();
    let keyword_len = rest_of_first.find(char::is_whitespace).unwrap_or(rest_of_first.len());
    let mut parts = vec!["return", &rest_of_first[keyword_len..]];
    parts.extend(lines.take_while(|l| !is_blank(l) && !is_param_line(l)));
    squash(parts)
}

/// Turns an identifier into words: underscores become spaces and every
/// uppercase letter starts a new lowercased word.
pub fn split_name(name: &str) -> String {
    let mut out = String::with_capacity(name.len() + 4);
    for c in name.chars() {
        if c == '_' {
            out.push(' ');
        } else if c.is_uppercase() {
            out.push(' ');
            out.extend(c.to_lowercase());
        } else {
            out.push(c);
        }
    }
    squash([out.as_str()])
}

pub fn extract_description(unit: &FunctionUnit) -> Description {
    if let Some(doc) = unit.docstring.as_deref() {
        let primary = primary_description(doc);
        let returns = returns_description(doc);
        let text = match (primary.is_empty(), returns.is_empty()) {
            (false, false) => format!("{primary} {returns}"),
            (false, true) => primary,
            (true, false) => returns,
            (true, true) => String::new(),
        };
        if !text.is_empty() {
            return Description { text, source_kind: SourceKind::Docstring };
        }
    }
    Description { text: split_name(&unit.simple_name), source_kind: SourceKind::Name }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pysrc::UnitKind;
    use proptest::prelude::*;

    fn unit(name: &str, doc: Option<&str>) -> FunctionUnit {
        FunctionUnit {
            qualname: name.into(),
            simple_name: name.into(),
            kind: UnitKind::Function,
            is_async: false,
            docstring: doc.map(str::to_string),
            call_sites: vec![],
            local_defs: vec![],
            def_offset: 0,
        }
    }

    #[test]
    fn sys_path_example_docstring() {
        let d = extract_description(&unit("sys_path", Some("Add `./third_party` to `sys.path`.")));
        assert_eq!(d.text, "Add `./third_party` to `sys.path`.");
        assert_eq!(d.source_kind, SourceKind::Docstring);
    }

    #[test]
    fn primary_and_returns_joined() {
        let doc = "Read config.\n\n:param path: file\n:returns: dict of settings\n";
        assert_eq!(extract_description(&unit("f", Some(doc))).text, "Read config. return dict of settings");
    }

    #[test]
    fn name_fallback() {
        let d = extract_description(&unit("doSomething", None));
        assert_eq!((d.text.as_str(), d.source_kind), ("do something", SourceKind::Name));
        assert_eq!(extract_description(&unit("do_something", Some("   "))).text, "do something");
    }

    #[test]
    fn primary_rules() {
        assert_eq!(primary_description("Copy a file.\n\nDetails."), "Copy a file.");
        assert_eq!(primary_description(":param x: input"), "");
        assert_eq!(primary_description("Sort items.\nStable sort.\n:returns: list"), "Sort items. Stable sort.");
        assert_eq!(primary_description("Load.\nPARAMETERS: none"), "Load.");
    }

    #[test]
    fn returns_rules() {
        assert_eq!(returns_description(":returns: the sum"), "return the sum");
        assert_eq!(returns_description("Does stuff."), "");
        assert_eq!(returns_description("Returns: count\n\nNotes."), "return count");
        assert_eq!(returns_description("Sum.\nReturns\n    the total\n    as int\n:param a: x"), "return the total as int");
    }

    #[test]
    fn returns_only_docstring() {
        let d = extract_description(&unit("f", Some("Returns the number of rows.")));
        assert_eq!(d.text, "return the number of rows.");
    }

    #[test]
    fn split_name_cases() {
        assert_eq!(split_name("do_something"), "do something");
        assert_eq!(split_name("doSomething"), "do something");
        assert_eq!(split_name("x"), "x");
        assert_eq!(split_name("HTTPServer"), "h t t p server");
        assert_eq!(split_name("__init__"), "init");
    }

    proptest! {
        #[test]
        fn split_name_lowercase_no_underscores(name in "[A-Za-z_][A-Za-z0-9_]{0,20}") {
            let s = split_name(&name);
            prop_assert!(!s.contains('_'));
            prop_assert_eq!(s.to_lowercase(), s.clone());
            prop_assert_eq!(s.trim(), s.as_str());
        }

        #[test]
        fn snake_case_round_trips(words in prop::collection::vec("[a-z][a-z0-9]{0,6}", 1..5)) {
            let name = words.join("_");
            let split = split_name(&name);
            prop_assert_eq!(split_name(&split.replace(' ', "_")), split.clone());
            prop_assert_eq!(split.replace(' ', "_"), name);
        }

        #[test]
        fn no_param_lines_leak(lines in prop::collection::vec(
            prop_oneof!["[a-z ]{0,12}", ":param [a-z]{1,4}: [a-z ]{0,8}", "Returns: [a-z ]{0,8}", "Parameters", ""],
            0..8,
        )) {
            let doc = lines.join("\n");
            let d = extract_description(&unit("f_g", Some(&doc)));
            prop_assert!(!d.text.contains('\n'));
            prop_assert_eq!(d.text.trim(), d.text.as_str());
            prop_assert!(!d.text.contains(":param"));
        }
    }
}
