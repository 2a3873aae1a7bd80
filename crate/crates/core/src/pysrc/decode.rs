use encoding_rs::Encoding;

use crate::error::{Error, Result};

const BOM: &[u8] = b"\xef\xbb\xbf";

/// Looks for a `coding[:=]name` declaration in a comment on one of the
/// first two lines. The second line only counts when the first is blank or
/// a comment.
fn declared_encoding(bytes: &[u8]) -> Option<String> {
    let mut lines = bytes.split(|&b| b == b'\n');
    let first = lines.next()?;
    if let Some(name) = coding_in_line(first) {
        return Some(name);
    }
    let trimmed = first.iter().skip_while(|b| matches!(b, b' ' | b'\t' | b'\x0c' | b'\r'));
    let first_is_comment_or_blank = matches!(trimmed.clone().next(), None | Some(b'#'));
    if first_is_comment_or_blank {
        return lines.next().and_then(coding_in_line);
    }
    None
}

fn coding_in_line(line: &[u8]) -> Option<String> {
    let start = line.iter().position(|b| !matches!(b, b' ' | b'\t' | b'\x0c'))?;
    if line[start] != b'#' {
        return None;
    }
    let comment = &line[start..];
    let at = comment.windows(6).position(|w| w == b"coding")?;
    let rest = &comment[at + 6..];
    if !matches!(rest.first(), Some(b':' | b'=')) {
        return None;
    }
    let name: Vec<u8> = rest[1..]
        .iter()
        .skip_while(|b| matches!(b, b' ' | b'\t'))
        .take_while(|b| b.is_ascii_alphanumeric() || matches!(b, b'-' | b'_' | b'.'))
        .copied()
        .collect();
    (!name.is_empty()).then(|| String::from_utf8(name).unwrap())
}

fn normalize(name: &str) -> String {
    name.to_ascii_lowercase().replace('_', "-")
}

fn encoding_error(path: &str, message: impl Into<String>) -> Error {
    Error::Encoding { path: path.to_string(), message: message.into() }
}

/// Decodes the raw bytes of a source file: UTF-8 unless the file declares
/// another encoding in its first two lines.
pub fn decode_file(bytes: &[u8], path: &str) -> Result<String> {
    let (body, had_bom) = match bytes.strip_prefix(BOM) {
        Some(rest) => (rest, true),
        None => (bytes, false),
    };
    let declared = declared_encoding(body).map(|n| normalize(&n));
    let name = declared.as_deref().unwrap_or("utf-8");
    let is_utf8 = matches!(name, "utf-8" | "utf8" | "utf-8-sig");
    if had_bom && !is_utf8 {
        return Err(encoding_error(path, format!("encoding problem: {name} with BOM")));
    }
    if is_utf8 {
        return String::from_utf8(body.to_vec()).map_err(|e| encoding_error(path, format!("invalid utf-8: {e}")));
    }
    match name {
        "latin-1" | "latin1" | "iso-8859-1" | "iso8859-1" | "iso-latin-1" | "l1" => Ok(body.iter().map(|&b| b as char).collect()),
        "ascii" | "us-ascii" | "646" => {
            if body.is_ascii() {
                Ok(String::from_utf8(body.to_vec()).unwrap())
            } else {
                Err(encoding_error(path, "non-ASCII byte in ascii-encoded file"))
            }
        }
        _ => {
            let enc = Encoding::for_label(name.as_bytes()).ok_or_else(|| encoding_error(path, format!("unknown encoding: {name}")))?;
            enc.decode_without_bom_handling_and_without_replacement(body)
                .map(|s| s.into_owned())
                .ok_or_else(|| encoding_error(path, format!("undecodable bytes for {name}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_is_utf8() {
        assert_eq!(decode_file(b"x = 1", "a.py").unwrap(), "x = 1");
    }

    #[test]
    fn latin1_declaration() {
        let src = b"# -*- coding: latin-1 -*-\nname = 'caf\xe9'\n";
        let text = decode_file(src, "a.py").unwrap();
        assert!(text.contains("caf\u{e9}"));
    }

    #[test]
    fn declaration_on_second_line() {
        let src = b"#!/usr/bin/env python\n# vim: set fileencoding=iso-8859-15 :\nx = '\xa4'\n";
        assert!(decode_file(src, "a.py").unwrap().contains('\u{20ac}'));
    }

    #[test]
    fn declaration_after_code_is_ignored() {
        let src = b"x = 1\n# coding: latin-1\ny = '\xe9'\n";
        assert!(matches!(decode_file(src, "a.py"), Err(Error::Encoding { .. })));
    }

    #[test]
    fn invalid_utf8_without_declaration() {
        assert!(matches!(decode_file(b"\xff", "a.py"), Err(Error::Encoding { .. })));
    }

    #[test]
    fn bom_is_stripped() {
        assert_eq!(decode_file(b"\xef\xbb\xbfx = 1\n", "a.py").unwrap(), "x = 1\n");
    }

    #[test]
    fn unknown_encoding() {
        assert!(decode_file(b"# coding: klingon\nx=1\n", "a.py").is_err());
    }
}
