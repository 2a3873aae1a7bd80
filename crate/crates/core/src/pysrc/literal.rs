//! String literal evaluation and docstring cleanup.

use std::ops::Range;

use super::lexer::StrFlags;

/// Evaluates the body of a string token (prefix and quotes included in
/// `token_text`). Returns an error message for escapes the reference
/// compiler rejects.
pub fn eval_string(token_text: &str, flags: StrFlags) -> Result<String, String> {
    let prefix = flags.prefix_len as usize;
    let q = flags.quote_len as usize;
    let body = &token_text[prefix + q..token_text.len() - q];

    if flags.bytes && !body.is_ascii() {
        return Err("bytes can only contain ASCII literal characters".into());
    }

    let mut out = String::with_capacity(body.len());
    let mut chars = body.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\r' => {
                if chars.peek() == Some(&'\n') {
                    chars.next();
                }
                out.push('\n');
            }
            '\\' if flags.raw => {
                out.push('\\');
                match chars.next() {
                    Some('\r') => {
                        if chars.peek() == Some(&'\n') {
                            chars.next();
                        }
                        out.push('\n');
                    }
                    Some(n) => out.push(n),
                    None => {}
                }
            }
            '\\' => {
                let Some(e) = chars.next() else { break };
                match e {
                    '\n' => {}
                    '\r' => {
                        if chars.peek() == Some(&'\n') {
                            chars.next();
                        }
                    }
                    '\\' => out.push('\\'),
                    '\'' => out.push('\''),
                    '"' => out.push('"'),
                    'a' => out.push('\x07'),
                    'b' => out.push('\x08'),
                    'f' => out.push('\x0c'),
                    'n' => out.push('\n'),
                    'r' => out.push('\r'),
                    't' => out.push('\t'),
                    'v' => out.push('\x0b'),
                    '0'..='7' => {
                        let mut v = e.to_digit(8).unwrap();
                        for _ in 0..2 {
                            match chars.peek().and_then(|c| c.to_digit(8)) {
                                Some(d) => {
                                    v = v * 8 + d;
                                    chars.next();
                                }
                                None => break,
                            }
                        }
                        out.push(char::from_u32(v).unwrap_or('\u{fffd}'));
                    }
                    'x' => {
                        let v = take_hex(&mut chars, 2).ok_or("truncated \\xXX escape")?;
                        out.push(char::from_u32(v).unwrap_or('\u{fffd}'));
                    }
                    'u' | 'U' if !flags.bytes => {
                        let n = if e == 'u' { 4 } else { 8 };
                        let v = take_hex(&mut chars, n).ok_or("truncated unicode escape")?;
                        if v > 0x10ffff {
                            return Err("illegal Unicode character".into());
                        }
                        // Lone surrogates are valid in Python strings but not in Rust ones.
                        out.push(char::from_u32(v).unwrap_or('\u{fffd}'));
                    }
                    'N' if !flags.bytes => {
                        // Named escapes are kept verbatim; the name table is not needed
                        // for description text.
                        if chars.peek() != Some(&'{') {
                            return Err("malformed \\N character escape".into());
                        }
                        out.push_str("\\N");
                        let mut closed = false;
                        for c in chars.by_ref() {
                            out.push(c);
                            if c == '}' {
                                closed = true;
                                break;
                            }
                        }
                        if !closed {
                            return Err("malformed \\N character escape".into());
                        }
                    }
                    other => {
                        out.push('\\');
                        out.push(other);
                    }
                }
            }
            _ => out.push(c),
        }
    }
    Ok(out)
}

/// Byte ranges, relative to `token_text`, of the replacement-field
/// expressions of an f-string, nested format-spec fields included. A
/// trailing `=` debug marker is not part of the range.
pub fn format_fields(token_text: &str, flags: StrFlags) -> Result<Vec<Range<usize>>, String> {
    let start = (flags.prefix_len + flags.quote_len) as usize;
    let end = token_text.len() - flags.quote_len as usize;
    let mut scan = FieldScan { b: token_text.as_bytes(), pos: start, end, raw: flags.raw, fields: Vec::new() };
    scan.literal(false)?;
    Ok(scan.fields)
}

struct FieldScan<'a> {
    b: &'a [u8],
    pos: usize,
    end: usize,
    raw: bool,
    fields: Vec<Range<usize>>,
}

impl FieldScan<'_> {
    fn at(&self, i: usize) -> Option<u8> {
        (i < self.end).then(|| self.b[i])
    }

    /// Literal text up to the end of the string, or up to the `}` closing a
    /// format spec when `in_spec` is set.
    fn literal(&mut self, in_spec: bool) -> Result<(), String> {
        while let Some(c) = self.at(self.pos) {
            match c {
                b'\\' if !self.raw => {
                    if self.at(self.pos + 1) == Some(b'N') && self.at(self.pos + 2) == Some(b'{') {
                        while self.at(self.pos).is_some_and(|c| c != b'}') {
                            self.pos += 1;
                        }
                        self.pos += 1;
                    } else {
                        self.pos += 2;
                    }
                }
                b'{' if !in_spec && self.at(self.pos + 1) == Some(b'{') => self.pos += 2,
                b'}' if in_spec => return Ok(()),
                b'}' if self.at(self.pos + 1) == Some(b'}') => self.pos += 2,
                b'}' => return Err("f-string: single '}' is not allowed".into()),
                b'{' => {
                    self.pos += 1;
                    self.field()?;
                }
                _ => self.pos += 1,
            }
        }
        if in_spec {
            return Err("f-string: expecting '}'".into());
        }
        Ok(())
    }

    /// Expression, optional conversion and optional spec; consumes the
    /// closing brace.
    fn field(&mut self) -> Result<(), String> {
        let start = self.pos;
        let mut depth = 0usize;
        let mut quote: Option<u8> = None;
        let mut expr_end = None;
        while let Some(c) = self.at(self.pos) {
            if let Some(q) = quote {
                if c == q {
                    quote = None;
                }
                self.pos += 1;
                continue;
            }
            match c {
                b'\\' => return Err("f-string expression part cannot include a backslash".into()),
                b'#' => return Err("f-string expression part cannot include '#'".into()),
                b'\'' | b'"' => quote = Some(c),
                b'(' | b'[' | b'{' => depth += 1,
                b')' | b']' | b'}' if depth > 0 => depth -= 1,
                b'}' | b':' if depth == 0 => break,
                b'!' if depth == 0 && self.at(self.pos + 1) != Some(b'=') => break,
                b'=' if depth == 0
                    && matches!(self.at(self.pos + 1), Some(b'}' | b'!' | b':'))
                    && !matches!(self.b[self.pos - 1], b'=' | b'!' | b'<' | b'>') =>
                {
                    expr_end = Some(self.pos);
                }
                _ => {}
            }
            self.pos += 1;
        }
        if quote.is_some() || self.at(self.pos).is_none() {
            return Err("f-string: expecting '}'".into());
        }
        let expr_end = expr_end.unwrap_or(self.pos);
        if self.b[start..expr_end].iter().all(u8::is_ascii_whitespace) {
            return Err("f-string: empty expression not allowed".into());
        }
        self.fields.push(start..expr_end);
        if self.b[self.pos] == b'!' {
            match (self.at(self.pos + 1), self.at(self.pos + 2)) {
                (Some(b's' | b'r' | b'a'), Some(b':' | b'}')) => self.pos += 2,
                _ => return Err("f-string: invalid conversion character".into()),
            }
        }
        if self.b[self.pos] == b':' {
            self.pos += 1;
            self.literal(true)?;
        }
        // Closing brace of the field.
        self.pos += 1;
        Ok(())
    }
}

fn take_hex(chars: &mut std::iter::Peekable<std::str::Chars<'_>>, n: usize) -> Option<u32> {
    let mut v = 0u32;
    for _ in 0..n {
        let d = chars.peek()?.to_digit(16)?;
        chars.next();
        v = v.checked_mul(16)? + d;
    }
    Some(v)
}

fn expand_tabs(line: &str) -> String {
    let mut out = String::with_capacity(line.len());
    let mut col = 0usize;
    for c in line.chars() {
        match c {
            '\t' => {
                let n = 8 - col % 8;
                out.extend(std::iter::repeat_n(' ', n));
                col += n;
            }
            '\n' | '\r' => {
                out.push(c);
                col = 0;
            }
            _ => {
                out.push(c);
                col += 1;
            }
        }
    }
    out
}

fn is_py_whitespace(c: char) -> bool {
    c.is_whitespace() || ('\x1c'..='\x1f').contains(&c)
}

/// Uniformly removes the indentation of the second and later lines, strips
/// the first line, and drops leading and trailing blank lines.
pub fn clean_docstring(doc: &str) -> String {
    let expanded: Vec<String> = doc.split('\n').map(expand_tabs).collect();
    let margin = expanded
        .iter()
        .skip(1)
        .filter_map(|l| {
            let content = l.trim_start_matches(is_py_whitespace);
            (!content.is_empty()).then(|| l.chars().count() - content.chars().count())
        })
        .min();

    let mut lines: Vec<String> = Vec::with_capacity(expanded.len());
    for (i, l) in expanded.into_iter().enumerate() {
        if i == 0 {
            lines.push(l.trim_start_matches(is_py_whitespace).to_string());
        } else if let Some(m) = margin {
            lines.push(l.chars().skip(m).collect());
        } else {
            lines.push(l);
        }
    }
    while lines.last().is_some_and(|l| l.trim_matches(is_py_whitespace).is_empty()) {
        lines.pop();
    }
    let first = lines.iter().position(|l| !l.trim_matches(is_py_whitespace).is_empty()).unwrap_or(lines.len());
    lines[first..].join("\n")
}
