//! Tokenizer for Python 3 source text.
//!
//! Produces a flat token stream with `Newline`/`Indent`/`Dedent` markers the
//! way the reference tokenizer does, tracks bracket nesting so that every
//! opening bracket knows its partner, and rejects constructs that only the
//! Python 2 grammar accepts (backticks, `<>`, `ur''`, long and old-style
//! octal literals).

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Name,
    Number,
    Str(StrFlags),
    Op,
    Newline,
    Indent,
    Dedent,
    EndMarker,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StrFlags {
    pub raw: bool,
    pub bytes: bool,
    pub format: bool,
    /// 1 or 3.
    pub quote_len: u8,
    /// Length in bytes of the prefix letters before the opening quote.
    pub prefix_len: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub start: usize,
    pub end: usize,
    /// For an opening bracket, the index of its closing partner (and vice versa).
    pub partner: Option<usize>,
}

impl Token {
    pub fn text<'a>(&self, src: &'a str) -> &'a str {
        &src[self.start..self.end]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at byte {}", self.message, self.offset)
    }
}

pub const KEYWORDS: &[&str] = &[
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class", "continue", "def", "del", "elif", "else", "except",
    "finally", "for", "from", "global", "if", "import", "in", "is", "lambda", "nonlocal", "not", "or", "pass", "raise", "return", "try",
    "while", "with", "yield",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

const OPS3: &[&str] = &["**=", "//=", ">>=", "<<=", "..."];
const OPS2: &[&str] = &["->", ":=", "==", "!=", "<=", ">=", "**", "//", "<<", ">>", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@="];
const OPS1: &[u8] = b"+-*/%@&|^~<>=.,:;";

fn is_id_start(c: char) -> bool {
    c == '_' || c.is_alphabetic()
}

fn is_id_continue(c: char) -> bool {
    c == '_' || c.is_alphanumeric()
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    tokens: Vec<Token>,
    brackets: Vec<usize>,
    /// Indentation stack: (column with tab size 8, column with tab size 1).
    indents: Vec<(usize, usize)>,
    at_line_start: bool,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let mut lx =
        Lexer { src, bytes: src.as_bytes(), pos: 0, tokens: Vec::new(), brackets: Vec::new(), indents: vec![(0, 0)], at_line_start: true };
    // A leading byte-order mark is not part of the program text.
    if src.starts_with('\u{feff}') {
        lx.pos = '\u{feff}'.len_utf8();
    }
    lx.run()?;
    Ok(lx.tokens)
}

impl<'a> Lexer<'a> {
    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, LexError> {
        Err(LexError { offset, message: message.into() })
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_at(&self, n: usize) -> Option<u8> {
        self.bytes.get(self.pos + n).copied()
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn push(&mut self, kind: TokenKind, start: usize, end: usize) {
        self.tokens.push(Token { kind, start, end, partner: None });
    }

    fn last_is_line_break(&self) -> bool {
        matches!(self.tokens.last().map(|t| t.kind), None | Some(TokenKind::Newline) | Some(TokenKind::Indent) | Some(TokenKind::Dedent))
    }

    fn run(&mut self) -> Result<(), LexError> {
        loop {
            if self.at_line_start && self.brackets.is_empty() {
                if !self.handle_indentation()? {
                    break;
                }
                continue;
            }
            self.skip_inline_whitespace();
            let Some(b) = self.peek() else { break };
            let start = self.pos;
            match b {
                b'#' => self.skip_comment(),
                b'\n' | b'\r' => {
                    self.consume_newline();
                    if self.brackets.is_empty() {
                        if !self.last_is_line_break() {
                            self.push(TokenKind::Newline, start, start);
                        }
                        self.at_line_start = true;
                    }
                }
                b'\\' => {
                    self.pos += 1;
                    match self.peek() {
                        Some(b'\n') | Some(b'\r') => self.consume_newline(),
                        None => return self.err(start, "unexpected EOF after line continuation"),
                        _ => return self.err(start, "unexpected character after line continuation"),
                    }
                }
                b'\'' | b'"' => self.lex_string(start, StrFlags::default())?,
                b'0'..=b'9' => self.lex_number(start)?,
                b'.' if matches!(self.peek_at(1), Some(b'0'..=b'9')) => self.lex_number(start)?,
                b'(' | b'[' | b'{' => {
                    self.pos += 1;
                    self.brackets.push(self.tokens.len());
                    self.push(TokenKind::Op, start, self.pos);
                }
                b')' | b']' | b'}' => {
                    self.pos += 1;
                    let Some(open) = self.brackets.pop() else {
                        return self.err(start, format!("unmatched '{}'", b as char));
                    };
                    let expected = match self.bytes[self.tokens[open].start] {
                        b'(' => b')',
                        b'[' => b']',
                        _ => b'}',
                    };
                    if expected != b {
                        return self.err(start, "closing bracket does not match opening bracket");
                    }
                    let idx = self.tokens.len();
                    self.push(TokenKind::Op, start, self.pos);
                    self.tokens[idx].partner = Some(open);
                    self.tokens[open].partner = Some(idx);
                }
                b'`' => return self.err(start, "backquote is Python 2 syntax"),
                _ => {
                    let c = self.peek_char().unwrap();
                    if is_id_start(c) {
                        self.lex_name_or_prefixed_string(start)?;
                    } else {
                        self.lex_operator(start)?;
                    }
                }
            }
        }

        if let Some(&open) = self.brackets.last() {
            return self.err(self.tokens[open].start, "bracket was never closed");
        }
        let end = self.src.len();
        if !self.last_is_line_break() {
            self.push(TokenKind::Newline, end, end);
        }
        while self.indents.len() > 1 {
            self.indents.pop();
            self.push(TokenKind::Dedent, end, end);
        }
        self.push(TokenKind::EndMarker, end, end);
        Ok(())
    }

    /// Measures the indentation of a fresh line and emits indent/dedent
    /// tokens. Blank and comment-only lines are skipped entirely. Returns
    /// false at end of input.
    fn handle_indentation(&mut self) -> Result<bool, LexError> {
        let (mut col8, mut col1) = (0usize, 0usize);
        let line_start = self.pos;
        loop {
            match self.peek() {
                Some(b' ') => {
                    col8 += 1;
                    col1 += 1;
                }
                Some(b'\t') => {
                    col8 = (col8 / 8 + 1) * 8;
                    col1 += 1;
                }
                Some(b'\x0c') => {
                    col8 = 0;
                    col1 = 0;
                }
                _ => break,
            }
            self.pos += 1;
        }
        match self.peek() {
            None => return Ok(false),
            Some(b'#') => {
                self.skip_comment();
                if self.peek().is_some() {
                    self.consume_newline();
                }
                return Ok(true);
            }
            Some(b'\n') | Some(b'\r') => {
                self.consume_newline();
                return Ok(true);
            }
            _ => {}
        }
        self.at_line_start = false;
        let here = self.pos;
        let &(top8, top1) = self.indents.last().unwrap();
        if col8 > top8 {
            if col1 <= top1 {
                return self.err(line_start, "inconsistent use of tabs and spaces in indentation");
            }
            self.indents.push((col8, col1));
            self.push(TokenKind::Indent, here, here);
        } else if col8 == top8 {
            if col1 != top1 {
                return self.err(line_start, "inconsistent use of tabs and spaces in indentation");
            }
        } else {
            while col8 < self.indents.last().unwrap().0 {
                self.indents.pop();
                self.push(TokenKind::Dedent, here, here);
            }
            let &(top8, top1) = self.indents.last().unwrap();
            if col8 != top8 {
                return self.err(line_start, "unindent does not match any outer indentation level");
            }
            if col1 != top1 {
                return self.err(line_start, "inconsistent use of tabs and spaces in indentation");
            }
        }
        Ok(true)
    }

    fn skip_inline_whitespace(&mut self) {
        while let Some(b' ' | b'\t' | b'\x0c') = self.peek() {
            self.pos += 1;
        }
    }

    fn skip_comment(&mut self) {
        while let Some(b) = self.peek() {
            if b == b'\n' || b == b'\r' {
                break;
            }
            self.pos += 1;
        }
    }

    fn consume_newline(&mut self) {
        match self.peek() {
            Some(b'\r') => {
                self.pos += 1;
                if self.peek() == Some(b'\n') {
                    self.pos += 1;
                }
            }
            Some(b'\n') => self.pos += 1,
            _ => {}
        }
    }

    fn lex_name_or_prefixed_string(&mut self, start: usize) -> Result<(), LexError> {
        while let Some(c) = self.peek_char() {
            if !is_id_continue(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        let word = &self.src[start..self.pos];
        if matches!(self.peek(), Some(b'\'' | b'"')) && word.len() <= 2 {
            let lower = word.to_ascii_lowercase();
            let flags = match lower.as_str() {
                "r" => Some((true, false, false)),
                "u" => Some((false, false, false)),
                "b" => Some((false, true, false)),
                "f" => Some((false, false, true)),
                "br" | "rb" => Some((true, true, false)),
                "fr" | "rf" => Some((true, false, true)),
                "ur" => return self.err(start, "'ur' string prefix is Python 2 syntax"),
                _ => None,
            };
            if let Some((raw, bytes, format)) = flags {
                let flags = StrFlags { raw, bytes, format, quote_len: 1, prefix_len: word.len() as u8 };
                return self.lex_string(start, flags);
            }
        }
        self.push(TokenKind::Name, start, self.pos);
        Ok(())
    }

    fn lex_string(&mut self, start: usize, mut flags: StrFlags) -> Result<(), LexError> {
        let quote = self.peek().unwrap();
        let triple = self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote);
        flags.quote_len = if triple { 3 } else { 1 };
        self.pos += flags.quote_len as usize;
        loop {
            let Some(b) = self.peek() else {
                let what = if triple { "unterminated triple-quoted string literal" } else { "unterminated string literal" };
                return self.err(start, what);
            };
            match b {
                b'\\' => {
                    self.pos += 1;
                    match self.peek() {
                        Some(b'\r') => self.consume_newline(),
                        Some(_) => {
                            let c = self.peek_char().unwrap();
                            self.pos += c.len_utf8();
                        }
                        None => {}
                    }
                }
                b'\n' | b'\r' if !triple => {
                    return self.err(start, "unterminated string literal");
                }
                _ if b == quote => {
                    if !triple {
                        self.pos += 1;
                        break;
                    }
                    if self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote) {
                        self.pos += 3;
                        break;
                    }
                    self.pos += 1;
                }
                _ => {
                    let c = self.peek_char().unwrap();
                    self.pos += c.len_utf8();
                }
            }
        }
        self.push(TokenKind::Str(flags), start, self.pos);
        Ok(())
    }

    fn eat_digits(&mut self, valid: impl Fn(u8) -> bool) {
        while let Some(b) = self.peek() {
            if valid(b) || b == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn lex_number(&mut self, start: usize) -> Result<(), LexError> {
        let radix = if self.peek() == Some(b'0') {
            match self.peek_at(1) {
                Some(b'x' | b'X') => Some(16),
                Some(b'o' | b'O') => Some(8),
                Some(b'b' | b'B') => Some(2),
                _ => None,
            }
        } else {
            None
        };
        if let Some(radix) = radix {
            self.pos += 2;
            self.eat_digits(|b| (b as char).is_digit(radix));
        } else {
            let mut is_float = false;
            self.eat_digits(|b| b.is_ascii_digit());
            let int_part = &self.src[start..self.pos];
            if self.peek() == Some(b'.') {
                is_float = true;
                self.pos += 1;
                self.eat_digits(|b| b.is_ascii_digit());
            }
            if let Some(b'e' | b'E') = self.peek() {
                let save = self.pos;
                self.pos += 1;
                if let Some(b'+' | b'-') = self.peek() {
                    self.pos += 1;
                }
                if matches!(self.peek(), Some(b'0'..=b'9')) {
                    is_float = true;
                    self.eat_digits(|b| b.is_ascii_digit());
                } else {
                    self.pos = save;
                }
            }
            if let Some(b'j' | b'J') = self.peek() {
                is_float = true;
                self.pos += 1;
            }
            if !is_float && int_part.len() > 1 && int_part.starts_with('0') && int_part.bytes().any(|b| b != b'0' && b != b'_') {
                return self.err(start, "leading zeros in decimal integer literals are not permitted");
            }
        }
        if let Some(b'l' | b'L') = self.peek() {
            return self.err(start, "long integer suffix is Python 2 syntax");
        }
        self.push(TokenKind::Number, start, self.pos);
        Ok(())
    }

    fn lex_operator(&mut self, start: usize) -> Result<(), LexError> {
        let rest = &self.src[self.pos..];
        if rest.starts_with("<>") {
            return self.err(start, "'<>' operator is Python 2 syntax");
        }
        for op in OPS3.iter().chain(OPS2) {
            if rest.starts_with(op) {
                self.pos += op.len();
                self.push(TokenKind::Op, start, self.pos);
                return Ok(());
            }
        }
        let b = self.peek().unwrap();
        if b.is_ascii() && OPS1.contains(&b) {
            self.pos += 1;
            self.push(TokenKind::Op, start, self.pos);
            return Ok(());
        }
        let c = self.peek_char().unwrap();
        self.err(start, format!("invalid character {c:?}"))
    }
}
