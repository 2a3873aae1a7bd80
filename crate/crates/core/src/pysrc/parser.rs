//! Structural parser over the token stream.
//!
//! Only the shape of the program is recovered: logical lines grouped into
//! blocks, compound-statement headers, function and class definitions,
//! import statements and call expressions. Everything inside an expression
//! is treated as a balanced token run.

use std::collections::HashMap;
use std::ops::Range;

use super::lexer::{is_keyword, tokenize, Token, TokenKind};
use super::literal::{clean_docstring, eval_string, format_fields};
use super::{CallSite, FunctionUnit, ImportKind, ImportStmt, UnitKind};

#[derive(Debug)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

type PResult<T> = Result<T, ParseError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Head {
    Simple,
    Decorator,
    Def,
    Class,
    If,
    Elif,
    Else,
    For,
    While,
    Try,
    Except,
    Finally,
    With,
    Match,
    Case,
}

#[derive(Debug)]
struct Stmt {
    head: Head,
    /// Tokens of the simple statement, or of the compound header up to (not
    /// including) its colon.
    tokens: Range<usize>,
    body: Vec<Stmt>,
}

const COMPOUND: &[(&str, Head)] = &[
    ("if", Head::If),
    ("elif", Head::Elif),
    ("else", Head::Else),
    ("for", Head::For),
    ("while", Head::While),
    ("try", Head::Try),
    ("except", Head::Except),
    ("finally", Head::Finally),
    ("with", Head::With),
    ("def", Head::Def),
    ("class", Head::Class),
];

pub struct Output {
    pub imports: Vec<ImportStmt>,
    pub functions: Vec<FunctionUnit>,
}

struct Parser<'a> {
    src: &'a str,
    toks: &'a [Token],
    pos: usize,
    fields: FieldMap,
}

/// Replacement-field expressions of f-string tokens, keyed by token index.
type FieldMap = HashMap<usize, Vec<Field>>;

/// One replacement field, lexed as a parenthesized expression.
struct Field {
    text: String,
    /// Offset in the file of `text`'s first byte.
    base: usize,
    toks: Vec<Token>,
    fields: FieldMap,
}

/// Validates every string literal and lexes f-string fields.
fn string_fields(src: &str, toks: &[Token], base: usize) -> PResult<FieldMap> {
    let mut map = FieldMap::new();
    for (i, t) in toks.iter().enumerate() {
        let TokenKind::Str(flags) = t.kind else { continue };
        let text = t.text(src);
        let fail = |message| ParseError { offset: base + t.start, message };
        eval_string(text, flags).map_err(fail)?;
        if !flags.format {
            continue;
        }
        let mut list = Vec::new();
        for r in format_fields(text, flags).map_err(fail)? {
            let field_base = base + t.start + r.start - 1;
            let field_text = format!("({})", &text[r]);
            let field_toks = tokenize(&field_text)
                .map_err(|e| ParseError { offset: field_base + e.offset, message: format!("f-string: {}", e.message) })?;
            let fields = string_fields(&field_text, &field_toks, field_base)?;
            list.push(Field { text: field_text, base: field_base, toks: field_toks, fields });
        }
        map.insert(i, list);
    }
    Ok(map)
}

pub fn parse(src: &str, toks: &[Token]) -> PResult<Output> {
    let fields = string_fields(src, toks, 0)?;
    let mut p = Parser { src, toks, pos: 0, fields };
    let stmts = p.parse_block(true)?;
    let mut out = Output { imports: Vec::new(), functions: Vec::new() };
    p.collect_imports(&stmts, &mut out.imports)?;
    p.walk_scope(&stmts, "", &mut out.functions);
    Ok(out)
}

fn is_binding_op(op: &str) -> bool {
    matches!(
        op,
        "=" | "=="
            | "!="
            | "<"
            | ">"
            | "<="
            | ">="
            | "."
            | "+="
            | "-="
            | "*="
            | "/="
            | "//="
            | "%="
            | "**="
            | ">>="
            | "<<="
            | "&="
            | "|="
            | "^="
            | "@="
    )
}

fn cannot_start_operand(op: &str) -> bool {
    is_binding_op(op) || matches!(op, "/" | "//" | "%" | "&" | "|" | "^" | "<<" | ">>" | ")" | "]" | "}" | "," | ":" | ";" | "->" | ":=")
}

impl<'a> Parser<'a> {
    fn err<T>(&self, tok: usize, message: impl Into<String>) -> PResult<T> {
        let offset = self.toks.get(tok).map_or(self.src.len(), |t| t.start);
        Err(ParseError { offset, message: message.into() })
    }

    fn text(&self, i: usize) -> &'a str {
        self.toks[i].text(self.src)
    }

    fn is_op(&self, i: usize, op: &str) -> bool {
        self.toks[i].kind == TokenKind::Op && self.text(i) == op
    }

    fn is_name(&self, i: usize) -> bool {
        self.toks[i].kind == TokenKind::Name && !is_keyword(self.text(i))
    }

    fn is_kw(&self, i: usize, kw: &str) -> bool {
        self.toks[i].kind == TokenKind::Name && self.text(i) == kw
    }

    /// Index just past the bracketed group starting at `i`, or `i + 1`.
    fn skip_group(&self, i: usize) -> usize {
        match self.toks[i].partner {
            Some(p) if p > i => p + 1,
            _ => i + 1,
        }
    }

    fn parse_block(&mut self, top: bool) -> PResult<Vec<Stmt>> {
        let mut stmts = Vec::new();
        loop {
            match self.toks[self.pos].kind {
                TokenKind::EndMarker => break,
                TokenKind::Dedent => {
                    if top {
                        return self.err(self.pos, "unexpected dedent");
                    }
                    self.pos += 1;
                    break;
                }
                TokenKind::Indent => return self.err(self.pos, "unexpected indent"),
                TokenKind::Newline => self.pos += 1,
                _ => self.parse_line(&mut stmts)?,
            }
        }
        self.check_sequence(&stmts)?;
        Ok(stmts)
    }

    fn line_end(&self, from: usize) -> usize {
        let mut i = from;
        while self.toks[i].kind != TokenKind::Newline {
            i += 1;
        }
        i
    }

    /// First depth-0 colon in `range` that is not consumed by a lambda.
    fn header_colon(&self, range: Range<usize>) -> Option<usize> {
        let mut lambdas = 0usize;
        let mut i = range.start;
        while i < range.end {
            if self.is_kw(i, "lambda") {
                lambdas += 1;
            } else if self.is_op(i, ":") {
                if lambdas == 0 {
                    return Some(i);
                }
                lambdas -= 1;
            }
            i = self.skip_group(i);
        }
        None
    }

    fn compound_head(&self, line: Range<usize>) -> Option<(Head, usize)> {
        let mut first = line.start;
        if self.is_kw(first, "async") && first + 1 < line.end {
            first += 1;
        }
        let word = self.text(first);
        if self.toks[first].kind == TokenKind::Name {
            if let Some(&(_, head)) = COMPOUND.iter().find(|(kw, _)| *kw == word) {
                return Some((head, first));
            }
            if (word == "match" || word == "case") && first + 1 < line.end && line.end - 1 > first {
                let last = line.end - 1;
                let next_is_op = self.toks[first + 1].kind == TokenKind::Op && !matches!(self.text(first + 1), "(" | "[" | "{" | "-" | "*");
                if self.is_op(last, ":") && !next_is_op {
                    let head = if word == "match" { Head::Match } else { Head::Case };
                    return Some((head, first));
                }
            }
        }
        None
    }

    fn parse_line(&mut self, stmts: &mut Vec<Stmt>) -> PResult<()> {
        let start = self.pos;
        let nl = self.line_end(start);
        let line = start..nl;

        if self.is_op(start, "@") {
            if start + 1 >= nl {
                return self.err(start, "invalid decorator");
            }
            self.check_tokens(start + 1..nl, false)?;
            stmts.push(Stmt { head: Head::Decorator, tokens: start + 1..nl, body: Vec::new() });
            self.pos = nl + 1;
            return Ok(());
        }

        if let Some((head, kw)) = self.compound_head(line.clone()) {
            if kw > start && !matches!(head, Head::Def | Head::For | Head::With) {
                return self.err(start, "invalid syntax after 'async'");
            }
            let Some(colon) = self.header_colon(kw..nl) else {
                return self.err(nl, "expected ':'");
            };
            self.check_header(head, kw, colon)?;
            let mut stmt = Stmt { head, tokens: start..colon, body: Vec::new() };
            if colon + 1 == nl {
                if self.toks[nl + 1].kind != TokenKind::Indent {
                    return self.err(nl + 1, "expected an indented block");
                }
                self.pos = nl + 2;
                stmt.body = self.parse_block(false)?;
            } else {
                self.split_simple(colon + 1..nl, &mut stmt.body)?;
                self.pos = nl + 1;
            }
            stmts.push(stmt);
            return Ok(());
        }

        if self.header_colon(line.clone()) == Some(nl - 1) {
            return self.err(nl - 1, "invalid syntax");
        }
        self.split_simple(line, stmts)?;
        self.pos = nl + 1;
        Ok(())
    }

    /// Splits a run of `;`-separated simple statements.
    fn split_simple(&self, range: Range<usize>, out: &mut Vec<Stmt>) -> PResult<()> {
        let mut piece = range.start;
        let mut i = range.start;
        while i < range.end {
            if self.is_op(i, ";") {
                self.push_simple(piece..i, out)?;
                piece = i + 1;
                i += 1;
                continue;
            }
            i = self.skip_group(i);
        }
        if piece < range.end {
            self.push_simple(piece..range.end, out)?;
        }
        Ok(())
    }

    fn push_simple(&self, range: Range<usize>, out: &mut Vec<Stmt>) -> PResult<()> {
        if range.is_empty() {
            return self.err(range.start, "invalid syntax");
        }
        self.check_simple(range.clone())?;
        out.push(Stmt { head: Head::Simple, tokens: range, body: Vec::new() });
        Ok(())
    }

    fn is_atom(&self, i: usize) -> bool {
        match self.toks[i].kind {
            TokenKind::Number | TokenKind::Str(_) => true,
            TokenKind::Name => !is_keyword(self.text(i)),
            _ => false,
        }
    }

    /// Rejects two adjacent operands, which no expression allows (`print x`,
    /// `exec code`). Adjacent string literals concatenate and are allowed.
    fn check_tokens(&self, range: Range<usize>, soft_start: bool) -> PResult<()> {
        for i in range.start..range.end.saturating_sub(1) {
            if soft_start && i == range.start {
                continue;
            }
            let (a, b) = (i, i + 1);
            let both_str = matches!(self.toks[a].kind, TokenKind::Str(_)) && matches!(self.toks[b].kind, TokenKind::Str(_));
            if self.is_atom(a) && self.is_atom(b) && !both_str {
                return self.err(b, "invalid syntax");
            }
            if self.toks[a].kind == TokenKind::Op
                && self.toks[b].kind == TokenKind::Op
                && is_binding_op(self.text(a))
                && cannot_start_operand(self.text(b))
            {
                return self.err(b, "invalid syntax");
            }
            if self.is_kw(a, "lambda") && self.is_op(b, "(") {
                return self.err(b, "tuple parameter unpacking is Python 2 syntax");
            }
        }
        Ok(())
    }

    fn depth0_comma(&self, range: Range<usize>) -> Option<usize> {
        let mut i = range.start;
        while i < range.end {
            if self.is_op(i, ",") {
                return Some(i);
            }
            i = self.skip_group(i);
        }
        None
    }

    fn check_simple(&self, range: Range<usize>) -> PResult<()> {
        let first = range.start;
        let last = range.end - 1;
        let word = self.text(first);
        let named = self.toks[first].kind == TokenKind::Name;
        if named && (word == "import" || word == "from") {
            return self.parse_import(range, &mut Vec::new());
        }
        if named {
            if COMPOUND.iter().any(|(kw, _)| *kw == word) || matches!(word, "in" | "is" | "and" | "or" | "as") {
                return self.err(first, "invalid syntax");
            }
            if word == "raise" {
                if let Some(c) = self.depth0_comma(range.clone()) {
                    return self.err(c, "raise with comma is Python 2 syntax");
                }
            }
        }
        if self.toks[first].kind == TokenKind::Op && !matches!(self.text(first), "(" | "[" | "{" | "-" | "+" | "~" | "*" | "...") {
            return self.err(first, "invalid syntax");
        }
        if self.toks[last].kind == TokenKind::Op && !matches!(self.text(last), ")" | "]" | "}" | "," | "...") {
            return self.err(last, "invalid syntax");
        }
        let soft = named && matches!(word, "match" | "case" | "type");
        self.check_tokens(range, soft)
    }

    fn check_header(&self, head: Head, kw: usize, colon: usize) -> PResult<()> {
        let soft = matches!(head, Head::Match | Head::Case);
        self.check_tokens(kw..colon, soft)?;
        match head {
            Head::Else | Head::Try | Head::Finally => {
                if colon != kw + 1 {
                    return self.err(kw + 1, "expected ':'");
                }
            }
            Head::If | Head::Elif | Head::While | Head::For | Head::With | Head::Match | Head::Case => {
                if colon == kw + 1 {
                    return self.err(colon, "invalid syntax");
                }
            }
            Head::Except => {
                if let Some(c) = self.depth0_comma(kw + 1..colon) {
                    return self.err(c, "multiple exception types must be parenthesized");
                }
            }
            Head::Def => {
                let name = kw + 1;
                if name >= colon || !self.is_name(name) {
                    return self.err(name, "invalid function name");
                }
                let open = name + 1;
                if open >= colon || !self.is_op(open, "(") {
                    return self.err(open, "expected '('");
                }
                let close = self.toks[open].partner.unwrap();
                let mut i = open + 1;
                let mut at_param_start = true;
                while i < close {
                    if at_param_start && self.is_op(i, "(") {
                        return self.err(i, "tuple parameter unpacking is Python 2 syntax");
                    }
                    at_param_start = self.is_op(i, ",");
                    i = self.skip_group(i);
                }
                let after = close + 1;
                if after != colon && !(self.is_op(after, "->") && after + 1 < colon) {
                    return self.err(after, "invalid syntax");
                }
            }
            Head::Class => {
                let name = kw + 1;
                if name >= colon || !self.is_name(name) {
                    return self.err(name, "invalid class name");
                }
                let after = name + 1;
                if after != colon && !(self.is_op(after, "(") && self.skip_group(after) == colon) {
                    return self.err(after, "invalid syntax");
                }
            }
            Head::Simple | Head::Decorator => {}
        }
        Ok(())
    }

    fn check_sequence(&self, stmts: &[Stmt]) -> PResult<()> {
        for (i, s) in stmts.iter().enumerate() {
            let prev = i.checked_sub(1).map(|p| stmts[p].head);
            let ok = match s.head {
                Head::Elif => matches!(prev, Some(Head::If | Head::Elif)),
                Head::Else => matches!(prev, Some(Head::If | Head::Elif | Head::For | Head::While | Head::Except)),
                Head::Except => matches!(prev, Some(Head::Try | Head::Except)),
                Head::Finally => matches!(prev, Some(Head::Try | Head::Except | Head::Else)),
                _ => true,
            };
            if !ok {
                return self.err(s.tokens.start, "invalid syntax");
            }
            let next = stmts.get(i + 1).map(|n| n.head);
            match s.head {
                Head::Try if !matches!(next, Some(Head::Except | Head::Finally)) => {
                    return self.err(s.tokens.start, "expected 'except' or 'finally' block");
                }
                Head::Decorator if !matches!(next, Some(Head::Decorator | Head::Def | Head::Class)) => {
                    return self.err(s.tokens.start, "decorator must precede a definition");
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn dotted(&self, mut i: usize, end: usize) -> PResult<(String, usize)> {
        if i >= end || !self.is_name(i) {
            return self.err(i, "expected module name");
        }
        let mut name = self.text(i).to_string();
        i += 1;
        while i + 1 < end && self.is_op(i, ".") && self.is_name(i + 1) {
            name.push('.');
            name.push_str(self.text(i + 1));
            i += 2;
        }
        Ok((name, i))
    }

    fn alias(&self, i: usize, end: usize) -> PResult<(Option<String>, usize)> {
        if i < end && self.is_kw(i, "as") {
            if i + 1 >= end || !self.is_name(i + 1) {
                return self.err(i + 1, "expected alias name");
            }
            return Ok((Some(self.text(i + 1).to_string()), i + 2));
        }
        Ok((None, i))
    }

    fn parse_import(&self, range: Range<usize>, out: &mut Vec<ImportStmt>) -> PResult<()> {
        let offset = self.toks[range.start].start;
        let end = range.end;
        let mut i = range.start + 1;
        if self.is_kw(range.start, "import") {
            loop {
                let (module, next) = self.dotted(i, end)?;
                let (alias, next) = self.alias(next, end)?;
                let stmt = match alias {
                    Some(a) => ImportStmt {
                        kind: ImportKind::PlainAliased,
                        replacement: module.clone(),
                        module_path: module,
                        bound_name: a,
                        relative_level: 0,
                        offset,
                    },
                    None => {
                        let head = module.split('.').next().unwrap().to_string();
                        ImportStmt {
                            kind: ImportKind::Plain,
                            module_path: module,
                            bound_name: head.clone(),
                            replacement: head,
                            relative_level: 0,
                            offset,
                        }
                    }
                };
                out.push(stmt);
                i = next;
                if i == end {
                    return Ok(());
                }
                if !self.is_op(i, ",") {
                    return self.err(i, "invalid syntax");
                }
                i += 1;
            }
        }

        // from-import
        let mut level = 0;
        while i < end && (self.is_op(i, ".") || self.is_op(i, "...")) {
            level += self.text(i).len();
            i += 1;
        }
        let mut module = String::new();
        if i < end && !self.is_kw(i, "import") {
            let (m, next) = self.dotted(i, end)?;
            module = m;
            i = next;
        }
        if level == 0 && module.is_empty() {
            return self.err(i, "expected module name");
        }
        if i >= end || !self.is_kw(i, "import") {
            return self.err(i, "expected 'import'");
        }
        i += 1;
        if i < end && self.is_op(i, "*") {
            if i + 1 != end {
                return self.err(i + 1, "invalid syntax");
            }
            out.push(ImportStmt {
                kind: ImportKind::Wildcard,
                replacement: module.clone(),
                module_path: module,
                bound_name: String::new(),
                relative_level: level,
                offset,
            });
            return Ok(());
        }
        let (mut j, stop) = if i < end && self.is_op(i, "(") {
            let close = self.toks[i].partner.unwrap();
            if close + 1 != end {
                return self.err(close + 1, "invalid syntax");
            }
            (i + 1, close)
        } else {
            (i, end)
        };
        let mut any = false;
        while j < stop {
            if !self.is_name(j) {
                return self.err(j, "expected name to import");
            }
            let name = self.text(j).to_string();
            let (alias, next) = self.alias(j + 1, stop)?;
            let replacement = if module.is_empty() { name.clone() } else { format!("{module}.{name}") };
            out.push(ImportStmt {
                kind: if alias.is_some() { ImportKind::FromAliased } else { ImportKind::From },
                module_path: module.clone(),
                bound_name: alias.unwrap_or(name),
                replacement,
                relative_level: level,
                offset,
            });
            any = true;
            j = next;
            if j == stop {
                break;
            }
            if !self.is_op(j, ",") {
                return self.err(j, "invalid syntax");
            }
            j += 1;
            // A trailing comma is only legal inside parentheses.
            if j == stop && stop == end {
                return self.err(j, "trailing comma not allowed without surrounding parentheses");
            }
        }
        if !any {
            return self.err(j, "expected name to import");
        }
        Ok(())
    }

    fn collect_imports(&self, stmts: &[Stmt], out: &mut Vec<ImportStmt>) -> PResult<()> {
        for s in stmts {
            if s.head == Head::Simple && (self.is_kw(s.tokens.start, "import") || self.is_kw(s.tokens.start, "from")) {
                self.parse_import(s.tokens.clone(), out)?;
            }
            self.collect_imports(&s.body, out)?;
        }
        Ok(())
    }

    fn def_name(&self, s: &Stmt) -> (usize, bool) {
        let mut kw = s.tokens.start;
        let is_async = self.is_kw(kw, "async");
        if is_async {
            kw += 1;
        }
        (kw, is_async)
    }

    /// Module and class scopes: definitions become units; other code is not
    /// attributed to any function.
    fn walk_scope(&self, stmts: &[Stmt], prefix: &str, out: &mut Vec<FunctionUnit>) {
        for s in stmts {
            match s.head {
                Head::Def => {
                    let kind = if prefix.is_empty() { UnitKind::Function } else { UnitKind::Method };
                    out.push(self.build_unit(s, prefix, kind));
                }
                Head::Class => {
                    let name = self.text(s.tokens.start + 1);
                    let inner = if prefix.is_empty() { name.to_string() } else { format!("{prefix}.{name}") };
                    self.walk_scope(&s.body, &inner, out);
                }
                Head::Simple | Head::Decorator => {}
                _ => self.walk_scope(&s.body, prefix, out),
            }
        }
    }

    fn build_unit(&self, s: &Stmt, prefix: &str, kind: UnitKind) -> FunctionUnit {
        let (kw, is_async) = self.def_name(s);
        let simple_name = self.text(kw + 1).to_string();
        let qualname = if prefix.is_empty() { simple_name.clone() } else { format!("{prefix}.{simple_name}") };
        let mut unit = FunctionUnit {
            qualname,
            simple_name,
            kind,
            is_async,
            docstring: self.docstring(&s.body),
            call_sites: Vec::new(),
            local_defs: Vec::new(),
            def_offset: self.toks[kw].start,
        };
        self.walk_body(&s.body, &mut unit);
        unit.call_sites.sort_by_key(|c| c.close_paren_offset);
        unit
    }

    fn walk_body(&self, stmts: &[Stmt], unit: &mut FunctionUnit) {
        for s in stmts {
            match s.head {
                Head::Def => {
                    let local = self.build_unit(s, &unit.qualname, UnitKind::Local);
                    unit.local_defs.push(local);
                }
                // Classes defined inside a function and decorator expressions
                // contribute nothing.
                Head::Class | Head::Decorator => {}
                Head::Match => {
                    // Skip the soft keyword so `match (x):` is not a call.
                    self.call_sites(s.tokens.start + 1..s.tokens.end, &mut unit.call_sites);
                    self.walk_body(&s.body, unit);
                }
                Head::Case => {
                    // Class patterns look like calls; only the guard is code.
                    let r = s.tokens.clone();
                    if let Some(guard) = r.clone().find(|&i| self.is_kw(i, "if") && self.depth_at(r.start, i) == 0) {
                        self.call_sites(guard + 1..r.end, &mut unit.call_sites);
                    }
                    self.walk_body(&s.body, unit);
                }
                _ => {
                    self.call_sites(s.tokens.clone(), &mut unit.call_sites);
                    self.walk_body(&s.body, unit);
                }
            }
        }
    }

    fn docstring(&self, body: &[Stmt]) -> Option<String> {
        let first = body.first()?;
        if first.head != Head::Simple {
            return None;
        }
        let mut r = first.tokens.clone();
        while self.is_op(r.start, "(") && self.toks[r.start].partner == Some(r.end - 1) {
            r = r.start + 1..r.end - 1;
        }
        if r.is_empty() {
            return None;
        }
        let mut text = String::new();
        for i in r {
            match self.toks[i].kind {
                TokenKind::Str(f) if !f.bytes && !f.format => {
                    text.push_str(&eval_string(self.text(i), f).ok()?);
                }
                _ => return None,
            }
        }
        Some(clean_docstring(&text))
    }

    /// Bracket depth at token `i` counted from `from`.
    fn depth_at(&self, from: usize, i: usize) -> usize {
        let mut depth = 0usize;
        for j in from..i {
            if self.toks[j].kind == TokenKind::Op {
                match self.text(j) {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" | "}" => depth = depth.saturating_sub(1),
                    _ => {}
                }
            }
        }
        depth
    }

    fn call_sites(&self, range: Range<usize>, out: &mut Vec<CallSite>) {
        scan_calls(self.src, self.toks, range, &self.fields, 0, out);
    }
}

/// Calls whose callee is a dotted name chain `a.b.c(...)`, including calls
/// inside f-string fields. Parenthesized chains such as `(a.b).c(...)` count.
fn scan_calls(src: &str, toks: &[Token], range: Range<usize>, fields: &FieldMap, base: usize, out: &mut Vec<CallSite>) {
    let chains = Chains { src, toks };
    for i in range.clone() {
        if let Some(list) = fields.get(&i) {
            for f in list {
                scan_calls(&f.text, &f.toks, 0..f.toks.len(), &f.fields, f.base, out);
            }
            continue;
        }
        if !chains.is_op(i, "(") || i == range.start {
            continue;
        }
        let Some((_, name_path)) = chains.back(i - 1, range.start) else { continue };
        let close = toks[i].partner.expect("balanced brackets");
        out.push(CallSite { name_path, close_paren_offset: base + toks[close].start });
    }
}

struct Chains<'a> {
    src: &'a str,
    toks: &'a [Token],
}

impl Chains<'_> {
    fn is_name(&self, i: usize) -> bool {
        self.toks[i].kind == TokenKind::Name && !is_keyword(self.toks[i].text(self.src))
    }

    fn is_op(&self, i: usize, op: &str) -> bool {
        self.toks[i].kind == TokenKind::Op && self.toks[i].text(self.src) == op
    }

    /// Whether token `i` can end an operand, making a following `(` a call
    /// rather than a parenthesized callee.
    fn ends_operand(&self, i: usize) -> bool {
        match self.toks[i].kind {
            TokenKind::Name => !is_keyword(self.toks[i].text(self.src)) || matches!(self.toks[i].text(self.src), "None" | "True" | "False"),
            TokenKind::Number | TokenKind::Str(_) => true,
            TokenKind::Op => matches!(self.toks[i].text(self.src), ")" | "]" | "}"),
            _ => false,
        }
    }

    /// Parses `atom ('.' name)*` backwards from token `end`, where an atom is
    /// a name or a parenthesized chain. Returns the first token and the names.
    /// Fails when the chain is an attribute of something else.
    fn back(&self, end: usize, lo: usize) -> Option<(usize, Vec<String>)> {
        if self.is_name(end) {
            let name = self.toks[end].text(self.src).to_string();
            if end >= lo + 2 && self.is_op(end - 1, ".") {
                let (start, mut names) = self.back(end - 2, lo)?;
                names.push(name);
                return Some((start, names));
            }
            if end > lo && self.is_op(end - 1, ".") {
                return None;
            }
            return Some((end, vec![name]));
        }
        if self.is_op(end, ")") {
            let open = self.toks[end].partner?;
            if open < lo || open + 1 >= end || (open > lo && self.ends_operand(open - 1)) {
                return None;
            }
            let (start, names) = self.back(end - 1, open + 1)?;
            if start != open + 1 || (open > lo && self.is_op(open - 1, ".")) {
                return None;
            }
            return Some((open, names));
        }
        None
    }
}
