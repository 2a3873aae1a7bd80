//! Structural parsing of Python source files.
//!
//! [`parse_source`] recovers the pieces that description and API-sequence
//! extraction need: import statements, top-level functions and class
//! methods with their docstrings, nested local functions, and every call
//! whose callee is a dotted identifier chain together with the offset of
//! its closing parenthesis. Files the grammar subset does not recognize,
//! including Python 2 only syntax, are rejected with [`Error::Syntax`].

mod decode;
mod lexer;
mod literal;
mod parser;

pub use decode::decode_file;
pub use literal::clean_docstring;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImportKind {
    /// `import a.b`
    Plain,
    /// `import a.b as c`
    PlainAliased,
    /// `from m import f`
    From,
    /// `from m import f as g`
    FromAliased,
    /// `from m import *`
    Wildcard,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportStmt {
    pub kind: ImportKind,
    /// Dotted module named by the statement (empty for `from . import x`).
    pub module_path: String,
    /// Identifier the statement makes visible; empty for wildcard imports.
    pub bound_name: String,
    /// Dotted prefix the bound name expands to.
    pub replacement: String,
    /// Number of leading dots; 0 for absolute imports.
    pub relative_level: usize,
    pub offset: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitKind {
    Function,
    Method,
    Local,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallSite {
    pub name_path: Vec<String>,
    pub close_paren_offset: usize,
}

impl CallSite {
    pub fn dotted(&self) -> String {
        self.name_path.join(".")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionUnit {
    pub qualname: String,
    pub simple_name: String,
    pub kind: UnitKind,
    pub is_async: bool,
    /// Docstring after indentation cleanup.
    pub docstring: Option<String>,
    /// Ordered by closing-parenthesis offset.
    pub call_sites: Vec<CallSite>,
    pub local_defs: Vec<FunctionUnit>,
    /// Byte offset of the `def` keyword.
    pub def_offset: usize,
}

impl FunctionUnit {
    /// Number of units in this subtree, the unit itself included.
    pub fn count_units(&self) -> usize {
        1 + self.local_defs.iter().map(FunctionUnit::count_units).sum::<usize>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedModule {
    pub file_path: String,
    pub imports: Vec<ImportStmt>,
    /// Top-level functions and class methods in source order.
    pub functions: Vec<FunctionUnit>,
    pub byte_length: usize,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

pub fn parse_source(text: &str, path: &str) -> Result<ParsedModule> {
    let syntax = |offset: usize, message: String| {
        let (line, column) = line_col(text, offset);
        Error::Syntax { path: path.to_string(), line, column, message }
    };
    let tokens = lexer::tokenize(text).map_err(|e| syntax(e.offset, e.message))?;
    let out = parser::parse(text, &tokens).map_err(|e| syntax(e.offset, e.message))?;
    Ok(ParsedModule { file_path: path.to_string(), imports: out.imports, functions: out.functions, byte_length: text.len() })
}
