//! Import resolution and API-sequence extraction.
//!
//! A call site becomes an API call when the head of its name chain is bound
//! by an accepted import (absolute, not wildcard, not into the project's own
//! modules). Calls to earlier top-level functions of the same file and to
//! earlier local functions are replaced by those functions' sequences.

use std::collections::{HashMap, HashSet};

use crate::pysrc::{FunctionUnit, ImportKind, ParsedModule, UnitKind};

/// Ordered dotted API calls such as `os.path.join`.
pub type ApiSequence = Vec<String>;

/// Dotted module paths defined by a project's own files.
#[derive(Debug, Clone, Default)]
pub struct ProjectModules {
    modules: HashSet<String>,
}

impl ProjectModules {
    /// Builds the set from project-relative, `/`-separated file paths.
    /// `a/b.py` and `a/b/__init__.py` both define `a.b`, and every package
    /// prefix (`a`) is included as well.
    pub fn from_paths<'a>(paths: impl IntoIterator<Item = &'a str>) -> Self {
        let mut modules = HashSet::new();
        for path in paths {
            let Some(stem) = path.strip_suffix(".py") else { continue };
            let mut parts: Vec<&str> = stem.split('/').filter(|p| !p.is_empty()).collect();
            if parts.last() == Some(&"__init__") {
                parts.pop();
            }
            for n in 1..=parts.len() {
                modules.insert(parts[..n].join("."));
            }
        }
        ProjectModules { modules }
    }

    pub fn contains(&self, module: &str) -> bool {
        self.modules.contains(module)
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    /// Whether `module` resolves to project code, either from the project
    /// root or from any directory enclosing `importing_file`.
    pub fn is_internal(&self, module: &str, importing_file: &str) -> bool {
        let head = module.split('.').next().unwrap_or(module);
        if head.is_empty() {
            return false;
        }
        if self.modules.contains(head) {
            return true;
        }
        let dirs: Vec<&str> = importing_file.split('/').collect();
        let dirs = &dirs[..dirs.len().saturating_sub(1)];
        (1..=dirs.len()).any(|n| self.modules.contains(&format!("{}.{head}", dirs[..n].join("."))))
    }
}

/// Bound name to replacement prefix, for accepted imports only.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ImportTable {
    pub bindings: HashMap<String, String>,
}

impl ImportTable {
    pub fn get(&self, name: &str) -> Option<&str> {
        self.bindings.get(name).map(String::as_str)
    }
}

pub fn build_import_table(module: &ParsedModule, project: &ProjectModules) -> ImportTable {
    let mut imports: Vec<_> = module.imports.iter().collect();
    imports.sort_by_key(|i| i.offset);
    let mut bindings = HashMap::new();
    for imp in imports {
        if imp.kind == ImportKind::Wildcard || imp.relative_level > 0 || imp.replacement.is_empty() {
            continue;
        }
        if project.is_internal(&imp.module_path, &module.file_path) {
            continue;
        }
        bindings.insert(imp.bound_name.clone(), imp.replacement.clone());
    }
    ImportTable { bindings }
}

/// API sequence of one unit. `earlier` maps the simple names of top-level
/// functions defined before `unit` in the same file to their sequences.
pub fn extract_apiseq(unit: &FunctionUnit, table: &ImportTable, earlier: &HashMap<String, ApiSequence>) -> ApiSequence {
    let locals: Vec<ApiSequence> = unit.local_defs.iter().map(|l| extract_apiseq(l, table, earlier)).collect();
    let mut seq = Vec::new();
    for site in &unit.call_sites {
        let head = site.name_path[0].as_str();
        if site.name_path.len() == 1 {
            let local = unit.local_defs.iter().rposition(|l| l.simple_name == head && l.def_offset < site.close_paren_offset);
            if let Some(i) = local {
                seq.extend(locals[i].iter().cloned());
                continue;
            }
            if let Some(s) = earlier.get(head) {
                seq.extend(s.iter().cloned());
                continue;
            }
        }
        if let Some(prefix) = table.get(head) {
            let mut full = prefix.to_string();
            for seg in &site.name_path[1..] {
                full.push('.');
                full.push_str(seg);
            }
            if full.contains('.') {
                seq.push(full);
            }
        }
    }
    seq
}

/// Sequences for every top-level function and method of a file, in source
/// order, processing definitions in order so `earlier` is well defined.
pub fn extract_module(module: &ParsedModule, table: &ImportTable) -> Vec<ApiSequence> {
    let mut earlier: HashMap<String, ApiSequence> = HashMap::new();
    let mut out = Vec::with_capacity(module.functions.len());
    for unit in &module.functions {
        let seq = extract_apiseq(unit, table, &earlier);
        if unit.kind == UnitKind::Function {
            earlier.insert(unit.simple_name.clone(), seq.clone());
        }
        out.push(seq);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pysrc::parse_source;
    use proptest::prelude::*;

    const SYS_PATH_SRC: &str = concat!(
        "import sys\n",
        "from os.path import dirname, join as join_path\n",
        "\n",
        "def sys_path():\n",
        "  \"\"\" Add `./third_party` to `sys.path`.\n",
        "  \"\"\"\n",
        "    \n",
        "  dir = join_path(dirname(__file__), 'third_party')\n",
        "  if not dir in sys.path:\n",
        "    sys.path.insert(1, dir)\n",
    );

    fn run(src: &str, path: &str, files: &[&str]) -> Vec<ApiSequence> {
        let m = parse_source(src, path).unwrap();
        let table = build_import_table(&m, &ProjectModules::from_paths(files.iter().copied()));
        extract_module(&m, &table)
    }

    #[test]
    fn sys_path_example() {
        let m = parse_source(SYS_PATH_SRC, "syspath.py").unwrap();
        let table = build_import_table(&m, &ProjectModules::from_paths(["syspath.py"]));
        let expected: HashMap<String, String> = [("sys", "sys"), ("dirname", "os.path.dirname"), ("join_path", "os.path.join")]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(table.bindings, expected);
        assert_eq!(extract_module(&m, &table), vec![vec!["os.path.dirname", "os.path.join", "sys.path.insert"]]);
    }

    #[test]
    fn close_paren_order() {
        let seqs = run("from m import f, g, h\ndef k():\n    f(g(), h())\n", "k.py", &[]);
        assert_eq!(seqs, vec![vec!["m.g", "m.h", "m.f"]]);
    }

    #[test]
    fn unbound_call_is_nothing() {
        assert_eq!(run("def k():\n    x = foo()\n", "k.py", &[]), vec![Vec::<String>::new()]);
    }

    #[test]
    fn rejected_imports() {
        let src =
            "from ..x import y\nfrom . import z\nimport a.b\nfrom w import *\nimport q\ndef k():\n    y(); z(); a.b.c(); w(); q.r()\n";
        assert_eq!(run(src, "pkg/k.py", &["pkg/k.py", "a/b.py"]), vec![vec!["q.r"]]);
    }

    #[test]
    fn sibling_module_is_internal() {
        let src = "import util\nimport json\ndef k():\n    util.go(); json.dumps(1)\n";
        assert_eq!(run(src, "src/app/k.py", &["src/app/k.py", "src/app/util.py"]), vec![vec!["json.dumps"]]);
    }

    #[test]
    fn bare_module_call_needs_a_member() {
        assert_eq!(run("import json\ndef k():\n    json()\n", "k.py", &[]), vec![Vec::<String>::new()]);
        assert_eq!(run("from json import dumps\ndef k():\n    dumps()\n", "k.py", &[]), vec![vec!["json.dumps"]]);
    }

    #[test]
    fn later_binding_shadows() {
        let src = "import numpy as np\nimport jax.numpy as np\ndef k():\n    np.zeros(3)\n";
        assert_eq!(run(src, "k.py", &[]), vec![vec!["jax.numpy.zeros"]]);
    }

    #[test]
    fn earlier_top_level_inlined() {
        let src =
            "import os\ndef a():\n    os.getcwd()\n    os.sep.join()\ndef b():\n    os.listdir(a())\n    c()\ndef c():\n    os.remove()\n";
        assert_eq!(
            run(src, "k.py", &[]),
            vec![vec!["os.getcwd", "os.sep.join"], vec!["os.getcwd", "os.sep.join", "os.listdir"], vec!["os.remove"],]
        );
    }

    #[test]
    fn methods_are_not_splice_candidates() {
        let src = "import os\nclass C:\n    def a(self):\n        os.getcwd()\ndef b():\n    a()\n";
        assert_eq!(run(src, "k.py", &[]), vec![vec!["os.getcwd"], vec![]]);
    }

    #[test]
    fn local_functions_inlined_only_after_definition() {
        let src = concat!(
            "import os\n",
            "def outer():\n",
            "    helper()\n",
            "    def helper():\n",
            "        os.stat(1)\n",
            "    helper()\n",
            "    def helper():\n",
            "        os.lstat(1)\n",
            "    helper()\n",
        );
        assert_eq!(run(src, "k.py", &[]), vec![vec!["os.stat", "os.lstat"]]);
    }

    #[test]
    fn no_self_inlining() {
        let src = "import os\ndef f(n):\n    os.getpid()\n    return f(n - 1)\n";
        assert_eq!(run(src, "k.py", &[]), vec![vec!["os.getpid"]]);
    }

    #[test]
    fn project_modules_from_paths() {
        let pm = ProjectModules::from_paths(["a/b.py", "c/__init__.py", "d/e/__init__.py", "README.md", "__init__.py"]);
        for m in ["a", "a.b", "c", "d", "d.e"] {
            assert!(pm.contains(m), "{m}");
        }
        assert_eq!(pm.len(), 5);
    }

    proptest! {
        #[test]
        fn emitted_calls_use_binding_replacements(
            names in prop::collection::vec(prop::sample::select(vec!["os", "sys", "json", "mod", "x", "y"]), 1..12),
            attrs in prop::collection::vec(prop::sample::select(vec!["a", "b", "c"]), 12),
        ) {
            let mut body = String::new();
            for (n, a) in names.iter().zip(&attrs) {
                body.push_str(&format!("    {n}.{a}()\n"));
            }
            let src = format!("import os\nimport sys as mod\nfrom json import x\ndef k():\n{body}");
            let m = parse_source(&src, "k.py").unwrap();
            let table = build_import_table(&m, &ProjectModules::default());
            let seq = extract_module(&m, &table).remove(0);
            let heads: HashSet<&str> = table.bindings.values().map(|r| r.split('.').next().unwrap()).collect();
            for call in &seq {
                prop_assert!(call.split('.').count() >= 2);
                prop_assert!(heads.contains(call.split('.').next().unwrap()));
            }
            let expected = names.iter().filter(|n| matches!(**n, "os" | "mod" | "x")).count();
            prop_assert_eq!(seq.len(), expected);
        }
    }
}
