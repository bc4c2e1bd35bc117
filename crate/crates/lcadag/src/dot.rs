//! Graphviz DOT rendering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use lcadag_core::{dag, Dag, VertexId};

#[derive(Debug, Clone, Default)]
pub struct DotOptions {
    /// Write each vertex's cluster next to it.
    pub clusters: bool,
    /// Vertices drawn filled.
    pub highlight: BTreeSet<VertexId>,
    /// Draw shortcut edges dashed.
    pub dashed_shortcuts: bool,
    /// Display names of unlabeled vertices; ids are used otherwise.
    pub names: BTreeMap<VertexId, String>,
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn export_dot(g: &Dag, opts: &DotOptions) -> String {
    let shortcuts: BTreeSet<(VertexId, VertexId)> = if opts.dashed_shortcuts {
        dag::shortcuts(g).into_iter().collect()
    } else {
        BTreeSet::new()
    };
    let mut out = String::from("digraph dag {\n    node [shape=circle];\n");
    for &v in g.vertices() {
        let mut attrs = Vec::new();
        match g.label(v) {
            Some(l) => {
                attrs.push(format!("label={}", quote(l)));
                attrs.push("shape=box".to_string());
            }
            None => {
                let name = opts.names.get(&v).cloned().unwrap_or_else(|| v.0.to_string());
                attrs.push(format!("label={}", quote(&name)));
            }
        }
        if opts.clusters {
            let c = g.cluster(v).expect("vertex of g");
            let text = format!("{{{}}}", g.labels_of(c).join(","));
            attrs.push(format!("xlabel={}", quote(&text)));
            attrs.push("fontcolor=blue".to_string());
        }
        if opts.highlight.contains(&v) {
            attrs.push("style=filled".to_string());
            attrs.push("fillcolor=lightblue".to_string());
        }
        let _ = writeln!(out, "    {} [{}];", v.0, attrs.join(", "));
    }
    for (a, b) in g.edges() {
        if shortcuts.contains(&(a, b)) {
            let _ = writeln!(out, "    {} -> {} [style=dashed];", a.0, b.0);
        } else {
            let _ = writeln!(out, "    {} -> {};", a.0, b.0);
        }
    }
    out.push_str("}\n");
    out
}
