//! JSON documents for dags and set systems, plus a terse edge-list text
//! format for hand-written dags.
//!
//! Edge-list files hold one edge per line (`p c` or `p -> c`), a lone token
//! declares an isolated vertex, and `#` starts a comment. Two optional
//! directives may appear anywhere:
//!
//! ```text
//! vertices: rho u a b c   # fixes the id order
//! leaves: a b c           # the labeled vertices
//! ```
//!
//! Ids are assigned in order of first appearance. Without a `leaves:` line
//! every sink is a leaf labeled by its token.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use lcadag_core::{Dag, DagError, SetSystem, SetSystemError, VertexId};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("duplicate set {0:?}")]
    DuplicateSet(Vec<String>),
    #[error("label {0:?} repeated within a set")]
    RepeatedLabel(String),
    #[error("vertex name {0:?} used twice")]
    DuplicateName(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Dag(#[from] DagError),
    #[error(transparent)]
    System(#[from] SetSystemError),
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        syntax(e.line(), e.column(), message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Display name of the vertex, kept only when it differs from the label.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DagDocument {
    pub format_version: u32,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<[u64; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl DagDocument {
    pub fn from_dag(dag: &Dag) -> Self {
        DagDocument {
            format_version: FORMAT_VERSION,
            vertices: dag
                .vertices()
                .iter()
                .map(|&v| VertexEntry {
                    id: v.0,
                    label: dag.label(v).map(String::from),
                    name: None,
                })
                .collect(),
            edges: dag.edges().into_iter().map(|(a, b)| [a.0, b.0]).collect(),
            metadata: BTreeMap::new(),
        }
    }

    /// Like [`DagDocument::from_dag`], carrying over names of surviving
    /// vertices.
    pub fn from_dag_named(dag: &Dag, names: &BTreeMap<VertexId, String>) -> Self {
        let mut doc = Self::from_dag(dag);
        for v in &mut doc.vertices {
            v.name = names.get(&VertexId(v.id)).cloned();
        }
        doc.canonicalize();
        doc
    }

    /// Sorts vertices and edges, collapses repeated edges and drops names
    /// that merely repeat the label.
    pub fn canonicalize(&mut self) {
        self.vertices.sort_by_key(|v| v.id);
        for v in &mut self.vertices {
            if v.name.is_some() && v.name == v.label {
                v.name = None;
            }
        }
        self.edges.sort_unstable();
        self.edges.dedup();
    }

    pub fn names(&self) -> BTreeMap<VertexId, String> {
        self.vertices
            .iter()
            .filter_map(|v| v.name.clone().map(|n| (VertexId(v.id), n)))
            .collect()
    }

    /// Display name: the name, else the label, else the id.
    pub fn display_names(&self) -> BTreeMap<VertexId, String> {
        self.vertices
            .iter()
            .map(|v| {
                let s = v
                    .name
                    .clone()
                    .or_else(|| v.label.clone())
                    .unwrap_or_else(|| v.id.to_string());
                (VertexId(v.id), s)
            })
            .collect()
    }

    pub fn to_dag(&self) -> Result<Dag, FormatError> {
        if self.format_version != FORMAT_VERSION {
            return Err(FormatError::Version(self.format_version));
        }
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if let Some(n) = &v.name {
                if !seen.insert(n) {
                    return Err(FormatError::DuplicateName(n.clone()));
                }
            }
        }
        Ok(Dag::new(
            self.vertices
                .iter()
                .map(|v| (VertexId(v.id), v.label.clone())),
            self.edges.iter().map(|e| (VertexId(e[0]), VertexId(e[1]))),
        )?)
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let mut doc: DagDocument = serde_json::from_str(text)?;
        if doc.format_version != FORMAT_VERSION {
            return Err(FormatError::Version(doc.format_version));
        }
        doc.canonicalize();
        Ok(doc)
    }

    /// Canonical pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut doc = self.clone();
        doc.canonicalize();
        let mut s = serde_json::to_string_pretty(&doc).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn from_edge_list(text: &str) -> Result<Self, FormatError> {
        let mut ids: HashMap<String, u64> = HashMap::new();
        let mut order: Vec<String> = Vec::new();
        let mut intern = |tok: &str| -> u64 {
            *ids.entry(tok.to_string()).or_insert_with(|| {
                order.push(tok.to_string());
                order.len() as u64 - 1
            })
        };
        let mut edges = Vec::new();
        let mut leaves: Option<Vec<u64>> = None;

        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let mut toks: Vec<(usize, &str)> = Vec::new();
            let mut rest = line;
            let mut col = 1;
            while !rest.is_empty() {
                let skip = rest.len() - rest.trim_start().len();
                col += rest[..skip].chars().count();
                rest = &rest[skip..];
                if rest.is_empty() {
                    break;
                }
                let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
                toks.push((col, &rest[..end]));
                col += rest[..end].chars().count();
                rest = &rest[end..];
            }
            let Some(&(c0, first)) = toks.first() else {
                continue;
            };
            let ln = ln + 1;
            match first {
                "leaves:" | "vertices:" => {
                    let names: Vec<u64> = toks[1..].iter().map(|(_, t)| intern(t)).collect();
                    if first == "leaves:" {
                        if leaves.is_some() {
                            return Err(syntax(ln, c0, "second leaves: directive"));
                        }
                        leaves = Some(names);
                    }
                    continue;
                }
                _ => {}
            }
            if let Some(&(c, t)) = toks.iter().find(|(_, t)| t.ends_with(':')) {
                return Err(syntax(ln, c, format!("unknown directive {t:?}")));
            }
            let words: Vec<(usize, &str)> = match toks.as_slice() {
                [a] => vec![*a],
                [a, b] if b.1 != "->" && a.1 != "->" => vec![*a, *b],
                [a, (_, "->"), b] if a.1 != "->" && b.1 != "->" => vec![*a, *b],
                _ => {
                    return Err(syntax(
                        ln,
                        c0,
                        "expected `parent child`, `parent -> child` or a single vertex",
                    ))
                }
            };
            let a = intern(words[0].1);
            if let Some(&(_, b)) = words.get(1) {
                let b = intern(b);
                edges.push([a, b]);
            }
        }
        if order.is_empty() {
            return Err(syntax(1, 1, "no vertices"));
        }

        let has_child: BTreeSet<u64> = edges.iter().map(|e| e[0]).collect();
        let labeled: BTreeSet<u64> = match &leaves {
            Some(l) => l.iter().copied().collect(),
            None => (0..order.len() as u64)
                .filter(|v| !has_child.contains(v))
                .collect(),
        };
        let vertices = order
            .into_iter()
            .enumerate()
            .map(|(i, tok)| {
                let id = i as u64;
                if labeled.contains(&id) {
                    VertexEntry {
                        id,
                        label: Some(tok),
                        name: None,
                    }
                } else {
                    VertexEntry {
                        id,
                        label: None,
                        name: Some(tok),
                    }
                }
            })
            .collect();
        let mut doc = DagDocument {
            format_version: FORMAT_VERSION,
            vertices,
            edges,
            metadata: BTreeMap::new(),
        };
        doc.canonicalize();
        Ok(doc)
    }

    /// Edge-list rendering. Vertices are written by name, label or id; the
    /// `vertices:` directive is emitted when edge order alone would not
    /// reproduce the ids.
    pub fn to_edge_list(&self) -> String {
        let mut doc = self.clone();
        doc.canonicalize();
        let names = doc.display_names();
        let tok = |id: u64| names[&VertexId(id)].as_str();

        let mut appearance: Vec<u64> = Vec::new();
        let mut seen = BTreeSet::new();
        for e in &doc.edges {
            for v in e {
                if seen.insert(*v) {
                    appearance.push(*v);
                }
            }
        }
        let isolated: Vec<u64> = doc
            .vertices
            .iter()
            .map(|v| v.id)
            .filter(|v| !seen.contains(v))
            .collect();
        appearance.extend(&isolated);
        let ids: Vec<u64> = doc.vertices.iter().map(|v| v.id).collect();
        let dense = ids.iter().enumerate().all(|(i, &v)| v == i as u64);

        let mut out = String::new();
        if !(dense && appearance == ids) {
            out.push_str("vertices:");
            for &v in &ids {
                let _ = write!(out, " {}", tok(v));
            }
            out.push('\n');
        }
        for e in &doc.edges {
            let _ = writeln!(out, "{} {}", tok(e[0]), tok(e[1]));
        }
        for v in isolated {
            let _ = writeln!(out, "{}", tok(v));
        }
        out.push_str("leaves:");
        for v in &doc.vertices {
            if let Some(l) = &v.label {
                let _ = write!(out, " {l}");
            }
        }
        out.push('\n');
        out
    }

    /// JSON when the text starts with `{`, edge list otherwise.
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_edge_list(text)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub format_version: u32,
    pub ground: Vec<String>,
    pub sets: Vec<Vec<String>>,
}

impl SystemDocument {
    pub fn from_system(sys: &SetSystem) -> Self {
        SystemDocument {
            format_version: FORMAT_VERSION,
            ground: sys.ground().to_vec(),
            sets: sys
                .member_labels()
                .into_iter()
                .map(|m| m.into_iter().map(String::from).collect())
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let doc: SystemDocument = serde_json::from_str(text)?;
        if doc.format_version != FORMAT_VERSION {
            return Err(FormatError::Version(doc.format_version));
        }
        let mut seen = BTreeSet::new();
        for set in &doc.sets {
            let mut sorted = set.clone();
            sorted.sort();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(FormatError::RepeatedLabel(w[0].clone()));
            }
            if !seen.insert(sorted.clone()) {
                return Err(FormatError::DuplicateSet(sorted));
            }
        }
        Ok(doc)
    }

    pub fn to_system(&self) -> Result<SetSystem, FormatError> {
        if self.format_version != FORMAT_VERSION {
            return Err(FormatError::Version(self.format_version));
        }
        let sets: Vec<&[String]> = self.sets.iter().map(Vec::as_slice).collect();
        Ok(SetSystem::new(&self.ground, &sets)?)
    }

    /// Canonical pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}
