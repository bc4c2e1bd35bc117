//! The `lcadag` command line.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use lcadag_core::dag::cluster_system;
use lcadag_core::hasse::{self, Demand};
use lcadag_core::transform::{self, ominus};
use lcadag_core::{lca, recognize_shape, Dag, PropertyReport, SizeIndex, VertexId, DEFAULT_SUBSET_CAP};
use serde::Serialize;

use crate::dot::{export_dot, DotOptions};
use crate::format::{DagDocument, SystemDocument};
use crate::oracle::{self, Flavor, GenParams, LawId};

/// Environment variable holding the subset enumeration cap.
pub const CAP_VAR: &str = "LCADAG_MAX_SUBSETS";

#[derive(Debug, Parser)]
#[command(name = "lcadag", version, about = "Cluster and LCA analysis of leaf-labeled DAGs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Edges,
    Dot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Emit {
    Reduced,
    ShortcutFree,
    Diff,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Realize {
    Property,
    Ary,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structural properties plus lca properties for a size index.
    Check {
        dag: PathBuf,
        #[arg(long, default_value = "1,2")]
        sizes: String,
    },
    /// The cluster of every vertex and the cluster system.
    Clusters { dag: PathBuf },
    /// The dotted Hasse diagram of a set system.
    Hasse {
        system: PathBuf,
        /// Require the diagram to have the lca-property (and relevance).
        #[arg(long)]
        realize: Option<Realize>,
        #[arg(long, default_value = "1,2")]
        sizes: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Removes every vertex that is not an lca vertex.
    Simplify {
        dag: PathBuf,
        #[arg(long)]
        sizes: String,
        #[arg(long, value_enum, default_value = "reduced")]
        emit: Emit,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Removes the given vertices, reconnecting parents to children.
    Ominus {
        dag: PathBuf,
        /// Comma-separated vertex names or ids.
        #[arg(long, value_delimiter = ',')]
        remove: Vec<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Checks S0 to S4 for a transformed dag against the original.
    Verify {
        original: PathBuf,
        transformed: PathBuf,
        #[arg(long)]
        sizes: String,
    },
    /// Connectivity, network, tree and galled-tree recognition.
    Shape { dag: PathBuf },
    /// Graphviz rendering.
    Dot {
        dag: PathBuf,
        #[arg(long)]
        clusters: bool,
        /// Highlight the vertices that are not lca vertices; needs --sizes.
        #[arg(long)]
        highlight_w: bool,
        #[arg(long)]
        dashed_shortcuts: bool,
        #[arg(long)]
        sizes: Option<String>,
    },
    /// Runs the law oracles on generated instances.
    Fuzz {
        /// Comma-separated law names, or `all`.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        laws: Vec<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Leaf count range, e.g. `3-6`.
        #[arg(long, default_value = "3-6")]
        leaves: String,
        /// Internal vertex (or extra set) count range.
        #[arg(long, default_value = "1-8")]
        internal: String,
        #[arg(long, default_value_t = 0.35)]
        density: f64,
        #[arg(long)]
        max_vertices: Option<usize>,
    },
}

/// An error with its exit code: 1 for a failed property or law, 2 for bad
/// input.
#[derive(Debug)]
struct Exit {
    code: i32,
    message: String,
}

fn input<E: std::fmt::Display>(e: E) -> Exit {
    Exit {
        code: 2,
        message: e.to_string(),
    }
}

fn failure(message: impl Into<String>) -> Exit {
    Exit {
        code: 1,
        message: message.into(),
    }
}

/// Parses `1,2`, `1-3` or mixtures like `1,3-4`.
pub fn parse_size_list(s: &str) -> Result<Vec<usize>, String> {
    let mut out = BTreeSet::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad size `{t}` in `{s}`"))
        };
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("empty range `{part}`"));
                }
                out.extend(a..=b);
            }
            None => {
                out.insert(num(part)?);
            }
        }
    }
    if out.is_empty() {
        return Err("no sizes given".into());
    }
    if out.contains(&0) {
        return Err("sizes must be positive".into());
    }
    Ok(out.into_iter().collect())
}

fn subset_cap() -> Result<u64, Exit> {
    match std::env::var(CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| input(format!("{CAP_VAR} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_SUBSET_CAP),
    }
}

fn sizes(s: &str, err: &mut dyn Write) -> Result<SizeIndex, Exit> {
    let mut list = parse_size_list(s).map_err(input)?;
    if !list.contains(&1) {
        let _ = writeln!(err, "warning: size 1 added to the size index");
        list.insert(0, 1);
    }
    Ok(SizeIndex::with_one(list).map_err(input)?.with_cap(subset_cap()?))
}

fn range(s: &str) -> Result<[usize; 2], Exit> {
    let v = parse_size_list(s).map_err(input)?;
    Ok([v[0], v[v.len() - 1]])
}

fn read(path: &Path) -> Result<String, Exit> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(input)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_dag(path: &Path) -> Result<(DagDocument, Dag), Exit> {
    let doc = DagDocument::parse(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))?;
    let g = doc.to_dag().map_err(|e| input(format!("{}: {e}", path.display())))?;
    Ok((doc, g))
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn render(g: &Dag, names: &BTreeMap<VertexId, String>, format: Format, opts: DotOptions) -> String {
    let doc = DagDocument::from_dag_named(g, names);
    match format {
        Format::Json => doc.to_json(),
        Format::Edges => doc.to_edge_list(),
        Format::Dot => export_dot(
            g,
            &DotOptions {
                names: doc.display_names(),
                ..opts
            },
        ),
    }
}

fn labels(g: &Dag, set: &lcadag_core::BitSet) -> Vec<String> {
    g.labels_of(set).into_iter().map(String::from).collect()
}

#[derive(Serialize)]
struct CheckReport {
    sizes: Vec<usize>,
    shape: PropertyReport,
    lca_property: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    lca_property_witness: Option<Vec<String>>,
    lca_relevant: bool,
    non_lca: Vec<VertexId>,
}

#[derive(Serialize)]
struct ClusterEntry {
    id: VertexId,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    cluster: Vec<String>,
}

#[derive(Serialize)]
struct ClusterReport {
    vertices: Vec<ClusterEntry>,
    system: SystemDocument,
}

#[derive(Serialize)]
struct SimplifyDiff {
    removed: Vec<VertexId>,
    lost_clusters: Vec<Vec<String>>,
    uniqueness_certified: bool,
}

fn resolve(doc: &DagDocument, g: &Dag, tokens: &[String]) -> Result<Vec<VertexId>, Exit> {
    let names = doc.display_names();
    let by_name: BTreeMap<&str, VertexId> = names.iter().map(|(&v, n)| (n.as_str(), v)).collect();
    tokens
        .iter()
        .map(|t| {
            let t = t.trim();
            if let Some(&v) = by_name.get(t) {
                return Ok(v);
            }
            match t.parse::<u64>() {
                Ok(id) if g.contains(VertexId(id)) => Ok(VertexId(id)),
                _ => Err(input(format!("unknown vertex `{t}`"))),
            }
        })
        .collect()
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Exit> {
    let mut emit = |s: String| out.write_all(s.as_bytes()).map_err(input);
    match cli.command {
        Command::Check { dag, sizes: s } => {
            let s = sizes(&s, err)?;
            let (_, g) = load_dag(&dag)?;
            let witness = lca::lca_property_violation(&g, &s).map_err(input)?;
            let non_lca = lca::i_lca_vertices(&g, &s).map_err(input)?.non_lca;
            emit(json(&CheckReport {
                sizes: s.sizes().to_vec(),
                shape: recognize_shape(&g),
                lca_property: witness.is_none(),
                lca_property_witness: witness.map(|w| labels(&g, &w)),
                lca_relevant: non_lca.is_empty(),
                non_lca,
            }))
        }
        Command::Clusters { dag } => {
            let (doc, g) = load_dag(&dag)?;
            let names = doc.names();
            let vertices = g
                .vertices()
                .iter()
                .map(|&v| ClusterEntry {
                    id: v,
                    name: names.get(&v).cloned(),
                    cluster: labels(&g, g.cluster(v).expect("vertex of g")),
                })
                .collect();
            emit(json(&ClusterReport {
                vertices,
                system: SystemDocument::from_system(&cluster_system(&g)),
            }))
        }
        Command::Hasse {
            system,
            realize,
            sizes: s,
            format,
        } => {
            let text = read(&system)?;
            let sys = SystemDocument::from_json(&text)
                .and_then(|d| d.to_system())
                .map_err(|e| input(format!("{}: {e}", system.display())))?;
            let g = match realize {
                None => lcadag_core::dotted_hasse(&sys).map_err(input)?,
                Some(r) => {
                    let demand = match r {
                        Realize::Property => Demand::Property,
                        Realize::Ary => Demand::Ary,
                    };
                    let s = sizes(&s, err)?;
                    match hasse::realize_with_property(&sys, &s, demand) {
                        Ok(g) => g,
                        Err(e @ (hasse::HasseError::NotPreIAry(_) | hasse::HasseError::NotIAry)) => {
                            return Err(failure(e.to_string()))
                        }
                        Err(e) => return Err(input(e)),
                    }
                }
            };
            emit(render(&g, &BTreeMap::new(), format, DotOptions::default()))
        }
        Command::Simplify {
            dag,
            sizes: s,
            emit: what,
            format,
        } => {
            let s = sizes(&s, err)?;
            let (doc, g) = load_dag(&dag)?;
            let r = match transform::simplify(&g, &s) {
                Ok(r) => r,
                Err(e @ transform::TransformError::Contract(_)) => return Err(failure(e.to_string())),
                Err(e) => return Err(input(e)),
            };
            let opts = DotOptions {
                clusters: true,
                dashed_shortcuts: true,
                ..DotOptions::default()
            };
            match what {
                Emit::Reduced => emit(render(&r.reduced, &doc.names(), format, opts)),
                Emit::ShortcutFree => emit(render(&r.reduced_shortcut_free, &doc.names(), format, opts)),
                Emit::Diff => emit(json(&SimplifyDiff {
                    removed: r.removed,
                    lost_clusters: r.cluster_diff.iter().map(|c| labels(&g, c)).collect(),
                    uniqueness_certified: r.uniqueness_certified,
                })),
            }
        }
        Command::Ominus { dag, remove, format } => {
            let (doc, g) = load_dag(&dag)?;
            let w = resolve(&doc, &g, &remove)?;
            let h = ominus(&g, &w).map_err(input)?;
            emit(render(&h, &doc.names(), format, DotOptions::default()))
        }
        Command::Verify {
            original,
            transformed,
            sizes: s,
        } => {
            let s = sizes(&s, err)?;
            let (_, g) = load_dag(&original)?;
            let (_, h) = load_dag(&transformed)?;
            let p = transform::verify_preservation(&g, &h, &s).map_err(input)?;
            emit(json(&p))?;
            if p.all() {
                Ok(())
            } else {
                Err(failure("preservation conditions violated"))
            }
        }
        Command::Shape { dag } => {
            let (_, g) = load_dag(&dag)?;
            emit(json(&recognize_shape(&g)))
        }
        Command::Dot {
            dag,
            clusters,
            highlight_w,
            dashed_shortcuts,
            sizes: s,
        } => {
            let (doc, g) = load_dag(&dag)?;
            let highlight = match (highlight_w, s) {
                (false, _) => BTreeSet::new(),
                (true, None) => return Err(input("--highlight-w needs --sizes")),
                (true, Some(s)) => {
                    let s = sizes(&s, err)?;
                    lca::i_lca_vertices(&g, &s).map_err(input)?.non_lca.into_iter().collect()
                }
            };
            let opts = DotOptions {
                clusters,
                highlight,
                dashed_shortcuts,
                names: BTreeMap::new(),
            };
            emit(render(&g, &doc.names(), Format::Dot, opts))
        }
        Command::Fuzz {
            laws,
            trials,
            seed,
            leaves,
            internal,
            density,
            max_vertices,
        } => {
            let laws: Vec<LawId> = if laws.iter().any(|l| l == "all") {
                LawId::ALL.to_vec()
            } else {
                laws.iter().map(|l| l.parse()).collect::<Result<_, _>>().map_err(input)?
            };
            let params = GenParams {
                seed,
                leaves: range(&leaves)?,
                internal: range(&internal)?,
                density,
                flavor: Flavor::ArbitraryDag,
                sizes: Vec::new(),
                max_vertices,
            };
            // Validates the ranges before any work is done.
            oracle::gen_dag(&params).map_err(input)?;
            let report = oracle::check_corpus(&laws, &params, trials);
            for l in &report.laws {
                let _ = writeln!(
                    err,
                    "{:<22} {:>5} passed {:>5} vacuous {:>3} failed {:>9.3}s",
                    l.law.name(),
                    l.passed,
                    l.vacuous,
                    l.failed,
                    l.elapsed.as_secs_f64()
                );
            }
            emit(json(&report))?;
            if report.all_passed() {
                Ok(())
            } else {
                Err(failure("law failures found"))
            }
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    match dispatch(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_lists() {
        assert_eq!(parse_size_list("1,2"), Ok(vec![1, 2]));
        assert_eq!(parse_size_list("1-3"), Ok(vec![1, 2, 3]));
        assert_eq!(parse_size_list("4, 1-2,2"), Ok(vec![1, 2, 4]));
        assert!(parse_size_list("3-1").is_err());
        assert!(parse_size_list("0,1").is_err());
        assert!(parse_size_list("a").is_err());
        assert!(parse_size_list("").is_err());
    }

    #[test]
    fn one_is_added_with_a_warning() {
        let mut err = Vec::new();
        let s = sizes("2", &mut err).unwrap();
        assert_eq!(s.sizes(), &[1, 2]);
        assert!(String::from_utf8(err).unwrap().contains("warning"));
    }

    #[test]
    fn bad_arguments_exit_2() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["lcadag", "frobnicate"], &mut out, &mut err), 2);
        assert_eq!(run(["lcadag", "--help"], &mut out, &mut err), 0);
    }
}
