//! Structural classification of dags: connectivity, networks, trees and
//! galled trees, plus a combined property report.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::dag::{self, Dag, VertexId, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Property {
    Connected,
    Network,
    Phylogenetic,
    Pcc,
    Regular,
    ShortcutFree,
    Tree,
    GalledTree,
    NonTrivial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PropertyReport {
    pub connected: bool,
    /// Exactly one root.
    pub network: bool,
    pub phylogenetic: bool,
    pub pcc: bool,
    pub regular: bool,
    pub shortcut_free: bool,
    pub tree: bool,
    pub galled_tree: bool,
    pub non_trivial: bool,
    /// Smallest cluster size above 1; present iff `non_trivial`.
    pub kappa: Option<usize>,
    /// One witness per false flag, in flag order.
    pub witnesses: Vec<(Property, Witness)>,
}

impl PropertyReport {
    pub fn witness(&self, p: Property) -> Option<&Witness> {
        self.witnesses.iter().find(|(q, _)| *q == p).map(|(_, w)| w)
    }
}

/// Undirected neighbours of each vertex.
fn undirected(dag: &Dag) -> Vec<Vec<usize>> {
    (0..dag.vertex_count())
        .map(|v| {
            let mut nb: Vec<usize> = dag.children_ix(v).to_vec();
            nb.extend_from_slice(dag.parents_ix(v));
            nb.sort_unstable();
            nb
        })
        .collect()
}

/// Weak components as vertex-index sets, ordered by smallest member.
pub(crate) fn components(dag: &Dag) -> Vec<BitSet> {
    let adj = undirected(dag);
    let n = adj.len();
    let mut seen = BitSet::new();
    let mut out = Vec::new();
    for s in 0..n {
        if seen.contains(s) {
            continue;
        }
        let mut comp = BitSet::singleton(s);
        seen.insert(s);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if seen.insert(w) {
                    comp.insert(w);
                    stack.push(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Biconnected components of the underlying undirected graph, each given
/// by its edge list `(parent, child)` in vertex indices. Isolated vertices
/// form no block.
pub(crate) fn blocks(dag: &Dag) -> Vec<Vec<(usize, usize)>> {
    let adj = undirected(dag);
    let n = adj.len();
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::new();

    let orient = |a: usize, b: usize| {
        if dag.children_ix(a).binary_search(&b).is_ok() {
            (a, b)
        } else {
            (b, a)
        }
    };

    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, parent, next neighbour position)
        let mut frames: Vec<(usize, usize, usize)> = vec![(root, UNSEEN, 0)];
        while let Some(frame) = frames.last_mut() {
            let (v, parent, pos) = *frame;
            if pos < adj[v].len() {
                frame.2 += 1;
                let w = adj[v][pos];
                if disc[w] == UNSEEN {
                    edge_stack.push((v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    frames.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if parent != UNSEEN {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(orient(e.0, e.1));
                            if e == (parent, v) {
                                break;
                            }
                        }
                        block.sort_unstable();
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

/// A block is admissible in a galled tree if it is a single edge or a cycle
/// made of exactly two directed paths between one source and one sink.
fn is_gall_or_edge(block: &[(usize, usize)]) -> bool {
    if block.len() == 1 {
        return true;
    }
    let mut verts: Vec<usize> = block.iter().flat_map(|&(a, b)| [a, b]).collect();
    verts.sort_unstable();
    verts.dedup();
    if verts.len() != block.len() {
        return false;
    }
    let mut sources = 0;
    let mut sinks = 0;
    for &v in &verts {
        let outd = block.iter().filter(|e| e.0 == v).count();
        let ind = block.iter().filter(|e| e.1 == v).count();
        if outd + ind != 2 {
            return false;
        }
        sources += usize::from(ind == 0);
        sinks += usize::from(outd == 0);
    }
    sources == 1 && sinks == 1
}

/// Computes every structural flag of `dag`, with a witness for each flag
/// that fails.
pub fn recognize_shape(dag: &Dag) -> PropertyReport {
    let mut witnesses = Vec::new();
    let n = dag.vertex_count();

    let comps = components(dag);
    let connected = comps.len() == 1;
    if !connected {
        let a = comps[0].first().expect("nonempty");
        let b = comps[1].first().expect("nonempty");
        witnesses.push((Property::Connected, Witness::Disconnected(dag.id(a), dag.id(b))));
    }

    let roots = dag.roots();
    let network = roots.len() == 1;
    if !network {
        witnesses.push((Property::Network, Witness::Roots(roots)));
    }

    let phylogenetic = match dag::phylogenetic_violation(dag) {
        Some(v) => {
            witnesses.push((Property::Phylogenetic, Witness::Degenerate(v)));
            false
        }
        None => true,
    };

    let pcc = match dag::pcc_violation(dag) {
        Some((u, v)) => {
            witnesses.push((Property::Pcc, Witness::PccPair(u, v)));
            false
        }
        None => true,
    };

    let regular = match dag::regularity_violation(dag) {
        Some(w) => {
            witnesses.push((Property::Regular, w));
            false
        }
        None => true,
    };

    let shortcut_free = match dag::shortcuts(dag).first() {
        Some(&(a, b)) => {
            witnesses.push((Property::ShortcutFree, Witness::Shortcut(a, b)));
            false
        }
        None => true,
    };

    let reticulation = (0..n).find(|&v| dag.parents_ix(v).len() > 1);
    let tree = network && reticulation.is_none();
    if !tree {
        let w = match reticulation {
            Some(v) if network => Witness::Reticulation(dag.id(v)),
            _ => Witness::Roots(dag.roots()),
        };
        witnesses.push((Property::Tree, w));
    }

    let bad_block = blocks(dag).into_iter().find(|b| !is_gall_or_edge(b));
    let galled_tree = network && bad_block.is_none();
    if !galled_tree {
        let w = match bad_block {
            Some(b) if network => {
                let mut vs: Vec<VertexId> =
                    b.iter().flat_map(|&(x, y)| [dag.id(x), dag.id(y)]).collect();
                vs.sort_unstable();
                vs.dedup();
                Witness::Block(vs)
            }
            _ => Witness::Roots(dag.roots()),
        };
        witnesses.push((Property::GalledTree, w));
    }

    let kappa = dag
        .clusters_ix()
        .iter()
        .map(BitSet::len)
        .filter(|&s| s > 1)
        .min();
    let non_trivial = kappa.is_some();
    if !non_trivial {
        witnesses.push((Property::NonTrivial, Witness::TrivialClusters));
    }

    PropertyReport {
        connected,
        network,
        phylogenetic,
        pcc,
        regular,
        shortcut_free,
        tree,
        galled_tree,
        non_trivial,
        kappa,
        witnesses,
    }
}

pub fn is_connected(dag: &Dag) -> bool {
    components(dag).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dag::{validate, RawDag};
    use crate::fixtures::*;

    fn flags(r: &PropertyReport) -> [(Property, bool); 9] {
        [
            (Property::Connected, r.connected),
            (Property::Network, r.network),
            (Property::Phylogenetic, r.phylogenetic),
            (Property::Pcc, r.pcc),
            (Property::Regular, r.regular),
            (Property::ShortcutFree, r.shortcut_free),
            (Property::Tree, r.tree),
            (Property::GalledTree, r.galled_tree),
            (Property::NonTrivial, r.non_trivial),
        ]
    }

    fn assert_witnessed(r: &PropertyReport) {
        for (p, v) in flags(r) {
            assert_eq!(!v, r.witness(p).is_some(), "{p:?}");
        }
        assert_eq!(r.kappa.is_some(), r.non_trivial);
    }

    #[test]
    fn t3_shape() {
        let r = recognize_shape(&t3());
        assert!(r.tree && r.galled_tree && r.connected && r.network);
        assert_eq!(r.kappa, Some(2));
        assert_witnessed(&r);
    }

    #[test]
    fn gt_shape() {
        let r = recognize_shape(&gt());
        assert!(!r.tree);
        assert!(r.galled_tree);
        assert_eq!(r.witness(Property::Tree), Some(&Witness::Reticulation(VertexId(3))));
        assert_witnessed(&r);
    }

    #[test]
    fn disconnected_shape() {
        let g = validate(
            &RawDag::new()
                .vertex(0)
                .leaf(1, "a")
                .vertex(2)
                .leaf(3, "b")
                .edge(0, 1)
                .edge(2, 3),
        )
        .unwrap();
        let r = recognize_shape(&g);
        assert!(!r.connected && !r.tree && !r.galled_tree);
        assert_eq!(
            r.witness(Property::Connected),
            Some(&Witness::Disconnected(VertexId(0), VertexId(2)))
        );
        assert_witnessed(&r);
    }

    #[test]
    fn h4_and_b3_are_not_galled() {
        for g in [h4(), b3()] {
            let r = recognize_shape(&g);
            assert!(r.network && !r.galled_tree && !r.tree);
            assert_witnessed(&r);
        }
    }

    #[test]
    fn block_decomposition() {
        // gt: one 4-cycle block plus three pendant edges
        let mut sizes: Vec<usize> = blocks(&gt()).iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 1, 4]);
        // two galls glued at the cut vertex 3
        let g = validate(
            &RawDag::new()
                .vertex(0)
                .vertex(1)
                .vertex(2)
                .vertex(3)
                .vertex(4)
                .vertex(5)
                .vertex(6)
                .leaf(7, "a")
                .leaf(8, "b")
                .leaf(9, "c")
                .leaf(10, "d")
                .leaf(11, "e")
                .edge(0, 1)
                .edge(0, 2)
                .edge(1, 3)
                .edge(2, 3)
                .edge(1, 7)
                .edge(2, 8)
                .edge(3, 4)
                .edge(3, 5)
                .edge(4, 6)
                .edge(5, 6)
                .edge(4, 9)
                .edge(5, 10)
                .edge(6, 11),
        )
        .unwrap();
        let mut sizes: Vec<usize> = blocks(&g).iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 1, 1, 1, 4, 4]);
        let r = recognize_shape(&g);
        assert!(r.galled_tree && !r.tree);
    }

    #[test]
    fn trivial_dag() {
        let g = validate(&RawDag::new().leaf(0, "a")).unwrap();
        let r = recognize_shape(&g);
        assert!(!r.non_trivial && r.kappa.is_none() && r.tree);
        assert_witnessed(&r);
    }
}
