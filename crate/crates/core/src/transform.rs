//! Vertex removal with bridging (`G ⊖ W`), the lca-relevant simplification
//! pipeline and the preservation checks S0 to S4.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::bitset::BitSet;
use crate::dag::{self, cluster_system, Dag, DagError, VertexId};
use crate::hasse::{self, HasseError};
use crate::lca::{self, LcaError};
use crate::setsys::{self, SetSystem};
use crate::sizes::{SizeError, SizeIndex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("removal set covers every vertex")]
    RemovesEverything,
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error(transparent)]
    Dag(#[from] DagError),
    #[error(transparent)]
    Size(#[from] SizeError),
    #[error(transparent)]
    Lca(#[from] LcaError),
    #[error(transparent)]
    Hasse(#[from] HasseError),
    #[error("simplification result violates {0}")]
    Contract(&'static str),
}

fn removal_set(dag: &Dag, w: &[VertexId]) -> Result<BitSet, TransformError> {
    let mut set = BitSet::new();
    for &v in w {
        set.insert(dag.index_of(v).ok_or(TransformError::UnknownVertex(v))?);
    }
    if set.len() == dag.vertex_count() {
        return Err(TransformError::RemovesEverything);
    }
    Ok(set)
}

fn rebuild(dag: &Dag, keep: &[usize], edges: Vec<(usize, usize)>) -> Result<Dag, DagError> {
    let mut pos = vec![usize::MAX; dag.vertex_count()];
    for (i, &v) in keep.iter().enumerate() {
        pos[v] = i;
    }
    let ids = keep.iter().map(|&v| dag.id(v)).collect();
    let labels = keep.iter().map(|&v| dag.labels_ix()[v].clone()).collect();
    Dag::from_indexed(ids, labels, edges.into_iter().map(|(a, b)| (pos[a], pos[b])))
}

/// `G ⊖ W`: removes `W` and joins `p → q` whenever `G` has a path from `p`
/// to `q` whose interior lies entirely in `W`. An empty `W` returns a copy.
pub fn ominus(dag: &Dag, w: &[VertexId]) -> Result<Dag, TransformError> {
    let removed = removal_set(dag, w)?;
    if removed.is_empty() {
        return Ok(dag.clone());
    }
    let n = dag.vertex_count();
    let keep: Vec<usize> = (0..n).filter(|v| !removed.contains(*v)).collect();
    let mut edges = Vec::new();
    let mut stack = Vec::new();
    for &p in &keep {
        let mut seen = BitSet::new();
        stack.extend_from_slice(dag.children_ix(p));
        while let Some(c) = stack.pop() {
            if !seen.insert(c) {
                continue;
            }
            if removed.contains(c) {
                stack.extend_from_slice(dag.children_ix(c));
            } else {
                edges.push((p, c));
            }
        }
    }
    Ok(rebuild(dag, &keep, edges)?)
}

/// `G ⊖ v`: removes `v` and connects each of its parents to each of its
/// children.
pub fn ominus_vertex(dag: &Dag, v: VertexId) -> Result<Dag, TransformError> {
    let x = dag.index_of(v).ok_or(TransformError::UnknownVertex(v))?;
    if dag.vertex_count() == 1 {
        return Err(TransformError::RemovesEverything);
    }
    let keep: Vec<usize> = (0..dag.vertex_count()).filter(|&u| u != x).collect();
    let mut edges = Vec::new();
    for &a in &keep {
        for &b in dag.children_ix(a) {
            if b != x {
                edges.push((a, b));
            }
        }
    }
    for &p in dag.parents_ix(x) {
        for &q in dag.children_ix(x) {
            edges.push((p, q));
        }
    }
    Ok(rebuild(dag, &keep, edges)?)
}

/// Removes the vertices one at a time in the given order.
pub fn ominus_sequential(dag: &Dag, order: &[VertexId]) -> Result<Dag, TransformError> {
    let mut g = dag.clone();
    for &v in order {
        if !g.contains(v) {
            if dag.contains(v) {
                continue;
            }
            return Err(TransformError::UnknownVertex(v));
        }
        g = ominus_vertex(&g, v)?;
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplificationResult {
    /// Vertices that are not `I`-lca vertices, in id order.
    pub removed: Vec<VertexId>,
    pub reduced: Dag,
    pub reduced_shortcut_free: Dag,
    /// Clusters of the input that the reduced dag no longer has.
    pub cluster_diff: Vec<BitSet>,
    /// The input has the `I`-lca-property, so `removed` is the only
    /// removal set with an lca-relevant, S0 to S4 preserving result.
    pub uniqueness_certified: bool,
}

/// Whether the `v ↦ C(v)` image of `dag`'s edges is exactly the covering
/// relation of `sys`. Assumes both share a ground set.
fn matches_hasse(dag: &Dag, sys: &SetSystem) -> Result<bool, TransformError> {
    let h = hasse::build_hasse(sys)?;
    let mut want: Vec<(&BitSet, &BitSet)> = h
        .dag()
        .edges()
        .into_iter()
        .map(|(a, b)| (h.member(a).expect("member"), h.member(b).expect("member")))
        .collect();
    let mut got: Vec<(&BitSet, &BitSet)> = dag
        .edges()
        .into_iter()
        .map(|(a, b)| {
            (
                dag.cluster(a).expect("vertex of dag"),
                dag.cluster(b).expect("vertex of dag"),
            )
        })
        .collect();
    want.sort();
    got.sort();
    Ok(want == got && dag.vertex_count() == sys.len())
}

/// Removes every vertex that is not an `I`-lca vertex and checks the
/// guarantees that hold for the result.
pub fn simplify(dag: &Dag, sizes: &SizeIndex) -> Result<SimplificationResult, TransformError> {
    sizes.require_one()?;
    let removed = lca::i_lca_vertices(dag, sizes)?.non_lca;
    let reduced = ominus(dag, &removed)?;
    let reduced_shortcut_free = dag::remove_shortcuts(&reduced);

    let before = cluster_system(dag);
    let after = cluster_system(&reduced);
    let cluster_diff = before.difference(&after);

    if !lca::is_i_lca_relevant(&reduced, sizes)? {
        return Err(TransformError::Contract("lca-relevance"));
    }
    let certified = lca::has_i_lca_property(dag, sizes)?;
    if certified {
        if !lca::has_i_lca_property(&reduced, sizes)? {
            return Err(TransformError::Contract("the lca-property"));
        }
        let ic = setsys::ic_members(&before, sizes)?;
        if after != ic {
            return Err(TransformError::Contract("cluster equality with the I-ary core"));
        }
        if !dag::is_regular(&reduced_shortcut_free) {
            return Err(TransformError::Contract("regularity"));
        }
        if !matches_hasse(&reduced_shortcut_free, &ic)? {
            return Err(TransformError::Contract("isomorphism with the Hasse diagram"));
        }
    }
    Ok(SimplificationResult {
        removed,
        reduced,
        reduced_shortcut_free,
        cluster_diff,
        uniqueness_certified: certified,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PreservationFailure {
    /// S0: a cluster of the transformed dag that the original lacks.
    NewCluster(Vec<String>),
    /// S0: a shared vertex whose cluster changed.
    ClusterChanged(VertexId),
    /// S1: a leaf present on one side only, or relabeled.
    LeafMismatch(VertexId),
    /// S2: a vertex absent from the original.
    NewVertex(VertexId),
    /// S3: shared `u, w` with `u ≺ w` on exactly one side.
    AncestryMismatch(VertexId, VertexId),
    /// S4: `lca(A)` was well-defined in the original and differs now.
    LcaChanged {
        set: Vec<String>,
        before: VertexId,
        after: Vec<VertexId>,
    },
    /// S4: a label of `A` is missing from the transformed dag.
    MissingLabel(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Preservation {
    pub s0: bool,
    pub s1: bool,
    pub s2: bool,
    pub s3: bool,
    pub s4: bool,
    /// The first failure found for each condition that does not hold.
    pub failures: Vec<PreservationFailure>,
}

impl Preservation {
    pub fn all(&self) -> bool {
        self.s0 && self.s1 && self.s2 && self.s3 && self.s4
    }
}

/// Re-indexes a label set of `from` into the ground of `to`.
fn translate(from: &Dag, to: &Dag, set: &BitSet) -> Result<BitSet, String> {
    set.iter()
        .map(|i| {
            let l = &from.ground()[i];
            to.ground().binary_search(l).map_err(|_| l.clone())
        })
        .collect()
}

/// Checks S0 to S4 for `transformed` against `original`.
pub fn verify_preservation(
    original: &Dag,
    transformed: &Dag,
    sizes: &SizeIndex,
) -> Result<Preservation, TransformError> {
    sizes.require_one()?;
    let (g, h) = (original, transformed);
    let mut failures = Vec::new();

    // Shared vertices as index pairs (in g, in h).
    let mut shared = Vec::new();
    let mut s2 = true;
    for (j, &v) in h.vertices().iter().enumerate() {
        match g.index_of(v) {
            Some(i) => shared.push((i, j)),
            None if s2 => {
                s2 = false;
                failures.push(PreservationFailure::NewVertex(v));
            }
            None => {}
        }
    }

    let mut s0 = true;
    let g_clusters = cluster_system(g);
    for c in h.clusters_ix() {
        let known = translate(h, g, c).is_ok_and(|t| g_clusters.contains(&t));
        if !known {
            s0 = false;
            failures.push(PreservationFailure::NewCluster(
                h.labels_of(c).into_iter().map(String::from).collect(),
            ));
            break;
        }
    }
    if s0 {
        for &(i, j) in &shared {
            if translate(h, g, &h.clusters_ix()[j]).ok().as_ref() != Some(&g.clusters_ix()[i]) {
                s0 = false;
                failures.push(PreservationFailure::ClusterChanged(g.id(i)));
                break;
            }
        }
    }

    let mut s1 = true;
    let g_leaves: Vec<(VertexId, Option<&str>)> =
        g.leaves().into_iter().map(|v| (v, g.label(v))).collect();
    let h_leaves: Vec<(VertexId, Option<&str>)> =
        h.leaves().into_iter().map(|v| (v, h.label(v))).collect();
    if g_leaves != h_leaves {
        s1 = false;
        let odd = g_leaves
            .iter()
            .zip(&h_leaves)
            .find(|(a, b)| a != b)
            .map(|(a, b)| a.0.min(b.0))
            .or_else(|| g_leaves.get(h_leaves.len()).map(|x| x.0))
            .or_else(|| h_leaves.get(g_leaves.len()).map(|x| x.0))
            .expect("leaf lists differ");
        failures.push(PreservationFailure::LeafMismatch(odd));
    }

    let mut s3 = true;
    'outer: for &(i, j) in &shared {
        for &(k, l) in &shared {
            if i != k && g.leq_ix(i, k) != h.leq_ix(j, l) {
                s3 = false;
                failures.push(PreservationFailure::AncestryMismatch(g.id(i), g.id(k)));
                break 'outer;
            }
        }
    }

    let mut s4 = true;
    let mut inner = Ok(());
    lca::walk_lcas(g, sizes, true, |a, lcas| {
        if lcas.len() != 1 {
            return ControlFlow::Continue(());
        }
        let before = g.id(lcas.first().expect("one element"));
        let set: BitSet = a.iter().copied().collect();
        let failure = match translate(g, h, &set) {
            Err(l) => Some(PreservationFailure::MissingLabel(l)),
            Ok(t) => match lca::lca_set_of(h, &t) {
                Ok(after) if after == [before] => None,
                Ok(after) => Some(PreservationFailure::LcaChanged {
                    set: g.labels_of(&set).into_iter().map(String::from).collect(),
                    before,
                    after,
                }),
                Err(e) => {
                    inner = Err(e);
                    return ControlFlow::Break(());
                }
            },
        };
        match failure {
            Some(f) => {
                s4 = false;
                failures.push(f);
                ControlFlow::Break(())
            }
            None => ControlFlow::Continue(()),
        }
    })?;
    inner?;

    Ok(Preservation {
        s0,
        s1,
        s2,
        s3,
        s4,
        failures,
    })
}

/// Whether removing `w` yields an `I`-lca-relevant dag satisfying S0 to S4.
/// Removal sets that cannot be applied count as inadmissible.
pub fn is_admissible_removal(
    dag: &Dag,
    w: &[VertexId],
    sizes: &SizeIndex,
) -> Result<bool, TransformError> {
    let h = match ominus(dag, w) {
        Ok(h) => h,
        Err(TransformError::RemovesEverything | TransformError::Dag(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    if !lca::is_i_lca_relevant(&h, sizes)? {
        return Ok(false);
    }
    Ok(verify_preservation(dag, &h, sizes)?.all())
}
