//! Least common ancestors of leaf sets and the `I`-lca classifications.

use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::bitset::BitSet;
use crate::dag::{Dag, DagError, VertexId};
use crate::sizes::{walk_subsets, SizeError, SizeIndex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LcaError {
    #[error(transparent)]
    Dag(#[from] DagError),
    #[error(transparent)]
    Size(#[from] SizeError),
    #[error("leaf set is empty")]
    EmptySet,
    #[error("lca is not well-defined: {0:?}")]
    NotWellDefined(Vec<VertexId>),
}

/// Minimal elements of a set of common ancestors: those with no child in
/// the set.
fn minimal_ix(dag: &Dag, common: &BitSet) -> BitSet {
    common
        .iter()
        .filter(|&v| !dag.children_ix(v).iter().any(|&c| common.contains(c)))
        .collect()
}

/// Common ancestors of a set of label indices.
fn common_ancestors(dag: &Dag, set: &BitSet) -> BitSet {
    let mut it = set.iter();
    let Some(first) = it.next() else {
        return BitSet::new();
    };
    let mut common = dag.ancestors_ix(dag.leaf_vertex_ix(first)).into_owned();
    for x in it {
        common.intersect_with(&dag.ancestors_ix(dag.leaf_vertex_ix(x)));
        if common.is_empty() {
            break;
        }
    }
    common
}

/// `LCA(A)` for a set of label indices into [`Dag::ground`].
pub fn lca_set_of(dag: &Dag, set: &BitSet) -> Result<Vec<VertexId>, LcaError> {
    if set.is_empty() {
        return Err(LcaError::EmptySet);
    }
    if let Some(x) = set.iter().find(|&x| x >= dag.ground().len()) {
        return Err(DagError::UnknownLabel(alloc::format!("#{x}")).into());
    }
    Ok(dag.ids_of(&minimal_ix(dag, &common_ancestors(dag, set))))
}

/// `LCA(A)`: the ⪯-minimal common ancestors of the leaves labeled `labels`.
pub fn lca_set<S: AsRef<str>>(dag: &Dag, labels: &[S]) -> Result<Vec<VertexId>, LcaError> {
    lca_set_of(dag, &dag.label_set(labels)?)
}

pub fn unique_lca_of(dag: &Dag, set: &BitSet) -> Result<VertexId, LcaError> {
    let lcas = lca_set_of(dag, set)?;
    match lcas.as_slice() {
        [v] => Ok(*v),
        _ => Err(LcaError::NotWellDefined(lcas)),
    }
}

/// `lca(A)` when `LCA(A)` is a single vertex.
pub fn unique_lca<S: AsRef<str>>(dag: &Dag, labels: &[S]) -> Result<VertexId, LcaError> {
    unique_lca_of(dag, &dag.label_set(labels)?)
}

/// Walks `X(I)` over the dag's leaves, handing each subset and its LCA set
/// (as vertex indices) to `visit`. Subsets without any common ancestor are
/// skipped when `skip_orphans` is set.
pub(crate) fn walk_lcas<V>(
    dag: &Dag,
    sizes: &SizeIndex,
    skip_orphans: bool,
    mut visit: V,
) -> Result<(), SizeError>
where
    V: FnMut(&[usize], &BitSet) -> ControlFlow<()>,
{
    let n = dag.vertex_count();
    walk_subsets(
        sizes,
        dag.ground().len(),
        BitSet::full(n),
        |common, x| {
            let next = common.intersection(&dag.ancestors_ix(dag.leaf_vertex_ix(x)));
            if skip_orphans && next.is_empty() {
                None
            } else {
                Some(next)
            }
        },
        |a, common| visit(a, &minimal_ix(dag, common)),
    )
    .map(drop)
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LcaWitness {
    pub vertex: VertexId,
    /// First `A ∈ X(I)` in canonical order with `lca(A) = vertex`, as label
    /// indices; absent if the vertex is not an `I`-lca vertex.
    pub set: Option<BitSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LcaClassification {
    /// One entry per vertex, in id order.
    pub witnesses: Vec<LcaWitness>,
    /// Vertices that are not `I`-lca vertices.
    pub non_lca: Vec<VertexId>,
}

/// Classifies every vertex as `I`-lca vertex or not.
pub fn i_lca_vertices(dag: &Dag, sizes: &SizeIndex) -> Result<LcaClassification, LcaError> {
    let n = dag.vertex_count();
    let mut found: Vec<Option<BitSet>> = alloc::vec![None; n];
    let mut remaining = n;
    walk_lcas(dag, sizes, true, |a, lcas| {
        if lcas.len() == 1 {
            let v = lcas.first().expect("one element");
            if found[v].is_none() {
                found[v] = Some(a.iter().copied().collect());
                remaining -= 1;
                if remaining == 0 {
                    return ControlFlow::Break(());
                }
            }
        }
        ControlFlow::Continue(())
    })?;
    let witnesses: Vec<LcaWitness> = found
        .into_iter()
        .enumerate()
        .map(|(i, set)| LcaWitness {
            vertex: dag.id(i),
            set,
        })
        .collect();
    let non_lca = witnesses
        .iter()
        .filter(|w| w.set.is_none())
        .map(|w| w.vertex)
        .collect();
    Ok(LcaClassification { witnesses, non_lca })
}

/// Every vertex is the unique LCA of some `A ∈ X(I)`.
pub fn is_i_lca_relevant(dag: &Dag, sizes: &SizeIndex) -> Result<bool, LcaError> {
    Ok(i_lca_vertices(dag, sizes)?.non_lca.is_empty())
}

/// First `A ∈ X(I)` whose LCA is not unique. `I` must contain 1.
pub fn lca_property_violation(dag: &Dag, sizes: &SizeIndex) -> Result<Option<BitSet>, LcaError> {
    sizes.require_one()?;
    let mut witness = None;
    walk_lcas(dag, sizes, false, |a, lcas| {
        if lcas.len() != 1 {
            witness = Some(a.iter().copied().collect());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(witness)
}

/// `lca(A)` is well-defined for every `A ∈ X(I)`.
pub fn has_i_lca_property(dag: &Dag, sizes: &SizeIndex) -> Result<bool, LcaError> {
    Ok(lca_property_violation(dag, sizes)?.is_none())
}

/// For a single size `k`, the vertices that are `{k}`-lca vertices.
pub fn k_lca_vertices(dag: &Dag, k: usize) -> Result<Vec<VertexId>, LcaError> {
    let sizes = SizeIndex::new([k])?;
    let mut hit = BitSet::new();
    walk_lcas(dag, &sizes, true, |_, lcas| {
        if lcas.len() == 1 {
            hit.union_with(lcas);
        }
        ControlFlow::Continue(())
    })?;
    Ok(dag.ids_of(&hit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use alloc::vec;

    fn sz(s: &[usize]) -> SizeIndex {
        SizeIndex::with_one(s.iter().copied()).unwrap()
    }

    #[test]
    fn lca_set_examples() {
        let h = h4();
        assert_eq!(
            lca_set(&h, &["b", "c"]).unwrap(),
            vec![VertexId(4), VertexId(5)]
        );
        assert_eq!(lca_set(&t3(), &["a", "c"]).unwrap(), vec![VertexId(0)]);
        assert_eq!(lca_set(&b3(), &["a", "b"]).unwrap(), vec![VertexId(3)]);
        assert_eq!(lca_set::<&str>(&t3(), &[]), Err(LcaError::EmptySet));
        assert_eq!(
            lca_set(&t3(), &["zz"]),
            Err(LcaError::Dag(DagError::UnknownLabel("zz".into())))
        );
    }

    #[test]
    fn unique_lca_examples() {
        let t = t3();
        assert_eq!(unique_lca(&t, &["a"]).unwrap(), t.leaf("a").unwrap());
        assert_eq!(
            unique_lca(&h4(), &["b", "c"]),
            Err(LcaError::NotWellDefined(vec![VertexId(4), VertexId(5)]))
        );
        assert_eq!(unique_lca(&b3(), &["a", "c"]).unwrap(), VertexId(4));
    }

    #[test]
    fn no_common_ancestor_gives_empty_lca_set() {
        let g = crate::dag::validate(
            &crate::dag::RawDag::new()
                .vertex(0)
                .vertex(1)
                .leaf(2, "a")
                .leaf(3, "b")
                .edge(0, 2)
                .edge(1, 3),
        )
        .unwrap();
        assert_eq!(lca_set(&g, &["a", "b"]).unwrap(), vec![]);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(i_lca_vertices(&b3(), &sz(&[1, 2])).unwrap().non_lca, vec![VertexId(6)]);
        assert!(i_lca_vertices(&h4(), &sz(&[1, 2])).unwrap().non_lca.is_empty());
        let c = i_lca_vertices(&t3(), &sz(&[1, 2])).unwrap();
        assert!(c.non_lca.is_empty());
        assert_eq!(c.witnesses[0].set, Some(BitSet::from_indices([0, 2])));
        assert_eq!(c.witnesses[1].set, Some(BitSet::from_indices([0, 1])));
    }

    #[test]
    fn relevance_examples() {
        assert!(is_i_lca_relevant(&h4(), &sz(&[1, 2])).unwrap());
        assert!(!is_i_lca_relevant(&b3(), &sz(&[1, 2])).unwrap());
        assert!(is_i_lca_relevant(&b3(), &sz(&[1, 2, 3])).unwrap());
    }

    #[test]
    fn property_examples() {
        assert!(has_i_lca_property(&b3(), &sz(&[1, 2])).unwrap());
        let h = h4();
        let w = lca_property_violation(&h, &sz(&[1, 2])).unwrap().unwrap();
        assert_eq!(h.labels_of(&w), vec!["b", "c"]);
        assert!(has_i_lca_property(&t3(), &sz(&[1, 2, 3])).unwrap());
        let no_one = SizeIndex::new([2]).unwrap();
        assert_eq!(
            has_i_lca_property(&t3(), &no_one),
            Err(LcaError::Size(SizeError::MissingOne))
        );
    }

    #[test]
    fn sizes_beyond_ground_are_vacuous() {
        assert!(has_i_lca_property(&t3(), &sz(&[1, 9])).unwrap());
    }
}
