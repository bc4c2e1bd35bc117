//! Hasse diagrams of set systems and dags realized from them.
//!
//! Vertex `i` of a Hasse diagram is the `i`-th member of the system in
//! canonical order, so repeated builds are identical.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::dag::{Dag, DagError, VertexId};
use crate::lca::{self, LcaError};
use crate::setsys::{self, SetSystem};
use crate::sizes::{SizeError, SizeIndex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HasseError {
    #[error("set system has no members")]
    EmptySystem,
    #[error("minimal member {0:?} is not a singleton")]
    NotGrounded(Vec<String>),
    #[error("set system is not pre-I-ary: {0:?} has no unique minimal superset")]
    NotPreIAry(Vec<String>),
    #[error("set system is not I-ary")]
    NotIAry,
    #[error(transparent)]
    Dag(#[from] DagError),
    #[error(transparent)]
    Size(#[from] SizeError),
    #[error(transparent)]
    Lca(#[from] LcaError),
    #[error("realized dag violates {0}")]
    Contract(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HasseDag {
    dag: Dag,
    members: Vec<BitSet>,
    ground: Vec<String>,
    /// All minimal members are singletons, so leaf labels are plain labels.
    dotted: bool,
}

impl HasseDag {
    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    /// The member represented by vertex `v`.
    pub fn member(&self, v: VertexId) -> Option<&BitSet> {
        self.members.get(usize::try_from(v.0).ok()?)
    }

    pub fn is_dotted(&self) -> bool {
        self.dotted
    }

    /// The dag with singleton leaves `{x}` relabeled by `x`.
    pub fn into_dotted(self) -> Result<Dag, HasseError> {
        if self.dotted {
            return Ok(self.dag);
        }
        let bad = self
            .dag
            .leaves()
            .into_iter()
            .map(|v| self.members[v.0 as usize].clone())
            .find(|m| m.len() != 1)
            .expect("some leaf is not a singleton");
        Err(HasseError::NotGrounded(
            bad.iter().map(|i| self.ground[i].clone()).collect(),
        ))
    }
}

/// Covering pairs `(a, b)`: `members[b] ⊊ members[a]` with nothing in
/// between. Members must be in canonical order.
pub fn cover_pairs(members: &[BitSet]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for a in 0..members.len() {
        // Proper subsets precede `a`; visit them largest first so that each
        // non-cover is rejected by an already accepted cover above it.
        let mut accepted: Vec<usize> = Vec::new();
        for b in (0..a).rev() {
            if !members[b].is_proper_subset(&members[a]) {
                continue;
            }
            if accepted.iter().any(|&c| members[b].is_subset(&members[c])) {
                continue;
            }
            accepted.push(b);
        }
        accepted.sort_unstable();
        edges.extend(accepted.into_iter().map(|b| (a, b)));
    }
    edges
}

/// Builds the Hasse diagram. Leaves that are singletons `{x}` are labeled
/// `x`; other minimal members are labeled in set notation.
pub fn build_hasse(sys: &SetSystem) -> Result<HasseDag, HasseError> {
    if sys.is_empty() {
        return Err(HasseError::EmptySystem);
    }
    let members = sys.members().to_vec();
    let edges = cover_pairs(&members);
    let mut has_child = alloc::vec![false; members.len()];
    for &(a, _) in &edges {
        has_child[a] = true;
    }
    let mut dotted = true;
    let labels: Vec<Option<String>> = members
        .iter()
        .enumerate()
        .map(|(i, m)| {
            if has_child[i] {
                return None;
            }
            if m.len() == 1 {
                Some(sys.ground()[m.first().expect("nonempty")].clone())
            } else {
                dotted = false;
                Some(format!("{{{}}}", sys.labels_of(m).join(",")))
            }
        })
        .collect();
    let ids = (0..members.len() as u64).map(VertexId).collect();
    let dag = Dag::from_indexed(ids, labels, edges)?;
    Ok(HasseDag {
        dag,
        members,
        ground: sys.ground().to_vec(),
        dotted,
    })
}

/// `G ≐ Hasse(sys)`.
pub fn dotted_hasse(sys: &SetSystem) -> Result<Dag, HasseError> {
    build_hasse(sys)?.into_dotted()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Demand {
    /// The `I`-lca-property.
    Property,
    /// The `I`-lca-property and `I`-lca-relevance.
    Ary,
}

/// Realizes a grounded system as a dag with the demanded lca properties.
///
/// The hypothesis (pre-`I`-ary, resp. `I`-ary) is checked first; the
/// returned dag is verified to have the demanded properties.
pub fn realize_with_property(
    sys: &SetSystem,
    sizes: &SizeIndex,
    demand: Demand,
) -> Result<Dag, HasseError> {
    sizes.require_one()?;
    if !setsys::validate_system(sys).grounded {
        return Err(HasseError::NotGrounded(Vec::new()));
    }
    if let Some(a) = setsys::pre_i_ary_violation(sys, sizes)? {
        return Err(HasseError::NotPreIAry(
            sys.labels_of(&a).into_iter().map(String::from).collect(),
        ));
    }
    if demand == Demand::Ary && !setsys::is_i_ary(sys, sizes)? {
        return Err(HasseError::NotIAry);
    }
    let dag = dotted_hasse(sys)?;
    if !lca::has_i_lca_property(&dag, sizes)? {
        return Err(HasseError::Contract("the lca-property"));
    }
    if demand == Demand::Ary && !lca::is_i_lca_relevant(&dag, sizes)? {
        return Err(HasseError::Contract("lca-relevance"));
    }
    Ok(dag)
}

/// First non-leaf vertex `v` and size `ℓ ∈ {2, .., |C(v)|}` such that `v` is
/// not an `{ℓ}`-lca vertex.
pub fn all_sizes_lca_violation(dag: &Dag) -> Result<Option<(VertexId, usize)>, LcaError> {
    let max = dag.clusters_ix().iter().map(BitSet::len).max().unwrap_or(1);
    let mut per_size = Vec::new();
    for l in 2..=max {
        per_size.push(lca::k_lca_vertices(dag, l)?);
    }
    for (i, c) in dag.clusters_ix().iter().enumerate() {
        if dag.is_leaf_ix(i) {
            continue;
        }
        let v = dag.id(i);
        for l in 2..=c.len() {
            if per_size[l - 2].binary_search(&v).is_err() {
                return Ok(Some((v, l)));
            }
        }
    }
    Ok(None)
}

/// Realizes a grounded (N3O) system as `G ≐ Hasse(sys)` and checks that every
/// non-leaf vertex is an `{ℓ}`-lca vertex for every `ℓ ∈ {2, .., |C(v)|}`.
pub fn realize_n3o_witness(sys: &SetSystem) -> Result<Dag, HasseError> {
    let dag = dotted_hasse(sys)?;
    if all_sizes_lca_violation(&dag)?.is_some() {
        return Err(HasseError::Contract("the all-sizes lca condition"));
    }
    Ok(dag)
}
