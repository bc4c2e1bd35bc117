//! Leaf-labeled directed acyclic graphs.
//!
//! A [`Dag`] is validated once at construction and is immutable afterwards.
//! Vertices carry opaque ids chosen by the caller; every result refers back
//! to those ids. Internally vertices are addressed by their rank in the
//! sorted id list.

use alloc::borrow::Cow;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bitset::BitSet;
use crate::setsys::SetSystem;

/// Above this many vertices reachability is answered by DFS instead of a
/// precomputed transitive closure.
pub const CLOSURE_LIMIT: usize = 4096;

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(transparent))]
pub struct VertexId(pub u64);

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for VertexId {
    fn from(v: u64) -> Self {
        VertexId(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DagError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex {0} declared more than once")]
    DuplicateVertex(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("directed cycle {0:?}")]
    Cyclic(Vec<VertexId>),
    #[error("vertex {0} has no children but carries no label")]
    UnlabeledLeaf(VertexId),
    #[error("vertex {0} has children but carries label {1:?}")]
    LabeledInternal(VertexId, String),
    #[error("label {0:?} used on more than one leaf")]
    DuplicateLabel(String),
    #[error("unknown leaf label {0:?}")]
    UnknownLabel(String),
}

/// Unvalidated graph description, as read from a file or assembled by hand.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawDag {
    pub vertices: Vec<(VertexId, Option<String>)>,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl RawDag {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: u64) -> Self {
        self.vertices.push((VertexId(id), None));
        self
    }

    pub fn leaf(mut self, id: u64, label: &str) -> Self {
        self.vertices.push((VertexId(id), Some(label.into())));
        self
    }

    pub fn edge(mut self, from: u64, to: u64) -> Self {
        self.edges.push((VertexId(from), VertexId(to)));
        self
    }
}

#[derive(Debug, Clone)]
enum Reach {
    /// Descendant and ancestor sets (each reflexive) per vertex.
    Closure { desc: Vec<BitSet>, anc: Vec<BitSet> },
    Streaming,
}

#[derive(Debug, Clone)]
pub struct Dag {
    ids: Vec<VertexId>,
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
    labels: Vec<Option<String>>,
    /// Vertex index -> index into `ground`.
    leaf_of: Vec<Option<usize>>,
    /// Sorted leaf labels, the ground set X.
    ground: Vec<String>,
    /// Label index -> vertex index.
    leaf_vertex: Vec<usize>,
    /// Parents before children.
    topo: Vec<usize>,
    clusters: Vec<BitSet>,
    reach: Reach,
}

impl PartialEq for Dag {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.children == other.children && self.labels == other.labels
    }
}

impl Eq for Dag {}

/// Validates a raw description and builds a [`Dag`].
pub fn validate(raw: &RawDag) -> Result<Dag, DagError> {
    Dag::new(
        raw.vertices.iter().map(|(v, l)| (*v, l.clone())),
        raw.edges.iter().copied(),
    )
}

impl Dag {
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Dag, DagError>
    where
        V: IntoIterator<Item = (VertexId, Option<String>)>,
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut verts: Vec<(VertexId, Option<String>)> = vertices.into_iter().collect();
        if verts.is_empty() {
            return Err(DagError::EmptyGraph);
        }
        verts.sort_by_key(|(v, _)| *v);
        for w in verts.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(DagError::DuplicateVertex(w[0].0));
            }
        }
        let ids: Vec<VertexId> = verts.iter().map(|(v, _)| *v).collect();
        let labels: Vec<Option<String>> = verts.into_iter().map(|(_, l)| l).collect();
        let n = ids.len();

        let mut edge_list = Vec::new();
        for (a, b) in edges {
            let ia = ids.binary_search(&a).map_err(|_| DagError::UnknownVertex(a))?;
            let ib = ids.binary_search(&b).map_err(|_| DagError::UnknownVertex(b))?;
            if ia == ib {
                return Err(DagError::SelfLoop(a));
            }
            edge_list.push((ia, ib));
        }
        edge_list.sort_unstable();
        edge_list.dedup();

        let mut children = vec![Vec::new(); n];
        let mut parents = vec![Vec::new(); n];
        for &(a, b) in &edge_list {
            children[a].push(b);
            parents[b].push(a);
        }
        for p in &mut parents {
            p.sort_unstable();
        }

        let topo = topo_order(&children, &parents).map_err(|cycle| {
            DagError::Cyclic(cycle.into_iter().map(|i| ids[i]).collect())
        })?;

        for i in 0..n {
            match (&labels[i], children[i].is_empty()) {
                (None, true) => return Err(DagError::UnlabeledLeaf(ids[i])),
                (Some(l), false) => return Err(DagError::LabeledInternal(ids[i], l.clone())),
                _ => {}
            }
        }

        let mut ground: Vec<String> = labels.iter().flatten().cloned().collect();
        ground.sort();
        for w in ground.windows(2) {
            if w[0] == w[1] {
                return Err(DagError::DuplicateLabel(w[0].clone()));
            }
        }
        let mut leaf_of = vec![None; n];
        let mut leaf_vertex = vec![0; ground.len()];
        for (i, l) in labels.iter().enumerate() {
            if let Some(l) = l {
                let li = ground.binary_search(l).expect("label collected above");
                leaf_of[i] = Some(li);
                leaf_vertex[li] = i;
            }
        }

        // Clusters bottom-up.
        let mut clusters = vec![BitSet::new(); n];
        for &v in topo.iter().rev() {
            if let Some(li) = leaf_of[v] {
                clusters[v] = BitSet::singleton(li);
            } else {
                let mut c = BitSet::new();
                for &ch in &children[v] {
                    c.union_with(&clusters[ch]);
                }
                clusters[v] = c;
            }
        }

        let reach = if n <= CLOSURE_LIMIT {
            let mut desc = vec![BitSet::new(); n];
            for &v in topo.iter().rev() {
                let mut d = BitSet::singleton(v);
                for &ch in &children[v] {
                    d.union_with(&desc[ch]);
                }
                desc[v] = d;
            }
            let mut anc = vec![BitSet::new(); n];
            for &v in &topo {
                let mut a = BitSet::singleton(v);
                for &p in &parents[v] {
                    a.union_with(&anc[p]);
                }
                anc[v] = a;
            }
            Reach::Closure { desc, anc }
        } else {
            Reach::Streaming
        };

        Ok(Dag {
            ids,
            children,
            parents,
            labels,
            leaf_of,
            ground,
            leaf_vertex,
            topo,
            clusters,
            reach,
        })
    }

    /// Builds a dag from dense indices into `ids`. Used by transformations
    /// that only ever produce subgraphs of an already valid dag.
    pub(crate) fn from_indexed(
        ids: Vec<VertexId>,
        labels: Vec<Option<String>>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Dag, DagError> {
        let edges: Vec<(VertexId, VertexId)> =
            edges.into_iter().map(|(a, b)| (ids[a], ids[b])).collect();
        Dag::new(ids.into_iter().zip(labels), edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    /// Vertex ids in ascending order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.ids
    }

    /// Edges in ascending `(source, target)` order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (a, ch) in self.children.iter().enumerate() {
            for &b in ch {
                out.push((self.ids[a], self.ids[b]));
            }
        }
        out
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.ids.binary_search(&v).is_ok()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(a), Some(b)) => self.children[a].binary_search(&b).is_ok(),
            _ => false,
        }
    }

    /// The ground set X: leaf labels in ascending order.
    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.index_of(v).and_then(|i| self.labels[i].as_deref())
    }

    pub fn leaf(&self, label: &str) -> Option<VertexId> {
        self.ground
            .binary_search_by(|l| l.as_str().cmp(label))
            .ok()
            .map(|li| self.ids[self.leaf_vertex[li]])
    }

    pub fn leaves(&self) -> Vec<VertexId> {
        (0..self.ids.len())
            .filter(|&i| self.children[i].is_empty())
            .map(|i| self.ids[i])
            .collect()
    }

    pub fn roots(&self) -> Vec<VertexId> {
        (0..self.ids.len())
            .filter(|&i| self.parents[i].is_empty())
            .map(|i| self.ids[i])
            .collect()
    }

    pub fn children(&self, v: VertexId) -> Result<Vec<VertexId>, DagError> {
        let i = self.require(v)?;
        Ok(self.children[i].iter().map(|&c| self.ids[c]).collect())
    }

    pub fn parents(&self, v: VertexId) -> Result<Vec<VertexId>, DagError> {
        let i = self.require(v)?;
        Ok(self.parents[i].iter().map(|&c| self.ids[c]).collect())
    }

    pub fn out_degree(&self, v: VertexId) -> Result<usize, DagError> {
        Ok(self.children[self.require(v)?].len())
    }

    pub fn in_degree(&self, v: VertexId) -> Result<usize, DagError> {
        Ok(self.parents[self.require(v)?].len())
    }

    /// `u ⪯ v`: `v` reaches `u` by a directed path (reflexive).
    pub fn leq(&self, u: VertexId, v: VertexId) -> Result<bool, DagError> {
        let (iu, iv) = (self.require(u)?, self.require(v)?);
        Ok(self.leq_ix(iu, iv))
    }

    /// The cluster of `v` as a set of label indices into [`Dag::ground`].
    pub fn cluster(&self, v: VertexId) -> Result<&BitSet, DagError> {
        Ok(&self.clusters[self.require(v)?])
    }

    /// Label indices for a set of leaf labels.
    pub fn label_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<BitSet, DagError> {
        let mut s = BitSet::new();
        for l in labels {
            let l = l.as_ref();
            let li = self
                .ground
                .binary_search_by(|g| g.as_str().cmp(l))
                .map_err(|_| DagError::UnknownLabel(l.into()))?;
            s.insert(li);
        }
        Ok(s)
    }

    /// Labels for a set of label indices.
    pub fn labels_of(&self, set: &BitSet) -> Vec<&str> {
        set.iter().map(|i| self.ground[i].as_str()).collect()
    }

    fn require(&self, v: VertexId) -> Result<usize, DagError> {
        self.index_of(v).ok_or(DagError::UnknownVertex(v))
    }

    // Dense-index interface for the algorithms in this crate.

    pub(crate) fn index_of(&self, v: VertexId) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }

    pub(crate) fn id(&self, i: usize) -> VertexId {
        self.ids[i]
    }

    pub(crate) fn ids_of(&self, set: &BitSet) -> Vec<VertexId> {
        set.iter().map(|i| self.ids[i]).collect()
    }

    pub(crate) fn children_ix(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub(crate) fn parents_ix(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    pub(crate) fn labels_ix(&self) -> &[Option<String>] {
        &self.labels
    }

    pub(crate) fn leaf_vertex_ix(&self, label: usize) -> usize {
        self.leaf_vertex[label]
    }

    pub(crate) fn is_leaf_ix(&self, i: usize) -> bool {
        self.leaf_of[i].is_some()
    }

    /// Vertices ordered so that every parent precedes its children.
    pub fn topological_order(&self) -> Vec<VertexId> {
        self.topo.iter().map(|&i| self.ids[i]).collect()
    }

    /// Vertices `u` with `u ⪯ v`, including `v`.
    pub fn descendants(&self, v: VertexId) -> Result<Vec<VertexId>, DagError> {
        let i = self.index_of(v).ok_or(DagError::UnknownVertex(v))?;
        Ok(self.ids_of(&self.descendants_ix(i)))
    }

    /// Vertices `u` with `v ⪯ u`, including `v`.
    pub fn ancestors(&self, v: VertexId) -> Result<Vec<VertexId>, DagError> {
        let i = self.index_of(v).ok_or(DagError::UnknownVertex(v))?;
        Ok(self.ids_of(&self.ancestors_ix(i)))
    }

    pub(crate) fn clusters_ix(&self) -> &[BitSet] {
        &self.clusters
    }

    pub(crate) fn leq_ix(&self, u: usize, v: usize) -> bool {
        match &self.reach {
            Reach::Closure { desc, .. } => desc[v].contains(u),
            Reach::Streaming => {
                if u == v {
                    return true;
                }
                let mut seen = BitSet::singleton(v);
                let mut stack = vec![v];
                while let Some(x) = stack.pop() {
                    for &c in &self.children[x] {
                        if c == u {
                            return true;
                        }
                        if seen.insert(c) {
                            stack.push(c);
                        }
                    }
                }
                false
            }
        }
    }

    /// Reflexive descendant set of `i`.
    pub(crate) fn descendants_ix(&self, i: usize) -> Cow<'_, BitSet> {
        match &self.reach {
            Reach::Closure { desc, .. } => Cow::Borrowed(&desc[i]),
            Reach::Streaming => Cow::Owned(self.sweep(i, &self.children)),
        }
    }

    /// Reflexive ancestor set of `i`.
    pub(crate) fn ancestors_ix(&self, i: usize) -> Cow<'_, BitSet> {
        match &self.reach {
            Reach::Closure { anc, .. } => Cow::Borrowed(&anc[i]),
            Reach::Streaming => Cow::Owned(self.sweep(i, &self.parents)),
        }
    }

    fn sweep(&self, start: usize, adj: &[Vec<usize>]) -> BitSet {
        let mut seen = BitSet::singleton(start);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen
    }
}

/// Kahn's algorithm; on failure returns one directed cycle.
fn topo_order(children: &[Vec<usize>], parents: &[Vec<usize>]) -> Result<Vec<usize>, Vec<usize>> {
    let n = children.len();
    let mut indeg: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut ready: Vec<usize> = (0..n).rev().filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop() {
        order.push(v);
        for &c in children[v].iter().rev() {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                ready.push(c);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every unsorted vertex keeps a parent that is unsorted too, so walking
    // parents from any of them must revisit a vertex.
    let start = (0..n).find(|&i| indeg[i] > 0).expect("unsorted vertex");
    let mut pos = vec![usize::MAX; n];
    let mut walk = Vec::new();
    let mut v = start;
    while pos[v] == usize::MAX {
        pos[v] = walk.len();
        walk.push(v);
        v = *parents[v]
            .iter()
            .find(|&&p| indeg[p] > 0)
            .expect("unsorted parent");
    }
    let mut cycle = walk.split_off(pos[v]);
    cycle.reverse();
    Err(cycle)
}

/// Cluster map `v ↦ C(v)` together with the cluster system it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterMap {
    ids: Vec<VertexId>,
    clusters: Vec<BitSet>,
}

impl ClusterMap {
    pub fn get(&self, v: VertexId) -> Option<&BitSet> {
        self.ids.binary_search(&v).ok().map(|i| &self.clusters[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &BitSet)> {
        self.ids.iter().copied().zip(&self.clusters)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// All clusters of `dag`: the per-vertex map and the de-duplicated system.
pub fn clusters(dag: &Dag) -> (ClusterMap, SetSystem) {
    let map = ClusterMap {
        ids: dag.ids.clone(),
        clusters: dag.clusters.clone(),
    };
    (map, cluster_system(dag))
}

/// The cluster system of `dag` on its leaf labels.
pub fn cluster_system(dag: &Dag) -> SetSystem {
    SetSystem::from_parts(dag.ground.clone(), dag.clusters.iter().cloned())
        .expect("a dag always has at least one leaf")
}

/// Whether edge `(a, b)` (given by index) is bypassed by a longer path.
pub(crate) fn is_shortcut_ix(dag: &Dag, a: usize, b: usize) -> bool {
    dag.children[a]
        .iter()
        .any(|&c| c != b && dag.leq_ix(b, c))
}

/// All shortcut edges in ascending order.
pub fn shortcuts(dag: &Dag) -> Vec<(VertexId, VertexId)> {
    let mut out = Vec::new();
    for a in 0..dag.vertex_count() {
        for &b in &dag.children[a] {
            if is_shortcut_ix(dag, a, b) {
                out.push((dag.ids[a], dag.ids[b]));
            }
        }
    }
    out
}

/// `G⁻`: the dag with every shortcut removed.
pub fn remove_shortcuts(dag: &Dag) -> Dag {
    let mut edges = Vec::with_capacity(dag.edge_count());
    for a in 0..dag.vertex_count() {
        for &b in &dag.children[a] {
            if !is_shortcut_ix(dag, a, b) {
                edges.push((a, b));
            }
        }
    }
    Dag::from_indexed(dag.ids.clone(), dag.labels.clone(), edges)
        .expect("removing shortcuts keeps every vertex's children nonempty")
}

/// Removes a single edge, which must be a shortcut.
pub fn remove_shortcut(dag: &Dag, edge: (VertexId, VertexId)) -> Option<Dag> {
    let a = dag.index_of(edge.0)?;
    let b = dag.index_of(edge.1)?;
    if dag.children[a].binary_search(&b).is_err() || !is_shortcut_ix(dag, a, b) {
        return None;
    }
    let mut edges = Vec::with_capacity(dag.edge_count());
    for x in 0..dag.vertex_count() {
        for &y in &dag.children[x] {
            if (x, y) != (a, b) {
                edges.push((x, y));
            }
        }
    }
    Dag::from_indexed(dag.ids.clone(), dag.labels.clone(), edges).ok()
}

/// Outcome of a structural check: on failure, a witness explaining why.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Witness {
    /// Two vertices whose comparability and cluster inclusion disagree.
    PccPair(VertexId, VertexId),
    /// Two distinct vertices with the same cluster.
    SameCluster(VertexId, VertexId),
    /// An edge of the dag that is not a covering pair of its clusters.
    NonCoverEdge(VertexId, VertexId),
    /// A covering pair of clusters with no corresponding edge.
    MissingCoverEdge(VertexId, VertexId),
    /// A vertex with out-degree 1 and in-degree at most 1.
    Degenerate(VertexId),
    Shortcut(VertexId, VertexId),
    /// Two vertices without an undirected path between them.
    Disconnected(VertexId, VertexId),
    /// More than one root.
    Roots(Vec<VertexId>),
    /// A vertex with in-degree above 1.
    Reticulation(VertexId),
    /// Vertices of a biconnected block that is neither an edge nor a gall.
    Block(Vec<VertexId>),
    /// Every cluster is a singleton.
    TrivialClusters,
}

/// Checks the path-cluster-comparability property. Returns the first
/// offending pair in id order.
pub fn pcc_violation(dag: &Dag) -> Option<(VertexId, VertexId)> {
    let n = dag.vertex_count();
    for u in 0..n {
        for v in (u + 1)..n {
            let comparable = dag.leq_ix(u, v) || dag.leq_ix(v, u);
            let (cu, cv) = (&dag.clusters[u], &dag.clusters[v]);
            let nested = cu.is_subset(cv) || cv.is_subset(cu);
            if comparable != nested {
                return Some((dag.ids[u], dag.ids[v]));
            }
        }
    }
    None
}

pub fn is_pcc(dag: &Dag) -> bool {
    pcc_violation(dag).is_none()
}

/// Checks that `v ↦ C(v)` is an isomorphism onto the Hasse diagram of the
/// cluster system.
pub fn regularity_violation(dag: &Dag) -> Option<Witness> {
    let n = dag.vertex_count();
    let mut by_cluster: Vec<usize> = (0..n).collect();
    by_cluster.sort_by(|&a, &b| dag.clusters[a].cmp(&dag.clusters[b]).then(a.cmp(&b)));
    for w in by_cluster.windows(2) {
        if dag.clusters[w[0]] == dag.clusters[w[1]] {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            return Some(Witness::SameCluster(dag.ids[a], dag.ids[b]));
        }
    }
    // The map is a bijection onto the clusters; compare edges with covers.
    let covers = |a: usize, b: usize| {
        let (ca, cb) = (&dag.clusters[a], &dag.clusters[b]);
        cb.is_proper_subset(ca)
            && !(0..n).any(|c| {
                let cc = &dag.clusters[c];
                cb.is_proper_subset(cc) && cc.is_proper_subset(ca)
            })
    };
    for a in 0..n {
        for &b in &dag.children[a] {
            if !covers(a, b) {
                return Some(Witness::NonCoverEdge(dag.ids[a], dag.ids[b]));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && covers(a, b) && dag.children[a].binary_search(&b).is_err() {
                return Some(Witness::MissingCoverEdge(dag.ids[a], dag.ids[b]));
            }
        }
    }
    None
}

pub fn is_regular(dag: &Dag) -> bool {
    regularity_violation(dag).is_none()
}

/// First vertex with out-degree 1 and in-degree at most 1.
pub fn phylogenetic_violation(dag: &Dag) -> Option<VertexId> {
    (0..dag.vertex_count())
        .find(|&i| dag.children[i].len() == 1 && dag.parents[i].len() <= 1)
        .map(|i| dag.ids[i])
}

pub fn is_phylogenetic(dag: &Dag) -> bool {
    phylogenetic_violation(dag).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn t3_is_valid() {
        let g = t3();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.ground(), &["a", "b", "c"]);
        assert_eq!(g.roots(), vec![VertexId(0)]);
    }

    #[test]
    fn two_cycle_rejected() {
        let raw = RawDag::new().vertex(1).vertex(2).edge(1, 2).edge(2, 1);
        match validate(&raw) {
            Err(DagError::Cyclic(c)) => {
                assert_eq!(c.len(), 2);
                assert!(c.contains(&VertexId(1)) && c.contains(&VertexId(2)));
            }
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn longer_cycle_witness_is_a_cycle() {
        let raw = RawDag::new()
            .vertex(0)
            .vertex(1)
            .vertex(2)
            .vertex(3)
            .leaf(4, "x")
            .edge(0, 1)
            .edge(1, 2)
            .edge(2, 3)
            .edge(3, 1)
            .edge(3, 4);
        let Err(DagError::Cyclic(c)) = validate(&raw) else {
            panic!("expected cycle")
        };
        assert_eq!(c.len(), 3);
        for i in 0..c.len() {
            let (a, b) = (c[i], c[(i + 1) % c.len()]);
            assert!(raw.edges.contains(&(a, b)), "{a:?}->{b:?} not an edge");
        }
    }

    #[test]
    fn label_errors() {
        let dup = RawDag::new().vertex(0).leaf(1, "a").leaf(2, "a").edge(0, 1).edge(0, 2);
        assert_eq!(validate(&dup), Err(DagError::DuplicateLabel("a".into())));
        let unl = RawDag::new().vertex(0).vertex(1).edge(0, 1);
        assert_eq!(validate(&unl), Err(DagError::UnlabeledLeaf(VertexId(1))));
        let lab = RawDag::new().leaf(0, "r").leaf(1, "a").edge(0, 1);
        assert_eq!(
            validate(&lab),
            Err(DagError::LabeledInternal(VertexId(0), "r".into()))
        );
        let sl = RawDag::new().leaf(0, "a").edge(0, 0);
        assert_eq!(validate(&sl), Err(DagError::SelfLoop(VertexId(0))));
        assert_eq!(validate(&RawDag::new()), Err(DagError::EmptyGraph));
        let unk = RawDag::new().leaf(0, "a").edge(0, 9);
        assert_eq!(validate(&unk), Err(DagError::UnknownVertex(VertexId(9))));
    }

    #[test]
    fn duplicate_edges_collapse() {
        let raw = RawDag::new().vertex(0).leaf(1, "a").edge(0, 1).edge(0, 1);
        assert_eq!(validate(&raw).unwrap().edge_count(), 1);
    }

    #[test]
    fn leq_examples() {
        let g = t3();
        let (a, c, u) = (g.leaf("a").unwrap(), g.leaf("c").unwrap(), VertexId(1));
        assert!(g.leq(a, u).unwrap());
        assert!(!g.leq(c, u).unwrap());
        assert!(g.leq(u, u).unwrap());
        let s = s1();
        assert!(s.leq(s.leaf("x").unwrap(), VertexId(0)).unwrap());
        assert_eq!(g.leq(VertexId(77), u), Err(DagError::UnknownVertex(VertexId(77))));
    }

    #[test]
    fn cluster_examples() {
        let (_, sys) = clusters(&t3());
        assert_eq!(
            sys.member_labels(),
            vec![vec!["a"], vec!["b"], vec!["c"], vec!["a", "b"], vec!["a", "b", "c"]]
        );
        let (_, sys) = clusters(&b3());
        assert_eq!(sys.len(), 7);
        let (_, sys) = clusters(&h4());
        assert_eq!(
            sys.member_labels(),
            vec![
                vec!["a"],
                vec!["b"],
                vec!["c"],
                vec!["d"],
                vec!["a", "b", "c"],
                vec!["b", "c", "d"],
                vec!["a", "b", "c", "d"],
            ]
        );
    }

    #[test]
    fn shortcut_examples() {
        let s = s1();
        assert_eq!(shortcuts(&s), vec![(VertexId(0), VertexId(2))]);
        let r = remove_shortcuts(&s);
        assert_eq!(r.edges(), vec![(VertexId(0), VertexId(1)), (VertexId(1), VertexId(2))]);
        assert_eq!(remove_shortcuts(&t3()), t3());
        assert_eq!(remove_shortcuts(&b3()), b3());
        assert!(remove_shortcut(&s, (VertexId(0), VertexId(1))).is_none());
        assert_eq!(remove_shortcut(&s, (VertexId(0), VertexId(2))).unwrap(), r);
    }

    #[test]
    fn pcc_examples() {
        assert!(is_pcc(&b3()));
        assert!(is_pcc(&h4()));
        // r->u, r->v; u->b,c,d; v->b,c
        let g = validate(
            &RawDag::new()
                .vertex(0)
                .vertex(1)
                .vertex(2)
                .leaf(3, "b")
                .leaf(4, "c")
                .leaf(5, "d")
                .edge(0, 1)
                .edge(0, 2)
                .edge(1, 3)
                .edge(1, 4)
                .edge(1, 5)
                .edge(2, 3)
                .edge(2, 4),
        )
        .unwrap();
        assert_eq!(pcc_violation(&g), Some((VertexId(1), VertexId(2))));
    }

    #[test]
    fn regular_examples() {
        assert!(is_regular(&b3()));
        assert!(is_regular(&h4()));
        assert!(is_regular(&t3()));
        // rho -> w -> u spliced into T3
        let g = validate(
            &RawDag::new()
                .vertex(0)
                .vertex(1)
                .leaf(2, "a")
                .leaf(3, "b")
                .leaf(4, "c")
                .vertex(5)
                .edge(0, 5)
                .edge(5, 1)
                .edge(0, 4)
                .edge(1, 2)
                .edge(1, 3),
        )
        .unwrap();
        assert_eq!(
            regularity_violation(&g),
            Some(Witness::SameCluster(VertexId(1), VertexId(5)))
        );
        // All three vertices of s1 share the cluster {x}.
        assert_eq!(
            regularity_violation(&s1()),
            Some(Witness::SameCluster(VertexId(0), VertexId(1)))
        );
    }

    #[test]
    fn phylogenetic_examples() {
        assert!(is_phylogenetic(&t3()));
        assert!(is_phylogenetic(&b3()));
        let chain = validate(&RawDag::new().vertex(0).vertex(1).leaf(2, "x").edge(0, 1).edge(1, 2))
            .unwrap();
        assert_eq!(phylogenetic_violation(&chain), Some(VertexId(0)));
        let chain_m: Vec<_> = (0..3)
            .map(VertexId)
            .filter(|&v| chain.out_degree(v).unwrap() == 1 && chain.in_degree(v).unwrap() <= 1)
            .collect();
        assert!(chain_m.contains(&VertexId(1)));
    }
}
