//! Seeded instance generators.

use std::collections::BTreeSet;

use lcadag_core::dag::cluster_system;
use lcadag_core::setsys::{self, classify_structure, SetSystem};
use lcadag_core::{dotted_hasse, BitSet, Dag, SizeIndex, VertexId};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    ArbitraryDag,
    PccDag,
    /// Dotted Hasse diagram of a generated pre-`I`-ary system, plus
    /// subdivisions and shortcuts.
    PropertyDag,
    TreeLikeSystem,
    GalledTreeLikeSystem,
    N3oSystem,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub seed: u64,
    /// Inclusive range of `|X|`.
    pub leaves: [usize; 2],
    /// Inclusive range of internal vertices (dag flavors) or extra
    /// non-singleton sets (system flavors).
    pub internal: [usize; 2],
    /// Edge probability for arbitrary dags; decoration rate otherwise.
    pub density: f64,
    pub flavor: Flavor,
    /// Size index used by the property flavor. Empty means `{1, 2}`.
    pub sizes: Vec<usize>,
    pub max_vertices: Option<usize>,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            leaves: [3, 6],
            internal: [1, 8],
            density: 0.35,
            flavor: Flavor::ArbitraryDag,
            sizes: Vec::new(),
            max_vertices: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),
    #[error("no instance found after {0} attempts")]
    Exhausted(usize),
}

const ATTEMPTS: usize = 200;

impl GenParams {
    fn check(&self) -> Result<(), GenError> {
        let bad = |m: &str| Err(GenError::InfeasibleParams(m.to_string()));
        if self.leaves[0] == 0 || self.leaves[0] > self.leaves[1] {
            return bad("leaf range must be nonempty and start at 1 or more");
        }
        if self.leaves[1] > 26 {
            return bad("at most 26 leaves");
        }
        if self.internal[0] > self.internal[1] {
            return bad("internal range is empty");
        }
        if !(0.0..=1.0).contains(&self.density) {
            return bad("density must lie in [0, 1]");
        }
        if self.sizes.contains(&0) {
            return bad("sizes must be positive");
        }
        if let Some(m) = self.max_vertices {
            if m < self.leaves[0] {
                return bad("max_vertices is below the leaf count");
            }
        }
        Ok(())
    }

    pub fn size_index(&self) -> SizeIndex {
        if self.sizes.is_empty() {
            SizeIndex::with_one([1, 2]).expect("1 present")
        } else {
            SizeIndex::new(self.sizes.iter().copied().chain([1])).expect("positive sizes")
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// `a`, `b`, ... for `i < 26`.
pub fn label(i: usize) -> String {
    char::from(b'a' + i as u8).to_string()
}

fn ground(n: usize) -> Vec<String> {
    (0..n).map(label).collect()
}

fn pick_range<R: Rng>(rng: &mut R, r: [usize; 2]) -> usize {
    rng.random_range(r[0]..=r[1])
}

pub fn gen_dag(params: &GenParams) -> Result<Dag, GenError> {
    params.check()?;
    gen_dag_with(&mut params.rng(), params)
}

pub fn gen_system(params: &GenParams) -> Result<SetSystem, GenError> {
    params.check()?;
    gen_system_with(&mut params.rng(), params)
}

pub(crate) fn gen_dag_with<R: Rng>(rng: &mut R, p: &GenParams) -> Result<Dag, GenError> {
    for _ in 0..ATTEMPTS {
        let g = match p.flavor {
            Flavor::ArbitraryDag => arbitrary(rng, p),
            Flavor::PccDag => {
                let sys = grounded_system(rng, p);
                let h = dotted_hasse(&sys).expect("grounded");
                Some(insert_above(rng, h, p))
            }
            _ => {
                let sys = gen_system_with(rng, p)?;
                let h = dotted_hasse(&sys).expect("grounded");
                Some(decorate(rng, h, p.density, p.max_vertices))
            }
        };
        if let Some(g) = g {
            if p.max_vertices.is_none_or(|m| g.vertex_count() <= m) {
                return Ok(g);
            }
        }
    }
    Err(GenError::Exhausted(ATTEMPTS))
}

pub(crate) fn gen_system_with<R: Rng>(rng: &mut R, p: &GenParams) -> Result<SetSystem, GenError> {
    let fits = |s: &SetSystem| p.max_vertices.is_none_or(|m| s.len() <= m);
    for _ in 0..ATTEMPTS {
        let sys = match p.flavor {
            Flavor::ArbitraryDag => match arbitrary(rng, p) {
                Some(g) => cluster_system(&g),
                None => continue,
            },
            Flavor::PccDag => grounded_system(rng, p),
            Flavor::PropertyDag => pre_ary_system(rng, p, &p.size_index()),
            Flavor::TreeLikeSystem => {
                let s = tree_like(rng, p, false);
                if !classify_structure(&s).tree_like {
                    return Err(GenError::InfeasibleParams("tree construction".into()));
                }
                s
            }
            Flavor::GalledTreeLikeSystem => {
                let s = tree_like(rng, p, true);
                if !classify_structure(&s).galled_tree_like {
                    continue;
                }
                s
            }
            Flavor::N3oSystem => n3o_system(rng, p),
        };
        if fits(&sys) {
            return Ok(sys);
        }
    }
    Err(GenError::Exhausted(ATTEMPTS))
}

/// Internal vertices come first in a topological order, leaves last; every
/// internal vertex gets at least one child and every leaf one parent. Ids
/// are a random permutation.
fn arbitrary<R: Rng>(rng: &mut R, p: &GenParams) -> Option<Dag> {
    let l = pick_range(rng, p.leaves);
    let mut k = pick_range(rng, p.internal);
    if let Some(m) = p.max_vertices {
        k = k.min(m.saturating_sub(l));
    }
    let n = k + l;
    let mut edges = BTreeSet::new();
    for i in 0..k {
        for j in (i + 1)..n {
            if rng.random_bool(p.density) {
                edges.insert((i, j));
            }
        }
        if !edges.iter().any(|e| e.0 == i) {
            edges.insert((i, rng.random_range((i + 1)..n)));
        }
    }
    if k > 0 {
        for j in k..n {
            if !edges.iter().any(|e| e.1 == j) {
                edges.insert((rng.random_range(0..k), j));
            }
        }
    }
    let mut perm: Vec<u64> = (0..n as u64).collect();
    perm.shuffle(rng);
    let vertices = (0..n).map(|i| (VertexId(perm[i]), (i >= k).then(|| label(i - k))));
    let edges = edges.into_iter().map(|(a, b)| (VertexId(perm[a]), VertexId(perm[b])));
    Dag::new(vertices, edges).ok()
}

/// Singletons, usually `X`, and a few random sets of size `2..|X|`.
fn grounded_system<R: Rng>(rng: &mut R, p: &GenParams) -> SetSystem {
    let l = pick_range(rng, p.leaves);
    let extra = pick_range(rng, p.internal);
    let mut members: Vec<BitSet> = (0..l).map(BitSet::singleton).collect();
    if rng.random_bool(0.85) {
        members.push(BitSet::full(l));
    }
    if l >= 3 {
        let elems: Vec<usize> = (0..l).collect();
        for _ in 0..extra {
            let s = rng.random_range(2..l);
            members.push(elems.choose_multiple(rng, s).copied().collect());
        }
    }
    SetSystem::from_parts(ground(l), members).expect("valid parts")
}

/// A grounded system repaired to pre-`I`-ary by adding each violating set.
fn pre_ary_system<R: Rng>(rng: &mut R, p: &GenParams, sizes: &SizeIndex) -> SetSystem {
    let mut sys = grounded_system(rng, p);
    while let Some(a) = setsys::pre_i_ary_violation(&sys, sizes).expect("small ground") {
        let mut m = sys.members().to_vec();
        m.push(a);
        sys = sys.with_members(m);
    }
    sys
}

#[derive(Debug)]
struct Node {
    set: BitSet,
    children: Vec<Node>,
}

fn hierarchy<R: Rng>(rng: &mut R, mut elems: Vec<usize>, wide: bool) -> Node {
    let set: BitSet = elems.iter().copied().collect();
    if elems.len() == 1 {
        return Node {
            set,
            children: Vec::new(),
        };
    }
    let lo = if wide && elems.len() >= 3 { 3 } else { 2 };
    let k = rng.random_range(lo..=elems.len().min(4));
    elems.shuffle(rng);
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, x) in elems.into_iter().enumerate() {
        let j = if i < k { i } else { rng.random_range(0..k) };
        parts[j].push(x);
    }
    Node {
        set,
        children: parts.into_iter().map(|p| hierarchy(rng, p, false)).collect(),
    }
}

fn collect_tree<R: Rng>(rng: &mut R, node: &Node, root: bool, out: &mut Vec<BitSet>) {
    let keep = root || node.children.is_empty() || rng.random_bool(0.75);
    if keep {
        out.push(node.set.clone());
    }
    for c in &node.children {
        collect_tree(rng, c, false, out);
    }
}

/// At a node with at least three children `h, A.., B..`, the prefix chains
/// `h ∪ a1, h ∪ a1 ∪ a2, ..` and likewise for `B` form a gall.
fn add_galls<R: Rng>(rng: &mut R, node: &Node, out: &mut Vec<BitSet>, placed: &mut bool) {
    let m = node.children.len();
    if m >= 3 && (!*placed || rng.random_bool(0.5)) {
        *placed = true;
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(rng);
        let a = rng.random_range(1..=(m - 2));
        let b = rng.random_range(1..=(m - 1 - a));
        let h = &node.children[order[0]].set;
        for side in [&order[1..=a], &order[(a + 1)..=(a + b)]] {
            let mut acc = h.clone();
            for &c in side {
                acc.union_with(&node.children[c].set);
                out.push(acc.clone());
            }
        }
    }
    for c in &node.children {
        add_galls(rng, c, out, placed);
    }
}

fn tree_like<R: Rng>(rng: &mut R, p: &GenParams, galls: bool) -> SetSystem {
    let l = pick_range(rng, p.leaves);
    let root = hierarchy(rng, (0..l).collect(), galls);
    let mut members = Vec::new();
    collect_tree(rng, &root, true, &mut members);
    if galls {
        add_galls(rng, &root, &mut members, &mut false);
    }
    SetSystem::from_parts(ground(l), members).expect("valid parts")
}

/// A galled-tree-like system with random sets added while no three members
/// pairwise overlap.
fn n3o_system<R: Rng>(rng: &mut R, p: &GenParams) -> SetSystem {
    let mut sys = tree_like(rng, p, true);
    let l = sys.ground().len();
    if l < 3 {
        return sys;
    }
    let elems: Vec<usize> = (0..l).collect();
    for _ in 0..pick_range(rng, p.internal) {
        let s = rng.random_range(2..l);
        let cand: BitSet = elems.choose_multiple(rng, s).copied().collect();
        let mut m = sys.members().to_vec();
        m.push(cand);
        let next = sys.with_members(m);
        if classify_structure(&next).n3o {
            sys = next;
        }
    }
    sys
}

/// Editable copy of a dag whose ids are its vertex positions.
struct Draft {
    labels: Vec<Option<String>>,
    edges: BTreeSet<(usize, usize)>,
}

impl Draft {
    fn of(g: &Dag) -> Self {
        let ix = |v: VertexId| g.vertices().binary_search(&v).expect("vertex of g");
        Draft {
            labels: g.vertices().iter().map(|&v| g.label(v).map(String::from)).collect(),
            edges: g.edges().into_iter().map(|(a, b)| (ix(a), ix(b))).collect(),
        }
    }

    fn build(&self) -> Dag {
        let vertices = self
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| (VertexId(i as u64), l.clone()));
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (VertexId(a as u64), VertexId(b as u64)));
        Dag::new(vertices, edges).expect("edits keep a valid dag")
    }

    /// New vertex `s` takes over the in-edges of `w` and points to `w`.
    fn insert_above(&mut self, w: usize) {
        let s = self.labels.len();
        self.labels.push(None);
        let parents: Vec<usize> = self.edges.iter().filter(|e| e.1 == w).map(|e| e.0).collect();
        for p in parents {
            self.edges.remove(&(p, w));
            self.edges.insert((p, s));
        }
        self.edges.insert((s, w));
    }

    /// An edge `u → w` to a proper, non-child descendant `w`.
    fn add_shortcut<R: Rng>(&mut self, rng: &mut R) -> bool {
        let g = self.build();
        let mut cands = Vec::new();
        for (u, &v) in g.vertices().iter().enumerate() {
            for w in g.descendants(v).expect("vertex of g") {
                let w = w.0 as usize;
                if w != u && !self.edges.contains(&(u, w)) {
                    cands.push((u, w));
                }
            }
        }
        match cands.choose(rng) {
            Some(&e) => {
                self.edges.insert(e);
                true
            }
            None => false,
        }
    }

    fn len(&self) -> usize {
        self.labels.len()
    }
}

/// Random subdivisions and at most two shortcuts; neither changes clusters.
pub(crate) fn decorate<R: Rng>(rng: &mut R, g: Dag, rate: f64, max: Option<usize>) -> Dag {
    let mut d = Draft::of(&g);
    let n = d.len();
    for w in 0..n {
        if max.is_some_and(|m| d.len() >= m) {
            break;
        }
        if rng.random_bool(rate / 2.0) {
            d.insert_above(w);
        }
    }
    for _ in 0..rng.random_range(0..=2) {
        d.add_shortcut(rng);
    }
    d.build()
}

/// Like [`decorate`], but subdivisions sit above random vertices so that
/// some chains get longer than one step.
fn insert_above<R: Rng>(rng: &mut R, g: Dag, p: &GenParams) -> Dag {
    let mut d = Draft::of(&g);
    let extra = rng.random_range(0..=3);
    for _ in 0..extra {
        if p.max_vertices.is_some_and(|m| d.len() >= m) {
            break;
        }
        let w = rng.random_range(0..d.len());
        d.insert_above(w);
    }
    if rng.random_bool(p.density.max(0.2)) {
        d.add_shortcut(rng);
    }
    d.build()
}

/// Adds up to `count` shortcuts.
pub(crate) fn add_shortcuts<R: Rng>(rng: &mut R, g: &Dag, count: usize) -> Dag {
    let mut d = Draft::of(g);
    let ids: Vec<VertexId> = g.vertices().to_vec();
    for _ in 0..count {
        d.add_shortcut(rng);
    }
    // Map positions back to the original ids.
    let built = d.build();
    let vertices = built
        .vertices()
        .iter()
        .map(|&v| (ids[v.0 as usize], built.label(v).map(String::from)));
    let edges = built
        .edges()
        .into_iter()
        .map(|(a, b)| (ids[a.0 as usize], ids[b.0 as usize]));
    Dag::new(vertices, edges).expect("same shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use lcadag_core::lca;
    use lcadag_core::setsys::validate_system;

    fn params(flavor: Flavor, seed: u64) -> GenParams {
        GenParams {
            seed,
            flavor,
            ..GenParams::default()
        }
    }

    #[test]
    fn deterministic() {
        let p = GenParams {
            leaves: [3, 5],
            ..params(Flavor::ArbitraryDag, 1)
        };
        assert_eq!(gen_dag(&p).unwrap(), gen_dag(&p).unwrap());
        assert_ne!(
            gen_dag(&p).unwrap(),
            gen_dag(&GenParams { seed: 2, ..p.clone() }).unwrap()
        );
    }

    #[test]
    fn flavors_hold_their_property() {
        for seed in 0..40 {
            let g = gen_dag(&params(Flavor::PropertyDag, seed)).unwrap();
            assert!(lca::has_i_lca_property(&g, &SizeIndex::with_one([1, 2]).unwrap()).unwrap());
            let g = gen_dag(&params(Flavor::PccDag, seed)).unwrap();
            assert!(lcadag_core::dag::is_pcc(&g));
            let g = gen_dag(&params(Flavor::TreeLikeSystem, seed)).unwrap();
            assert!(classify_structure(&cluster_system(&g)).tree_like);
            let s = gen_system(&params(Flavor::GalledTreeLikeSystem, seed)).unwrap();
            let r = classify_structure(&s);
            assert!(r.closed && r.prop_l && r.n3o && r.galled_tree_like);
            assert!(classify_structure(&gen_system(&params(Flavor::N3oSystem, seed)).unwrap()).n3o);
            for f in [Flavor::ArbitraryDag, Flavor::PccDag, Flavor::PropertyDag, Flavor::TreeLikeSystem] {
                assert!(validate_system(&gen_system(&params(f, seed)).unwrap()).grounded);
            }
        }
    }

    #[test]
    fn galls_appear() {
        let galled = (0..40)
            .filter(|&s| {
                let s = gen_system(&params(Flavor::GalledTreeLikeSystem, s)).unwrap();
                !classify_structure(&s).tree_like
            })
            .count();
        assert!(galled > 20, "{galled}");
    }

    #[test]
    fn vertex_ceiling() {
        for seed in 0..30 {
            let p = GenParams {
                max_vertices: Some(10),
                ..params(Flavor::PropertyDag, seed)
            };
            assert!(gen_dag(&p).unwrap().vertex_count() <= 10);
        }
    }

    #[test]
    fn infeasible() {
        let p = GenParams {
            leaves: [0, 3],
            ..GenParams::default()
        };
        assert!(matches!(gen_dag(&p), Err(GenError::InfeasibleParams(_))));
    }
}
