//! The verified laws: instance generation and checks.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::str::FromStr;

use lcadag_core::dag::{self, cluster_system};
use lcadag_core::hasse::{self, build_hasse, Demand};
use lcadag_core::setsys::{self, classify_structure, validate_system, SetSystem};
use lcadag_core::transform::{self, ominus, ominus_sequential};
use lcadag_core::{dotted_hasse, lca, recognize_shape, BitSet, Dag, SizeIndex, VertexId};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::gen::{self, Flavor, GenError, GenParams};

macro_rules! laws {
    ($($(#[$doc:meta])* $v:ident = $name:literal,)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum LawId {
            $($(#[$doc])* #[serde(rename = $name)] $v,)*
        }

        impl LawId {
            pub const ALL: &'static [LawId] = &[$(LawId::$v,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(LawId::$v => $name,)*
                }
            }
        }
    };
}

laws! {
    /// Shortcut removal is idempotent and keeps order and clusters.
    ShortcutRemoval = "shortcut_removal",
    /// Hasse diagrams of grounded systems are shortcut-free, PCC, regular
    /// and phylogenetic, with the system as cluster set.
    HasseStructure = "hasse_structure",
    /// Relevant dags become regular once shortcuts are gone.
    RelevantRegular = "relevant_regular",
    /// Removing non-lca vertices keeps S0 to S4; removing all of them
    /// gives a relevant dag.
    OminusPreservation = "ominus_preservation",
    /// Dropping a shortcut from a relevant dag keeps relevance and S0 to S4.
    ShortcutRelevance = "shortcut_relevance",
    /// The lca-property makes the cluster set pre-`I`-ary.
    PropertyPreAry = "property_pre_ary",
    /// With `|I| > 1`, the lca-property forces connectivity.
    PropertyConnected = "property_connected",
    /// Removing non-lca vertices keeps the lca-property.
    OminusProperty = "ominus_property",
    /// On PCC dags the lca-property and pre-`I`-arity coincide.
    PccEquivalence = "pcc_equivalence",
    /// Relevant dags with the lca-property have `I`-ary clusters.
    RelevantAry = "relevant_ary",
    /// Hasse diagrams realize exactly the pre-`I`-ary (resp. `I`-ary)
    /// systems with the lca-property (and relevance).
    HasseRealization = "hasse_realization",
    /// Simplifying a dag with the lca-property yields the Hasse diagram of
    /// its `I`-ary core.
    HasseIsomorphism = "hasse_isomorphism",
    /// The simplification's removal set is the only admissible one.
    UniqueRemoval = "unique_removal",
    /// Tree-like and galled-tree-like systems have tree and galled-tree
    /// Hasse diagrams.
    HierarchyShapes = "hierarchy_shapes",
    /// In N3O dags a vertex is a `{k}`-lca vertex for some `k ≥ 2` iff it
    /// is one for every `k` up to its cluster size.
    N3oAllSizes = "n3o_all_sizes",
    /// N3O systems are realized by their Hasse diagram with every size.
    N3oWitness = "n3o_witness",
    /// Non-trivial N3O dags with `1 < k ≤ κ` in `I` have all clusters in
    /// the `I`-ary core.
    N3oCore = "n3o_core",
    /// Simplifying a tree-like instance gives a phylogenetic tree with the
    /// same clusters.
    TreeReduction = "tree_reduction",
    /// Simplifying a galled-tree-like instance gives a galled tree with the
    /// same clusters.
    GalledReduction = "galled_reduction",
    /// `⊖` does not depend on the removal order.
    OminusOrder = "ominus_order",
}

impl Display for LawId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LawId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        LawId::ALL
            .iter()
            .copied()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown law `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Instance {
    Dag(Dag),
    System(SetSystem),
}

impl Instance {
    /// Vertex or member count; the shrinking measure.
    pub fn size(&self) -> usize {
        match self {
            Instance::Dag(g) => g.vertex_count() + g.edge_count(),
            Instance::System(s) => s.len() + s.ground().len(),
        }
    }
}

/// One generated input: the instance, its size index and a seed for any
/// further random choices the check makes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case {
    pub instance: Instance,
    pub sizes: SizeIndex,
    pub aux: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    /// The law's hypothesis does not hold for this instance.
    Vacuous,
    Fail(String),
}

fn err<E: Display>(e: E) -> String {
    e.to_string()
}

type Check = Result<Outcome, String>;

macro_rules! ensure {
    ($c:expr, $($msg:tt)*) => {
        if !$c {
            return Ok(Outcome::Fail(format!($($msg)*)));
        }
    };
}

/// `{1} ∪ K` for a random nonempty `K ⊆ {2, .., min(|X|, 4)}`; `{1, 2}`
/// half of the time.
fn random_sizes<R: Rng>(rng: &mut R, n: usize) -> SizeIndex {
    let top = n.clamp(2, 4);
    if rng.random_bool(0.5) {
        return SizeIndex::with_one([1, 2]).expect("1 present");
    }
    let mut s: Vec<usize> = (2..=top).filter(|_| rng.random_bool(0.5)).collect();
    if s.is_empty() {
        s.push(rng.random_range(2..=top));
    }
    SizeIndex::with_one(s.into_iter().chain([1])).expect("1 present")
}

/// `{1, k}` with `1 < k ≤ κ`, sometimes with one more size.
fn kappa_sizes<R: Rng>(rng: &mut R, kappa: usize, n: usize) -> SizeIndex {
    let k = rng.random_range(2..=kappa);
    let mut s = vec![1, k];
    if n > 2 && rng.random_bool(0.3) {
        s.push(rng.random_range(2..=n));
    }
    SizeIndex::with_one(s).expect("1 present")
}

fn with_flavor(base: &GenParams, flavor: Flavor) -> GenParams {
    GenParams {
        flavor,
        ..base.clone()
    }
}

fn kappa_of(sys: &SetSystem) -> Option<usize> {
    sys.members().iter().map(BitSet::len).filter(|&k| k > 1).min()
}

impl LawId {
    /// Generates the instance for one trial.
    pub fn generate<R: Rng>(self, rng: &mut R, base: &GenParams) -> Result<Case, GenError> {
        use LawId::*;
        let aux = rng.random();
        let dag_case = |instance: Dag, sizes| Case {
            instance: Instance::Dag(instance),
            sizes,
            aux,
        };
        match self {
            ShortcutRelevance => {
                // Retry until the reduced dag has room for a shortcut.
                let p = with_flavor(base, Flavor::ArbitraryDag);
                for _ in 0..100 {
                    let g = gen::gen_dag_with(rng, &p)?;
                    let sizes = random_sizes(rng, g.ground().len());
                    let reduced = lca::i_lca_vertices(&g, &sizes)
                        .ok()
                        .and_then(|c| ominus(&g, &c.non_lca).ok());
                    if reduced.is_some_and(|h| has_deep_path(&h)) {
                        return Ok(dag_case(g, sizes));
                    }
                }
                Err(GenError::Exhausted(100))
            }
            ShortcutRemoval | RelevantRegular | OminusPreservation | OminusOrder => {
                let g = gen::gen_dag_with(rng, &with_flavor(base, Flavor::ArbitraryDag))?;
                let sizes = random_sizes(rng, g.ground().len());
                Ok(dag_case(g, sizes))
            }
            PccEquivalence => {
                let g = gen::gen_dag_with(rng, &with_flavor(base, Flavor::PccDag))?;
                let sizes = random_sizes(rng, g.ground().len());
                Ok(dag_case(g, sizes))
            }
            PropertyPreAry | PropertyConnected | OminusProperty | RelevantAry
            | HasseIsomorphism | UniqueRemoval => {
                let mut p = with_flavor(base, Flavor::PropertyDag);
                if self == UniqueRemoval {
                    p.max_vertices = Some(p.max_vertices.map_or(10, |m| m.min(10)));
                    p.leaves[1] = p.leaves[1].min(5);
                    p.leaves[0] = p.leaves[0].min(p.leaves[1]);
                    p.internal = [p.internal[0].min(2), p.internal[1].min(3)];
                }
                let sizes = random_sizes(rng, p.leaves[1]);
                p.sizes = sizes.sizes().to_vec();
                let g = gen::gen_dag_with(rng, &p)?;
                Ok(dag_case(g, sizes))
            }
            HasseStructure | HasseRealization => {
                let flavor = if self == HasseRealization {
                    Flavor::PccDag
                } else {
                    *[
                        Flavor::ArbitraryDag,
                        Flavor::PccDag,
                        Flavor::PropertyDag,
                        Flavor::TreeLikeSystem,
                        Flavor::GalledTreeLikeSystem,
                        Flavor::N3oSystem,
                    ]
                    .choose(rng)
                    .expect("nonempty")
                };
                let sys = gen::gen_system_with(rng, &with_flavor(base, flavor))?;
                let sizes = random_sizes(rng, sys.ground().len());
                Ok(Case {
                    instance: Instance::System(sys),
                    sizes,
                    aux,
                })
            }
            HierarchyShapes => {
                let flavor = if rng.random_bool(0.5) {
                    Flavor::TreeLikeSystem
                } else {
                    Flavor::GalledTreeLikeSystem
                };
                let sys = gen::gen_system_with(rng, &with_flavor(base, flavor))?;
                Ok(Case {
                    instance: Instance::System(sys),
                    sizes: SizeIndex::with_one([1, 2]).expect("1 present"),
                    aux,
                })
            }
            N3oWitness => {
                let sys = gen::gen_system_with(rng, &with_flavor(base, Flavor::N3oSystem))?;
                let sizes = SizeIndex::all(sys.ground().len());
                Ok(Case {
                    instance: Instance::System(sys),
                    sizes,
                    aux,
                })
            }
            N3oAllSizes | N3oCore => {
                let g = gen::gen_dag_with(rng, &with_flavor(base, Flavor::N3oSystem))?;
                let n = g.ground().len();
                let sizes = match kappa_of(&cluster_system(&g)) {
                    Some(kappa) => kappa_sizes(rng, kappa, n),
                    None => random_sizes(rng, n),
                };
                Ok(dag_case(g, sizes))
            }
            TreeReduction | GalledReduction => {
                let flavor = if self == TreeReduction {
                    Flavor::TreeLikeSystem
                } else {
                    Flavor::GalledTreeLikeSystem
                };
                let p = with_flavor(base, flavor);
                for _ in 0..100 {
                    let g = gen::gen_dag_with(rng, &p)?;
                    let Some(kappa) = kappa_of(&cluster_system(&g)) else {
                        continue;
                    };
                    let sizes = kappa_sizes(rng, kappa, g.ground().len());
                    if lca::has_i_lca_property(&g, &sizes).unwrap_or(false) {
                        return Ok(dag_case(g, sizes));
                    }
                }
                Err(GenError::Exhausted(100))
            }
        }
    }

    /// Evaluates the law on one case.
    pub fn check(self, case: &Case) -> Outcome {
        let mut rng = ChaCha8Rng::seed_from_u64(case.aux);
        let s = &case.sizes;
        let r = match &case.instance {
            Instance::Dag(g) => self.check_dag(g, s, &mut rng),
            Instance::System(sys) => self.check_system(sys, s),
        };
        r.unwrap_or_else(|e| Outcome::Fail(format!("error: {e}")))
    }

    fn check_dag(self, g: &Dag, s: &SizeIndex, rng: &mut ChaCha8Rng) -> Check {
        use LawId::*;
        match self {
            ShortcutRemoval => shortcut_removal(g, rng),
            RelevantRegular => relevant_regular(g, s, rng),
            OminusPreservation => ominus_preservation(g, s, rng),
            ShortcutRelevance => shortcut_relevance(g, s, rng),
            PropertyPreAry => property_pre_ary(g, s),
            PropertyConnected => property_connected(g, s),
            OminusProperty => ominus_property(g, s),
            PccEquivalence => pcc_equivalence(g, s),
            RelevantAry => relevant_ary(g, s, rng),
            HasseIsomorphism => hasse_isomorphism(g, s),
            UniqueRemoval => unique_removal(g, s),
            N3oAllSizes => n3o_all_sizes(g),
            N3oCore => n3o_core(g, s),
            TreeReduction => reduction(g, s, false),
            GalledReduction => reduction(g, s, true),
            OminusOrder => ominus_order(g, rng),
            HasseStructure | HasseRealization | HierarchyShapes | N3oWitness => {
                Err(format!("{self} takes a set system"))
            }
        }
    }

    fn check_system(self, sys: &SetSystem, s: &SizeIndex) -> Check {
        use LawId::*;
        match self {
            HasseStructure => hasse_structure(sys),
            HasseRealization => hasse_realization(sys, s),
            HierarchyShapes => hierarchy_shapes(sys),
            N3oWitness => n3o_witness(sys),
            _ => Err(format!("{self} takes a dag")),
        }
    }
}

/// Some vertex has a proper descendant that is not a child.
fn has_deep_path(g: &Dag) -> bool {
    g.vertices().iter().any(|&v| {
        let children = g.children(v).unwrap_or_default();
        g.descendants(v)
            .unwrap_or_default()
            .iter()
            .any(|&w| w != v && !children.contains(&w))
    })
}

fn same_order(g: &Dag, h: &Dag) -> Result<bool, String> {
    for &u in h.vertices() {
        if g.cluster(u).map_err(err)? != h.cluster(u).map_err(err)? {
            return Ok(false);
        }
        for &v in h.vertices() {
            if g.leq(u, v).map_err(err)? != h.leq(u, v).map_err(err)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn shortcut_removal(g: &Dag, rng: &mut ChaCha8Rng) -> Check {
    let count = rng.random_range(0..=3);
    let g = gen::add_shortcuts(rng, g, count);
    let h = dag::remove_shortcuts(&g);
    ensure!(dag::shortcuts(&h).is_empty(), "shortcuts remain");
    ensure!(dag::remove_shortcuts(&h) == h, "not idempotent");
    ensure!(h.vertices() == g.vertices(), "vertex set changed");
    ensure!(same_order(&g, &h)?, "order or clusters changed");
    Ok(Outcome::Pass)
}

/// `G ⊖ W` for the non-lca vertices `W`, with a few shortcuts added.
fn relevant_with_shortcuts(g: &Dag, s: &SizeIndex, rng: &mut ChaCha8Rng) -> Result<Dag, String> {
    let non = lca::i_lca_vertices(g, s).map_err(err)?.non_lca;
    let h = ominus(g, &non).map_err(err)?;
    let count = rng.random_range(1..=3);
    Ok(gen::add_shortcuts(rng, &h, count))
}

fn relevant_regular(g: &Dag, s: &SizeIndex, rng: &mut ChaCha8Rng) -> Check {
    let h = relevant_with_shortcuts(g, s, rng)?;
    if !lca::is_i_lca_relevant(&h, s).map_err(err)? {
        return Ok(Outcome::Vacuous);
    }
    ensure!(dag::is_regular(&dag::remove_shortcuts(&h)), "shortcut-free form is not regular");
    Ok(Outcome::Pass)
}

fn ominus_preservation(g: &Dag, s: &SizeIndex, rng: &mut ChaCha8Rng) -> Check {
    let non = lca::i_lca_vertices(g, s).map_err(err)?.non_lca;
    let w: Vec<VertexId> = non.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
    let h = ominus(g, &w).map_err(err)?;
    let p = transform::verify_preservation(g, &h, s).map_err(err)?;
    ensure!(p.all(), "removing {w:?}: {:?}", p.failures);
    let full = ominus(g, &non).map_err(err)?;
    let p = transform::verify_preservation(g, &full, s).map_err(err)?;
    ensure!(p.all(), "removing all of {non:?}: {:?}", p.failures);
    ensure!(lca::is_i_lca_relevant(&full, s).map_err(err)?, "result of removing {non:?} is not relevant");
    Ok(Outcome::Pass)
}

fn shortcut_relevance(g: &Dag, s: &SizeIndex, rng: &mut ChaCha8Rng) -> Check {
    let h = relevant_with_shortcuts(g, s, rng)?;
    let cuts = dag::shortcuts(&h);
    if cuts.is_empty() || !lca::is_i_lca_relevant(&h, s).map_err(err)? {
        return Ok(Outcome::Vacuous);
    }
    for e in cuts {
        let k = dag::remove_shortcut(&h, e).ok_or("shortcut not removable")?;
        ensure!(lca::is_i_lca_relevant(&k, s).map_err(err)?, "dropping {e:?} loses relevance");
        let p = transform::verify_preservation(&h, &k, s).map_err(err)?;
        ensure!(p.all(), "dropping {e:?}: {:?}", p.failures);
    }
    Ok(Outcome::Pass)
}

fn property_pre_ary(g: &Dag, s: &SizeIndex) -> Check {
    if !lca::has_i_lca_property(g, s).map_err(err)? {
        return Ok(Outcome::Vacuous);
    }
    let v = setsys::pre_i_ary_violation(&cluster_system(g), s).map_err(err)?;
    ensure!(v.is_none(), "clusters are not pre-I-ary at {v:?}");
    Ok(Outcome::Pass)
}

fn property_connected(g: &Dag, s: &SizeIndex) -> Check {
    if s.sizes().len() < 2 || !lca::has_i_lca_property(g, s).map_err(err)? {
        return Ok(Outcome::Vacuous);
    }
    ensure!(lcadag_core::shape::is_connected(g), "not connected");
    Ok(Outcome::Pass)
}

fn ominus_property(g: &Dag, s: &SizeIndex) -> Check {
    if !lca::has_i_lca_property(g, s).map_err(err)? {
        return Ok(Outcome::Vacuous);
    }
    let non = lca::i_lca_vertices(g, s).map_err(err)?.non_lca;
    let h = ominus(g, &non).map_err(err)?;
    let v = lca::lca_property_violation(&h, s).map_err(err)?;
    ensure!(v.is_none(), "lca of {v:?} is not unique after removing {non:?}");
    Ok(Outcome::Pass)
}

fn pcc_equivalence(g: &Dag, s: &SizeIndex) -> Check {
    if !dag::is_pcc(g) {
        return Ok(Outcome::Vacuous);
    }
    let prop = lca::has_i_lca_property(g, s).map_err(err)?;
    let ary = setsys::is_pre_i_ary(&cluster_system(g), s).map_err(err)?;
    ensure!(prop == ary, "lca-property {prop}, pre-I-ary {ary}");
    Ok(Outcome::Pass)
}

fn relevant_ary(g: &Dag, s: &SizeIndex, rng: &mut ChaCha8Rng) -> Check {
    let h = relevant_with_shortcuts(g, s, rng)?;
    if !lca::is_i_lca_relevant(&h, s).map_err(err)? || !lca::has_i_lca_property(&h, s).map_err(err)? {
        return Ok(Outcome::Vacuous);
    }
    ensure!(setsys::is_i_ary(&cluster_system(&h), s).map_err(err)?, "clusters are not I-ary");
    Ok(Outcome::Pass)
}

fn hasse_isomorphism(g: &Dag, s: &SizeIndex) -> Check {
    if !lca::has_i_lca_property(g, s).map_err(err)? {
        return Ok(Outcome::Vacuous);
    }
    let r = transform::simplify(g, s).map_err(err)?;
    ensure!(r.uniqueness_certified, "not certified");
    let ic = setsys::ic_members(&cluster_system(g), s).map_err(err)?;
    ensure!(cluster_system(&r.reduced) == ic, "clusters differ from the I-ary core");
    ensure!(setsys::is_i_ary(&ic, s).map_err(err)?, "core is not I-ary");
    let sf = &r.reduced_shortcut_free;
    ensure!(dag::is_regular(sf), "shortcut-free result is not regular");
    // Compare edges as cluster pairs against the cover relation.
    let hd = build_hasse(&ic).map_err(err)?;
    let mut want: Vec<(BitSet, BitSet)> = hd
        .dag()
        .edges()
        .into_iter()
        .map(|(a, b)| (hd.member(a).cloned().unwrap_or_default(), hd.member(b).cloned().unwrap_or_default()))
        .collect();
    let mut got: Vec<(BitSet, BitSet)> = sf
        .edges()
        .into_iter()
        .map(|(a, b)| (sf.cluster(a).cloned().unwrap_or_default(), sf.cluster(b).cloned().unwrap_or_default()))
        .collect();
    want.sort();
    got.sort();
    ensure!(want == got && sf.vertex_count() == ic.len(), "not isomorphic to the Hasse diagram");
    Ok(Outcome::Pass)
}

/// Sweeps every set of internal vertices. Removing a leaf changes the leaf
/// set, so such sets never satisfy S1 and need no test.
fn unique_removal(g: &Dag, s: &SizeIndex) -> Check {
    if g.vertex_count() > 12 || !lca::has_i_lca_property(g, s).map_err(err)? {
        return Ok(Outcome::Vacuous);
    }
    let w = lca::i_lca_vertices(g, s).map_err(err)?.non_lca;
    let internal: Vec<VertexId> = g.vertices().iter().copied().filter(|&v| g.label(v).is_none()).collect();
    let mut admissible = Vec::new();
    for mask in 0u32..(1 << internal.len()) {
        let cand: Vec<VertexId> = (0..internal.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| internal[i])
            .collect();
        if transform::is_admissible_removal(g, &cand, s).map_err(err)? {
            admissible.push(cand);
        }
    }
    ensure!(admissible == [w.clone()], "admissible sets {admissible:?}, expected only {w:?}");
    Ok(Outcome::Pass)
}

fn n3o_all_sizes(g: &Dag) -> Check {
    if !classify_structure(&cluster_system(g)).n3o {
        return Ok(Outcome::Vacuous);
    }
    let n = g.ground().len();
    let per_size: Vec<BTreeSet<VertexId>> = (2..=n.max(2))
        .map(|k| lca::k_lca_vertices(g, k).map(|v| v.into_iter().collect()))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    for &v in g.vertices() {
        let c = g.cluster(v).map_err(err)?.len();
        // A non-leaf with a one-element cluster satisfies the right side
        // vacuously and the left side never.
        if g.label(v).is_some() || c < 2 {
            continue;
        }
        let some = (2..=n).any(|k| per_size[k - 2].contains(&v));
        let every = (2..=c).all(|k| per_size[k - 2].contains(&v));
        ensure!(some == every, "vertex {v:?}: some size {some}, every size {every}");
    }
    Ok(Outcome::Pass)
}

fn n3o_core(g: &Dag, s: &SizeIndex) -> Check {
    let sys = cluster_system(g);
    let Some(kappa) = kappa_of(&sys) else {
        return Ok(Outcome::Vacuous);
    };
    if !classify_structure(&sys).n3o || !s.sizes().iter().any(|&k| k > 1 && k <= kappa) {
        return Ok(Outcome::Vacuous);
    }
    let ic = setsys::ic_members(&sys, s).map_err(err)?;
    ensure!(ic == sys, "core misses {:?}", sys.difference(&ic));
    Ok(Outcome::Pass)
}

fn reduction(g: &Dag, s: &SizeIndex, galled: bool) -> Check {
    let sys = cluster_system(g);
    let r = classify_structure(&sys);
    let shaped = if galled { r.galled_tree_like } else { r.tree_like };
    let Some(kappa) = r.kappa else {
        return Ok(Outcome::Vacuous);
    };
    if !shaped || !s.sizes().iter().any(|&k| k > 1 && k <= kappa) {
        return Ok(Outcome::Vacuous);
    }
    if !lca::has_i_lca_property(g, s).map_err(err)? {
        return Ok(Outcome::Vacuous);
    }
    let out = transform::simplify(g, s).map_err(err)?;
    let sf = &out.reduced_shortcut_free;
    let shape = recognize_shape(sf);
    if galled {
        ensure!(shape.galled_tree, "not a galled tree: {:?}", shape.witnesses);
    } else {
        ensure!(shape.tree && shape.phylogenetic, "not a phylogenetic tree: {:?}", shape.witnesses);
    }
    ensure!(cluster_system(sf) == sys, "clusters changed: lost {:?}", sys.difference(&cluster_system(sf)));
    Ok(Outcome::Pass)
}

/// `⊖` straight from its one-vertex definition on edge sets.
fn raw_sequential(g: &Dag, order: &[VertexId]) -> (BTreeSet<VertexId>, BTreeSet<(VertexId, VertexId)>) {
    let mut vs: BTreeSet<VertexId> = g.vertices().iter().copied().collect();
    let mut es: BTreeSet<(VertexId, VertexId)> = g.edges().into_iter().collect();
    for &v in order {
        let parents: Vec<VertexId> = es.iter().filter(|e| e.1 == v).map(|e| e.0).collect();
        let children: Vec<VertexId> = es.iter().filter(|e| e.0 == v).map(|e| e.1).collect();
        es.retain(|e| e.0 != v && e.1 != v);
        for &p in &parents {
            for &c in &children {
                es.insert((p, c));
            }
        }
        vs.remove(&v);
    }
    (vs, es)
}

fn ominus_order(g: &Dag, rng: &mut ChaCha8Rng) -> Check {
    let mut w: Vec<VertexId> = g.vertices().iter().copied().filter(|_| rng.random_bool(0.35)).collect();
    if w.len() == g.vertex_count() {
        w.pop();
    }
    let mut p1 = w.clone();
    p1.shuffle(rng);
    let mut p2 = w.clone();
    p2.shuffle(rng);
    let (v1, e1) = raw_sequential(g, &p1);
    let (v2, e2) = raw_sequential(g, &p2);
    ensure!(v1 == v2 && e1 == e2, "orders {p1:?} and {p2:?} disagree");
    match ominus(g, &w) {
        Ok(h) => {
            let e: BTreeSet<(VertexId, VertexId)> = h.edges().into_iter().collect();
            ensure!(e == e1, "path form differs from the sequential form for {w:?}");
            ensure!(h.vertices().iter().copied().eq(v1.iter().copied()), "vertex sets differ");
            if w.iter().all(|&v| g.label(v).is_none()) {
                ensure!(ominus_sequential(g, &p1).map_err(err)? == h, "library sequential form differs");
            }
        }
        Err(_) => {
            // Only invalid results may be rejected: some unlabeled vertex
            // has lost all its children.
            let unlabeled_sink = v1
                .iter()
                .any(|&v| g.label(v).is_none() && !e1.iter().any(|e| e.0 == v));
            ensure!(unlabeled_sink, "path form rejected a valid result for {w:?}");
        }
    }
    Ok(Outcome::Pass)
}

fn hasse_structure(sys: &SetSystem) -> Check {
    if !validate_system(sys).grounded {
        return Ok(Outcome::Vacuous);
    }
    let h = dotted_hasse(sys).map_err(err)?;
    ensure!(dag::shortcuts(&h).is_empty(), "has shortcuts");
    ensure!(dag::is_pcc(&h), "not PCC: {:?}", dag::pcc_violation(&h));
    ensure!(dag::is_regular(&h), "not regular: {:?}", dag::regularity_violation(&h));
    ensure!(dag::is_phylogenetic(&h), "not phylogenetic");
    ensure!(cluster_system(&h) == *sys, "clusters differ from the system");
    Ok(Outcome::Pass)
}

fn hasse_realization(sys: &SetSystem, s: &SizeIndex) -> Check {
    if !validate_system(sys).grounded {
        return Ok(Outcome::Vacuous);
    }
    let h = dotted_hasse(sys).map_err(err)?;
    let pre = setsys::is_pre_i_ary(sys, s).map_err(err)?;
    let ary = setsys::is_i_ary(sys, s).map_err(err)?;
    let prop = lca::has_i_lca_property(&h, s).map_err(err)?;
    let rel = lca::is_i_lca_relevant(&h, s).map_err(err)?;
    ensure!(pre == prop, "pre-I-ary {pre}, Hasse lca-property {prop}");
    ensure!(ary == (prop && rel), "I-ary {ary}, Hasse property {prop} and relevance {rel}");
    let realized = hasse::realize_with_property(sys, s, Demand::Property).is_ok();
    ensure!(realized == pre, "realization {realized}, pre-I-ary {pre}");
    let realized = hasse::realize_with_property(sys, s, Demand::Ary).is_ok();
    ensure!(realized == ary, "realization {realized}, I-ary {ary}");
    Ok(Outcome::Pass)
}

fn hierarchy_shapes(sys: &SetSystem) -> Check {
    let r = classify_structure(sys);
    if !r.galled_tree_like {
        return Ok(Outcome::Vacuous);
    }
    let shape = recognize_shape(&dotted_hasse(sys).map_err(err)?);
    ensure!(shape.galled_tree, "Hasse diagram is not a galled tree");
    if r.tree_like {
        ensure!(shape.tree, "Hasse diagram is not a tree");
    }
    Ok(Outcome::Pass)
}

fn n3o_witness(sys: &SetSystem) -> Check {
    if !validate_system(sys).grounded || !classify_structure(sys).n3o {
        return Ok(Outcome::Vacuous);
    }
    let g = hasse::realize_n3o_witness(sys).map_err(err)?;
    ensure!(cluster_system(&g) == *sys, "clusters differ from the system");
    Ok(Outcome::Pass)
}
