use lcadag_core::dag::{self, cluster_system};
use lcadag_core::lca;
use lcadag_core::setsys::{self, SetSystem};
use lcadag_core::transform::{self, ominus, ominus_sequential};
use lcadag_core::{dotted_hasse, BitSet, Dag, SizeIndex, VertexId};
use proptest::prelude::*;

/// Random dag on `0..n` with edges `i → j` only for `i < j`; sinks become
/// leaves labeled `x<i>`.
fn build(n: usize, mask: &[bool]) -> Dag {
    let mut edges = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if mask[k] {
                edges.push((VertexId(i as u64), VertexId(j as u64)));
            }
            k += 1;
        }
    }
    let has_child: Vec<bool> = (0..n).map(|i| edges.iter().any(|e| e.0 .0 == i as u64)).collect();
    let vertices = (0..n).map(|i| {
        let label = (!has_child[i]).then(|| format!("x{i}"));
        (VertexId(i as u64), label)
    });
    Dag::new(vertices, edges).unwrap()
}

fn arb_dag(max: usize) -> impl Strategy<Value = Dag> {
    (2..=max)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(proptest::bool::weighted(0.35), n * (n - 1) / 2)))
        .prop_map(|(n, mask)| build(n, &mask))
}

fn arb_dag_with_pick(max: usize) -> impl Strategy<Value = (Dag, Vec<bool>, u64)> {
    arb_dag(max).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), proptest::collection::vec(any::<bool>(), n), any::<u64>())
    })
}

fn sizes12() -> SizeIndex {
    SizeIndex::with_one([1, 2]).unwrap()
}

fn internal(g: &Dag) -> Vec<VertexId> {
    g.vertices()
        .iter()
        .copied()
        .filter(|&v| g.label(v).is_none())
        .collect()
}

/// `LCA(A)` straight from the definition: common ancestors that have no
/// proper descendant among the common ancestors.
fn brute_lca(g: &Dag, labels: &[&str]) -> Vec<VertexId> {
    let leaves: Vec<VertexId> = labels.iter().map(|l| g.leaf(l).unwrap()).collect();
    let common: Vec<VertexId> = g
        .vertices()
        .iter()
        .copied()
        .filter(|&v| leaves.iter().all(|&x| g.leq(x, v).unwrap()))
        .collect();
    common
        .iter()
        .copied()
        .filter(|&v| !common.iter().any(|&u| u != v && g.leq(u, v).unwrap()))
        .collect()
}

fn subsets_of_sizes(n: usize, sizes: &[usize]) -> Vec<Vec<usize>> {
    (1u32..(1 << n))
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect::<Vec<_>>())
        .filter(|s| sizes.contains(&s.len()))
        .collect()
}

fn permute(v: &mut [VertexId], mut seed: u64) {
    for i in (1..v.len()).rev() {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let j = (seed >> 33) as usize % (i + 1);
        v.swap(i, j);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn shortcut_removal_is_idempotent_and_order_preserving(g in arb_dag(10)) {
        let h = dag::remove_shortcuts(&g);
        prop_assert!(dag::shortcuts(&h).is_empty());
        prop_assert_eq!(dag::remove_shortcuts(&h), h.clone());
        for &u in g.vertices() {
            prop_assert_eq!(g.cluster(u).unwrap(), h.cluster(u).unwrap());
            for &v in g.vertices() {
                prop_assert_eq!(g.leq(u, v).unwrap(), h.leq(u, v).unwrap());
            }
        }
    }

    #[test]
    fn ominus_is_order_independent((g, pick, seed) in arb_dag_with_pick(10)) {
        let mut w: Vec<VertexId> = internal(&g)
            .into_iter()
            .filter(|v| pick[v.0 as usize])
            .collect();
        let direct = ominus(&g, &w).unwrap();
        permute(&mut w, seed);
        prop_assert_eq!(&ominus_sequential(&g, &w).unwrap(), &direct);
        w.reverse();
        prop_assert_eq!(ominus_sequential(&g, &w).unwrap(), direct);
    }

    #[test]
    fn ominus_keeps_clusters_and_order((g, pick, _s) in arb_dag_with_pick(10)) {
        let w: Vec<VertexId> = internal(&g)
            .into_iter()
            .filter(|v| pick[v.0 as usize])
            .collect();
        let h = ominus(&g, &w).unwrap();
        prop_assert!(cluster_system(&h).is_subsystem_of(&cluster_system(&g)));
        for &u in h.vertices() {
            prop_assert_eq!(g.cluster(u).unwrap(), h.cluster(u).unwrap());
            for &v in h.vertices() {
                prop_assert_eq!(g.leq(u, v).unwrap(), h.leq(u, v).unwrap());
            }
        }
    }

    #[test]
    fn hasse_round_trip(g in arb_dag(10)) {
        let sys = cluster_system(&g);
        let h = dotted_hasse(&sys).unwrap();
        prop_assert_eq!(cluster_system(&h), sys);
        prop_assert!(dag::is_pcc(&h));
        prop_assert!(dag::is_regular(&h));
        prop_assert!(dag::shortcuts(&h).is_empty());
        if dag::is_regular(&g) {
            let image = |d: &Dag| {
                let mut e: Vec<(BitSet, BitSet)> = d
                    .edges()
                    .into_iter()
                    .map(|(a, b)| (d.cluster(a).unwrap().clone(), d.cluster(b).unwrap().clone()))
                    .collect();
                e.sort();
                e
            };
            prop_assert_eq!(image(&g), image(&h));
        }
    }

    #[test]
    fn lca_matches_definition(g in arb_dag(9)) {
        let ground: Vec<&str> = g.ground().iter().map(String::as_str).collect();
        for s in subsets_of_sizes(ground.len().min(6), &[1, 2, 3]) {
            let labels: Vec<&str> = s.iter().map(|&i| ground[i]).collect();
            prop_assert_eq!(lca::lca_set(&g, &labels).unwrap(), brute_lca(&g, &labels));
        }
    }

    #[test]
    fn lca_classification_matches_definition(g in arb_dag(9)) {
        let ground: Vec<&str> = g.ground().iter().map(String::as_str).collect();
        let mut hit = std::collections::BTreeSet::new();
        let mut property = true;
        for s in subsets_of_sizes(ground.len(), &[1, 2]) {
            let labels: Vec<&str> = s.iter().map(|&i| ground[i]).collect();
            match brute_lca(&g, &labels).as_slice() {
                [v] => { hit.insert(*v); }
                _ => property = false,
            }
        }
        let c = lca::i_lca_vertices(&g, &sizes12()).unwrap();
        let non: Vec<VertexId> = g.vertices().iter().copied().filter(|v| !hit.contains(v)).collect();
        prop_assert_eq!(c.non_lca, non);
        prop_assert_eq!(lca::has_i_lca_property(&g, &sizes12()).unwrap(), property);
    }

    #[test]
    fn removing_non_lca_vertices_preserves((g, pick, _s) in arb_dag_with_pick(10)) {
        let s = sizes12();
        let non = lca::i_lca_vertices(&g, &s).unwrap().non_lca;
        let w: Vec<VertexId> = non.iter().copied().filter(|v| pick[v.0 as usize]).collect();
        let h = ominus(&g, &w).unwrap();
        let p = transform::verify_preservation(&g, &h, &s).unwrap();
        prop_assert!(p.all(), "{:?}", p);
        let full = ominus(&g, &non).unwrap();
        prop_assert!(lca::is_i_lca_relevant(&full, &s).unwrap());
    }

    #[test]
    fn simplify_contract_holds(g in arb_dag(10)) {
        let r = transform::simplify(&g, &sizes12());
        prop_assert!(r.is_ok(), "{:?}", r.err());
        let r = r.unwrap();
        prop_assert_eq!(cluster_system(&r.reduced), cluster_system(&r.reduced_shortcut_free));
        for c in &r.cluster_diff {
            prop_assert!(!cluster_system(&r.reduced).contains(c));
        }
    }

    #[test]
    fn relevant_dags_have_regular_shortcut_free_form(g in arb_dag(10)) {
        let s = sizes12();
        if lca::is_i_lca_relevant(&g, &s).unwrap() {
            prop_assert!(dag::is_regular(&dag::remove_shortcuts(&g)));
            for e in dag::shortcuts(&g) {
                let h = dag::remove_shortcut(&g, e).unwrap();
                prop_assert!(lca::is_i_lca_relevant(&h, &s).unwrap());
                prop_assert!(transform::verify_preservation(&g, &h, &s).unwrap().all());
            }
        }
    }

    #[test]
    fn pre_i_ary_matches_definition(g in arb_dag(9)) {
        let sys = cluster_system(&g);
        let n = sys.ground().len();
        let mut brute = true;
        let mut ic = Vec::new();
        for s in subsets_of_sizes(n, &[1, 2]) {
            let a: BitSet = s.into_iter().collect();
            let sup: Vec<&BitSet> = sys.members().iter().filter(|m| a.is_subset(m)).collect();
            let min: Vec<&BitSet> = sup
                .iter()
                .copied()
                .filter(|m| !sup.iter().any(|o| o.is_proper_subset(m)))
                .collect();
            match min.as_slice() {
                [m] => ic.push((*m).clone()),
                _ => brute = false,
            }
        }
        prop_assert_eq!(setsys::is_pre_i_ary(&sys, &sizes12()).unwrap(), brute);
        let ic = sys.with_members(ic);
        prop_assert_eq!(setsys::ic_members(&sys, &sizes12()).unwrap(), ic);
    }
}

#[test]
fn pcc_lca_property_equivalence_on_hasse_dags() {
    // Hasse diagrams of grounded systems are PCC; the lca-property and
    // pre-I-aryness must agree on them.
    let ground = ["a", "b", "c", "d"];
    let all: Vec<Vec<&str>> = (1u32..16)
        .map(|m| (0..4).filter(|i| m & (1 << i) != 0).map(|i| ground[i]).collect())
        .filter(|s: &Vec<&str>| s.len() > 1)
        .collect();
    let s = sizes12();
    for mask in 0u32..(1 << all.len()) {
        if mask.count_ones() > 4 {
            continue;
        }
        let mut members: Vec<&[&str]> = ground.iter().map(std::slice::from_ref).collect();
        members.extend((0..all.len()).filter(|i| mask & (1 << i) != 0).map(|i| all[i].as_slice()));
        let sys = SetSystem::new(&ground, &members).unwrap();
        let g = dotted_hasse(&sys).unwrap();
        assert!(dag::is_pcc(&g));
        assert_eq!(
            lca::has_i_lca_property(&g, &s).unwrap(),
            setsys::is_pre_i_ary(&sys, &s).unwrap(),
            "{:?}",
            sys.member_labels()
        );
    }
}
