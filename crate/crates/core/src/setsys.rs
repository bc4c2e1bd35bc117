//! Set systems over a labeled ground set and their structural predicates.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::bitset::BitSet;
use crate::sizes::{walk_subsets, SizeError, SizeIndex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SetSystemError {
    #[error("ground set is empty")]
    EmptyGround,
    #[error("label {0:?} appears twice in the ground set")]
    DuplicateLabel(String),
    #[error("label {0:?} is not in the ground set")]
    UnknownLabel(String),
    #[error("member contains element {0} outside the ground set")]
    OutOfGround(usize),
}

/// A family of subsets of a ground set `X`.
///
/// Members are stored as label-index sets in canonical order (by size, then
/// lexicographically) without duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetSystem {
    ground: Vec<String>,
    members: Vec<BitSet>,
}

impl SetSystem {
    /// Builds a system from label lists. The ground set may be given in any
    /// order; duplicate members collapse.
    pub fn new<S: AsRef<str>>(ground: &[S], members: &[&[S]]) -> Result<Self, SetSystemError> {
        let mut g: Vec<String> = ground.iter().map(|s| String::from(s.as_ref())).collect();
        g.sort();
        if let Some(w) = g.windows(2).find(|w| w[0] == w[1]) {
            return Err(SetSystemError::DuplicateLabel(w[0].clone()));
        }
        let mut sets = Vec::with_capacity(members.len());
        for m in members {
            let mut s = BitSet::new();
            for l in m.iter() {
                let l = l.as_ref();
                let i = g
                    .binary_search_by(|x| x.as_str().cmp(l))
                    .map_err(|_| SetSystemError::UnknownLabel(l.into()))?;
                s.insert(i);
            }
            sets.push(s);
        }
        Self::from_parts(g, sets)
    }

    /// Builds a system from a sorted, duplicate-free ground set and index sets.
    pub fn from_parts<I>(ground: Vec<String>, members: I) -> Result<Self, SetSystemError>
    where
        I: IntoIterator<Item = BitSet>,
    {
        if ground.is_empty() {
            return Err(SetSystemError::EmptyGround);
        }
        if let Some(w) = ground.windows(2).find(|w| w[0] >= w[1]) {
            return Err(SetSystemError::DuplicateLabel(w[1].clone()));
        }
        let mut members: Vec<BitSet> = members.into_iter().collect();
        for m in &members {
            if let Some(x) = m.iter().find(|&x| x >= ground.len()) {
                return Err(SetSystemError::OutOfGround(x));
            }
        }
        members.sort();
        members.dedup();
        Ok(SetSystem { ground, members })
    }

    /// `2^X`: every nonempty subset of the ground set.
    pub fn power_set<S: AsRef<str>>(ground: &[S]) -> Result<Self, SetSystemError> {
        let base = Self::new::<S>(ground, &[])?;
        let n = base.ground.len();
        assert!(n < 24, "power set of {n} elements is too large");
        let members = (1u64..(1 << n)).map(|mask| {
            (0..n).filter(|i| mask & (1 << i) != 0).collect::<BitSet>()
        });
        Self::from_parts(base.ground, members)
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn members(&self) -> &[BitSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: &BitSet) -> bool {
        self.members.binary_search(set).is_ok()
    }

    pub fn full_set(&self) -> BitSet {
        BitSet::full(self.ground.len())
    }

    /// A new system on the same ground set with `members` replaced.
    pub fn with_members<I: IntoIterator<Item = BitSet>>(&self, members: I) -> SetSystem {
        SetSystem::from_parts(self.ground.clone(), members).expect("same ground set")
    }

    /// Members not in `other` (same ground set assumed).
    pub fn difference(&self, other: &SetSystem) -> Vec<BitSet> {
        self.members
            .iter()
            .filter(|m| !other.contains(m))
            .cloned()
            .collect()
    }

    pub fn is_subsystem_of(&self, other: &SetSystem) -> bool {
        self.ground == other.ground && self.members.iter().all(|m| other.contains(m))
    }

    pub fn labels_of(&self, set: &BitSet) -> Vec<&str> {
        set.iter().map(|i| self.ground[i].as_str()).collect()
    }

    pub fn label_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<BitSet, SetSystemError> {
        let mut s = BitSet::new();
        for l in labels {
            let l = l.as_ref();
            let i = self
                .ground
                .binary_search_by(|x| x.as_str().cmp(l))
                .map_err(|_| SetSystemError::UnknownLabel(l.into()))?;
            s.insert(i);
        }
        Ok(s)
    }

    /// Members as sorted label lists, in canonical order.
    pub fn member_labels(&self) -> Vec<Vec<&str>> {
        self.members.iter().map(|m| self.labels_of(m)).collect()
    }

    /// For each member, the members strictly contained in it.
    fn strictly_below(&self) -> Vec<BitSet> {
        let m = self.members.len();
        let mut below = vec![BitSet::new(); m];
        for (i, b) in below.iter_mut().enumerate() {
            // Canonical order puts proper subsets first.
            for j in 0..i {
                if self.members[j].is_proper_subset(&self.members[i]) {
                    b.insert(j);
                }
            }
        }
        below
    }

    /// For each ground element, the members containing it.
    fn containing(&self) -> Vec<BitSet> {
        let mut out = vec![BitSet::new(); self.ground.len()];
        for (j, m) in self.members.iter().enumerate() {
            for x in m {
                out[x].insert(j);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SystemFlags {
    pub grounded: bool,
    pub clustering: bool,
}

/// Grounded: all singletons present and no empty member. Clustering:
/// grounded and the full ground set is a member.
pub fn validate_system(sys: &SetSystem) -> SystemFlags {
    let n = sys.ground.len();
    let grounded = !sys.members.iter().any(BitSet::is_empty)
        && (0..n).all(|x| sys.contains(&BitSet::singleton(x)));
    let clustering = grounded && sys.contains(&sys.full_set());
    SystemFlags {
        grounded,
        clustering,
    }
}

/// All inclusion-minimal members containing `a`, in canonical order.
pub fn minimal_supersets<'s>(sys: &'s SetSystem, a: &BitSet) -> Vec<&'s BitSet> {
    let supers: Vec<&BitSet> = sys.members.iter().filter(|m| a.is_subset(m)).collect();
    supers
        .iter()
        .filter(|m| !supers.iter().any(|o| o.is_proper_subset(m)))
        .copied()
        .collect()
}

/// Enumerates `X(I)` and reports, per subset, the indices of its minimal
/// supersets.
fn walk_minimal_supersets<V>(
    sys: &SetSystem,
    sizes: &SizeIndex,
    mut visit: V,
) -> Result<(), SizeError>
where
    V: FnMut(&[usize], &BitSet) -> ControlFlow<()>,
{
    let below = sys.strictly_below();
    let containing = sys.containing();
    let all = BitSet::full(sys.members.len());
    walk_subsets(
        sizes,
        sys.ground.len(),
        all,
        |supers, x| Some(supers.intersection(&containing[x])),
        |a, supers| {
            let minimal: BitSet = supers
                .iter()
                .filter(|&j| !below[j].intersects(supers))
                .collect();
            visit(a, &minimal)
        },
    )
    .map(drop)
}

/// First `A ∈ X(I)` (canonical order) without a unique minimal superset.
pub fn pre_i_ary_violation(sys: &SetSystem, sizes: &SizeIndex) -> Result<Option<BitSet>, SizeError> {
    let mut witness = None;
    walk_minimal_supersets(sys, sizes, |a, minimal| {
        if minimal.len() != 1 {
            witness = Some(a.iter().copied().collect());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(witness)
}

pub fn is_pre_i_ary(sys: &SetSystem, sizes: &SizeIndex) -> Result<bool, SizeError> {
    Ok(pre_i_ary_violation(sys, sizes)?.is_none())
}

/// The subsystem of members that are the unique minimal superset of some
/// `A ∈ X(I)`.
pub fn ic_members(sys: &SetSystem, sizes: &SizeIndex) -> Result<SetSystem, SizeError> {
    let mut hit = BitSet::new();
    walk_minimal_supersets(sys, sizes, |_, minimal| {
        if minimal.len() == 1 {
            hit.union_with(minimal);
        }
        ControlFlow::Continue(())
    })?;
    Ok(sys.with_members(hit.iter().map(|j| sys.members[j].clone())))
}

/// For each member, the first `A ∈ X(I)` it is the unique minimal
/// superset of.
pub fn ic_witnesses(sys: &SetSystem, sizes: &SizeIndex) -> Result<Vec<Option<BitSet>>, SizeError> {
    let mut out = vec![None; sys.members.len()];
    walk_minimal_supersets(sys, sizes, |a, minimal| {
        if minimal.len() == 1 {
            let j = minimal.first().expect("one element");
            if out[j].is_none() {
                out[j] = Some(a.iter().copied().collect());
            }
        }
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub fn is_i_ary(sys: &SetSystem, sizes: &SizeIndex) -> Result<bool, SizeError> {
    if !is_pre_i_ary(sys, sizes)? {
        return Ok(false);
    }
    Ok(ic_members(sys, sizes)?.len() == sys.len())
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum StructureWitness {
    NotClustering,
    Overlap(BitSet, BitSet),
    /// Three pairwise overlapping members.
    OverlapTriple(BitSet, BitSet, BitSet),
    /// `C1` overlaps `C2` and `C3` but `C1 ∩ C2 ≠ C1 ∩ C3`.
    UnevenIntersection(BitSet, BitSet, BitSet),
    /// Two intersecting members whose intersection is not a member.
    MissingIntersection(BitSet, BitSet),
    AllSingletons,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StructureReport {
    pub tree_like: bool,
    pub n3o: bool,
    pub prop_l: bool,
    pub closed: bool,
    pub galled_tree_like: bool,
    pub non_trivial: bool,
    pub kappa: Option<usize>,
    /// `(flag name, witness)` for every flag that is false.
    pub witnesses: Vec<(String, StructureWitness)>,
}

fn first_overlap(members: &[BitSet]) -> Option<(usize, usize)> {
    let m = members.len();
    (0..m)
        .flat_map(|i| ((i + 1)..m).map(move |j| (i, j)))
        .find(|&(i, j)| members[i].overlaps(&members[j]))
}

fn first_overlap_triple(members: &[BitSet]) -> Option<(usize, usize, usize)> {
    let m = members.len();
    for i in 0..m {
        for j in (i + 1)..m {
            if !members[i].overlaps(&members[j]) {
                continue;
            }
            for k in (j + 1)..m {
                if members[k].overlaps(&members[i]) && members[k].overlaps(&members[j]) {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

fn first_uneven(members: &[BitSet]) -> Option<(usize, usize, usize)> {
    let m = members.len();
    for c1 in 0..m {
        let partners: Vec<usize> = (0..m)
            .filter(|&c| c != c1 && members[c1].overlaps(&members[c]))
            .collect();
        for (x, &c2) in partners.iter().enumerate() {
            let i2 = members[c1].intersection(&members[c2]);
            for &c3 in &partners[(x + 1)..] {
                if members[c1].intersection(&members[c3]) != i2 {
                    return Some((c1, c2, c3));
                }
            }
        }
    }
    None
}

fn first_unclosed(sys: &SetSystem) -> Option<(usize, usize)> {
    let members = &sys.members;
    let m = members.len();
    for i in 0..m {
        for j in (i + 1)..m {
            let x = members[i].intersection(&members[j]);
            if !x.is_empty() && !sys.contains(&x) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Evaluates the overlap-based structural properties of a system.
///
/// `tree_like` and `galled_tree_like` are defined on clustering systems and
/// are false for anything else.
pub fn classify_structure(sys: &SetSystem) -> StructureReport {
    let mb = &sys.members;
    let mut r = StructureReport::default();
    let clustering = validate_system(sys).clustering;

    let overlap = first_overlap(mb);
    r.tree_like = clustering && overlap.is_none();
    if !r.tree_like {
        let w = match overlap {
            Some((i, j)) => StructureWitness::Overlap(mb[i].clone(), mb[j].clone()),
            None => StructureWitness::NotClustering,
        };
        r.witnesses.push(("tree_like".into(), w));
    }

    let triple = first_overlap_triple(mb);
    r.n3o = triple.is_none();
    if let Some((i, j, k)) = triple {
        r.witnesses.push((
            "n3o".into(),
            StructureWitness::OverlapTriple(mb[i].clone(), mb[j].clone(), mb[k].clone()),
        ));
    }

    let uneven = first_uneven(mb);
    r.prop_l = uneven.is_none();
    if let Some((i, j, k)) = uneven {
        r.witnesses.push((
            "prop_l".into(),
            StructureWitness::UnevenIntersection(mb[i].clone(), mb[j].clone(), mb[k].clone()),
        ));
    }

    let unclosed = first_unclosed(sys);
    r.closed = unclosed.is_none();
    if let Some((i, j)) = unclosed {
        r.witnesses.push((
            "closed".into(),
            StructureWitness::MissingIntersection(mb[i].clone(), mb[j].clone()),
        ));
    }

    r.galled_tree_like = clustering && r.closed && r.prop_l && r.n3o;
    if !r.galled_tree_like {
        let w = if !clustering {
            StructureWitness::NotClustering
        } else {
            // Reuse the witness of the first failing ingredient.
            r.witnesses
                .iter()
                .find(|(k, _)| k == "closed" || k == "prop_l" || k == "n3o")
                .map(|(_, w)| w.clone())
                .expect("some ingredient failed")
        };
        r.witnesses.push(("galled_tree_like".into(), w));
    }

    r.kappa = mb.iter().map(BitSet::len).filter(|&s| s > 1).min();
    r.non_trivial = r.kappa.is_some();
    if !r.non_trivial {
        r.witnesses
            .push(("non_trivial".into(), StructureWitness::AllSingletons));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{c4, cg};

    fn sizes12() -> SizeIndex {
        SizeIndex::with_one([1, 2]).unwrap()
    }

    #[test]
    fn flags() {
        assert_eq!(
            validate_system(&c4()),
            SystemFlags {
                grounded: true,
                clustering: true
            }
        );
        let partial = SetSystem::new(&["a", "b", "c"], &[&["a"], &["b"]]).unwrap();
        assert!(!validate_system(&partial).grounded);
        let pow = SetSystem::power_set(&["a", "b", "c"]).unwrap();
        assert_eq!(pow.len(), 7);
        assert!(validate_system(&pow).clustering);
        let with_empty = SetSystem::new(&["a"], &[&["a"], &[]]).unwrap();
        assert!(!validate_system(&with_empty).grounded);
    }

    #[test]
    fn construction_errors() {
        let none: &[&str] = &[];
        assert_eq!(
            SetSystem::new(none, &[]),
            Err(SetSystemError::EmptyGround)
        );
        assert_eq!(
            SetSystem::new(&["a", "a"], &[]),
            Err(SetSystemError::DuplicateLabel("a".into()))
        );
        assert_eq!(
            SetSystem::new(&["a"], &[&["z"]]),
            Err(SetSystemError::UnknownLabel("z".into()))
        );
    }

    #[test]
    fn minimal_superset_examples() {
        let c = c4();
        let bc = c.label_set(&["b", "c"]).unwrap();
        let got: Vec<Vec<&str>> = minimal_supersets(&c, &bc)
            .into_iter()
            .map(|m| c.labels_of(m))
            .collect();
        assert_eq!(got, vec![vec!["a", "b", "c"], vec!["b", "c", "d"]]);
        let ad = c.label_set(&["a", "d"]).unwrap();
        let got: Vec<Vec<&str>> = minimal_supersets(&c, &ad)
            .into_iter()
            .map(|m| c.labels_of(m))
            .collect();
        assert_eq!(got, vec![vec!["a", "b", "c", "d"]]);
    }

    #[test]
    fn pre_ary_examples() {
        let c = c4();
        let w = pre_i_ary_violation(&c, &sizes12()).unwrap().unwrap();
        assert_eq!(c.labels_of(&w), vec!["b", "c"]);
        let pow = SetSystem::power_set(&["a", "b", "c"]).unwrap();
        assert!(is_pre_i_ary(&pow, &sizes12()).unwrap());
        // no superset at all also violates
        let split = SetSystem::new(&["a", "b"], &[&["a"], &["b"]]).unwrap();
        assert!(!is_pre_i_ary(&split, &sizes12()).unwrap());
    }

    #[test]
    fn ic_examples() {
        let pow = SetSystem::power_set(&["a", "b", "c"]).unwrap();
        let ic = ic_members(&pow, &sizes12()).unwrap();
        assert_eq!(ic.difference(&pow), vec![]);
        assert_eq!(pow.difference(&ic), vec![pow.full_set()]);
        assert_eq!(ic_members(&c4(), &sizes12()).unwrap(), c4());
    }

    #[test]
    fn i_ary_examples() {
        let pow = SetSystem::power_set(&["a", "b", "c"]).unwrap();
        let no_x = pow.with_members(pow.members().iter().filter(|m| m.len() < 3).cloned());
        assert!(is_i_ary(&no_x, &sizes12()).unwrap());
        let ac = pow.label_set(&["a", "c"]).unwrap();
        let no_ac = pow.with_members(pow.members().iter().filter(|m| **m != ac).cloned());
        assert!(is_i_ary(&no_ac, &sizes12()).unwrap());
        assert!(!is_i_ary(&c4(), &sizes12()).unwrap());
        assert!(!is_i_ary(&pow, &sizes12()).unwrap());
    }

    #[test]
    fn structure_examples() {
        let r = classify_structure(&c4());
        assert!(!r.tree_like && r.n3o && r.prop_l && !r.closed && !r.galled_tree_like);
        assert_eq!(r.kappa, Some(3));
        let r = classify_structure(&cg());
        assert!(!r.tree_like && r.n3o && r.prop_l && r.closed && r.galled_tree_like);
        assert_eq!(r.kappa, Some(2));
        let pow = SetSystem::power_set(&["a", "b", "c"]).unwrap();
        let r = classify_structure(&pow);
        assert!(!r.n3o);
        let singles = SetSystem::new(&["a", "b"], &[&["a"], &["b"]]).unwrap();
        let r = classify_structure(&singles);
        assert!(!r.non_trivial && r.kappa.is_none());
        // every false flag has a witness
        for rep in [classify_structure(&c4()), classify_structure(&pow), r] {
            let falses = [
                ("tree_like", rep.tree_like),
                ("n3o", rep.n3o),
                ("prop_l", rep.prop_l),
                ("closed", rep.closed),
                ("galled_tree_like", rep.galled_tree_like),
                ("non_trivial", rep.non_trivial),
            ];
            for (name, v) in falses {
                assert_eq!(!v, rep.witnesses.iter().any(|(k, _)| k == name), "{name}");
            }
        }
    }

    #[test]
    fn property_l_violation() {
        // {a,b,c} overlaps {c,d} (meets in {c}) and {a,e} (meets in {a})
        let s = SetSystem::new(
            &["a", "b", "c", "d", "e"],
            &[&["a", "b", "c"], &["c", "d"], &["a", "e"]],
        )
        .unwrap();
        let r = classify_structure(&s);
        assert!(!r.prop_l);
    }
}
