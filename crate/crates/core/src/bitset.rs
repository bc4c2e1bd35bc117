//! Compact growable bit sets.
//!
//! `BitSet` is used both for leaf sets (indices into a sorted label vector)
//! and for vertex sets (dense vertex indices). Trailing zero words are always
//! trimmed so that structural equality coincides with set equality.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

const WORD: usize = 64;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub const fn new() -> Self {
        BitSet { words: Vec::new() }
    }

    /// The set `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut words = alloc::vec![u64::MAX; n / WORD];
        if !n.is_multiple_of(WORD) {
            words.push((1u64 << (n % WORD)) - 1);
        }
        let mut s = BitSet { words };
        s.trim();
        s
    }

    pub fn singleton(i: usize) -> Self {
        let mut s = BitSet::new();
        s.insert(i);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut s = BitSet::new();
        for i in it {
            s.insert(i);
        }
        s
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / WORD, i % WORD);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        let had = self.words[w] & (1 << b) != 0;
        self.words[w] |= 1 << b;
        !had
    }

    pub fn remove(&mut self, i: usize) -> bool {
        let (w, b) = (i / WORD, i % WORD);
        if w >= self.words.len() {
            return false;
        }
        let had = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        self.trim();
        had
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        let (w, b) = (i / WORD, i % WORD);
        w < self.words.len() && self.words[w] & (1 << b) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        if self.words.len() > other.words.len() {
            return false;
        }
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &BitSet) -> bool {
        other.is_subset(self)
    }

    /// `self ⊊ other`.
    pub fn is_proper_subset(&self, other: &BitSet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        self.words.truncate(other.words.len());
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        self.trim();
    }

    pub fn union_with(&mut self, other: &BitSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        self.trim();
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    /// Two sets overlap if their intersection is neither empty nor one of them.
    pub fn overlaps(&self, other: &BitSet) -> bool {
        self.intersects(other) && !self.is_subset(other) && !other.is_subset(self)
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }
}

impl FromIterator<usize> for BitSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        BitSet::from_indices(iter)
    }
}

impl<'a> IntoIterator for &'a BitSet {
    type Item = usize;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let tz = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_idx * WORD + tz);
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
    }
}

/// Canonical order: by cardinality, then lexicographically on the sorted
/// element sequence.
impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Serialized as the ascending list of members.
#[cfg(feature = "serde")]
impl serde::Serialize for BitSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for BitSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<usize> = serde::Deserialize::deserialize(d)?;
        Ok(BitSet::from_indices(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn basic_ops() {
        let a = BitSet::from_indices([1, 3, 70]);
        let b = BitSet::from_indices([3, 70]);
        assert_eq!(a.len(), 3);
        assert!(b.is_proper_subset(&a));
        assert!(!a.is_subset(&b));
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![1, 3, 70]);
        let mut c = a.clone();
        c.remove(70);
        assert_eq!(c, BitSet::from_indices([1, 3]));
        assert_eq!(c.intersection(&b), BitSet::singleton(3));
        assert!(BitSet::from_indices([0, 1]).overlaps(&BitSet::from_indices([1, 2])));
        assert!(!BitSet::from_indices([0, 1]).overlaps(&BitSet::from_indices([0, 1, 2])));
        assert_eq!(BitSet::full(65).len(), 65);
        assert_eq!(BitSet::full(0), BitSet::new());
    }

    #[test]
    fn canonical_order() {
        let mut v = [
            BitSet::from_indices([1, 2]),
            BitSet::from_indices([0]),
            BitSet::from_indices([0, 2]),
            BitSet::from_indices([0, 1, 2]),
            BitSet::from_indices([2]),
        ];
        v.sort();
        let as_vecs: Vec<Vec<usize>> = v.iter().map(|s| s.iter().collect()).collect();
        assert_eq!(
            as_vecs,
            vec![vec![0], vec![2], vec![0, 2], vec![1, 2], vec![0, 1, 2]]
        );
    }
}
