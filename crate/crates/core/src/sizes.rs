//! Permitted subset sizes and enumeration of `X(I)`.

use alloc::vec::Vec;
use core::ops::ControlFlow;

/// Default ceiling on the number of subsets a single enumeration may visit.
pub const DEFAULT_SUBSET_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SizeError {
    #[error("size index is empty")]
    Empty,
    #[error("subset sizes must be at least 1")]
    Zero,
    #[error("size index must contain 1")]
    MissingOne,
    #[error("enumeration needs {needed} subsets, cap is {cap}")]
    ResourceLimit { needed: u64, cap: u64 },
}

/// A set of permitted subset cardinalities, optionally required to contain 1.
///
/// The enumeration cap travels with the index so that every operation that
/// walks `X(I)` observes the same budget.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SizeIndex {
    sizes: Vec<usize>,
    requires_one: bool,
    cap: u64,
}

impl SizeIndex {
    pub fn new<I: IntoIterator<Item = usize>>(sizes: I) -> Result<Self, SizeError> {
        let mut sizes: Vec<usize> = sizes.into_iter().collect();
        sizes.sort_unstable();
        sizes.dedup();
        if sizes.is_empty() {
            return Err(SizeError::Empty);
        }
        if sizes[0] == 0 {
            return Err(SizeError::Zero);
        }
        Ok(SizeIndex {
            sizes,
            requires_one: false,
            cap: DEFAULT_SUBSET_CAP,
        })
    }

    /// An index that must contain 1.
    pub fn with_one<I: IntoIterator<Item = usize>>(sizes: I) -> Result<Self, SizeError> {
        let mut s = Self::new(sizes)?;
        if s.sizes[0] != 1 {
            return Err(SizeError::MissingOne);
        }
        s.requires_one = true;
        Ok(s)
    }

    /// `{1, ..., n}`.
    pub fn all(n: usize) -> Self {
        Self::with_one(1..=n.max(1)).expect("1 is present")
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn requires_one(&self) -> bool {
        self.requires_one
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn contains(&self, k: usize) -> bool {
        self.sizes.binary_search(&k).is_ok()
    }

    pub(crate) fn require_one(&self) -> Result<(), SizeError> {
        if self.requires_one || self.sizes[0] == 1 {
            Ok(())
        } else {
            Err(SizeError::MissingOne)
        }
    }

    /// `|X(I)|` for a ground set of `n` elements, saturating.
    pub fn subset_count(&self, n: usize) -> u64 {
        self.sizes
            .iter()
            .filter(|&&k| k <= n)
            .fold(0u64, |acc, &k| acc.saturating_add(binomial(n, k)))
    }

    pub(crate) fn check_budget(&self, n: usize) -> Result<(), SizeError> {
        let needed = self.subset_count(n);
        if needed > self.cap {
            Err(SizeError::ResourceLimit {
                needed,
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }

    /// Visits every `A ∈ X(I)` over `{0, .., n-1}`: sizes ascending, each
    /// size in lexicographic order.
    pub fn for_each_subset<F>(&self, n: usize, mut visit: F) -> Result<ControlFlow<()>, SizeError>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        walk_subsets(self, n, (), |_, _| Some(()), |a, _| visit(a))
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Walks `X(I)` in canonical order while folding a per-prefix state.
///
/// `extend(state, x)` derives the state of `prefix ∪ {x}`; returning `None`
/// skips every subset with that prefix, so callers may only prune when no
/// such subset can matter to them.
pub(crate) fn walk_subsets<S, E, V>(
    sizes: &SizeIndex,
    n: usize,
    root: S,
    extend: E,
    mut visit: V,
) -> Result<ControlFlow<()>, SizeError>
where
    E: Fn(&S, usize) -> Option<S>,
    V: FnMut(&[usize], &S) -> ControlFlow<()>,
{
    sizes.check_budget(n)?;
    for &k in sizes.sizes.iter().filter(|&&k| k <= n) {
        let mut chosen = Vec::with_capacity(k);
        let flow = descend(k, n, 0, &root, &extend, &mut visit, &mut chosen);
        if flow.is_break() {
            return Ok(ControlFlow::Break(()));
        }
    }
    Ok(ControlFlow::Continue(()))
}

fn descend<S, E, V>(
    k: usize,
    n: usize,
    start: usize,
    state: &S,
    extend: &E,
    visit: &mut V,
    chosen: &mut Vec<usize>,
) -> ControlFlow<()>
where
    E: Fn(&S, usize) -> Option<S>,
    V: FnMut(&[usize], &S) -> ControlFlow<()>,
{
    let remaining = k - chosen.len();
    if remaining == 0 {
        return visit(chosen, state);
    }
    for x in start..=(n - remaining) {
        if let Some(next) = extend(state, x) {
            chosen.push(x);
            let flow = descend(k, n, x + 1, &next, extend, visit, chosen);
            chosen.pop();
            flow?;
        }
    }
    ControlFlow::Continue(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn construction() {
        assert_eq!(SizeIndex::new([]), Err(SizeError::Empty));
        assert_eq!(SizeIndex::new([0, 1]), Err(SizeError::Zero));
        assert_eq!(SizeIndex::with_one([2, 3]), Err(SizeError::MissingOne));
        let s = SizeIndex::with_one([2, 1, 2]).unwrap();
        assert_eq!(s.sizes(), &[1, 2]);
        assert!(s.requires_one());
    }

    #[test]
    fn enumeration_order() {
        let s = SizeIndex::new([2, 1, 7]).unwrap();
        let mut seen = Vec::new();
        let _ = s
            .for_each_subset(3, |a| {
                seen.push(a.to_vec());
                ControlFlow::Continue(())
            })
            .unwrap();
        assert_eq!(
            seen,
            vec![
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2]
            ]
        );
        assert_eq!(s.subset_count(3), 6);
    }

    #[test]
    fn budget() {
        let s = SizeIndex::all(30).with_cap(1000);
        assert!(matches!(
            s.for_each_subset(30, |_| ControlFlow::Continue(())),
            Err(SizeError::ResourceLimit { .. })
        ));
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(200, 100), u64::MAX);
    }
}
