//! Dynamic bitsets over dense non-negative ids.
//!
//! Ground sets in this crate are small (tens of elements; the largest
//! shipped construction uses 155), so sets are stored as bit words inline up
//! to 128 ids with a heap spill beyond. Intersection sizes — the hot
//! operation in both the search engine and the verifiers — are word-parallel
//! popcounts.

use std::fmt;

use smallvec::SmallVec;

/// A set of dense non-negative ids (ground elements or pair indices).
///
/// Invariant: the word vector never ends in a zero word, so structural
/// equality, ordering, and hashing of equal sets coincide regardless of how
/// the set was built.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ElemSet {
    words: SmallVec<[u64; 2]>,
}

impl ElemSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_ids<I: IntoIterator<Item = usize>>(ids: I) -> Self {
        let mut s = Self::new();
        for id in ids {
            s.insert(id);
        }
        s
    }

    pub fn insert(&mut self, id: usize) {
        let (w, bit) = (id / 64, id % 64);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << bit;
    }

    pub fn remove(&mut self, id: usize) {
        let (w, bit) = (id / 64, id % 64);
        if w < self.words.len() {
            self.words[w] &= !(1 << bit);
            self.normalize();
        }
    }

    pub fn contains(&self, id: usize) -> bool {
        let (w, bit) = (id / 64, id % 64);
        w < self.words.len() && self.words[w] & (1 << bit) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Size of the intersection without materializing it.
    pub fn intersection_len(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut words: SmallVec<[u64; 2]> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        while words.last() == Some(&0) {
            words.pop();
        }
        ElemSet { words }
    }

    pub fn union(&self, other: &Self) -> Self {
        let (longer, shorter) = if self.words.len() >= other.words.len() {
            (&self.words, &other.words)
        } else {
            (&other.words, &self.words)
        };
        let mut words = longer.clone();
        for (w, s) in words.iter_mut().zip(shorter) {
            *w |= s;
        }
        ElemSet { words }
    }

    /// Set difference `self ∖ other`.
    pub fn difference(&self, other: &Self) -> Self {
        let mut words = self.words.clone();
        for (w, o) in words.iter_mut().zip(&other.words) {
            *w &= !o;
        }
        while words.last() == Some(&0) {
            words.pop();
        }
        ElemSet { words }
    }

    /// Ascending iterator over member ids.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let bit = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * 64 + bit)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Rewrites every id through `map`; ids mapped to `None` are dropped.
    ///
    /// Used by ground renormalization, where `map` is injective on the ids
    /// that survive.
    pub fn remap(&self, map: &[Option<usize>]) -> Self {
        let mut out = Self::new();
        for id in self.iter() {
            if let Some(new) = map.get(id).copied().flatten() {
                out.insert(new);
            }
        }
        out
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(ids: I) -> Self {
        Self::from_ids(ids)
    }
}

impl fmt::Debug for ElemSet {
    /// Prints as `{0, 3, 7}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
