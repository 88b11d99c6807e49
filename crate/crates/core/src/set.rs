//! Fixed-capacity candidate bitset.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

const WORDS: usize = 8;

/// Largest supported candidate universe.
pub const MAX_CANDIDATES: usize = WORDS * 64;

/// A set of candidate indices below [`MAX_CANDIDATES`].
///
/// The set is `Copy`; all set algebra is allocation free. The total order
/// compares the ascending element sequences lexicographically, so
/// `{} < {0} < {0, 1} < {0, 2} < {1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CandSet([u64; WORDS]);

impl CandSet {
    pub const EMPTY: CandSet = CandSet([0; WORDS]);

    pub fn new() -> Self {
        Self::EMPTY
    }

    pub fn singleton(c: usize) -> Self {
        let mut s = Self::EMPTY;
        s.insert(c);
        s
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_CANDIDATES, "universe of {n} candidates exceeds capacity");
        let mut s = Self::EMPTY;
        for w in 0..WORDS {
            let lo = w * 64;
            if n >= lo + 64 {
                s.0[w] = u64::MAX;
            } else if n > lo {
                s.0[w] = (1u64 << (n - lo)) - 1;
            }
        }
        s
    }

    /// Builds a set from the low bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        let mut s = Self::EMPTY;
        s.0[0] = mask;
        s
    }

    /// The low 64 bits; `None` when the set has elements above 63.
    pub fn as_mask(&self) -> Option<u64> {
        if self.0[1..].iter().all(|&w| w == 0) {
            Some(self.0[0])
        } else {
            None
        }
    }

    #[inline]
    pub fn insert(&mut self, c: usize) {
        assert!(c < MAX_CANDIDATES, "candidate index {c} out of range");
        self.0[c / 64] |= 1 << (c % 64);
    }

    #[inline]
    pub fn remove(&mut self, c: usize) {
        if c < MAX_CANDIDATES {
            self.0[c / 64] &= !(1 << (c % 64));
        }
    }

    #[inline]
    pub fn with(mut self, c: usize) -> Self {
        self.insert(c);
        self
    }

    #[inline]
    pub fn without(mut self, c: usize) -> Self {
        self.remove(c);
        self
    }

    #[inline]
    pub fn contains(&self, c: usize) -> bool {
        c < MAX_CANDIDATES && self.0[c / 64] & (1 << (c % 64)) != 0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn union(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a |= b;
        }
        out
    }

    #[inline]
    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a &= b;
        }
        out
    }

    #[inline]
    pub fn difference(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a &= !b;
        }
        out
    }

    #[inline]
    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }

    #[inline]
    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & b == 0)
    }

    #[inline]
    pub fn intersection_len(&self, other: &Self) -> usize {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> Iter {
        Iter {
            words: self.0,
            word: 0,
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct Iter {
    words: [u64; WORDS],
    word: usize,
}

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.word < WORDS {
            let w = self.words[self.word];
            if w != 0 {
                let bit = w.trailing_zeros() as usize;
                self.words[self.word] &= w - 1;
                return Some(self.word * 64 + bit);
            }
            self.word += 1;
        }
        None
    }
}

impl IntoIterator for &CandSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for CandSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = CandSet::EMPTY;
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl Ord for CandSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for CandSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BitOr for CandSet {
    type Output = CandSet;
    fn bitor(self, rhs: CandSet) -> CandSet {
        self.union(&rhs)
    }
}

impl BitAnd for CandSet {
    type Output = CandSet;
    fn bitand(self, rhs: CandSet) -> CandSet {
        self.intersection(&rhs)
    }
}

impl Sub for CandSet {
    type Output = CandSet;
    fn sub(self, rhs: CandSet) -> CandSet {
        self.difference(&rhs)
    }
}

impl fmt::Debug for CandSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Calls `f` on every `size`-subset of `pool` in lexicographic order until
/// `f` returns `true`. Returns whether it stopped early.
pub fn any_subset_of_size(pool: &CandSet, size: usize, mut f: impl FnMut(CandSet) -> bool) -> bool {
    let items = pool.to_vec();
    if size > items.len() {
        return false;
    }
    fn rec(
        items: &[usize],
        start: usize,
        left: usize,
        acc: CandSet,
        f: &mut dyn FnMut(CandSet) -> bool,
    ) -> bool {
        if left == 0 {
            return f(acc);
        }
        for i in start..=items.len() - left {
            if rec(items, i + 1, left - 1, acc.with(items[i]), f) {
                return true;
            }
        }
        false
    }
    rec(&items, 0, size, CandSet::EMPTY, &mut f)
}
