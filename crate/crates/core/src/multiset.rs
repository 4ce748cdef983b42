//! Finite multisets with a canonical, sorted representation.
//!
//! A [`Multiset`] stores `(element, count)` pairs sorted by element with every
//! count strictly positive. Two multisets holding the same elements with the
//! same counts therefore have identical representations, which makes derived
//! `Eq`, `Ord` and `Hash` usable as set keys and as a deterministic order.

use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiset<T> {
    entries: Vec<(T, u32)>,
}

impl<T> Default for Multiset<T> {
    fn default() -> Self {
        Multiset { entries: Vec::new() }
    }
}

impl<T: Ord + Clone> Multiset<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(element: T) -> Self {
        Multiset {
            entries: vec![(element, 1)],
        }
    }

    /// Builds a multiset from `(element, count)` pairs; zero counts are dropped
    /// and repeated elements are summed.
    pub fn from_counts(counts: impl IntoIterator<Item = (T, u32)>) -> Self {
        let mut ms = Multiset::new();
        for (element, count) in counts {
            ms.insert_n(element, count);
        }
        ms
    }

    pub fn count(&self, element: &T) -> u32 {
        match self.entries.binary_search_by(|(e, _)| e.cmp(element)) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    pub fn contains(&self, element: &T) -> bool {
        self.count(element) > 0
    }

    pub fn insert(&mut self, element: T) {
        self.insert_n(element, 1);
    }

    pub fn insert_n(&mut self, element: T, n: u32) {
        if n == 0 {
            return;
        }
        match self.entries.binary_search_by(|(e, _)| e.cmp(&element)) {
            Ok(i) => self.entries[i].1 += n,
            Err(i) => self.entries.insert(i, (element, n)),
        }
    }

    /// Removes one occurrence; returns `false` if the element was absent.
    pub fn remove_one(&mut self, element: &T) -> bool {
        match self.entries.binary_search_by(|(e, _)| e.cmp(element)) {
            Ok(i) => {
                if self.entries[i].1 == 1 {
                    self.entries.remove(i);
                } else {
                    self.entries[i].1 -= 1;
                }
                true
            }
            Err(_) => false,
        }
    }

    /// Multiset union: counts are added elementwise.
    pub fn union(&self, other: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (a, ca) = &self.entries[i];
            let (b, cb) = &other.entries[j];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    entries.push((a.clone(), *ca));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    entries.push((b.clone(), *cb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    entries.push((a.clone(), ca + cb));
                    i += 1;
                    j += 1;
                }
            }
        }
        entries.extend_from_slice(&self.entries[i..]);
        entries.extend_from_slice(&other.entries[j..]);
        Multiset { entries }
    }

    /// `true` if every element occurs in `other` at least as often as here.
    pub fn is_sub_multiset(&self, other: &Self) -> bool {
        self.entries.iter().all(|(e, c)| other.count(e) >= *c)
    }

    /// Keeps only the elements accepted by `keep`.
    pub fn retain(&mut self, mut keep: impl FnMut(&T) -> bool) {
        self.entries.retain(|(e, _)| keep(e));
    }

    pub fn map<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> U) -> Multiset<U> {
        Multiset::from_counts(self.entries.iter().map(|(e, c)| (f(e), *c)))
    }
}

impl<T> Multiset<T> {
    /// Total number of occurrences.
    pub fn len(&self) -> usize {
        self.entries.iter().map(|(_, c)| *c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct elements.
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn max_count(&self) -> u32 {
        self.entries.iter().map(|(_, c)| *c).max().unwrap_or(0)
    }

    /// The canonical encoding: `(element, count)` pairs in ascending element order.
    pub fn iter(&self) -> impl Iterator<Item = (&T, u32)> + '_ {
        self.entries.iter().map(|(e, c)| (e, *c))
    }

    /// Elements with repetition, in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = &T> + '_ {
        self.entries
            .iter()
            .flat_map(|(e, c)| std::iter::repeat_n(e, *c as usize))
    }
}

impl<T: Ord + Clone> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut ms = Multiset::new();
        for e in iter {
            ms.insert(e);
        }
        ms
    }
}

impl<T: fmt::Display> fmt::Display for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (e, c)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if *c == 1 {
                write!(f, "{e}")?;
            } else {
                write!(f, "{e}^{c}")?;
            }
        }
        f.write_str("]")
    }
}

impl<T: fmt::Debug> fmt::Debug for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter().map(|(e, c)| (e, c))).finish()
    }
}

/// Pairwise unions of two sets of multisets, `{a ⊎ b | a ∈ A, b ∈ B}`.
pub fn marking_set_product<T: Ord + Clone>(
    a: &BTreeSet<Multiset<T>>,
    b: &BTreeSet<Multiset<T>>,
) -> BTreeSet<Multiset<T>> {
    a.iter().flat_map(|x| b.iter().map(move |y| x.union(y))).collect()
}
