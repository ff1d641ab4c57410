//! Dense bit rows indexed by group elements.
//!
//! Elements are addressed by their mixed-radix index (see
//! [`GroupSpec::index_of`]). Translation by a fixed element is a rotation of
//! the row for cyclic groups and a permutation of bits otherwise.

use std::fmt;

use crate::algebra::{GroupElement, GroupSpec};

pub(crate) const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
pub(crate) fn test(row: &[u64], i: usize) -> bool {
    row[i / WORD] >> (i % WORD) & 1 == 1
}

#[inline]
pub(crate) fn set(row: &mut [u64], i: usize) {
    row[i / WORD] |= 1 << (i % WORD);
}

#[inline]
pub(crate) fn is_zero(row: &[u64]) -> bool {
    row.iter().all(|&w| w == 0)
}

pub(crate) fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * WORD + b)
        })
    })
}

/// `dst |= src << shift`, truncated to `nbits`.
fn or_shl(dst: &mut [u64], src: &[u64], shift: usize, nbits: usize) {
    let (ws, bs) = (shift / WORD, shift % WORD);
    let n = dst.len();
    for i in (ws..n).rev() {
        let j = i - ws;
        let mut v = src[j] << bs;
        if bs != 0 && j > 0 {
            v |= src[j - 1] >> (WORD - bs);
        }
        dst[i] |= v;
    }
    let tail = nbits % WORD;
    if tail != 0 {
        dst[n - 1] &= (1u64 << tail) - 1;
    }
}

/// `dst |= src >> shift`.
#[allow(clippy::needless_range_loop)]
fn or_shr(dst: &mut [u64], src: &[u64], shift: usize) {
    let (ws, bs) = (shift / WORD, shift % WORD);
    let n = src.len();
    for i in 0..n.saturating_sub(ws) {
        let j = i + ws;
        let mut v = src[j] >> bs;
        if bs != 0 && j + 1 < n {
            v |= src[j + 1] << (WORD - bs);
        }
        dst[i] |= v;
    }
}

/// `dst |= src + t`: every set bit `i` of `src` sets bit `i + t` of `dst`.
pub(crate) fn or_translated(dst: &mut [u64], src: &[u64], t: usize, group: &GroupSpec) {
    let n = group.order();
    if t == 0 {
        for (d, s) in dst.iter_mut().zip(src) {
            *d |= *s;
        }
        return;
    }
    if group.is_cyclic() {
        if n <= WORD {
            let w = src[0];
            let mask = if n == WORD { u64::MAX } else { (1u64 << n) - 1 };
            dst[0] |= ((w << t) | (w >> (n - t))) & mask;
        } else {
            or_shl(dst, src, t, n);
            or_shr(dst, src, n - t);
        }
    } else {
        for i in ones(src) {
            set(dst, group.add_index(i, t));
        }
    }
}

/// A subset of a finite abelian group, stored as a bit row over element indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    universe: usize,
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty(group: &GroupSpec) -> Self {
        Self::with_universe(group.order())
    }

    pub(crate) fn with_universe(universe: usize) -> Self {
        ElementSet { universe, words: vec![0; words_for(universe)] }
    }

    pub fn full(group: &GroupSpec) -> Self {
        let mut s = Self::empty(group);
        for i in 0..group.order() {
            set(&mut s.words, i);
        }
        s
    }

    pub(crate) fn from_words(universe: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(universe));
        ElementSet { universe, words }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(group: &GroupSpec, indices: I) -> Self {
        let mut s = Self::empty(group);
        for i in indices {
            assert!(i < s.universe, "index {i} outside group of order {}", s.universe);
            set(&mut s.words, i);
        }
        s
    }

    /// Collects elements, checking each against `group`.
    pub fn from_elements<'a, I>(group: &GroupSpec, elements: I) -> crate::Result<Self>
    where
        I: IntoIterator<Item = &'a GroupElement>,
    {
        let mut s = Self::empty(group);
        for g in elements {
            group.check(g)?;
            set(&mut s.words, group.index_of(g));
        }
        Ok(s)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, index: usize) {
        set(&mut self.words, index);
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.universe && test(&self.words, index)
    }

    pub fn contains_element(&self, group: &GroupSpec, g: &GroupElement) -> bool {
        group.check(g).is_ok() && self.contains(group.index_of(g))
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        is_zero(&self.words)
    }

    /// Indices of members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        ones(&self.words)
    }

    pub fn elements(&self, group: &GroupSpec) -> Vec<GroupElement> {
        self.iter().map(|i| group.element_at(i)).collect()
    }

    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn intersects(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// `self + t`.
    pub fn translated(&self, group: &GroupSpec, t: usize) -> ElementSet {
        let mut out = ElementSet::with_universe(self.universe);
        or_translated(&mut out.words, &self.words, t, group);
        out
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_translate(group: &GroupSpec, src: &[usize], t: usize) -> Vec<usize> {
        let mut v: Vec<usize> = src.iter().map(|&i| group.add_index(i, t)).collect();
        v.sort();
        v
    }

    #[test]
    fn rotation_matches_naive_across_word_boundaries() {
        for n in [1u32, 5, 63, 64, 65, 127, 128, 130, 200] {
            let g = GroupSpec::cyclic(n);
            let members: Vec<usize> =
                (0..n as usize).filter(|i| i % 3 == 0 || i % 7 == 1 || *i + 1 == n as usize).collect();
            let s = ElementSet::from_indices(&g, members.iter().copied());
            for t in 0..n as usize {
                let got: Vec<usize> = s.translated(&g, t).iter().collect();
                assert_eq!(got, naive_translate(&g, &members, t), "n={n} t={t}");
            }
        }
    }

    #[test]
    fn product_translation() {
        let g = GroupSpec::new(vec![2, 3]).unwrap();
        let s = ElementSet::from_indices(&g, [0, 4]);
        let t = g.index_of(&g.element(&[1, 2]).unwrap());
        let got: Vec<usize> = s.translated(&g, t).iter().collect();
        assert_eq!(got, naive_translate(&g, &[0, 4], t));
    }

    #[test]
    fn ones_iterates_in_order() {
        let g = GroupSpec::cyclic(130);
        let s = ElementSet::from_indices(&g, [129, 0, 64, 63]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(s.len(), 4);
        assert_eq!(s.min(), Some(0));
    }
}
