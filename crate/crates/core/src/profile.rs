//! Weighted subsequence-sum profiles.
//!
//! A [`SumProfile`] records, for each selection size `k` and element `g`,
//! whether `g = a_1 x_{j_1} + ... + a_k x_{j_k}` for some `k` distinct indices
//! and weights `a_i` drawn independently from the weight set. Entries are
//! folded in one at a time:
//!
//! ```text
//! new(k, g) = old(k, g) | OR_{a in A} old(k - 1, g - a x)
//! ```
//!
//! Rows are dense bit rows over the group, so each fold is a handful of
//! rotate-and-OR passes per row.

use crate::algebra::{GSequence, GroupElement, GroupSpec, WeightSet};
use crate::bits::{self, ElementSet};
use crate::{Error, Result};

/// Default cap on `|G| * (max_len + 1)` table cells.
pub const DEFAULT_TABLE_BUDGET: usize = 1 << 28;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumProfile {
    group: GroupSpec,
    weights: WeightSet,
    max_len: usize,
    words: usize,
    seq_len: usize,
    table: Vec<u64>,
}

impl SumProfile {
    /// Profile of the empty sequence: only `(0, 0)` is reachable.
    pub fn empty(group: &GroupSpec, weights: &WeightSet, max_len: usize) -> Result<Self> {
        Self::with_budget(group, weights, max_len, DEFAULT_TABLE_BUDGET)
    }

    pub fn with_budget(group: &GroupSpec, weights: &WeightSet, max_len: usize, budget: usize) -> Result<Self> {
        let cells = group.order().checked_mul(max_len + 1).ok_or(Error::Capacity { cells: usize::MAX, budget })?;
        if cells > budget {
            return Err(Error::Capacity { cells, budget });
        }
        let words = bits::words_for(group.order());
        let mut table = vec![0u64; words * (max_len + 1)];
        table[0] = 1;
        Ok(SumProfile { group: group.clone(), weights: weights.clone(), max_len, words, seq_len: 0, table })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn weights(&self) -> &WeightSet {
        &self.weights
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Number of entries folded in so far.
    pub fn sequence_len(&self) -> usize {
        self.seq_len
    }

    pub(crate) fn row_words(&self, k: usize) -> &[u64] {
        &self.table[k * self.words..(k + 1) * self.words]
    }

    /// Whether `g` is a weighted sum of exactly `k` entries. False for `k > max_len`.
    pub fn contains(&self, k: usize, g: &GroupElement) -> bool {
        k <= self.max_len && self.group.check(g).is_ok() && bits::test(self.row_words(k), self.group.index_of(g))
    }

    pub(crate) fn contains_index(&self, k: usize, g: usize) -> bool {
        k <= self.max_len && bits::test(self.row_words(k), g)
    }

    /// Row `k` as a set; empty for `k > max_len`.
    pub fn row(&self, k: usize) -> ElementSet {
        if k > self.max_len {
            return ElementSet::empty(&self.group);
        }
        ElementSet::from_words(self.group.order(), self.row_words(k).to_vec())
    }

    /// Returns the profile of the sequence with `x` appended.
    pub fn extend(&self, x: &GroupElement) -> Result<SumProfile> {
        self.group.check(x)?;
        let orbit = self.group.orbit_indices(self.group.index_of(x), &self.weights);
        let mut out = self.clone();
        self.extend_into(&orbit, &mut out);
        Ok(out)
    }

    /// Writes into `out` the profile after appending an entry whose weighted
    /// orbit is `orbit`. `out` must share this profile's shape.
    pub(crate) fn extend_into(&self, orbit: &[usize], out: &mut SumProfile) {
        debug_assert_eq!(out.table.len(), self.table.len());
        let w = self.words;
        // Rows above seq_len + 1 are empty in both tables.
        let top = self.max_len.min(self.seq_len + 1);
        out.table.copy_from_slice(&self.table);
        for k in 1..=top {
            let dst = &mut out.table[k * w..(k + 1) * w];
            let src = &self.table[(k - 1) * w..k * w];
            if bits::is_zero(src) {
                continue;
            }
            for &t in orbit {
                bits::or_translated(dst, src, t, &self.group);
            }
        }
        out.seq_len = self.seq_len + 1;
    }

    /// Some selection of size `1..=max_len` sums to zero.
    pub fn has_zero_sum(&self) -> bool {
        (1..=self.max_len.min(self.seq_len)).any(|k| self.contains_index(k, 0))
    }
}

/// Builds the profile of `seq` with rows `0..=max_len`.
pub fn sum_profile(seq: &GSequence, weights: &WeightSet, group: &GroupSpec, max_len: usize) -> Result<SumProfile> {
    let idx = seq.indices(group)?;
    let mut cur = SumProfile::empty(group, weights, max_len)?;
    let mut next = cur.clone();
    for &x in &idx {
        let orbit = group.orbit_indices(x, weights);
        cur.extend_into(&orbit, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(cur)
}

/// Sums of nonempty weighted selections, with selection size collapsed away.
///
/// Cheaper than a full [`SumProfile`] when only zero-sum-freeness matters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct NonemptySums {
    row: Vec<u64>,
    scratch: Vec<u64>,
}

impl NonemptySums {
    pub(crate) fn new(group: &GroupSpec) -> Self {
        let w = bits::words_for(group.order());
        NonemptySums { row: vec![0; w], scratch: vec![0; w] }
    }

    pub(crate) fn extend_into(&self, orbit: &[usize], group: &GroupSpec, out: &mut NonemptySums) {
        out.scratch.copy_from_slice(&self.row);
        out.scratch[0] |= 1;
        out.row.copy_from_slice(&self.row);
        for &t in orbit {
            bits::or_translated(&mut out.row, &out.scratch, t, group);
        }
    }

    pub(crate) fn has_zero_sum(&self) -> bool {
        self.row[0] & 1 == 1
    }
}

/// Whether some nonempty subsequence has a weighted sum equal to zero.
pub fn has_weighted_zero_sum(seq: &GSequence, weights: &WeightSet, group: &GroupSpec) -> bool {
    let Ok(idx) = seq.indices(group) else {
        return false;
    };
    indices_have_weighted_zero_sum(&idx, weights, group)
}

pub(crate) fn indices_have_weighted_zero_sum(idx: &[usize], weights: &WeightSet, group: &GroupSpec) -> bool {
    let mut cur = NonemptySums::new(group);
    let mut next = cur.clone();
    for &x in idx {
        cur.extend_into(&group.orbit_indices(x, weights), group, &mut next);
        if next.has_zero_sum() {
            return true;
        }
        std::mem::swap(&mut cur, &mut next);
    }
    false
}

/// Whether some selection of exactly `n` entries has a weighted sum equal to zero.
/// `n = 0` is always true (the empty selection).
///
/// Not subject to the table budget: only rows `0..=n` are kept.
pub fn has_exact_length_weighted_zero_sum(seq: &GSequence, weights: &WeightSet, group: &GroupSpec, n: usize) -> bool {
    if seq.len() < n {
        return false;
    }
    let Ok(idx) = seq.indices(group) else {
        return false;
    };
    indices_have_exact_zero_sum(&idx, weights, group, n)
}

pub(crate) fn indices_have_exact_zero_sum(idx: &[usize], weights: &WeightSet, group: &GroupSpec, n: usize) -> bool {
    if n == 0 {
        return true;
    }
    if idx.len() < n {
        return false;
    }
    let mut cur = SumProfile::with_budget(group, weights, n, usize::MAX).expect("unbounded budget");
    let mut next = cur.clone();
    for &x in idx {
        cur.extend_into(&group.orbit_indices(x, weights), &mut next);
        if next.contains_index(n, 0) {
            return true;
        }
        std::mem::swap(&mut cur, &mut next);
    }
    false
}

/// Enumeration limits for [`oracle_weighted_sums`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBound {
    pub max_len: usize,
    pub max_weights: usize,
}

impl Default for OracleBound {
    fn default() -> Self {
        OracleBound { max_len: 14, max_weights: 4 }
    }
}

/// Brute-force profile with rows `0..=|S|`: walks every subset of indices and
/// every weight assignment. For cross-checking [`sum_profile`] only.
pub fn oracle_weighted_sums(seq: &GSequence, weights: &WeightSet, group: &GroupSpec) -> Result<SumProfile> {
    oracle_weighted_sums_bounded(seq, weights, group, OracleBound::default())
}

pub fn oracle_weighted_sums_bounded(
    seq: &GSequence,
    weights: &WeightSet,
    group: &GroupSpec,
    bound: OracleBound,
) -> Result<SumProfile> {
    if seq.len() > bound.max_len || weights.len() > bound.max_weights {
        return Err(Error::OracleBound {
            len: seq.len(),
            weights: weights.len(),
            max_len: bound.max_len,
            max_weights: bound.max_weights,
        });
    }
    let idx = seq.indices(group)?;
    let mut profile = SumProfile::empty(group, weights, idx.len())?;
    let w = profile.words;
    // Each index is either skipped or taken with one weight; accumulate the
    // plain group sum of the chosen terms without any table lookups.
    #[allow(clippy::too_many_arguments)]
    fn walk(
        pos: usize,
        k: usize,
        acc: usize,
        idx: &[usize],
        weights: &WeightSet,
        group: &GroupSpec,
        table: &mut [u64],
        w: usize,
    ) {
        if pos == idx.len() {
            bits::set(&mut table[k * w..(k + 1) * w], acc);
            return;
        }
        walk(pos + 1, k, acc, idx, weights, group, table, w);
        for a in weights.iter() {
            let term = group.scale_index(a, idx[pos]);
            walk(pos + 1, k + 1, group.add_index(acc, term), idx, weights, group, table, w);
        }
    }
    walk(0, 0, 0, &idx, weights, group, &mut profile.table, w);
    profile.seq_len = idx.len();
    Ok(profile)
}
