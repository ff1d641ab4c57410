//! Instance checkers for the sumset bound and the subsequence theorem used in
//! the proof of `E_A(n) = D_A(n) + n - 1`, plus the translation identity.

use serde::Serialize;

use crate::algebra::{GSequence, GroupElement, GroupSpec, WeightSet};
use crate::bits::{self, ElementSet};
use crate::error::YzHypothesis;
use crate::profile::sum_profile;
use crate::{Error, Result};

pub mod suites;

/// An ordered list of nonempty subsets `A_1, ..., A_m` of a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSequence {
    sets: Vec<ElementSet>,
}

impl SetSequence {
    pub fn new(group: &GroupSpec, sets: Vec<ElementSet>) -> Result<Self> {
        for (i, s) in sets.iter().enumerate() {
            if s.universe() != group.order() {
                return Err(Error::Precondition(format!("set {i} belongs to a group of order {}", s.universe())));
            }
            if s.is_empty() {
                return Err(Error::Precondition(format!("set {i} is empty")));
            }
        }
        Ok(SetSequence { sets })
    }

    /// `A_i = A x_i` for each entry of `seq`.
    pub fn weighted_orbits(group: &GroupSpec, weights: &WeightSet, seq: &GSequence) -> Result<Self> {
        let sets = seq.entries().iter().map(|x| group.weighted_orbit(x, weights)).collect::<Result<Vec<_>>>()?;
        SetSequence::new(group, sets)
    }

    /// Parses `"1,2;3;0,4"`: sets separated by `;`, elements by `,`.
    pub fn parse(text: &str, group: &GroupSpec) -> Result<Self> {
        let sets = text
            .split(';')
            .map(|part| {
                let elems = part
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| group.parse_element(t))
                    .collect::<Result<Vec<_>>>()?;
                ElementSet::from_elements(group, &elems)
            })
            .collect::<Result<Vec<_>>>()?;
        SetSequence::new(group, sets)
    }

    pub fn sets(&self) -> &[ElementSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Every set translated by `-c`.
    pub fn shifted(&self, group: &GroupSpec, c: &GroupElement) -> Result<Self> {
        group.check(c)?;
        let minus_c = group.neg_index(group.index_of(c));
        Ok(SetSequence { sets: self.sets.iter().map(|s| s.translated(group, minus_c)).collect() })
    }
}

/// Sums of `l` terms taken from distinct members, one term per member.
/// `l = 0` gives `{0}`; `l > m` gives the empty set.
pub fn setseq_sum(l: usize, sets: &SetSequence, group: &GroupSpec) -> ElementSet {
    setseq_sums_upto(l, sets, group).pop().expect("row l present")
}

/// Rows `0..=l` of the (member count, reachable sum) table.
fn setseq_sums_upto(l: usize, sets: &SetSequence, group: &GroupSpec) -> Vec<ElementSet> {
    let w = bits::words_for(group.order());
    let mut rows = vec![vec![0u64; w]; l + 1];
    bits::set(&mut rows[0], 0);
    for (i, set) in sets.sets.iter().enumerate() {
        // Descending so each member contributes at most once.
        for k in (1..=l.min(i + 1)).rev() {
            let (lo, hi) = rows.split_at_mut(k);
            let src = &lo[k - 1];
            if bits::is_zero(src) {
                continue;
            }
            for t in set.iter() {
                bits::or_translated(&mut hi[0], src, t, group);
            }
        }
    }
    rows.into_iter().map(|r| ElementSet::from_words(group.order(), r)).collect()
}

/// `{g : g + X = X}`. The empty set is stabilized by the whole group.
pub fn stabilizer(set: &ElementSet, group: &GroupSpec) -> ElementSet {
    let Some(first) = set.min() else {
        return ElementSet::full(group);
    };
    // g + X = X forces g + first ∈ X, so only X - first needs testing.
    let neg_first = group.neg_index(first);
    ElementSet::from_indices(
        group,
        set.iter()
            .map(|x| group.add_index(x, neg_first))
            .filter(|&g| set.translated(group, g) == *set)
            .collect::<Vec<_>>(),
    )
}

/// Cosets of a subgroup, ordered by least representative.
pub fn cosets(subgroup: &ElementSet, group: &GroupSpec) -> Vec<ElementSet> {
    let mut covered = ElementSet::empty(group);
    let mut out = Vec::new();
    for g in 0..group.order() {
        if covered.contains(g) {
            continue;
        }
        let coset = subgroup.translated(group, g);
        covered.union_with(&coset);
        out.push(coset);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub l: usize,
    pub sumset_size: usize,
    #[serde(serialize_with = "indices")]
    pub stabilizer: ElementSet,
    pub bound: i64,
    pub holds: bool,
}

fn indices<S: serde::Serializer>(set: &ElementSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(set.iter())
}

/// Evaluates `|H| (1 - l + sum over cosets Q of H of min(l, #{i : A_i meets Q}))`
/// with `H` the stabilizer of `Σ_l`, and compares it to `|Σ_l|`.
/// An empty `Σ_l` holds vacuously with bound 0.
pub fn dgm_bound_check(l: usize, sets: &SetSequence, group: &GroupSpec) -> BoundReport {
    let sumset = setseq_sum(l, sets, group);
    if sumset.is_empty() {
        return BoundReport { l, sumset_size: 0, stabilizer: ElementSet::full(group), bound: 0, holds: true };
    }
    let h = stabilizer(&sumset, group);
    let coset_sum: i64 = cosets(&h, group)
        .iter()
        .map(|q| {
            let hits = sets.sets.iter().filter(|a| a.intersects(q)).count();
            hits.min(l) as i64
        })
        .sum();
    let bound = h.len() as i64 * (1 - l as i64 + coset_sum);
    let sumset_size = sumset.len();
    BoundReport { l, sumset_size, stabilizer: h, bound, holds: sumset_size as i64 >= bound }
}

/// `Σ_l(A_1 - c, ..., A_m - c) == Σ_l(A) - l c`.
pub fn translation_shift_check(l: usize, sets: &SetSequence, c: &GroupElement, group: &GroupSpec) -> Result<bool> {
    let lhs = setseq_sum(l, &sets.shifted(group, c)?, group);
    let lc = group.scale_index(group.reduce_weight(l as i64), group.index_of(c));
    let rhs = setseq_sum(l, sets, group).translated(group, group.neg_index(lc));
    Ok(lhs == rhs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum YzOutcome {
    Found(GSequence),
    /// No qualifying subsequence exists: a counterexample to the theorem.
    Absent,
}

/// Whether `0` is a plain sum of exactly `k` entries for every `1 <= k <= |S|`.
pub fn zero_in_every_sumset(seq: &GSequence, group: &GroupSpec) -> Result<bool> {
    let idx = seq.indices(group)?;
    Ok(indices_zero_in_every_sumset(&idx, group))
}

fn indices_zero_in_every_sumset(idx: &[usize], group: &GroupSpec) -> bool {
    let len = idx.len();
    // 0 in Σ_k and σ = 0 give 0 in Σ_{len-k}, so half the rows suffice.
    let total = idx.iter().fold(0, |a, &x| group.add_index(a, x));
    if len == 0 || total != 0 || idx[0] != 0 {
        return len == 0;
    }
    let half = len / 2;
    let seq = group.sequence_from_indices(idx);
    let profile = sum_profile(&seq, &WeightSet::unit(group), group, half).expect("small table");
    (1..=half).all(|k| profile.contains_index(k, 0))
}

/// Checks the hypotheses of the subsequence theorem for `seq`: `0` attains the
/// maximal multiplicity and `|S| >= |G| + D(G) - 1`.
pub fn yz_hypotheses(seq: &GSequence, group: &GroupSpec, davenport: usize) -> Result<()> {
    if davenport == 0 {
        return Err(Error::Hypothesis(YzHypothesis::InvalidDavenport(davenport)));
    }
    group.check(&group.zero())?;
    seq.indices(group)?;
    let zero_multiplicity = seq.multiplicity(&group.zero());
    let max_multiplicity = seq.max_multiplicity();
    if zero_multiplicity != max_multiplicity {
        return Err(Error::Hypothesis(YzHypothesis::ZeroNotMaximal { zero_multiplicity, max_multiplicity }));
    }
    let required = group.order() + davenport - 1;
    if seq.len() < required {
        return Err(Error::Hypothesis(YzHypothesis::TooShort { length: seq.len(), required }));
    }
    Ok(())
}

/// Finds a subsequence `S_1` with `|S_1| >= |S| + 1 - D(G)` and `0` in every
/// `Σ_k(S_1)`, trying longer subsequences first and lexicographically least
/// within a length. `davenport` must be `D(G)`.
pub fn yz_find_subsequence(seq: &GSequence, group: &GroupSpec, davenport: usize) -> Result<YzOutcome> {
    yz_hypotheses(seq, group, davenport)?;
    let idx = seq.indices(group)?;
    let mut counts = vec![0usize; group.order()];
    for &x in &idx {
        counts[x] += 1;
    }
    let min_len = seq.len() + 1 - davenport;
    let mut take = vec![0usize; group.order()];
    let mut buf = Vec::with_capacity(seq.len());
    for len in (min_len..=seq.len()).rev() {
        if pick(0, len, &counts, &mut take, &mut buf, group) {
            return Ok(YzOutcome::Found(group.sequence_from_indices(&buf)));
        }
    }
    Ok(YzOutcome::Absent)
}

/// Enumerates sub-multisets of size `left` over elements `g..`, taking as many
/// copies of smaller elements as possible first (lexicographic order).
fn pick(g: usize, left: usize, counts: &[usize], take: &mut [usize], buf: &mut Vec<usize>, group: &GroupSpec) -> bool {
    if g == counts.len() {
        if left != 0 {
            return false;
        }
        buf.clear();
        for (x, &c) in take.iter().enumerate() {
            buf.extend(std::iter::repeat_n(x, c));
        }
        return indices_zero_in_every_sumset(buf, group);
    }
    let rest: usize = counts[g + 1..].iter().sum();
    let hi = counts[g].min(left);
    let lo = left.saturating_sub(rest);
    if g == 0 && hi == 0 {
        return false;
    }
    for c in (lo.max(usize::from(g == 0))..=hi).rev() {
        take[g] = c;
        if pick(g + 1, left - c, counts, take, buf, group) {
            return true;
        }
    }
    take[g] = 0;
    false
}

/// `0 ∈ Σ_{km}(S)` for every `1 <= k <= (|S| + 1 - D(G)) / m`, `m` the exponent.
/// Meaningful when `|S| >= |G| + D(G) - 1`.
pub fn yz_corollary_check(seq: &GSequence, group: &GroupSpec, davenport: usize) -> Result<bool> {
    let m = group.exponent() as usize;
    let kmax = (seq.len() + 1).saturating_sub(davenport) / m;
    if kmax == 0 {
        return Ok(true);
    }
    let profile = sum_profile(seq, &WeightSet::unit(group), group, kmax * m)?;
    Ok((1..=kmax).all(|k| profile.contains_index(k * m, 0)))
}
