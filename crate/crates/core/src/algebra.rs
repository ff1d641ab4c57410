//! Finite abelian groups as products of cyclic factors, sequences over them,
//! weight sets, and the unit-scaling canonical form used to prune searches.
//!
//! Every element has a mixed-radix index with the first factor most
//! significant, so index order coincides with lexicographic order on residue
//! tuples. The searches work on indices; the types here are the public face.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::bits::ElementSet;
use crate::{Error, Result};

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// A finite abelian group `Z/n_1 x ... x Z/n_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    orders: Vec<u32>,
    strides: Vec<usize>,
    order: usize,
    exponent: u32,
}

impl GroupSpec {
    pub fn new(orders: Vec<u32>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidGroup("no cyclic factors".into()));
        }
        if let Some(&bad) = orders.iter().find(|&&n| n == 0) {
            return Err(Error::InvalidGroup(format!("factor order {bad}")));
        }
        let mut order: usize = 1;
        for &n in &orders {
            order = order
                .checked_mul(n as usize)
                .filter(|&o| o <= u32::MAX as usize)
                .ok_or_else(|| Error::InvalidGroup("order too large".into()))?;
        }
        let exponent = orders.iter().fold(1u64, |e, &n| lcm(e, n as u64)) as u32;
        let mut strides = vec![1usize; orders.len()];
        for i in (0..orders.len() - 1).rev() {
            strides[i] = strides[i + 1] * orders[i + 1] as usize;
        }
        Ok(GroupSpec { orders, strides, order, exponent })
    }

    /// `Z/n`. Panics if `n == 0`.
    pub fn cyclic(n: u32) -> Self {
        Self::new(vec![n]).expect("cyclic group order must be positive")
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Single-factor groups only; `Z/2 x Z/3` is not treated as cyclic.
    pub fn is_cyclic(&self) -> bool {
        self.orders.len() == 1
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.orders.len()])
    }

    pub fn element(&self, residues: &[u32]) -> Result<GroupElement> {
        let g = GroupElement(residues.to_vec());
        self.check(&g)?;
        Ok(g)
    }

    /// Validates dimension and residue ranges.
    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if g.0.len() != self.orders.len() {
            return Err(Error::DimensionMismatch { expected: self.orders.len(), found: g.0.len() });
        }
        for (&r, &n) in g.0.iter().zip(&self.orders) {
            if r >= n {
                return Err(Error::ResidueOutOfRange { residue: r as u64, order: n });
            }
        }
        Ok(())
    }

    /// Mixed-radix index of a valid element.
    pub fn index_of(&self, g: &GroupElement) -> usize {
        g.0.iter().zip(&self.strides).map(|(&r, &s)| r as usize * s).sum()
    }

    pub fn element_at(&self, index: usize) -> GroupElement {
        debug_assert!(index < self.order);
        GroupElement(self.orders.iter().zip(&self.strides).map(|(&n, &s)| ((index / s) % n as usize) as u32).collect())
    }

    /// All elements in index (lexicographic) order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element_at(i))
    }

    pub(crate) fn add_index(&self, a: usize, b: usize) -> usize {
        if self.is_cyclic() {
            let s = a + b;
            return if s >= self.order { s - self.order } else { s };
        }
        let mut out = 0;
        for (&n, &s) in self.orders.iter().zip(&self.strides) {
            let n = n as usize;
            let r = (a / s % n + b / s % n) % n;
            out += r * s;
        }
        out
    }

    pub(crate) fn neg_index(&self, a: usize) -> usize {
        let mut out = 0;
        for (&n, &s) in self.orders.iter().zip(&self.strides) {
            let n = n as usize;
            out += (n - a / s % n) % n * s;
        }
        out
    }

    /// `a * g` for a weight already reduced modulo the exponent.
    pub(crate) fn scale_index(&self, a: u32, g: usize) -> usize {
        let mut out = 0;
        for (&n, &s) in self.orders.iter().zip(&self.strides) {
            let n = n as u64;
            out += ((a as u64 * (g / s) as u64 % n) % n) as usize * s;
        }
        out
    }

    pub(crate) fn reduce_weight(&self, a: i64) -> u32 {
        a.rem_euclid(self.exponent as i64) as u32
    }

    pub fn add(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.element_at(self.add_index(self.index_of(g), self.index_of(h))))
    }

    pub fn neg(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(self.element_at(self.neg_index(self.index_of(g))))
    }

    /// `a * g` for any integer `a`, negative values included.
    pub fn scale(&self, a: i64, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(self.element_at(self.scale_index(self.reduce_weight(a), self.index_of(g))))
    }

    /// The set `{a * x : a in A}`.
    pub fn weighted_orbit(&self, x: &GroupElement, weights: &WeightSet) -> Result<ElementSet> {
        self.check(x)?;
        let xi = self.index_of(x);
        Ok(ElementSet::from_indices(self, self.orbit_indices(xi, weights)))
    }

    /// Distinct indices of `a * x`, ascending.
    pub(crate) fn orbit_indices(&self, x: usize, weights: &WeightSet) -> Vec<usize> {
        let mut v: Vec<usize> = weights.iter().map(|a| self.scale_index(a, x)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Residues in `[1, n)` coprime to `n` for cyclic `Z/n`; `[1]` for product groups
    /// (and for `Z/1`).
    pub fn units(&self) -> Vec<u32> {
        if !self.is_cyclic() || self.order == 1 {
            return vec![1];
        }
        let n = self.orders[0];
        (1..n).filter(|&u| gcd(u as u64, n as u64) == 1).collect()
    }

    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        let parts: Vec<&str> = text.trim().split(':').collect();
        if parts.len() != self.orders.len() {
            return Err(Error::Parse(format!(
                "element {text:?} has {} components, group has {}",
                parts.len(),
                self.orders.len()
            )));
        }
        let residues = parts
            .iter()
            .zip(&self.orders)
            .map(|(p, &n)| {
                p.trim()
                    .parse::<i64>()
                    .map(|r| r.rem_euclid(n as i64) as u32)
                    .map_err(|e| Error::Parse(format!("element {text:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupElement(residues))
    }

    /// Comma-separated elements; the empty string is the empty sequence.
    pub fn parse_sequence(&self, text: &str) -> Result<GSequence> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(GSequence::default());
        }
        let entries = text.split(',').map(|t| self.parse_element(t)).collect::<Result<Vec<_>>>()?;
        Ok(GSequence::new(entries))
    }

    pub(crate) fn sequence_from_indices(&self, indices: &[usize]) -> GSequence {
        GSequence::new(indices.iter().map(|&i| self.element_at(i)).collect())
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// `"6"` is `Z/6`; `"2x4"` is `Z/2 x Z/4`.
    fn from_str(s: &str) -> Result<Self> {
        let orders = s
            .trim()
            .split(['x', 'X'])
            .map(|p| p.trim().parse::<u32>().map_err(|e| Error::Parse(format!("group {s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        GroupSpec::new(orders)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|n| format!("Z/{n}")).collect();
        f.write_str(&parts.join(" x "))
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.orders.iter().map(|n| n.to_string()).collect();
        s.serialize_str(&parts.join("x"))
    }
}

/// Residue tuple of a group element. Validity depends on the group it is used with.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(Vec<u32>);

impl GroupElement {
    pub fn residues(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&r| r == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(":")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// A finite multiset of group elements, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GSequence {
    entries: Vec<GroupElement>,
}

impl GSequence {
    pub fn new(mut entries: Vec<GroupElement>) -> Self {
        entries.sort();
        GSequence { entries }
    }

    pub fn entries(&self) -> &[GroupElement] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `v_g(S)`.
    pub fn multiplicity(&self, g: &GroupElement) -> usize {
        let lo = self.entries.partition_point(|e| e < g);
        let hi = self.entries.partition_point(|e| e <= g);
        hi - lo
    }

    /// `h(S)`; zero for the empty sequence.
    pub fn max_multiplicity(&self) -> usize {
        self.runs().map(|(_, c)| c).max().unwrap_or(0)
    }

    pub fn support(&self) -> Vec<GroupElement> {
        self.runs().map(|(g, _)| g.clone()).collect()
    }

    /// `sigma(S)`.
    pub fn total(&self, group: &GroupSpec) -> Result<GroupElement> {
        let mut acc = 0;
        for g in &self.entries {
            group.check(g)?;
            acc = group.add_index(acc, group.index_of(g));
        }
        Ok(group.element_at(acc))
    }

    /// Distinct elements with their multiplicities, ascending.
    pub fn runs(&self) -> impl Iterator<Item = (&GroupElement, usize)> + '_ {
        self.entries.chunk_by(|a, b| a == b).map(|c| (&c[0], c.len()))
    }

    pub fn concat(&self, other: &GSequence) -> GSequence {
        let mut v = self.entries.clone();
        v.extend_from_slice(&other.entries);
        GSequence::new(v)
    }

    pub fn repeat(g: GroupElement, times: usize) -> GSequence {
        GSequence { entries: vec![g; times] }
    }

    /// `uS`: every entry scaled by `u`, re-sorted.
    pub fn scaled(&self, u: i64, group: &GroupSpec) -> Result<GSequence> {
        let v = self.entries.iter().map(|g| group.scale(u, g)).collect::<Result<Vec<_>>>()?;
        Ok(GSequence::new(v))
    }

    pub(crate) fn indices(&self, group: &GroupSpec) -> Result<Vec<usize>> {
        self.entries.iter().map(|g| group.check(g).map(|_| group.index_of(g))).collect()
    }
}

impl fmt::Display for GSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl Serialize for GSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Lexicographically least `uS` over the units `u` of `Z/n`. Product groups
/// are returned unchanged.
pub fn canonicalize_under_units(seq: &GSequence, group: &GroupSpec) -> Result<GSequence> {
    let idx = seq.indices(group)?;
    Ok(group.sequence_from_indices(&canonical_indices(&idx, group)))
}

pub(crate) fn canonical_indices(seq: &[usize], group: &GroupSpec) -> Vec<usize> {
    let mut best = seq.to_vec();
    best.sort_unstable();
    if !group.is_cyclic() {
        return best;
    }
    let mut scratch = Vec::with_capacity(seq.len());
    for u in group.units().into_iter().skip(1) {
        scratch.clear();
        scratch.extend(seq.iter().map(|&x| group.scale_index(u, x)));
        scratch.sort_unstable();
        if scratch < best {
            std::mem::swap(&mut scratch, &mut best);
        }
    }
    best
}

pub(crate) fn is_unit_canonical(sorted: &[usize], group: &GroupSpec) -> bool {
    if !group.is_cyclic() {
        return true;
    }
    let mut scratch = Vec::with_capacity(sorted.len());
    for u in group.units().into_iter().skip(1) {
        scratch.clear();
        scratch.extend(sorted.iter().map(|&x| group.scale_index(u, x)));
        scratch.sort_unstable();
        if scratch.as_slice() < sorted {
            return false;
        }
    }
    true
}

/// A nonempty set of integer weights, reduced modulo the group exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightSet {
    weights: Vec<u32>,
    exponent: u32,
}

impl WeightSet {
    pub fn new(raw: &[i64], group: &GroupSpec) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyWeightSet);
        }
        let mut weights: Vec<u32> = raw.iter().map(|&a| group.reduce_weight(a)).collect();
        weights.sort_unstable();
        weights.dedup();
        Ok(WeightSet { weights, exponent: group.exponent() })
    }

    /// `{1}`, the unweighted case.
    pub fn unit(group: &GroupSpec) -> Self {
        Self::new(&[1], group).expect("nonempty")
    }

    pub fn parse(text: &str, group: &GroupSpec) -> Result<Self> {
        let raw = text
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Parse(format!("weight {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&raw, group)
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.weights.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn contains_zero(&self) -> bool {
        self.weights[0] == 0
    }
}

impl fmt::Display for WeightSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(|a| a.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for WeightSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
