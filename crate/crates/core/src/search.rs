//! Exact computation of weighted Davenport and EGZ constants.
//!
//! Both constants are one more than the longest sequence avoiding a
//! hereditary property: "no nonempty weighted zero-sum" for `D_A`, "no
//! weighted zero-sum of exactly `n` terms" for `E_A`. The search walks
//! multisets as non-decreasing index sequences, extending each node's sum
//! profile by one entry and cutting the subtree as soon as the property fails.
//! Pre-order over non-decreasing sequences is lexicographic, so the first
//! longest sequence met is the lexicographically least one.
//!
//! Root branches are independent and run on the current rayon pool.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::algebra::{is_unit_canonical, GSequence, GroupSpec, WeightSet};
use crate::error::InconclusiveReason;
use crate::profile::{indices_have_exact_zero_sum, NonemptySums, SumProfile};
use crate::{has_weighted_zero_sum, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstantKind {
    WeightedDavenport,
    WeightedEgz,
    Davenport,
    Egz,
}

impl fmt::Display for ConstantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstantKind::WeightedDavenport => "D_A",
            ConstantKind::WeightedEgz => "E_A",
            ConstantKind::Davenport => "D",
            ConstantKind::Egz => "E",
        })
    }
}

impl Serialize for ConstantKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Longest sequence the search may build. Reaching it with the property
    /// still intact makes the search inconclusive.
    pub max_length: usize,
    pub max_nodes: u64,
    /// Restrict root entries to unit-orbit representatives (cyclic groups only).
    pub allow_unit_pruning: bool,
}

impl SearchBudget {
    pub const DEFAULT_MAX_NODES: u64 = 1_000_000_000;

    /// `max_length = 4|G| + 16`, `max_nodes = 10^9`, pruning on.
    pub fn for_group(group: &GroupSpec) -> Self {
        SearchBudget {
            max_length: 4 * group.order() + 16,
            max_nodes: Self::DEFAULT_MAX_NODES,
            allow_unit_pruning: true,
        }
    }

    pub fn with_max_length(self, max_length: usize) -> Self {
        SearchBudget { max_length, ..self }
    }

    pub fn with_max_nodes(self, max_nodes: u64) -> Self {
        SearchBudget { max_nodes, ..self }
    }

    pub fn with_unit_pruning(self, allow_unit_pruning: bool) -> Self {
        SearchBudget { allow_unit_pruning, ..self }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantResult {
    pub kind: ConstantKind,
    pub group: GroupSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightSet>,
    pub value: usize,
    /// Extremal sequence of length `value - 1`.
    pub witness: GSequence,
    pub nodes_explored: u64,
    #[serde(serialize_with = "millis")]
    pub elapsed: Duration,
}

fn millis<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

/// Per-node state of the walk: a sum profile that can be extended by one entry.
trait Walkable: Clone + Send {
    fn extend_into(&self, orbit: &[usize], group: &GroupSpec, out: &mut Self);
    /// The property the search avoids holds for this node.
    fn blocked(&self) -> bool;
}

impl Walkable for NonemptySums {
    fn extend_into(&self, orbit: &[usize], group: &GroupSpec, out: &mut Self) {
        NonemptySums::extend_into(self, orbit, group, out)
    }

    fn blocked(&self) -> bool {
        self.has_zero_sum()
    }
}

/// Profile with rows `0..=n`; blocked once `0` is a sum of exactly `n` terms.
#[derive(Clone)]
struct ExactRows(SumProfile);

impl Walkable for ExactRows {
    fn extend_into(&self, orbit: &[usize], _group: &GroupSpec, out: &mut Self) {
        self.0.extend_into(orbit, &mut out.0)
    }

    fn blocked(&self) -> bool {
        self.0.contains_index(self.0.max_len(), 0)
    }
}

struct Shared<'a> {
    group: &'a GroupSpec,
    orbits: Vec<Vec<usize>>,
    max_length: usize,
    max_nodes: u64,
    /// Workers publish their node counts in batches of this size.
    flush_every: u64,
    nodes: AtomicU64,
    stop: AtomicBool,
}

#[derive(Default)]
struct BranchOutcome {
    best: Vec<usize>,
    nodes: u64,
    abort: Option<InconclusiveReason>,
}

struct Walker<'s, 'g, S> {
    shared: &'s Shared<'g>,
    states: Vec<S>,
    seq: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    unflushed: u64,
}

impl<S: Walkable> Walker<'_, '_, S> {
    fn count_node(&mut self) -> std::result::Result<(), InconclusiveReason> {
        self.nodes += 1;
        self.unflushed += 1;
        if self.unflushed >= self.shared.flush_every {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> std::result::Result<(), InconclusiveReason> {
        let total = self.shared.nodes.fetch_add(self.unflushed, Ordering::Relaxed) + self.unflushed;
        self.unflushed = 0;
        if total > self.shared.max_nodes {
            self.shared.stop.store(true, Ordering::Relaxed);
            return Err(InconclusiveReason::NodeBudget);
        }
        if self.shared.stop.load(Ordering::Relaxed) {
            return Err(InconclusiveReason::NodeBudget);
        }
        Ok(())
    }

    /// Tries `x` as the next entry after the current sequence.
    fn visit(&mut self, x: usize) -> std::result::Result<(), InconclusiveReason> {
        self.count_node()?;
        let depth = self.seq.len();
        let (head, tail) = self.states.split_at_mut(depth + 1);
        head[depth].extend_into(&self.shared.orbits[x], self.shared.group, &mut tail[0]);
        if tail[0].blocked() {
            return Ok(());
        }
        self.seq.push(x);
        if self.seq.len() > self.best.len() {
            self.best.clone_from(&self.seq);
        }
        if self.seq.len() >= self.shared.max_length {
            self.shared.stop.store(true, Ordering::Relaxed);
            return Err(InconclusiveReason::LengthCap);
        }
        for y in x..self.shared.group.order() {
            self.visit(y)?;
        }
        self.seq.pop();
        Ok(())
    }

    fn run_root(mut self, root: usize) -> BranchOutcome {
        let abort = self.visit(root).err();
        let _ = self.flush();
        BranchOutcome { best: self.best, nodes: self.nodes, abort }
    }
}

fn search<S: Walkable + Sync>(
    group: &GroupSpec,
    weights: &WeightSet,
    root_state: S,
    budget: &SearchBudget,
) -> (Vec<usize>, u64, Option<InconclusiveReason>) {
    let shared = Shared {
        group,
        orbits: (0..group.order()).map(|x| group.orbit_indices(x, weights)).collect(),
        max_length: budget.max_length,
        max_nodes: budget.max_nodes,
        flush_every: (budget.max_nodes / 64).clamp(1, 1 << 12),
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
    };
    if budget.max_length == 0 {
        // Even the empty sequence sits at the cap.
        return (Vec::new(), 0, Some(InconclusiveReason::LengthCap));
    }
    let roots: Vec<usize> = (0..group.order())
        .filter(|&x| !(budget.allow_unit_pruning && group.is_cyclic()) || is_unit_canonical(&[x], group))
        .collect();
    let outcomes: Vec<BranchOutcome> = roots
        .par_iter()
        .map(|&r| {
            let walker = Walker {
                shared: &shared,
                states: vec![root_state.clone(); budget.max_length + 1],
                seq: Vec::with_capacity(budget.max_length),
                best: Vec::new(),
                nodes: 0,
                unflushed: 0,
            };
            walker.run_root(r)
        })
        .collect();
    let mut best = Vec::new();
    let mut nodes = 0;
    let mut abort = None;
    // Roots ascend, so keeping the first strictly longer sequence keeps the
    // lexicographically least one.
    for o in outcomes {
        nodes += o.nodes;
        if o.best.len() > best.len() {
            best = o.best;
        }
        // A length-cap hit anywhere outranks the node-budget stops it triggers.
        abort = match (abort, o.abort) {
            (Some(InconclusiveReason::LengthCap), _) => abort,
            (_, Some(r)) => Some(r),
            (a, None) => a,
        };
    }
    if abort.is_none() && nodes > budget.max_nodes {
        abort = Some(InconclusiveReason::NodeBudget);
    }
    (best, nodes, abort)
}

fn finish(
    kind: ConstantKind,
    group: &GroupSpec,
    weights: Option<&WeightSet>,
    outcome: (Vec<usize>, u64, Option<InconclusiveReason>),
    budget: &SearchBudget,
    started: Instant,
) -> Result<ConstantResult> {
    let (best, nodes, abort) = outcome;
    if let Some(reason) = abort {
        let lower_bound = match reason {
            InconclusiveReason::LengthCap => budget.max_length + 1,
            InconclusiveReason::NodeBudget => best.len() + 1,
        };
        return Err(Error::Inconclusive { kind, reason, lower_bound, nodes });
    }
    Ok(ConstantResult {
        kind,
        group: group.clone(),
        weights: weights.cloned(),
        value: best.len() + 1,
        witness: group.sequence_from_indices(&best),
        nodes_explored: nodes,
        elapsed: started.elapsed(),
    })
}

/// `D_A(G)`: one more than the longest sequence with no nonempty weighted
/// zero-sum subsequence.
pub fn max_zero_sum_free_length(
    group: &GroupSpec,
    weights: &WeightSet,
    budget: &SearchBudget,
) -> Result<ConstantResult> {
    davenport_like(ConstantKind::WeightedDavenport, group, weights, budget)
}

fn davenport_like(
    kind: ConstantKind,
    group: &GroupSpec,
    weights: &WeightSet,
    budget: &SearchBudget,
) -> Result<ConstantResult> {
    let started = Instant::now();
    let shown = (kind == ConstantKind::WeightedDavenport).then_some(weights);
    if weights.contains_zero() {
        return finish(kind, group, shown, (Vec::new(), 0, None), budget, started);
    }
    let outcome = search(group, weights, NonemptySums::new(group), budget);
    finish(kind, group, shown, outcome, budget, started)
}

/// `E_A(G)` with selections of length `n = |G|`, found by searching for the
/// longest sequence without an exact-`n` weighted zero-sum.
pub fn egz_constant(group: &GroupSpec, weights: &WeightSet, n: usize, budget: &SearchBudget) -> Result<ConstantResult> {
    egz_like(ConstantKind::WeightedEgz, group, weights, n, budget)
}

fn egz_like(
    kind: ConstantKind,
    group: &GroupSpec,
    weights: &WeightSet,
    n: usize,
    budget: &SearchBudget,
) -> Result<ConstantResult> {
    if n != group.order() {
        return Err(Error::Precondition(format!("selection length {n} must equal |G| = {}", group.order())));
    }
    let started = Instant::now();
    let shown = (kind == ConstantKind::WeightedEgz).then_some(weights);
    if weights.contains_zero() {
        // Weight 0 turns any n terms into a zero-sum; n - 1 zeros are extremal.
        let zeros = vec![0; n - 1];
        return finish(kind, group, shown, (zeros, 0, None), budget, started);
    }
    let root = ExactRows(SumProfile::with_budget(group, weights, n, crate::profile::DEFAULT_TABLE_BUDGET)?);
    let outcome = search(group, weights, root, budget);
    finish(kind, group, shown, outcome, budget, started)
}

/// Prepends `|G| - 1` zeros to an A-zero-sum-free `W`. The result has no
/// weighted zero-sum of exactly `|G|` terms, so `E_A >= D_A + |G| - 1` whenever
/// `W` is extremal.
pub fn lower_bound_witness(group: &GroupSpec, weights: &WeightSet, free: &GSequence) -> Result<GSequence> {
    if has_weighted_zero_sum(free, weights, group) {
        return Err(Error::Precondition(format!("{free} has a weighted zero-sum subsequence")));
    }
    let n = group.order();
    let out = GSequence::repeat(group.zero(), n - 1).concat(free);
    if indices_have_exact_zero_sum(&out.indices(group)?, weights, group, n) {
        return Err(Error::Postcondition(format!("{out} has a weighted zero-sum of length {n}")));
    }
    Ok(out)
}

/// Classical `D(G)` and `E(G)`, the `A = {1}` case.
pub fn classical_constants(group: &GroupSpec, budget: &SearchBudget) -> Result<(ConstantResult, ConstantResult)> {
    let one = WeightSet::unit(group);
    let d = davenport_like(ConstantKind::Davenport, group, &one, budget)?;
    let e = egz_like(ConstantKind::Egz, group, &one, group.order(), budget)?;
    Ok((d, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::has_exact_length_weighted_zero_sum;

    fn z(n: u32) -> GroupSpec {
        GroupSpec::cyclic(n)
    }

    fn budget(g: &GroupSpec) -> SearchBudget {
        SearchBudget::for_group(g)
    }

    #[test]
    fn trivial_group() {
        let g = z(1);
        let a = WeightSet::unit(&g);
        let d = max_zero_sum_free_length(&g, &a, &budget(&g)).unwrap();
        assert_eq!((d.value, d.witness.len()), (1, 0));
        let e = egz_constant(&g, &a, 1, &budget(&g)).unwrap();
        assert_eq!(e.value, 1);
        let (d, e) = classical_constants(&g, &budget(&g)).unwrap();
        assert_eq!((d.value, e.value), (1, 1));
    }

    #[test]
    fn davenport_z4() {
        let g = z(4);
        let d = max_zero_sum_free_length(&g, &WeightSet::unit(&g), &budget(&g)).unwrap();
        assert_eq!(d.value, 4);
        assert_eq!(d.witness.to_string(), "1,1,1");
        assert_eq!(d.kind, ConstantKind::WeightedDavenport);
    }

    #[test]
    fn egz_z4() {
        let g = z(4);
        let e = egz_constant(&g, &WeightSet::unit(&g), 4, &budget(&g)).unwrap();
        assert_eq!(e.value, 7);
        assert_eq!(e.witness.to_string(), "0,0,0,1,1,1");
    }

    #[test]
    fn plus_minus_one_z8() {
        let g = z(8);
        let a = WeightSet::new(&[1, -1], &g).unwrap();
        let d = max_zero_sum_free_length(&g, &a, &budget(&g)).unwrap();
        assert_eq!(d.value, 4);
        let e = egz_constant(&g, &a, 8, &budget(&g)).unwrap();
        assert_eq!(e.value, 11);
    }

    #[test]
    fn zero_weight_short_circuits() {
        let g = z(6);
        let a = WeightSet::new(&[0, 1], &g).unwrap();
        let d = max_zero_sum_free_length(&g, &a, &budget(&g)).unwrap();
        assert_eq!((d.value, d.nodes_explored), (1, 0));
        let e = egz_constant(&g, &a, 6, &budget(&g)).unwrap();
        assert_eq!(e.value, 6);
        assert!(!has_exact_length_weighted_zero_sum(&e.witness, &a, &g, 6));
    }

    #[test]
    fn egz_requires_group_order() {
        let g = z(6);
        assert!(matches!(egz_constant(&g, &WeightSet::unit(&g), 3, &budget(&g)), Err(Error::Precondition(_))));
    }

    #[test]
    fn length_cap_is_inconclusive() {
        let g = z(7);
        let b = budget(&g).with_max_length(5);
        match max_zero_sum_free_length(&g, &WeightSet::unit(&g), &b) {
            Err(Error::Inconclusive { reason: InconclusiveReason::LengthCap, lower_bound: 6, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        // A cap one above the extremal length is enough.
        let b = budget(&g).with_max_length(7);
        assert_eq!(max_zero_sum_free_length(&g, &WeightSet::unit(&g), &b).unwrap().value, 7);
    }

    #[test]
    fn node_budget_is_inconclusive() {
        let g = z(9);
        let b = budget(&g).with_max_nodes(10);
        let r = egz_constant(&g, &WeightSet::unit(&g), 9, &b);
        assert!(matches!(r, Err(Error::Inconclusive { reason: InconclusiveReason::NodeBudget, .. })), "{r:?}");
    }

    #[test]
    fn classical_small_groups() {
        let g = GroupSpec::new(vec![2, 2]).unwrap();
        let (d, e) = classical_constants(&g, &budget(&g)).unwrap();
        assert_eq!((d.value, e.value), (3, 6));
        assert!(d.weights.is_none());
        let g = z(6);
        let (d, e) = classical_constants(&g, &budget(&g)).unwrap();
        assert_eq!((d.value, e.value), (6, 11));
    }

    #[test]
    fn lower_bound_witness_examples() {
        let g = z(4);
        let one = WeightSet::unit(&g);
        let w = lower_bound_witness(&g, &one, &g.parse_sequence("1,1,1").unwrap()).unwrap();
        assert_eq!(w.to_string(), "0,0,0,1,1,1");

        let g = z(2);
        let w = lower_bound_witness(&g, &WeightSet::unit(&g), &g.parse_sequence("1").unwrap()).unwrap();
        assert_eq!(w.to_string(), "0,1");

        // (1,1) is not {1,-1}-free in Z/5: 1 - 1 = 0.
        let g = z(5);
        let pm = WeightSet::new(&[1, 4], &g).unwrap();
        assert!(matches!(lower_bound_witness(&g, &pm, &g.parse_sequence("1,1").unwrap()), Err(Error::Precondition(_))));
        let w = lower_bound_witness(&g, &pm, &g.parse_sequence("1,2").unwrap()).unwrap();
        assert_eq!(w.to_string(), "0,0,0,0,1,2");
    }
}
