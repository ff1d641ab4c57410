//! Randomized and exhaustive instance suites for the lemma checkers.
//!
//! Random suites take the generator from the caller so shards are
//! reproducible from a seed.

use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::*;
use crate::algebra::is_unit_canonical;
use crate::search::{max_zero_sum_free_length, SearchBudget};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub instances: usize,
    pub passed: usize,
    /// Instances where the checked statement held vacuously (e.g. empty `Σ_l`).
    pub vacuous: usize,
    /// Reproduction data for each failing instance.
    pub failures: Vec<Value>,
}

impl SuiteReport {
    fn new(suite: &str, seed: Option<u64>) -> Self {
        SuiteReport { suite: suite.into(), seed, instances: 0, passed: 0, vacuous: 0, failures: Vec::new() }
    }

    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.passed == self.instances
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.instances += other.instances;
        self.passed += other.passed;
        self.vacuous += other.vacuous;
        self.failures.extend(other.failures);
    }
}

fn set_sequence_json(sets: &SetSequence, group: &GroupSpec) -> Value {
    Value::Array(
        sets.sets()
            .iter()
            .map(|s| Value::Array(s.elements(group).iter().map(|e| json!(e.to_string())).collect()))
            .collect(),
    )
}

fn random_group<R: Rng>(rng: &mut R, order_max: usize) -> GroupSpec {
    let order_max = order_max.max(1);
    let pairs: Vec<(u32, u32)> = (2..=order_max as u32)
        .flat_map(|a| (a..=order_max as u32).map(move |b| (a, b)))
        .filter(|&(a, b)| (a * b) as usize <= order_max)
        .collect();
    if pairs.is_empty() || rng.gen_bool(0.5) {
        GroupSpec::cyclic(rng.gen_range(1..=order_max as u32))
    } else {
        let (a, b) = pairs[rng.gen_range(0..pairs.len())];
        GroupSpec::new(vec![a, b]).expect("valid factors")
    }
}

fn random_set<R: Rng>(rng: &mut R, group: &GroupSpec) -> ElementSet {
    let n = group.order();
    let size = rng.gen_range(1..=n);
    ElementSet::from_indices(group, sample(rng, n, size))
}

fn random_set_sequence<R: Rng>(rng: &mut R, group: &GroupSpec, max_sets: usize) -> SetSequence {
    let m = rng.gen_range(1..=max_sets);
    SetSequence::new(group, (0..m).map(|_| random_set(rng, group)).collect()).expect("nonempty sets")
}

fn tally_dgm(report: &mut SuiteReport, l: usize, sets: &SetSequence, group: &GroupSpec) {
    report.instances += 1;
    let r = dgm_bound_check(l, sets, group);
    if r.sumset_size == 0 {
        report.vacuous += 1;
    }
    if r.holds {
        report.passed += 1;
    } else {
        report.failures.push(json!({
            "group": group,
            "l": l,
            "sets": set_sequence_json(sets, group),
            "report": r,
        }));
    }
}

/// `instances` random set sequences over cyclic and two-factor groups of order
/// at most `order_max`, `m <= max_sets`, `0 <= l <= m`.
pub fn dgm_random<R: Rng>(rng: &mut R, seed: u64, instances: usize, order_max: usize, max_sets: usize) -> SuiteReport {
    let mut report = SuiteReport::new("dgm", Some(seed));
    for _ in 0..instances {
        let group = random_group(rng, order_max);
        let sets = random_set_sequence(rng, &group, max_sets);
        let l = rng.gen_range(0..=sets.len());
        tally_dgm(&mut report, l, &sets, &group);
    }
    report
}

/// Memoized primitives for groups of order at most 8, where every subset fits
/// in a byte: sumsets, stabilizers and coset-incidence masks are table lookups.
struct ByteTables {
    /// `sum[x << 8 | y]` is the sumset `x + y`.
    sum: Vec<u8>,
    /// Index into `subgroups` of the stabilizer of each subset.
    stabilizer_of: [usize; 256],
    /// `(|H|, number of cosets)` per distinct stabilizer.
    subgroups: Vec<(usize, usize)>,
    /// `meets[h][a]`: bit `j` set when `a` meets the `j`-th coset of subgroup `h`.
    meets: Vec<[u8; 256]>,
}

impl ByteTables {
    #[allow(clippy::needless_range_loop)]
    fn new(group: &GroupSpec) -> Self {
        let n = group.order();
        assert!(n <= 8, "byte tables need order <= 8, got {n}");
        let full = 1usize << n;
        let as_set = |m: usize| ElementSet::from_indices(group, (0..n).filter(|i| m >> i & 1 == 1));
        let as_byte = |s: &ElementSet| s.iter().fold(0u8, |b, i| b | 1 << i);
        let translate: Vec<Vec<u8>> = (0..full)
            .map(|x| {
                let xs = as_set(x);
                (0..n).map(|t| as_byte(&xs.translated(group, t))).collect()
            })
            .collect();
        let mut sum = vec![0u8; 256 * 256];
        for x in 0..full {
            for y in 0..full {
                sum[x << 8 | y] = (0..n).filter(|t| y >> t & 1 == 1).fold(0, |b, t| b | translate[x][t]);
            }
        }
        let mut stabilizer_of = [0usize; 256];
        let mut keys: Vec<u8> = Vec::new();
        let mut subgroups = Vec::new();
        let mut meets = Vec::new();
        for x in 1..full {
            let h = stabilizer(&as_set(x), group);
            let key = as_byte(&h);
            let id = match keys.iter().position(|&k| k == key) {
                Some(id) => id,
                None => {
                    let cos: Vec<u8> = cosets(&h, group).iter().map(as_byte).collect();
                    let mut row = [0u8; 256];
                    for (a, r) in row.iter_mut().enumerate().take(full) {
                        *r = cos.iter().enumerate().fold(0, |b, (j, &q)| b | u8::from(a as u8 & q != 0) << j);
                    }
                    keys.push(key);
                    subgroups.push((h.len(), cos.len()));
                    meets.push(row);
                    keys.len() - 1
                }
            };
            stabilizer_of[x] = id;
        }
        ByteTables { sum, stabilizer_of, subgroups, meets }
    }

    /// `(|Σ_l|, bound)` for sumset `x`; `None` when `x` is empty.
    fn bound(&self, l: usize, x: u8, sets: &[u8]) -> Option<(usize, i64)> {
        if x == 0 {
            return None;
        }
        let h = self.stabilizer_of[x as usize];
        let (h_len, ncos) = self.subgroups[h];
        let meets = &self.meets[h];
        let coset_sum: usize =
            (0..ncos).map(|j| sets.iter().filter(|&&a| meets[a as usize] >> j & 1 == 1).count().min(l)).sum();
        Some((x.count_ones() as usize, h_len as i64 * (1 - l as i64 + coset_sum as i64)))
    }
}

/// Every multiset of `1 <= m <= max_sets` nonempty subsets of `group` with at
/// most `max_set_size` elements each, and every `1 <= l <= m`. Requires
/// `|G| <= 8`.
///
/// `Σ_l` and the bound do not depend on the order of the sets, so multisets
/// cover all sequences. Instances with `m <= 2`, and any reported failure, are
/// also run through [`dgm_bound_check`] and compared.
pub fn dgm_exhaustive(group: &GroupSpec, max_sets: usize, max_set_size: usize) -> SuiteReport {
    let mut report = SuiteReport::new("dgm-exhaustive", None);
    let tables = ByteTables::new(group);
    let n = group.order();
    let subsets: Vec<u8> =
        (1u16..1 << n).filter(|m| m.count_ones() as usize <= max_set_size).map(|m| m as u8).collect();

    struct Walk<'a> {
        group: &'a GroupSpec,
        tables: &'a ByteTables,
        subsets: &'a [u8],
        max_sets: usize,
        chosen: Vec<u8>,
        report: SuiteReport,
    }

    impl Walk<'_> {
        fn to_sets(&self) -> SetSequence {
            let n = self.group.order();
            SetSequence {
                sets: self
                    .chosen
                    .iter()
                    .map(|&a| ElementSet::from_indices(self.group, (0..n).filter(|i| a >> i & 1 == 1)))
                    .collect(),
            }
        }

        #[allow(clippy::needless_range_loop)]
        fn visit(&mut self, start: usize, rows: &[u8]) {
            let m = self.chosen.len();
            if m > 0 {
                for l in 1..=m {
                    let fast = self.tables.bound(l, rows[l], &self.chosen);
                    let holds = fast.is_none_or(|(size, bound)| size as i64 >= bound);
                    if holds && m > 2 {
                        self.report.instances += 1;
                        self.report.passed += 1;
                        self.report.vacuous += usize::from(fast.is_none());
                        continue;
                    }
                    let sets = self.to_sets();
                    let slow = dgm_bound_check(l, &sets, self.group);
                    let agree = match fast {
                        None => slow.sumset_size == 0,
                        Some((size, bound)) => slow.sumset_size == size && slow.bound == bound,
                    };
                    if agree {
                        tally_dgm(&mut self.report, l, &sets, self.group);
                    } else {
                        self.report.instances += 1;
                        self.report.failures.push(json!({
                            "group": self.group,
                            "l": l,
                            "sets": set_sequence_json(&sets, self.group),
                            "error": "table evaluation disagrees with dgm_bound_check",
                        }));
                    }
                }
            }
            if m == self.max_sets {
                return;
            }
            let mut next = vec![0u8; m + 2];
            for i in start..self.subsets.len() {
                let a = self.subsets[i];
                next[0] = rows[0];
                for k in 1..=m + 1 {
                    let below = self.tables.sum[(rows[k - 1] as usize) << 8 | a as usize];
                    next[k] = if k <= m { rows[k] | below } else { below };
                }
                self.chosen.push(a);
                self.visit(i, &next);
                self.chosen.pop();
            }
        }
    }

    let mut walk =
        Walk { group, tables: &tables, subsets: &subsets, max_sets, chosen: Vec::with_capacity(max_sets), report };
    walk.visit(0, &[1]);
    report = walk.report;
    report
}

/// Cyclic groups and the non-cyclic factorizations of order at most `order_max`
/// (only factor lists with `n_1 | n_2 | ...` and `n_1 > 1`).
pub fn small_groups(order_max: usize) -> Vec<GroupSpec> {
    fn rec(prev: u32, remaining: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() >= 2 {
            out.push(cur.clone());
        }
        let mut next = prev;
        while next as usize <= remaining {
            if next.is_multiple_of(prev) {
                cur.push(next);
                rec(next, remaining / next as usize, cur, out);
                cur.pop();
            }
            next += 1;
        }
    }
    let mut groups: Vec<GroupSpec> = (1..=order_max as u32).map(GroupSpec::cyclic).collect();
    let mut products = Vec::new();
    for first in 2..=order_max as u32 {
        let mut cur = vec![first];
        rec(first, order_max / first as usize, &mut cur, &mut products);
    }
    products.sort();
    groups.extend(products.into_iter().map(|o| GroupSpec::new(o).expect("valid")));
    groups
}

/// Random instances of `Σ_l(A - c) = Σ_l(A) - l c`.
pub fn shift_random<R: Rng>(
    rng: &mut R,
    seed: u64,
    group: &GroupSpec,
    instances: usize,
    max_sets: usize,
) -> SuiteReport {
    let mut report = SuiteReport::new("shift", Some(seed));
    for i in 0..instances {
        let sets = random_set_sequence(rng, group, max_sets);
        // Every fourth instance uses l = |G| when possible, the case used in the proof.
        let l = if i % 4 == 0 && group.order() <= sets.len() { group.order() } else { rng.gen_range(0..=sets.len()) };
        let c = group.element_at(rng.gen_range(0..group.order()));
        report.instances += 1;
        if translation_shift_check(l, &sets, &c, group).expect("valid instance") {
            report.passed += 1;
        } else {
            report.failures.push(json!({
                "group": group,
                "l": l,
                "c": c.to_string(),
                "sets": set_sequence_json(&sets, group),
            }));
        }
    }
    report
}

/// Recheck of a claimed subsequence certificate, using full profile rows.
fn yz_certificate_valid(seq: &GSequence, s1: &GSequence, group: &GroupSpec, davenport: usize) -> bool {
    if s1.len() + davenport < seq.len() + 1 {
        return false;
    }
    if s1.runs().any(|(g, c)| seq.multiplicity(g) < c) {
        return false;
    }
    let Ok(p) = sum_profile(s1, &WeightSet::unit(group), group, s1.len()) else {
        return false;
    };
    (1..=s1.len()).all(|k| p.contains_index(k, 0))
}

/// Calls `f` with every unit-canonical multiset of size `len` over `Z/n`
/// (as sorted indices). With `zero_max`, only those where 0 attains the
/// maximal multiplicity.
fn for_each_sequence(group: &GroupSpec, len: usize, zero_max: bool, f: &mut dyn FnMut(&[usize])) {
    let n = group.order();
    let mut counts = vec![0usize; n];
    let mut buf = Vec::with_capacity(len);
    fn rec(
        g: usize,
        left: usize,
        counts: &mut [usize],
        zero_max: bool,
        buf: &mut Vec<usize>,
        group: &GroupSpec,
        f: &mut dyn FnMut(&[usize]),
    ) {
        let n = counts.len();
        if g == n - 1 {
            if zero_max && g > 0 && left > counts[0] {
                return;
            }
            counts[g] = left;
            buf.clear();
            for (x, &c) in counts.iter().enumerate() {
                buf.extend(std::iter::repeat_n(x, c));
            }
            if is_unit_canonical(buf, group) {
                f(buf);
            }
            return;
        }
        let cap = if zero_max && g > 0 { counts[0].min(left) } else { left };
        for c in 0..=cap {
            counts[g] = c;
            rec(g + 1, left - c, counts, zero_max, buf, group, f);
        }
    }
    rec(0, len, &mut counts, zero_max, &mut buf, group, f);
}

/// For each cyclic `Z/n`, `n <= n_max`: computes `D(Z/n)` by search, then
/// certifies every unit-canonical sequence with 0 of maximal multiplicity and
/// `n + D - 1 <= |S| <= n + D + 1`. Also checks the multiple-of-exponent
/// corollary on every unit-canonical sequence of those lengths.
pub fn yz_exhaustive(n_max: u32) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("yz", None);
    for n in 1..=n_max {
        report.merge(yz_exhaustive_for(n)?);
    }
    Ok(report)
}

pub fn yz_exhaustive_for(n: u32) -> Result<SuiteReport> {
    let group = GroupSpec::cyclic(n);
    let one = WeightSet::unit(&group);
    let davenport = max_zero_sum_free_length(&group, &one, &SearchBudget::for_group(&group))?.value;
    let mut report = SuiteReport::new("yz", None);
    let base = group.order() + davenport - 1;
    for len in base..=base + 2 {
        let mut inner: Result<()> = Ok(());
        for_each_sequence(&group, len, true, &mut |idx| {
            if inner.is_err() {
                return;
            }
            let seq = group.sequence_from_indices(idx);
            report.instances += 1;
            match yz_find_subsequence(&seq, &group, davenport) {
                Ok(YzOutcome::Found(s1)) if yz_certificate_valid(&seq, &s1, &group, davenport) => report.passed += 1,
                Ok(outcome) => report.failures.push(json!({
                    "group": group,
                    "davenport": davenport,
                    "sequence": seq.to_string(),
                    "outcome": match outcome {
                        YzOutcome::Found(s1) => format!("invalid certificate {s1}"),
                        YzOutcome::Absent => "absent".to_string(),
                    },
                })),
                Err(e) => inner = Err(e),
            }
        });
        inner?;
        for_each_sequence(&group, len, false, &mut |idx| {
            let seq = group.sequence_from_indices(idx);
            report.instances += 1;
            match yz_corollary_check(&seq, &group, davenport) {
                Ok(true) => report.passed += 1,
                _ => report.failures.push(json!({
                    "group": group,
                    "davenport": davenport,
                    "sequence": seq.to_string(),
                    "outcome": "corollary failed",
                })),
            }
        });
    }
    Ok(report)
}
