//! Brute-force oracles shared by the integration tests. None of these go
//! through the sum-profile recurrence or the extremal search.

#![allow(dead_code)]

use zerosum_core::{GSequence, GroupSpec, WeightSet};

/// Every multiset of size `len` over the group, as sorted index vectors.
pub fn multisets(order: usize, len: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, len: usize, order: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in start..order {
            cur.push(x);
            rec(x, len, order, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, len, order, &mut Vec::with_capacity(len), &mut out);
    out
}

pub fn seq(group: &GroupSpec, idx: &[usize]) -> GSequence {
    GSequence::new(idx.iter().map(|&i| group.element_at(i)).collect())
}

/// Residue arithmetic on plain integers for `Z/n`.
fn weighted_sums_cyclic(xs: &[u64], weights: &[u64], n: u64) -> Vec<Vec<bool>> {
    // table[k][g]: g is a weighted sum of exactly k of the xs.
    let mut table = vec![vec![false; n as usize]; xs.len() + 1];
    fn walk(pos: usize, k: usize, acc: u64, xs: &[u64], weights: &[u64], n: u64, t: &mut Vec<Vec<bool>>) {
        if pos == xs.len() {
            t[k][acc as usize] = true;
            return;
        }
        walk(pos + 1, k, acc, xs, weights, n, t);
        for &a in weights {
            walk(pos + 1, k + 1, (acc + a * xs[pos]) % n, xs, weights, n, t);
        }
    }
    walk(0, 0, 0, xs, weights, n, &mut table);
    table
}

/// Brute force: some nonempty selection of `xs` has a weighted sum of 0 mod `n`.
pub fn brute_has_zero_sum(xs: &[u64], weights: &[u64], n: u64) -> bool {
    let t = weighted_sums_cyclic(xs, weights, n);
    (1..t.len()).any(|k| t[k][0])
}

/// Brute force: some selection of exactly `len` entries of `xs` has weighted sum 0 mod `n`.
pub fn brute_has_exact_zero_sum(xs: &[u64], weights: &[u64], n: u64, len: usize) -> bool {
    let t = weighted_sums_cyclic(xs, weights, n);
    len < t.len() && t[len][0]
}

/// `D_A(n)` by testing every multiset of each length until none is A-zero-sum-free.
pub fn brute_davenport(n: u64, weights: &[u64]) -> usize {
    if weights.iter().any(|&a| a % n == 0) {
        return 1;
    }
    for len in 1.. {
        let any_free = multisets(n as usize, len).iter().any(|m| {
            let xs: Vec<u64> = m.iter().map(|&x| x as u64).collect();
            !brute_has_zero_sum(&xs, weights, n)
        });
        if !any_free {
            return len;
        }
    }
    unreachable!()
}

pub fn weights_of(a: &WeightSet) -> Vec<u64> {
    a.iter().map(u64::from).collect()
}
