use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zerosum_core::lemma::suites::{shift_random, small_groups};
use zerosum_core::lemma::{
    cosets, dgm_bound_check, setseq_sum, stabilizer, yz_corollary_check, yz_find_subsequence, SetSequence, YzOutcome,
};
use zerosum_core::{ElementSet, Error, GroupSpec, YzHypothesis};

/// Sums over every choice of `l` distinct members and one element from each.
fn naive_sum(l: usize, sets: &[Vec<usize>], g: &GroupSpec) -> Vec<usize> {
    fn rec(i: usize, left: usize, acc: usize, sets: &[Vec<usize>], g: &GroupSpec, out: &mut Vec<usize>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        if sets.len() - i < left {
            return;
        }
        rec(i + 1, left, acc, sets, g, out);
        for &x in &sets[i] {
            let y = g.index_of(&g.add(&g.element_at(acc), &g.element_at(x)).unwrap());
            rec(i + 1, left - 1, y, sets, g, out);
        }
    }
    let mut out = Vec::new();
    rec(0, l, 0, sets, g, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

fn random_sets<R: Rng>(rng: &mut R, g: &GroupSpec, m: usize) -> Vec<Vec<usize>> {
    (0..m)
        .map(|_| {
            let size = rng.gen_range(1..=g.order().min(4));
            let mut v = sample(rng, g.order(), size).into_vec();
            v.sort_unstable();
            v
        })
        .collect()
}

fn to_setseq(g: &GroupSpec, sets: &[Vec<usize>]) -> SetSequence {
    SetSequence::new(g, sets.iter().map(|s| ElementSet::from_indices(g, s.iter().copied())).collect()).unwrap()
}

#[test]
fn setseq_sum_matches_naive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for g in small_groups(12) {
        for m in 1..=6 {
            for _ in 0..30 {
                let sets = random_sets(&mut rng, &g, m);
                let seq = to_setseq(&g, &sets);
                for l in 0..=m + 1 {
                    let got: Vec<usize> = setseq_sum(l, &seq, &g).iter().collect();
                    assert_eq!(got, naive_sum(l, &sets, &g), "{g} l={l} sets={sets:?}");
                }
            }
        }
    }
}

#[test]
fn stabilizers_are_subgroups_and_sets_are_coset_unions() {
    for g in small_groups(12) {
        let n = g.order();
        let masks: Vec<u64> =
            if n <= 10 { (0..1u64 << n).collect() } else { (0..4096u64).map(|i| i * 7919 % (1 << n)).collect() };
        for mask in masks {
            let x = ElementSet::from_indices(&g, (0..n).filter(|i| mask >> i & 1 == 1));
            let h = stabilizer(&x, &g);
            assert!(h.contains(0));
            for a in h.iter() {
                for b in h.iter() {
                    let s = g.index_of(&g.add(&g.element_at(a), &g.neg(&g.element_at(b)).unwrap()).unwrap());
                    assert!(h.contains(s), "{g}: stabilizer of {x:?} not closed");
                }
            }
            let cs = cosets(&h, &g);
            assert_eq!(cs.len() * h.len(), n);
            for q in &cs {
                assert!(!q.intersects(&x) || q.iter().all(|i| x.contains(i)), "{g}: {x:?} splits a coset");
            }
        }
    }
}

#[test]
fn bound_holds_on_structured_families() {
    // Arithmetic progressions and subgroup cosets, where the bound is tight or nearly so.
    for n in [6u32, 8, 9, 12] {
        let g = GroupSpec::cyclic(n);
        for step in 1..n as usize {
            for len in 1..=4usize {
                let ap: Vec<usize> = (0..len).map(|i| i * step % n as usize).collect();
                for m in 1..=5 {
                    let sets = vec![ap.clone(); m];
                    let seq = to_setseq(&g, &sets);
                    for l in 1..=m {
                        let r = dgm_bound_check(l, &seq, &g);
                        assert!(r.holds, "Z/{n} ap={ap:?} m={m} l={l}: {r:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn shift_identity_on_every_small_group() {
    for (i, g) in small_groups(12).into_iter().enumerate() {
        let r = shift_random(&mut ChaCha8Rng::seed_from_u64(i as u64), i as u64, &g, 100, 6);
        assert!(r.all_passed(), "{g}: {:?}", r.failures);
    }
}

#[test]
fn subsequence_theorem_rejects_bad_hypotheses() {
    let g = GroupSpec::cyclic(4);
    let s = g.parse_sequence("0,1,1,1,1,2,3").unwrap();
    assert!(matches!(
        yz_find_subsequence(&s, &g, 4),
        Err(Error::Hypothesis(YzHypothesis::ZeroNotMaximal { zero_multiplicity: 1, max_multiplicity: 4 }))
    ));
    let short = g.parse_sequence("0,0,1").unwrap();
    assert!(matches!(
        yz_find_subsequence(&short, &g, 4),
        Err(Error::Hypothesis(YzHypothesis::TooShort { length: 3, required: 7 }))
    ));
}

#[test]
fn subsequence_theorem_on_a_product_group() {
    // D(Z/2 x Z/2) = 3, so sequences of length 6 with 0 of maximal multiplicity qualify.
    let g: GroupSpec = "2x2".parse().unwrap();
    let s = g.parse_sequence("0:0,0:0,0:1,0:1,1:0,1:1").unwrap();
    match yz_find_subsequence(&s, &g, 3).unwrap() {
        YzOutcome::Found(s1) => assert!(s1.len() >= 4),
        YzOutcome::Absent => panic!("no subsequence found"),
    }
    assert!(yz_corollary_check(&s, &g, 3).unwrap());
}
