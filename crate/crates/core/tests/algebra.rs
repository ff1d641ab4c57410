mod common;

use proptest::prelude::*;
use zerosum_core::lemma::suites::small_groups;
use zerosum_core::{
    canonicalize_under_units, has_exact_length_weighted_zero_sum, has_weighted_zero_sum, GroupSpec, WeightSet,
};

use common::{multisets, seq};

#[test]
fn group_axioms_for_every_small_group() {
    for g in small_groups(36) {
        let els: Vec<_> = g.elements().collect();
        let zero = g.zero();
        for a in &els {
            assert_eq!(g.add(a, &zero).unwrap(), *a, "{g}");
            assert!(g.add(&g.neg(a).unwrap(), a).unwrap().is_zero(), "{g}");
            for b in &els {
                let ab = g.add(a, b).unwrap();
                assert_eq!(ab, g.add(b, a).unwrap(), "{g}");
                for c in &els {
                    assert_eq!(g.add(&ab, c).unwrap(), g.add(a, &g.add(b, c).unwrap()).unwrap(), "{g}");
                }
            }
        }
    }
}

#[test]
fn index_round_trip_is_lexicographic() {
    let g: GroupSpec = "2x3x4".parse().unwrap();
    let els: Vec<_> = g.elements().collect();
    assert_eq!(els.len(), 24);
    for (i, e) in els.iter().enumerate() {
        assert_eq!(g.index_of(e), i);
        assert_eq!(g.element_at(i), *e);
    }
    assert!(els.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn canonical_form_is_idempotent_and_orbit_constant() {
    for n in 1..=8u32 {
        let g = GroupSpec::cyclic(n);
        for len in 0..=4 {
            for m in multisets(n as usize, len) {
                let s = seq(&g, &m);
                let c = canonicalize_under_units(&s, &g).unwrap();
                assert_eq!(canonicalize_under_units(&c, &g).unwrap(), c);
                assert!(c <= s, "canonical form is the least orbit member");
                for u in g.units() {
                    let us = s.scaled(i64::from(u), &g).unwrap();
                    assert_eq!(canonicalize_under_units(&us, &g).unwrap(), c, "Z/{n} S=({s}) u={u}");
                }
            }
        }
    }
}

#[test]
fn zero_sum_predicates_are_unit_invariant() {
    for n in 2..=7u32 {
        let g = GroupSpec::cyclic(n);
        let weights = [WeightSet::unit(&g), WeightSet::new(&[1, -1], &g).unwrap()];
        for a in &weights {
            for len in 1..=n as usize {
                for m in multisets(n as usize, len) {
                    let s = seq(&g, &m);
                    let free = has_weighted_zero_sum(&s, a, &g);
                    let exact = has_exact_length_weighted_zero_sum(&s, a, &g, n as usize);
                    for u in g.units() {
                        let us = s.scaled(i64::from(u), &g).unwrap();
                        assert_eq!(has_weighted_zero_sum(&us, a, &g), free);
                        assert_eq!(has_exact_length_weighted_zero_sum(&us, a, &g, n as usize), exact);
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn scaling_depends_on_weight_mod_exponent(
        orders in prop::sample::select(vec![vec![7u32], vec![12], vec![2, 4], vec![3, 6], vec![2, 2, 2]]),
        a in -1000i64..1000,
        seed in 0usize..1000,
    ) {
        let g = GroupSpec::new(orders).unwrap();
        let x = g.element_at(seed % g.order());
        let e = i64::from(g.exponent());
        prop_assert_eq!(g.scale(a, &x).unwrap(), g.scale(a.rem_euclid(e), &x).unwrap());
        prop_assert_eq!(g.scale(a, &x).unwrap(), g.scale(a + 3 * e, &x).unwrap());
    }

    #[test]
    fn weight_sets_reduce_and_dedup(raw in prop::collection::vec(-50i64..50, 1..6), n in 1u32..20) {
        let g = GroupSpec::cyclic(n);
        let a = WeightSet::new(&raw, &g).unwrap();
        let mut expect: Vec<u32> = raw.iter().map(|w| w.rem_euclid(i64::from(n)) as u32).collect();
        expect.sort_unstable();
        expect.dedup();
        prop_assert_eq!(a.weights(), expect.as_slice());
    }
}
