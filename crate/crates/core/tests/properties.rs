//! Cross-module properties on random permutations, run through the public API.

use proptest::prelude::*;
use proptest::sample::Index;

use schubert_core::diagram::{dominates, has_northwest_property, restrict_remove};
use schubert_core::incexc::{alternating_sum, cw_inclusion_exclusion, cw_recursive};
use schubert_core::perm::{
    flatten, is_subword, pattern_count, subword_from_mask, subwords_between,
};
use schubert_core::purple::{purple_boxes, purple_family};
use schubert_core::schubert::{
    diagram_sum, principal_specialization, schubert_divdiff, schubert_divdiff_along,
    ReducedWordStrategy,
};
use schubert_core::weyl::{chi, ChiOptions};
use schubert_core::{rothe, BigInt, Permutation, Polynomial};

fn perm(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n)
        .prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn avoider(max_n: usize) -> impl Strategy<Value = Permutation> {
    perm(max_n).prop_filter("avoids 1432 and 1423", |w| w.avoids_1432_1423())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn flatten_inverts_word(w in perm(8)) {
        prop_assert_eq!(flatten(&w.word()), w);
    }

    #[test]
    fn subwords_between_has_the_right_shape(w in perm(6), mask in any::<u64>()) {
        let u = subword_from_mask(&w, mask & ((1 << w.len()) - 1));
        let all = subwords_between(&u, &w).unwrap();
        prop_assert_eq!(all.len(), 1 << (w.len() - u.len()));
        for v in &all {
            prop_assert!(is_subword(&u, v) && is_subword(v, &w.word()));
        }
    }

    #[test]
    fn rothe_has_one_box_per_inversion(w in perm(7)) {
        let d = rothe(&w);
        prop_assert_eq!(d.len(), w.inversions());
        prop_assert!(has_northwest_property(&d));
    }

    #[test]
    fn schubert_is_positive_homogeneous_of_length_degree(w in perm(6)) {
        let s = schubert_divdiff(&w).unwrap();
        prop_assert!(s.is_nonnegative() && s.is_homogeneous());
        prop_assert_eq!(s.degree(), Some(w.inversions() as u32));
    }

    #[test]
    fn schubert_ignores_the_reduced_word(w in perm(6)) {
        let a = schubert_divdiff_along(&w, ReducedWordStrategy::FirstAscent).unwrap();
        let b = schubert_divdiff_along(&w, ReducedWordStrategy::LastAscent).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn specialization_bounds_pattern_counts(w in perm(6)) {
        let bound = 1 + pattern_count(&"132".parse().unwrap(), &w) + pattern_count(&"1432".parse().unwrap(), &w);
        prop_assert!(principal_specialization(&w) >= BigInt::from(bound));
    }

    #[test]
    fn diagram_sum_is_exact_iff_avoiding(w in perm(6)) {
        let exact = diagram_sum(&w) == schubert_divdiff(&w).unwrap();
        prop_assert_eq!(exact, w.avoids_1432_1423());
    }

    #[test]
    fn cw_routes_agree(w in perm(6)) {
        prop_assert_eq!(cw_inclusion_exclusion(&w), cw_recursive(&w));
    }

    #[test]
    fn json_round_trips(w in perm(5)) {
        let s = schubert_divdiff(&w).unwrap();
        prop_assert_eq!(Polynomial::from_json(&s.to_json()).unwrap(), s);
        let d = rothe(&w);
        prop_assert_eq!(schubert_core::Diagram::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn seed_is_purple_and_members_lie_below(w in perm(6), k in any::<Index>()) {
        let d = rothe(&w);
        let k = k.index(w.len()) as u32 + 1;
        let l = w.at(k as usize);
        let purple = purple_boxes(&d, k, l);
        prop_assert!(d.difference(&restrict_remove(&d, k, l)).is_subset(&purple));
        let family = purple_family(&d, k, l);
        for m in &family.members {
            prop_assert!(dominates(m, family.seed()) && m.is_subset(&purple));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn alternating_sums_of_avoiders_are_nonnegative(w in avoider(6), mask in any::<u64>()) {
        let u = subword_from_mask(&w, mask & ((1 << w.len()) - 1));
        let r = alternating_sum(&w, &u).unwrap();
        prop_assert!(r.sum.is_nonnegative(), "{} / {}: {}", w, u, r.sum);
        for t in &r.terms {
            let deg = t.schubert.degree().map(|d| d + t.m.degree());
            prop_assert!(deg.is_none() || deg == Some(w.inversions() as u32));
        }
    }

    #[test]
    fn dual_character_of_rothe_is_schubert(w in perm(5)) {
        prop_assert_eq!(chi(&rothe(&w), &ChiOptions::default()).unwrap(), schubert_divdiff(&w).unwrap());
    }
}
