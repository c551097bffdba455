use distinct_sums::construct::{
    ak90_extend, complement, fgm_terrace, graceful_with_first_diff, graceful_with_first_element,
    is_graceful, ordering_n_minus_2, ordering_without_pair, sequencing_of, three_twizzler, walecki,
    GracefulPermutation, IMPOSSIBLE_FIRST_DIFFERENCES,
};
use distinct_sums::group::{check_ordering, Variant};
use proptest::prelude::*;

fn graceful() -> impl Strategy<Value = GracefulPermutation> {
    (2usize..=30)
        .prop_flat_map(|r| (Just(r), 1..r))
        .prop_filter("possible", |(r, d)| {
            !IMPOSSIBLE_FIRST_DIFFERENCES.contains(&(*d, *r))
        })
        .prop_map(|(r, d)| graceful_with_first_diff(d, r).unwrap().0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn complement_is_a_graceful_involution(p in graceful()) {
        let c = complement(&p);
        prop_assert!(is_graceful(c.entries()));
        prop_assert_eq!(c.differences(), p.differences());
        prop_assert_eq!(complement(&c), p);
    }

    #[test]
    fn every_graceful_permutation_folds_into_a_terrace(p in graceful()) {
        let t = fgm_terrace(&p);
        let n = 2 * p.len() as u64 + 1;
        prop_assert_eq!(t.modulus(), n);
        let b = sequencing_of(&t);
        // Last step of the fold is -r.
        prop_assert_eq!(*b.entries().last().unwrap(), p.len() as u64 + 1);
        let mut sorted = b.entries().to_vec();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (1..n).collect::<Vec<_>>());
    }

    #[test]
    fn rotations_of_a_sequencing_reconstruct_terraces(p in graceful(), shift in 0usize..64) {
        let t = fgm_terrace(&p);
        let b = sequencing_of(&t);
        let i = shift % b.entries().len();
        prop_assert!(b.rotated(i).terrace_from(t.entries()[i]).is_ok());
    }

    #[test]
    fn extension_keeps_the_prefix_differences(core_len in 1usize..10, extra in 0usize..12) {
        let core = walecki(core_len);
        let t = core.last() + extra;
        let p = ak90_extend(&core, t).unwrap();
        prop_assert_eq!(p.len(), core_len + 2 * t);
        prop_assert_eq!(&p.differences()[..core_len - 1], &core.differences()[..]);
    }

    #[test]
    fn prescribed_first_element(len in 1usize..=40, pick in 0usize..40) {
        let first = pick % len + 1;
        let p = graceful_with_first_element(first, len).unwrap();
        prop_assert_eq!(p.first(), first);
        prop_assert!(is_graceful(p.entries()));
    }

    #[test]
    fn n_minus_2_orderings(half in 1u64..80, pick in 0u64..1000) {
        let n = 2 * half + 1;
        let x = pick % (n - 1) + 1;
        let s = ordering_n_minus_2(n, x).unwrap();
        prop_assert_eq!(s.len() as u64, n - 2);
        prop_assert!(!s.entries().contains(&x));
        prop_assert!(check_ordering(&s, Variant::Alspach).valid);
    }

    #[test]
    fn composite_attempts_are_valid_or_refused(half in 4u64..40, a in 1u64..1000, b in 1u64..1000) {
        let n = 2 * half + 1;
        let (x, y) = (a % (n - 1) + 1, b % (n - 1) + 1);
        if let Ok(s) = ordering_without_pair(n, x, y) {
            prop_assert_eq!(s.len() as u64, n - 3);
            prop_assert!(!s.entries().contains(&x) && !s.entries().contains(&y));
            prop_assert!(check_ordering(&s, Variant::Alspach).valid);
        }
    }
}

#[test]
fn twizzler_differences_start_large() {
    for r in 5..40 {
        let p = three_twizzler(r).unwrap();
        assert_eq!(p.first_difference(), Some(r - 2), "r = {r}");
    }
}
