use apsieve_core::psimod::{
    condition_report, enumerate_classes, eliminate_by_psi, eliminate_by_psi_with, gcd_oracle, main_lemma_val,
    theorem_1_1_test, WindowPolicy,
};
use apsieve_core::{PrimeContext, SpaceType, Window};
use proptest::prelude::*;

fn ty(p: u64, halves: &[u32]) -> SpaceType {
    SpaceType::new(PrimeContext::new(p).unwrap(), halves.to_vec()).unwrap()
}

fn win(lo: u32, hi: u32) -> Window {
    Window::new(lo, hi).unwrap()
}

#[test]
fn main_lemma_is_strict_on_grid() {
    for p in [3u64, 5] {
        let ctx = PrimeContext::new(p).unwrap();
        for m in (1..=30u64).filter(|m| (p - 1) % m != 0) {
            for t in 1..=4u64 {
                for i in t..=t * p {
                    let v = main_lemma_val(&ctx, m, t, i).unwrap();
                    assert!((v as u64) < m * t, "p = {p}, m = {m}, t = {t}, i = {i}: {v}");
                }
            }
        }
    }
}

#[test]
fn gcd_failures_are_certified_on_bottom_window() {
    let ctx = PrimeContext::new(3).unwrap();
    let mut failures = 0;
    for a in 2..=40u32 {
        let mut types = vec![vec![a]];
        for b in a..=40 {
            types.push(vec![a, b]);
            for c in b..=40 {
                types.push(vec![a, b, c]);
            }
        }
        for halves in types {
            let space = SpaceType::new(ctx, halves).unwrap();
            if theorem_1_1_test(&space).passed() {
                continue;
            }
            failures += 1;
            let module = enumerate_classes(&space, win(a, 3 * a));
            let report = condition_report(&module).unwrap();
            assert!(report.certifies(), "{space} not certified on [{a}, {}]", 3 * a);
        }
    }
    assert!(failures > 0);
}

#[test]
fn known_example_windows() {
    let report = condition_report(&enumerate_classes(&ty(3, &[4, 8, 12]), win(4, 12))).unwrap();
    assert!(report.certifies());
    let report = condition_report(&enumerate_classes(&ty(3, &[2, 21, 27]), win(21, 81))).unwrap();
    assert!(report.certifies());
    assert_eq!(report.class(21).unwrap().valuation_sum, 16);
    assert_eq!(report.class(27).unwrap().valuation_sum, 17);
}

#[test]
fn lie_group_types_are_never_certified() {
    let groups: &[&[u32]] = &[
        &[2],
        &[2, 2],
        &[2, 3],
        &[2, 4],
        &[2, 6],
        &[2, 2, 2],
        &[2, 2, 3],
        &[2, 2, 4],
        &[2, 2, 6],
        &[2, 3, 4],
        &[2, 4, 6],
        &[2, 3, 4, 5],
        &[2, 4, 6, 8],
        &[2, 4, 4, 6],
        &[2, 6, 8, 12],
        &[2, 5, 6, 8, 9, 12],
    ];
    for halves in groups {
        let space = ty(3, halves);
        for policy in [WindowPolicy::Standard, WindowPolicy::Exhaustive] {
            assert!(eliminate_by_psi_with(&space, policy).is_none(), "{space} certified under {policy:?}");
        }
    }
}

#[test]
fn uncertified_example_stays_uncertified() {
    let space = ty(3, &[2, 3, 9]);
    assert!(eliminate_by_psi_with(&space, WindowPolicy::Exhaustive).is_none());
}

fn small_type() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(2u32..=12, 1..=3).prop_map(|mut v| {
        v.sort_unstable();
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valuation_sums_match_gcd_oracle(halves in small_type(), lo in 1u32..=12, span in 0u32..=20) {
        let space = ty(3, &halves);
        let module = enumerate_classes(&space, win(lo, lo + span));
        prop_assume!(module.classes.len() >= 2);
        let report = condition_report(&module).unwrap();
        for (idx, class) in report.classes.iter().enumerate() {
            let oracle = gcd_oracle(&module, idx, 50).unwrap();
            prop_assert_eq!(oracle.unwrap_finite(), class.valuation_sum);
            prop_assert!(class.valuation_sum <= class.nu_bound);
            prop_assert_eq!(class.passes, class.valuation_sum < class.degree);
        }
    }

    #[test]
    fn certificates_replay(halves in prop::collection::vec(2u32..=60, 1..=3)) {
        let mut halves = halves;
        halves.sort_unstable();
        let space = ty(3, &halves);
        if let Some(cert) = eliminate_by_psi(&space) {
            prop_assert!(cert.replay(&space));
            prop_assert!(cert.report.certifies());
            prop_assert!(cert.report.classes.iter().all(|c| cert.window.contains(c.degree)));
        }
    }

    #[test]
    fn classes_lie_in_window_and_are_realizable(halves in small_type(), lo in 1u32..=20, span in 0u32..=30) {
        let space = ty(5, &halves);
        let w = win(lo, lo + span);
        let module = enumerate_classes(&space, w);
        let realizable = space.monomial_degrees();
        for d in module.degrees() {
            prop_assert!(w.contains(d));
            prop_assert!(realizable.contains_key(&d));
        }
    }
}
