use super::*;
use crate::window::{sum_check, sumset_window, sym_diff_count};
use proptest::prelude::*;

fn w(n: usize, m: &[usize]) -> SetWindow {
    SetWindow::from_members(n, m.iter().copied()).unwrap()
}

/// Is some mask within Hamming distance `t` of `a` in `set`?
fn ball_hits(set: &MaskSet, a: u64, n: usize, t: usize) -> bool {
    set.iter().any(|m| ((m ^ a) & ((1 << (n + 1)) - 1)).count_ones() as usize <= t)
}

#[test]
fn exact_examples() {
    let cfg = SearchConfig::default();

    let out = decide_exact(&w(2, &[0, 1, 2]), &cfg).unwrap();
    let d = out.witness().expect("{0,1,2} is a sumset");
    assert!(sum_check(&d.y, &d.z, &w(2, &[0, 1, 2])));
    assert_eq!(sumset_window(&w(1, &[0, 1]), &w(1, &[0, 1]), 2), w(2, &[0, 1, 2]));

    assert_eq!(decide_exact(&w(2, &[0]), &cfg).unwrap().verdict(), Verdict::Irreducible);

    let empty3 = decide_exact(&SetWindow::empty(3), &cfg).unwrap();
    let d = empty3.witness().expect("all sums can exceed 3");
    assert_eq!(d.y, w(3, &[2, 3]));
    assert_eq!(d.z, w(3, &[2, 3]));

    assert_eq!(decide_exact(&SetWindow::empty(2), &cfg).unwrap().verdict(), Verdict::Irreducible);
}

#[test]
fn first_witness_follows_branch_order() {
    // position 2 tries Z-only before Y-only, so Y picks up 2 rather than
    // stopping at {0,1} + {0,1}
    let d = decide_exact(&w(2, &[0, 1, 2]), &SearchConfig::default()).unwrap();
    let d = d.witness().unwrap();
    assert_eq!((d.y.clone(), d.z.clone()), (w(2, &[0, 2]), w(2, &[0, 1])));
}

#[test]
fn exact_requires_zero_budget() {
    let cfg = SearchConfig::default().with_budget(1);
    assert!(matches!(decide_exact(&w(3, &[0]), &cfg), Err(Error::InvalidConfig(_))));
}

#[test]
fn config_validation() {
    let a = w(3, &[0, 1]);
    assert!(decide_budgeted(&a, &SearchConfig::default().with_budget(5)).is_err());
    assert!(decide_budgeted(&a, &SearchConfig::default().with_size_cap(Some(1))).is_err());
    assert!(decide_budgeted(&a, &SearchConfig::default().with_min_size(0)).is_err());
}

#[test]
fn budgeted_examples() {
    let cfg = SearchConfig::default().with_budget(1);
    let a = w(3, &[0, 1, 3]);
    let out = decide_budgeted(&a, &cfg).unwrap();
    let wit = out.witness().expect("within one flip of a sumset");
    assert!(wit.flips.len() <= 1);
    assert!(sum_check(&wit.decomposition.y, &wit.decomposition.z, &wit.a_prime));
    assert_eq!(sym_diff_count(&a, &wit.a_prime).unwrap(), wit.flips.len());
    // the hand-derived witness is valid too
    assert!(sum_check(&w(3, &[0, 1]), &w(3, &[0, 2]), &w(3, &[0, 1, 2, 3])));

    let a = w(34, &[5, 7, 9]);
    let cfg = SearchConfig { min_size: 1, budget: 2, size_cap: Some(2), node_limit: None };
    let out = decide_budgeted(&a, &cfg).unwrap();
    let wit = out.witness().expect("{0,2} + {5,7} = {5,7,9}");
    assert!(wit.flips.len() <= 2);
    assert!(wit.decomposition.y.cardinality() <= 2 && wit.decomposition.z.cardinality() <= 2);
    assert!(sum_check(&w(34, &[0, 2]), &w(34, &[5, 7]), &a));
}

#[test]
fn e_n_examples() {
    // any capped sumset is in E_n with zero flips
    let x = sumset_window(&w(34, &[1, 4]), &w(34, &[0, 9]), 34);
    assert!(is_in_e_n(&x, 17).unwrap());

    // the empty window: Y = Z = {34} puts every sum above 34
    let out = is_in_e_n_limited(&SetWindow::empty(34), 17, None).unwrap();
    let wit = out.witness().unwrap();
    assert!(wit.flips.is_empty() && wit.a_prime.is_empty());
    assert!(sum_check(&w(34, &[33, 34]), &w(34, &[33, 34]), &SetWindow::empty(34)));

    // a 17-element set cannot be within 2 flips of a sumset of at most
    // 2 × 2 elements
    let x = SetWindow::from_members(34, (0..34).step_by(2)).unwrap();
    assert_eq!(x.cardinality(), 17);
    assert!(!is_in_e_n(&x, 17).unwrap());
}

#[test]
fn e_n_below_k_only_holds_the_empty_set() {
    assert!(is_in_e_n(&SetWindow::empty(5), 17).unwrap());
    assert!(!is_in_e_n(&w(5, &[3]), 17).unwrap());
}

/// Exhaustive check of `E_n` for a small window against the definition.
#[test]
fn e_n_matches_definition_at_n9_k3() {
    let (n, k) = (9, 3);
    let cap = n / k;
    let reachable = oracle_decomposable_masks(n, 1, Some(cap)).unwrap();
    for m in 0u64..1 << (n + 1) {
        let x = SetWindow::from_mask(n, m);
        assert_eq!(is_in_e_n(&x, k).unwrap(), ball_hits(&reachable, m, n, cap), "mask {m:b}");
    }
}

#[test]
fn node_limit_yields_inconclusive() {
    let cfg = SearchConfig::default().with_node_limit(Some(1));
    let out = decide_exact(&w(6, &[0, 2, 3, 5]), &cfg).unwrap();
    assert_eq!(out.verdict(), Verdict::Inconclusive);
}

#[test]
fn oracle_equivalence_small_windows() {
    for n in 0..=9 {
        let oracle = oracle_decomposable_masks(n, 2, None).unwrap();
        for m in 0u64..1 << (n + 1) {
            let a = SetWindow::from_mask(n, m);
            let out = decide_exact(&a, &SearchConfig::default()).unwrap();
            assert_eq!(out.is_decomposable(), oracle.contains(m), "n={n} mask={m:b}");
            if let Some(d) = out.witness() {
                assert!(sum_check(&d.y, &d.z, &a));
                assert!(d.y.cardinality() >= 2 && d.z.cardinality() >= 2);
                assert!(d.y.min() <= d.z.min());
            }
        }
    }
}

#[test]
fn capped_oracle_equivalence() {
    let n = 8;
    for cap in 2..=4 {
        let oracle = oracle_decomposable_masks(n, 2, Some(cap)).unwrap();
        let cfg = SearchConfig::default().with_size_cap(Some(cap));
        for m in 0u64..1 << (n + 1) {
            let out = decide_exact(&SetWindow::from_mask(n, m), &cfg).unwrap();
            assert_eq!(out.is_decomposable(), oracle.contains(m), "cap={cap} mask={m:b}");
        }
    }
}

#[test]
fn zero_budget_matches_exact_on_all_of_0_10() {
    let n = 10;
    let cfg = SearchConfig::default();
    for m in 0u64..1 << (n + 1) {
        let a = SetWindow::from_mask(n, m);
        let exact = decide_exact(&a, &cfg).unwrap();
        let budgeted = decide_budgeted(&a, &cfg).unwrap();
        assert_eq!(exact.verdict(), budgeted.verdict());
        if let (Some(d), Some(b)) = (exact.witness(), budgeted.witness()) {
            assert_eq!(d, &b.decomposition);
            assert!(b.flips.is_empty());
        }
    }
}

#[test]
fn budget_and_cap_are_monotone() {
    let n = 7;
    for m in 0u64..1 << (n + 1) {
        let a = SetWindow::from_mask(n, m);
        for cap in [Some(2), Some(3), Some(4), None] {
            let mut prev = false;
            for t in 0..=3 {
                let cfg = SearchConfig::default().with_budget(t).with_size_cap(cap);
                let now = decide_budgeted(&a, &cfg).unwrap().is_decomposable();
                assert!(!prev || now, "mask={m:b} cap={cap:?} t={t}");
                prev = now;
            }
        }
        for t in 0..=2 {
            let mut prev = false;
            for cap in [Some(2), Some(3), Some(4), Some(5), None] {
                let cfg = SearchConfig::default().with_budget(t).with_size_cap(cap);
                let now = decide_budgeted(&a, &cfg).unwrap().is_decomposable();
                assert!(!prev || now, "mask={m:b} cap={cap:?} t={t}");
                prev = now;
            }
        }
    }
}

#[test]
fn translation_carries_witnesses_forward() {
    // (Y, Z) for A in [0, n] gives (Y, Z + 1) for A + 1 in [0, n + 1]
    for n in 1..=9 {
        for m in 0u64..1 << (n + 1) {
            let a = SetWindow::from_mask(n, m);
            if let Some(d) = decide_exact(&a, &SearchConfig::default()).unwrap().witness() {
                let shifted = a.translate(1, n + 1);
                let y = d.y.restrict(n + 1);
                let z = d.z.translate(1, n + 1);
                assert!(sum_check(&y, &z, &shifted));
                assert!(decide_exact(&shifted, &SearchConfig::default()).unwrap().is_decomposable());
            }
        }
    }
}

#[test]
fn swapped_witnesses_are_witnesses() {
    for m in 0u64..1 << 9 {
        let a = SetWindow::from_mask(8, m);
        if let Some(d) = decide_exact(&a, &SearchConfig::default()).unwrap().witness() {
            let s = d.swapped();
            assert!(sum_check(&s.y, &s.z, &a));
        }
    }
}

#[test]
fn truncation_puts_every_window_within_one_flip() {
    // A ∪ {n} = {0, n − min A} + A, so one flip always suffices when |A| ≥ 2
    for m in 0u64..1 << 9 {
        let a = SetWindow::from_mask(8, m);
        if a.cardinality() < 2 {
            continue;
        }
        let y = w(8, &[0, 8 - a.min().unwrap()]);
        let with_n = if a.contains(8) { a.clone() } else { a.toggled(8).unwrap() };
        assert!(sum_check(&y, &a, &with_n));
        assert!(decide_budgeted(&a, &SearchConfig::default().with_budget(1)).unwrap().is_decomposable());
    }
}

fn window_strategy(n: usize) -> impl Strategy<Value = SetWindow> {
    proptest::collection::btree_set(0..=n, 0..=n + 1).prop_map(move |s| SetWindow::from_members(n, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witnesses_validate_on_random_windows(a in window_strategy(40), t in 0usize..3) {
        let cfg = SearchConfig::default().with_budget(t).with_node_limit(Some(2_000_000));
        let out = decide_budgeted(&a, &cfg).unwrap();
        if let Some(wit) = out.witness() {
            let d = &wit.decomposition;
            prop_assert!(sum_check(&d.y, &d.z, &wit.a_prime));
            prop_assert_eq!(sym_diff_count(&a, &wit.a_prime).unwrap(), wit.flips.len());
            prop_assert!(wit.flips.len() <= t);
        }
    }

    #[test]
    fn sumsets_of_random_factors_are_found(y in window_strategy(30), z in window_strategy(30)) {
        prop_assume!(y.cardinality() >= 2 && z.cardinality() >= 2);
        let a = sumset_window(&y, &z, 30);
        let out = decide_exact(&a, &SearchConfig::default()).unwrap();
        prop_assert!(out.is_decomposable());
    }
}
