//! Cross-module checks: closed forms against the contracting engine, and
//! merger and welfare results against independent arithmetic.

use exclusivity::analysis::merger::{self, MarketOutcome, OneViLabel, TwoViLabel};
use exclusivity::analysis::welfare::{closed_form, differences, numeric_welfare, WelfareClass};
use exclusivity::contracting::{settle, Firm, Ownership};
use exclusivity::game::DEFAULT_TOL;
use exclusivity::hotelling::{Carriers, ContentAllocation};
use exclusivity::model::{Strategy2, Strategy3};
use exclusivity::sampling::{draws, merger_grid};
use exclusivity::{one_vi, separation, two_vi, ModelParams};
use proptest::prelude::*;

fn r0() -> impl Strategy<Value = ModelParams> {
    (0.5f64..2.0, 0.0f64..1.0, 0.0f64..1.0, 0.01f64..=1.0).prop_map(|(t, fa, fb, l)| {
        ModelParams::new(10.0, fa * 1.45 * t, fb * 1.45 * t, t, 0.0, l)
    })
}

#[test]
fn separation_cells_match_engine() {
    for p in draws(11, 300) {
        for a in Strategy3::ALL {
            for b in Strategy3::ALL {
                let c = separation::cell_profits(&p, a, b).unwrap();
                let s = settle(&p, Ownership::SEPARATION, separation::allocation(a, b)).unwrap();
                assert!((c.pi_a - s.payoff(Firm::A)).abs() < 1e-9);
                assert!((c.pi_b - s.payoff(Firm::B)).abs() < 1e-9);
                assert!((c.pi_1 - s.payoff(Firm::P1)).abs() < 1e-9);
                assert!((c.pi_2 - s.payoff(Firm::P2)).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn two_vi_cells_match_engine() {
    for p in draws(12, 300) {
        let pay = two_vi::two_vi_payoffs(&p).unwrap();
        for a in Strategy2::ALL {
            for b in Strategy2::ALL {
                let s = two_vi::settle_cell(&p, a, b).unwrap();
                assert!((pay.payoff(a, b) - s.payoff(Firm::A)).abs() < 1e-9);
                assert!((pay.payoff(b, a) - s.payoff(Firm::B)).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn one_vi_cells_match_engine() {
    for p in draws(13, 300) {
        for c in one_vi::one_vi_cells(&p).unwrap() {
            let s = settle(&p, Ownership::A1, one_vi::allocation(c.a1, c.b)).unwrap();
            assert!((c.pi_a1 - s.payoff(Firm::A)).abs() < 1e-9);
            assert!((c.pi_b - s.payoff(Firm::B)).abs() < 1e-9);
            assert!((c.pi_2 - s.payoff(Firm::P2)).abs() < 1e-9);
        }
    }
}

#[test]
fn one_vi_best_responses_without_ads() {
    // against A1's E, EA1 is B's best reply; against N both E2 and EA1 are
    for p in merger_grid(14, 500) {
        let cells = one_vi::one_vi_cells(&p).unwrap();
        let b = |i: usize, j: usize| cells[i * 3 + j].pi_b;
        assert!(b(0, 1) >= b(0, 0).max(b(0, 2)) - 1e-12);
        assert!((b(1, 0) - b(1, 1)).abs() < 1e-12);
        assert!(b(1, 0) >= b(1, 2) - 1e-12);
    }
}

#[test]
fn welfare_from_engine_allocations() {
    for p in merger_grid(15, 40) {
        for class in [WelfareClass::BothOnOne, WelfareClass::OneAndBoth] {
            let (cs, sw) = closed_form(&p, class);
            let (ncs, nsw) = numeric_welfare(&p, &class.allocation(), 100_001).unwrap();
            assert!((cs - ncs).abs() < 1e-7, "{p:?}");
            assert!((sw - nsw).abs() < 1e-7);
        }
    }
    // mirrored allocations have the same welfare
    let p = ModelParams::new(10.0, 0.8, 0.5, 1.0, 0.0, 0.5);
    let a = numeric_welfare(&p, &ContentAllocation::new(Carriers::ONLY_2, Carriers::BOTH), 10_001).unwrap();
    let b = numeric_welfare(&p, &ContentAllocation::new(Carriers::BOTH, Carriers::ONLY_2), 10_001).unwrap();
    assert!((a.0 - b.0).abs() < 1e-12);
}

#[test]
fn welfare_difference_changes_sign() {
    let (_, up) = differences(&ModelParams::new(10.0, 1.0, 1.0, 1.0, 0.0, 0.5));
    let (_, down) = differences(&ModelParams::new(10.0, 1.0, 1.0, 0.8, 0.0, 0.5));
    assert!((up - 3.0 / 36.0).abs() < 1e-12);
    assert!(down < 0.0);
}

#[test]
fn merger_outcomes_at_unit_values() {
    let p = |l| ModelParams::new(10.0, 1.0, 1.0, 1.0, 0.0, l);
    assert_eq!(
        merger::merger_b2_first(&p(0.5), TwoViLabel::NE).unwrap().outcome,
        MarketOutcome::TwoIntegrations
    );
    assert_eq!(
        merger::a1_first_sequence(&p(0.95), OneViLabel::NE2, TwoViLabel::NE).unwrap().outcome,
        MarketOutcome::OneIntegration
    );
    assert_eq!(
        merger::a1_first_sequence(&p(0.95), OneViLabel::NE2, TwoViLabel::EN).unwrap().outcome,
        MarketOutcome::NoMerger
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn a1_threshold_is_where_merging_starts_to_pay(p in r0()) {
        let th = merger::a1_threshold(&p);
        prop_assume!((p.lambda - th).abs() > 1e-9);
        let report = merger::merger_a1(&p, OneViLabel::NE2).unwrap();
        prop_assert_eq!(report.incentive, p.lambda > th);
    }

    #[test]
    fn counter_merger_supplier_pays_above_half(p in r0()) {
        prop_assume!((p.lambda - 0.5).abs() > 1e-6 && p.beta > 1e-3 && p.lambda < 1.0);
        let en = merger::counter_merger_b2(&p, OneViLabel::NE2, TwoViLabel::EN).unwrap();
        prop_assert_eq!(en.incentive, p.lambda > 0.5);
        let ne = merger::counter_merger_b2(&p, OneViLabel::NE2, TwoViLabel::NE).unwrap();
        prop_assert!(ne.tie);
    }

    #[test]
    fn separation_pre_merger_is_a_both_on_one_equilibrium(p in r0()) {
        let c = separation::classify_region(&p, DEFAULT_TOL).unwrap();
        prop_assert!(c.pure_equilibria.contains(&("E1".to_string(), "E1".to_string())));
    }
}
