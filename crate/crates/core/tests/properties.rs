mod support;

use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rhtkit::graph::GraphComplex;
use rhtkit::model;
use rhtkit::registry::registry;
use std::cell::RefCell;

fn config(seed: u64) -> ProptestConfig {
    ProptestConfig {
        cases: support::CASES,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

thread_local! {
    static GC: RefCell<GraphComplex> = RefCell::new(GraphComplex::new());
}

proptest! {
    #![proptest_config(config(11))]

    #[test]
    fn transferred_structures_are_valid(seed in any::<u64>()) {
        support::transfer_is_valid(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn perturbed_contractions_are_contractions(seed in any::<u64>()) {
        support::perturbed_side_conditions(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn transfer_keeps_shuffle_vanishing(seed in any::<u64>()) {
        support::transfer_keeps_shuffles(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn koszul_dual_is_involutive(seed in any::<u64>()) {
        support::koszul_involutive(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn twisting_by_zero_is_identity(seed in any::<u64>()) {
        support::twist_by_zero(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn bch_is_associative(seed in any::<u64>()) {
        support::bch_associative(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn graph_classes_ignore_labels(seed in any::<u64>()) {
        GC.with(|gc| support::graph_relabel_invariance(&mut gc.borrow_mut(), seed)).map_err(TestCaseError::fail)?;
    }
}

#[test]
fn registry_round_trips_through_text() {
    for entry in registry() {
        let text = model::print(&entry.model);
        let back =
            model::parse(&text).unwrap_or_else(|e| panic!("{}: {}\n{}", entry.name, e, text));
        assert_eq!(back, entry.model, "{}", entry.name);
    }
}
