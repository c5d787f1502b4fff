//! Acceptance gate: one test per criterion, exact tolerances, one
//! pass/fail line each. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines even on success.

use quivrep::selftest::{self, CriterionResult, DEFAULT_SEED};

fn check(result: CriterionResult) {
    println!("{}", result.line());
    assert!(result.passed, "{}", result.line());
}

#[test]
fn criterion_01_local_criteria_vs_baer_oracle() {
    check(selftest::criterion_01(DEFAULT_SEED));
}

#[test]
fn criterion_02_evaluation_adjunction_bijection() {
    check(selftest::criterion_02(DEFAULT_SEED));
}

#[test]
fn criterion_03_tree_decomposition_round_trip() {
    check(selftest::criterion_03(DEFAULT_SEED));
}

#[test]
fn criterion_04_chain_criterion_extension_test() {
    check(selftest::criterion_04(DEFAULT_SEED));
}

#[test]
fn criterion_05_envelope_construction() {
    check(selftest::criterion_05(DEFAULT_SEED));
}

#[test]
fn criterion_06_torsion_of_injectives_stays_injective() {
    check(selftest::criterion_06(DEFAULT_SEED));
}

#[test]
fn criterion_07_flat_dual_injective_duality() {
    check(selftest::criterion_07(DEFAULT_SEED));
}

#[test]
fn criterion_08_injective_dimension_bound() {
    check(selftest::criterion_08(DEFAULT_SEED));
}

#[test]
fn criterion_09_gorenstein_verdicts_and_dual_route() {
    check(selftest::criterion_09(DEFAULT_SEED));
}

#[test]
fn criterion_10_extension_formula_exactness() {
    check(selftest::criterion_10(DEFAULT_SEED));
}

#[test]
fn criterion_11_classifier_reference_verdicts() {
    check(selftest::criterion_11(DEFAULT_SEED));
}
