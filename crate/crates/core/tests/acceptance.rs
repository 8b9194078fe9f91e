//! Acceptance suite: one test per criterion at full budgets, printing one
//! pass/fail line each (visible with `--nocapture`). The same criteria
//! back the CLI `selftest` command at reduced budgets.
//!
//! Criteria 3 and 4 pin estimator parameters whose finite-size behavior
//! does not reach the stated windows; they are implemented faithfully and
//! report honest numbers rather than being tuned to pass (details in each
//! failure message).

use corr1::selftest::{run_criterion, Budget, CRITERIA_COUNT};

fn run(id: u32) {
    assert!(id >= 1 && id <= CRITERIA_COUNT);
    let result = run_criterion(id, Budget { full: true });
    println!(
        "{} criterion {}: {} [{:.2}s] - {}",
        if result.passed { "PASS" } else { "FAIL" },
        result.id,
        result.name,
        result.seconds,
        result.details
    );
    assert!(
        result.passed,
        "criterion {} failed: {}",
        result.id, result.details
    );
}

#[test]
fn criterion_01_quadric_example_degrees() {
    run(1);
}

#[test]
fn criterion_02_entropy_below_degree_growth_bound() {
    run(2);
}

#[test]
fn criterion_03_entropy_vanishing_quadric() {
    run(3);
}

#[test]
fn criterion_04_holomorphic_equality_case() {
    run(4);
}

#[test]
fn criterion_05_composition_fiber_oracle() {
    run(5);
}

#[test]
fn criterion_06_diagonal_law() {
    run(6);
}

#[test]
fn criterion_07_submultiplicativity() {
    run(7);
}

#[test]
fn criterion_08_lefschetz_count() {
    run(8);
}

#[test]
fn criterion_09_phi_pinch() {
    run(9);
}

#[test]
fn criterion_10_psi_dichotomy() {
    run(10);
}
