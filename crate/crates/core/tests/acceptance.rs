//! One test per acceptance criterion, so each shows up as its own pass/fail line.
//! `--nocapture` also prints the measured numbers.

use morrey_embed::acceptance::{self, CriterionResult};

fn check(r: CriterionResult) {
    println!("{r}");
    assert!(r.passed, "{r}");
}

#[test]
fn criterion_1_classical_oracle() {
    check(acceptance::classical_oracle());
}

#[test]
fn criterion_2_norm_evaluators() {
    check(acceptance::norm_evaluators());
}

#[test]
fn criterion_3_index_closed_forms() {
    check(acceptance::index_closed_forms());
}

#[test]
fn criterion_4_index_bounds() {
    check(acceptance::index_bounds());
}

#[test]
fn criterion_5_witness_separation() {
    check(acceptance::witness_separation());
}

#[test]
fn criterion_6_gagliardo_nirenberg() {
    check(acceptance::gagliardo_nirenberg());
}

#[test]
fn criterion_7_morrey_rules() {
    check(acceptance::morrey_rules());
}

#[test]
fn criterion_8_ellq_oracle() {
    check(acceptance::ellq_oracle());
}

#[test]
fn criterion_9_cli_determinism() {
    check(acceptance::cli_determinism());
}

#[test]
fn run_all_reports_nine() {
    let results = acceptance::run_all();
    assert_eq!(results.iter().map(|r| r.id).collect::<Vec<_>>(), (1..=9).collect::<Vec<_>>());
}
