//! The verification battery, one test per criterion.
//!
//! Each test prints its pass/fail line and asserts the criterion,
//! including the stated runtime budgets. Criterion 12 runs the actual
//! `psg suite` binary twice and compares the output bytes.

use psg::suite::{self, CriterionOutcome, DEFAULT_SEED};

fn check(outcome: CriterionOutcome) {
    println!(
        "criterion {:>2} ({}): {} — {}",
        outcome.id,
        outcome.name,
        if outcome.passed { "PASS" } else { "FAIL" },
        outcome.detail
    );
    assert!(
        outcome.passed,
        "criterion {} ({}) failed: {} (within budget: {})",
        outcome.id, outcome.name, outcome.detail, outcome.within_budget
    );
}

#[test]
fn c01_safin_instance_suite() {
    check(suite::criterion_01(DEFAULT_SEED));
}

#[test]
fn c02_large_positive_word_block() {
    check(suite::criterion_02(DEFAULT_SEED));
}

#[test]
fn c03_subjoin_criterion_vs_oracle() {
    check(suite::criterion_03(DEFAULT_SEED));
}

#[test]
fn c04_normal_form_vs_rewriting_oracle() {
    check(suite::criterion_04(DEFAULT_SEED));
}

#[test]
fn c05_small_tripling_suite() {
    check(suite::criterion_05(DEFAULT_SEED));
}

#[test]
fn c06_large_projection_suite() {
    check(suite::criterion_06(DEFAULT_SEED));
}

#[test]
fn c07_counterexample_construction() {
    check(suite::criterion_07(DEFAULT_SEED));
}

#[test]
fn c08_translation_length_convergence() {
    check(suite::criterion_08(DEFAULT_SEED));
}

#[test]
fn c09_reduction_partition_suite() {
    check(suite::criterion_09(DEFAULT_SEED));
}

#[test]
fn c10_short_loxodromic_corpus() {
    check(suite::criterion_10(DEFAULT_SEED));
}

#[test]
fn c11_constant_calculators_exact() {
    check(suite::criterion_11(DEFAULT_SEED));
}

#[test]
fn c12_suite_determinism() {
    let exe = env!("CARGO_BIN_EXE_psg");
    let run = || {
        std::process::Command::new(exe)
            .args(["suite", "--seed", "7"])
            .env("PSG_THREADS", "2")
            .output()
            .expect("psg binary runs")
    };
    let first = run();
    let second = run();
    assert!(
        first.status.success(),
        "suite run failed:\n{}",
        String::from_utf8_lossy(&first.stdout)
    );
    assert_eq!(first.status.code(), second.status.code());
    assert_eq!(
        first.stdout, second.stdout,
        "suite output differs between identical runs"
    );
    println!("criterion 12 (suite_determinism): PASS — two runs, byte-identical output");
}
