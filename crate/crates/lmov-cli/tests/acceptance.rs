//! Acceptance gate: one test per shipping criterion, each ending in a single
//! `ACCEPTANCE NN <name>: PASS` line on stdout (run with `--nocapture` to see
//! the lines for passing tests).
//!
//! Every comparison in these tests is exact integer or rational equality; the
//! numeric tolerance is zero everywhere. Wall-clock budgets are asserted where
//! the criterion pins one. Case counts are pinned exactly so that a silent
//! shrinkage of a verification range fails the gate.

use std::process::Command;
use std::time::{Duration, Instant};

use lmov_cli::verify::{run_suite, VerifyReport};

fn suite(name: &str) -> (VerifyReport, Duration) {
    let start = Instant::now();
    let report = run_suite(name, None).expect("suite name is registered");
    (report, start.elapsed())
}

fn check(label: &str, report: &VerifyReport, cases: u64, skipped: u64) {
    assert!(
        report.passed(),
        "{label}: FAIL\nfirst failures: {:#?}",
        &report.failures[..report.failures.len().min(5)]
    );
    assert_eq!(
        report.cases_run, cases,
        "{label}: expected {cases} cases, ran {}",
        report.cases_run
    );
    assert_eq!(
        report.skipped, skipped,
        "{label}: expected {skipped} skipped, got {}",
        report.skipped
    );
}

fn pass(number: u32, name: &str, detail: String) {
    println!("ACCEPTANCE {number:02} {name}: PASS ({detail})");
}

#[test]
fn acceptance_01_genus0_integrality() {
    let (report, elapsed) = suite("genus0-int");
    check("ACCEPTANCE 01 genus0-integrality", &report, 14620, 0);
    let budget = Duration::from_secs(10);
    assert!(
        elapsed < budget,
        "ACCEPTANCE 01 genus0-integrality: FAIL (took {elapsed:.2?}, budget {budget:?})"
    );
    pass(1, "genus0-integrality", format!("{} cases in {elapsed:.2?}", report.cases_run));
}

#[test]
fn acceptance_02_pair_integrality_and_symmetry() {
    let (report, elapsed) = suite("pair-int");
    check("ACCEPTANCE 02 pair-integrality", &report, 4225, 0);
    let budget = Duration::from_secs(60);
    assert!(
        elapsed < budget,
        "ACCEPTANCE 02 pair-integrality: FAIL (took {elapsed:.2?}, budget {budget:?})"
    );
    pass(2, "pair-integrality", format!("{} cases in {elapsed:.2?}", report.cases_run));
}

#[test]
fn acceptance_03_bps_tables_all_integral() {
    let (report, elapsed) = suite("bps-int");
    check("ACCEPTANCE 03 bps-integrality", &report, 72, 0);
    let budget = Duration::from_secs(300);
    assert!(
        elapsed < budget,
        "ACCEPTANCE 03 bps-integrality: FAIL (took {elapsed:.2?}, budget {budget:?})"
    );
    pass(3, "bps-integrality", format!("{} cases in {elapsed:.2?}", report.cases_run));
}

#[test]
fn acceptance_04_closed_form_matches_cleared_sum() {
    let (report, elapsed) = suite("closed-form");
    check("ACCEPTANCE 04 closed-form", &report, 64, 0);
    pass(4, "closed-form", format!("{} cases in {elapsed:.2?}", report.cases_run));
}

#[test]
fn acceptance_05_cyclotomic_divisibility() {
    let (report, elapsed) = suite("bracket-div");
    check("ACCEPTANCE 05 cyclotomic-divisibility", &report, 202, 0);
    pass(5, "cyclotomic-divisibility", format!("{} cases in {elapsed:.2?}", report.cases_run));
}

#[test]
fn acceptance_06_symmetric_function_identities() {
    let (cm, cm_elapsed) = suite("cm-series");
    check("ACCEPTANCE 06 symmetric-identities [cm-series]", &cm, 66, 0);
    let (phi, phi_elapsed) = suite("phi");
    check("ACCEPTANCE 06 symmetric-identities [phi]", &phi, 42, 0);
    pass(
        6,
        "symmetric-identities",
        format!(
            "{} + {} cases in {:.2?}",
            cm.cases_run,
            phi.cases_run,
            cm_elapsed + phi_elapsed
        ),
    );
}

#[test]
fn acceptance_07_number_theoretic_lemmas() {
    let (fp, _) = suite("fp-power");
    check("ACCEPTANCE 07 number-theory [fp-power]", &fp, 600, 0);
    let (binom, _) = suite("binom-prime");
    check("ACCEPTANCE 07 number-theory [binom-prime]", &binom, 28303, 0);
    let (units, _) = suite("units-sign");
    check("ACCEPTANCE 07 number-theory [units-sign]", &units, 460, 20);
    let (val, _) = suite("valuation");
    check("ACCEPTANCE 07 number-theory [valuation]", &val, 8325, 0);
    let total = fp.cases_run + binom.cases_run + units.cases_run + val.cases_run;
    pass(7, "number-theory", format!("{total} cases across 4 suites"));
}

#[test]
fn acceptance_08_multi_row_pipeline_agrees() {
    let (report, elapsed) = suite("pipeline");
    check("ACCEPTANCE 08 pipeline", &report, 154, 0);
    pass(8, "pipeline", format!("{} cases in {elapsed:.2?}", report.cases_run));
}

#[test]
fn acceptance_09_genus0_row_of_bps_matches() {
    let (report, elapsed) = suite("genus0-match");
    check("ACCEPTANCE 09 genus0-match", &report, 72, 0);
    pass(9, "genus0-match", format!("{} cases in {elapsed:.2?}", report.cases_run));
}

#[test]
fn acceptance_10_extremal_integrality() {
    let (report, elapsed) = suite("extremal-int");
    check("ACCEPTANCE 10 extremal-integrality", &report, 1040, 0);
    pass(10, "extremal-integrality", format!("{} cases in {elapsed:.2?}", report.cases_run));
}

fn cli_output(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_lmov"))
        .args(args)
        .output()
        .expect("binary spawns");
    (out.stdout, out.status.code().unwrap_or(-1))
}

#[test]
fn acceptance_11_cli_determinism_and_verify_all() {
    let configs: &[&[&str]] = &[
        &["genus0", "--tau", "2", "--max-m", "6", "--format", "json"],
        &["genus0", "--tau", "-3", "--max-m", "5", "--format", "csv"],
        &["pair", "--tau", "1", "--max-m", "4", "--format", "json"],
        &["bps", "--tau", "1", "--m", "3", "--format", "json"],
        &["bps", "--tau", "0", "--m", "1", "--format", "pretty"],
        &["extremal", "--p", "3", "--max-r", "10", "--format", "csv"],
        &["extremal", "--p", "-2", "--max-r", "8", "--format", "json"],
        &["verify", "--suite", "cm-series", "--seed", "7", "--format", "json"],
        &["verify", "--suite", "units-sign", "--format", "pretty"],
    ];
    for args in configs {
        let (first, code_a) = cli_output(args);
        let (second, code_b) = cli_output(args);
        assert_eq!(code_a, 0, "ACCEPTANCE 11 determinism: FAIL (exit {code_a} for {args:?})");
        assert_eq!(code_b, 0, "ACCEPTANCE 11 determinism: FAIL (exit {code_b} on rerun of {args:?})");
        assert_eq!(
            first, second,
            "ACCEPTANCE 11 determinism: FAIL (reruns of {args:?} differ)"
        );
        assert!(!first.is_empty(), "ACCEPTANCE 11 determinism: FAIL (empty output for {args:?})");
    }

    let base: &[&str] = &["pair", "--tau", "2", "--max-m", "5", "--format", "json"];
    let (serial, code_s) = cli_output(&[base, &["--jobs", "1"]].concat());
    let (threaded, code_t) = cli_output(&[base, &["--jobs", "2"]].concat());
    assert_eq!(code_s, 0);
    assert_eq!(code_t, 0);
    assert_eq!(
        serial, threaded,
        "ACCEPTANCE 11 determinism: FAIL (--jobs 1 vs --jobs 2 differ)"
    );

    let (all_out, all_code) = cli_output(&["verify", "--suite", "all", "--format", "csv"]);
    assert_eq!(
        all_code, 0,
        "ACCEPTANCE 11 verify-all: FAIL (exit {all_code})\n{}",
        String::from_utf8_lossy(&all_out)
    );
    pass(
        11,
        "cli-determinism",
        format!("{} configs byte-identical, verify all exit 0", configs.len() + 1),
    );
}
