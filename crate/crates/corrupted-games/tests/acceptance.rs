//! Acceptance gate: runs every verification suite and prints one pass/fail
//! line per criterion. Each suite is a separate test so failures are
//! attributable and the suites run in parallel.

use corrupted_games::verify::{run_suite, CriterionResult};

fn check(name: &str) {
    let result: CriterionResult = run_suite(name)
        .unwrap_or_else(|| panic!("unknown suite {name}"))
        .unwrap_or_else(|e| panic!("suite {name} errored: {e}"));
    println!(
        "[{}] {} — {}",
        if result.passed { "PASS" } else { "FAIL" },
        result.name,
        result.detail
    );
    assert!(result.passed, "{}: {}", result.name, result.detail);
}

#[test]
fn criterion_01_stationary_residual() {
    check("stationary-residual");
}

#[test]
fn criterion_02_reduction_identity() {
    check("reduction-identity");
}

#[test]
fn criterion_03_logbarrier_solver() {
    check("logbarrier-solver");
}

#[test]
fn criterion_04_regret_relations() {
    check("regret-relations");
}

#[test]
fn criterion_05_equilibrium_gaps() {
    check("equilibrium-gaps");
}

#[test]
fn criterion_06_forced_vertex_floor() {
    check("forced-vertex-floor");
}

#[test]
fn criterion_07_rademacher_scaling() {
    check("rademacher-scaling");
}

#[test]
fn criterion_08_honest_flatness() {
    check("honest-flatness");
}

#[test]
fn criterion_09_markov_stability() {
    check("markov-stability");
}

#[test]
fn criterion_10_learning_rate_laws() {
    check("learning-rate-laws");
}

#[test]
fn criterion_11_rvu_audits() {
    check("rvu-audits");
}

#[test]
fn criterion_12_corruption_adaptivity() {
    check("corruption-adaptivity");
}
