//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line. Run with `--nocapture` to see the lines on success.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use linkage_core::{
    compute_parameters, suite_explicit_equivalence, suite_matching_brute,
    suite_oracle_reachability, suite_powerset_equivalence, suite_separation, suite_shift,
    suite_trace, suite_vertex_order, suite_wiggle_brute, EquivalenceSuite, OrderSuite,
    ParamOverrides, SuiteOutcome, DEFAULT_SEED,
};

fn order_suite() -> &'static OrderSuite {
    static SUITE: OnceLock<OrderSuite> = OnceLock::new();
    SUITE.get_or_init(|| suite_vertex_order(DEFAULT_SEED, 200))
}

fn powerset_suite() -> &'static EquivalenceSuite {
    static SUITE: OnceLock<EquivalenceSuite> = OnceLock::new();
    SUITE.get_or_init(|| suite_powerset_equivalence(DEFAULT_SEED, 100))
}

fn explicit_suite() -> &'static EquivalenceSuite {
    static SUITE: OnceLock<EquivalenceSuite> = OnceLock::new();
    SUITE.get_or_init(|| suite_explicit_equivalence(DEFAULT_SEED, 50))
}

fn report(criterion: usize, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "pass" } else { "FAIL" };
    println!("criterion {criterion:2} {name}: {verdict} ({detail})");
    assert!(pass, "criterion {criterion} {name} failed: {detail}");
}

fn report_outcome(criterion: usize, outcome: &SuiteOutcome, elapsed: Duration, budget: Option<Duration>) {
    let mut detail = format!("{} cases, {:.1}s", outcome.cases, elapsed.as_secs_f64());
    let mut pass = outcome.passed();
    for counterexample in outcome.counterexamples.iter().take(3) {
        detail.push_str(&format!(
            "; seed {}: {}",
            counterexample.seed, counterexample.description
        ));
    }
    if let Some(budget) = budget {
        if elapsed > budget {
            pass = false;
            detail.push_str(&format!("; exceeded {:.0}s budget", budget.as_secs_f64()));
        }
    }
    report(criterion, outcome.name, pass, &detail);
}

#[test]
fn criterion_01_parameter_values() {
    let start = Instant::now();
    let defaults = ParamOverrides::default();
    let p11 = compute_parameters(1, 1, &defaults);
    let p21 = compute_parameters(2, 1, &defaults);
    let p22 = compute_parameters(2, 2, &defaults);
    let expected = [
        (p11.z, 6),
        (p11.w, 1),
        (p11.r, 1),
        (p11.s, 5),
        (p11.t, 19),
        (p11.k_bound, 1),
        (p11.size_exponent(), 28),
        (p21.z, 11),
        (p21.w, 1),
        (p21.r, 2),
        (p21.s, 9),
        (p21.t, 120),
        (p21.k_bound, 2),
        (p22.z, 36),
        (p22.w, 75),
        (p22.r, 300),
        (p22.s, 9),
        (p22.t, 13856),
        (p22.k_bound, 298),
    ];
    let pass = expected.iter().all(|&(got, want)| got == want)
        && start.elapsed() < Duration::from_secs(1);
    report(1, "parameter-values", pass, &format!("{} checks", expected.len()));
}

#[test]
fn criterion_02_oracle_vs_reachability() {
    let start = Instant::now();
    let outcome = suite_oracle_reachability(DEFAULT_SEED, 200);
    report_outcome(2, &outcome, start.elapsed(), Some(Duration::from_secs(10)));
}

#[test]
fn criterion_03_vertex_order() {
    let start = Instant::now();
    let suite = order_suite();
    report_outcome(3, &suite.outcome, start.elapsed(), Some(Duration::from_secs(300)));
}

#[test]
fn criterion_04_separation() {
    let start = Instant::now();
    let outcome = suite_separation(&order_suite().cases);
    report_outcome(4, &outcome, start.elapsed(), Some(Duration::from_secs(300)));
}

#[test]
fn criterion_05_trace() {
    let start = Instant::now();
    let outcome = suite_trace(&order_suite().cases);
    report_outcome(5, &outcome, start.elapsed(), None);
}

#[test]
fn criterion_06_powerset_equivalence() {
    let start = Instant::now();
    let suite = powerset_suite();
    let yes = suite.cases.iter().filter(|case| case.oracle_min.is_some()).count();
    let no = suite.cases.len() - yes;
    let mixed = yes > 0 && no > 0;
    let elapsed = start.elapsed();
    if !mixed {
        report(6, "powerset-vs-oracle", false, &format!("{yes} yes / {no} no: not mixed"));
    }
    report_outcome(6, &suite.outcome, elapsed, Some(Duration::from_secs(600)));
}

#[test]
fn criterion_07_explicit_equivalence() {
    let start = Instant::now();
    let suite = explicit_suite();
    report_outcome(7, &suite.outcome, start.elapsed(), Some(Duration::from_secs(600)));
}

#[test]
fn criterion_08_size_identity() {
    let mut checked = 0;
    let mut failures = Vec::new();
    for case in powerset_suite().cases.iter().chain(explicit_suite().cases.iter()) {
        if case.oracle_min.is_some() {
            checked += 1;
            if case.state_min != case.oracle_min {
                failures.push(format!(
                    "seed {}: walk {:?} vs oracle {:?}",
                    case.seed, case.state_min, case.oracle_min
                ));
            }
        }
    }
    let detail = if failures.is_empty() {
        format!("{checked} feasible cases")
    } else {
        failures.join("; ")
    };
    report(8, "size-identity", failures.is_empty() && checked > 0, &detail);
}

#[test]
fn criterion_09_brute_force_agreement() {
    let start = Instant::now();
    let wiggle = suite_wiggle_brute(DEFAULT_SEED, 500);
    let matching = suite_matching_brute(DEFAULT_SEED, 200);
    let pass = wiggle.passed() && matching.passed();
    let mut detail = format!(
        "{} wiggle pairs, {} matching configs, {:.1}s",
        wiggle.cases,
        matching.cases,
        start.elapsed().as_secs_f64()
    );
    for counterexample in wiggle.counterexamples.iter().chain(&matching.counterexamples).take(3) {
        detail.push_str(&format!(
            "; seed {}: {}",
            counterexample.seed, counterexample.description
        ));
    }
    report(9, "brute-force-agreement", pass, &detail);
}

#[test]
fn criterion_10_shift() {
    let start = Instant::now();
    let outcome = suite_shift(&order_suite().cases);
    report_outcome(10, &outcome, start.elapsed(), None);
}
