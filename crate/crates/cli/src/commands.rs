//! Command implementations. The thin argument parser in `main` converts
//! flags into a `RunConfig`; everything observable happens here so the
//! integration tests and fuzz harness can drive commands without a process
//! boundary.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use linkage_core::{
    compute_parameters, extract_linkage, generate_instance, minimum_linkage,
    minimum_linkage_size_via_h, parse_bundle, serialize_instance, suite_explicit_equivalence,
    suite_matching_brute, suite_oracle_reachability, suite_powerset_equivalence,
    suite_separation, suite_shift, suite_trace, suite_vertex_order, suite_wiggle_brute,
    trace_linkage, validate_linkage, vertex_order, HMode, ParamOverrides, Parameters,
    ProblemInstance, SearchBudget, SearchLimits, SizeVerdict, SuiteOutcome,
};

use crate::report::{RunReport, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Oracle,
    Powerset,
    Explicit,
    Trace,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Mode::Oracle => "oracle",
            Mode::Powerset => "powerset",
            Mode::Explicit => "explicit",
            Mode::Trace => "trace",
        };
        f.write_str(text)
    }
}

#[derive(Debug, Clone)]
pub enum CommandSpec {
    Params {
        k: usize,
        c: usize,
    },
    Gen {
        seed: u64,
        n: usize,
        k: usize,
        c: usize,
        density: f64,
        plant: bool,
    },
    Solve {
        input: PathBuf,
        mode: Mode,
        overrides: ParamOverrides,
        max_states: Option<usize>,
        timeout_s: Option<u64>,
    },
    Verify {
        seed: u64,
        suites: Vec<String>,
        count: Option<usize>,
    },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandSpec,
    pub out: Option<PathBuf>,
}

/// Usage-level failure: bad arguments, unreadable input, malformed files.
/// The driver maps it to exit code 3.
#[derive(Debug, Clone)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CliError {}

fn usage(message: impl Into<String>) -> CliError {
    CliError(message.into())
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Report(RunReport),
    /// Raw payload written as-is: the generated instance text.
    Plain(String),
}

/// Canonical suite order; report assembly and artifact naming follow it.
pub const SUITE_NAMES: [&str; 9] = [
    "reachability",
    "order",
    "separation",
    "trace",
    "powerset",
    "explicit",
    "wiggle",
    "matching",
    "shift",
];

/// Parses the `--override z=..,w=..,r=..,s=..,t=..,K=..` argument. Any
/// subset of keys is accepted, each at most once.
pub fn parse_overrides(text: &str) -> Result<ParamOverrides, String> {
    let mut overrides = ParamOverrides::default();
    for part in text.split(',') {
        let part = part.trim();
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("override `{part}` is not key=value"))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| format!("override value in `{part}` is not a number"))?;
        let slot = match key.trim() {
            "z" => &mut overrides.z,
            "w" => &mut overrides.w,
            "r" => &mut overrides.r,
            "s" => &mut overrides.s,
            "t" => &mut overrides.t,
            "K" => &mut overrides.k_bound,
            other => return Err(format!("unknown override key `{other}`")),
        };
        if slot.is_some() {
            return Err(format!("override key `{}` given twice", key.trim()));
        }
        *slot = Some(value);
    }
    Ok(overrides)
}

pub fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    match &config.command {
        CommandSpec::Params { k, c } => cmd_params(*k, *c).map(Outcome::Report),
        CommandSpec::Gen { seed, n, k, c, density, plant } => {
            cmd_gen(*seed, *n, *k, *c, *density, *plant).map(Outcome::Plain)
        }
        CommandSpec::Solve { input, mode, overrides, max_states, timeout_s } => {
            cmd_solve(input, *mode, overrides, *max_states, *timeout_s).map(Outcome::Report)
        }
        CommandSpec::Verify { seed, suites, count } => {
            cmd_verify(*seed, suites, *count, config.out.as_deref()).map(Outcome::Report)
        }
    }
}

fn push_parameters(report: &mut RunReport, params: &Parameters) {
    report.push("k", params.k);
    report.push("c", params.c);
    report.push("z", params.z);
    report.push("w", params.w);
    report.push("r", params.r);
    report.push("s", params.s);
    report.push("t", params.t);
    report.push("K", params.k_bound);
    report.push("exponent", params.size_exponent());
    report.push("overridden", params.overridden);
}

pub fn cmd_params(k: usize, c: usize) -> Result<RunReport, CliError> {
    if k == 0 || c == 0 {
        return Err(usage("params requires k >= 1 and c >= 1"));
    }
    let params = compute_parameters(k, c, &ParamOverrides::default());
    let mut report = RunReport::new("params");
    push_parameters(&mut report, &params);
    report.push(
        "table",
        format!(
            "z={} w={} r={} s={} t={} K={} exponent={}",
            params.z,
            params.w,
            params.r,
            params.s,
            params.t,
            params.k_bound,
            params.size_exponent()
        ),
    );
    report.push("growth", "exponent grows like 4(ck)^5 for large c and k");
    report.verdict = Verdict::Pass;
    Ok(report)
}

pub fn cmd_gen(
    seed: u64,
    n: usize,
    k: usize,
    c: usize,
    density: f64,
    plant: bool,
) -> Result<String, CliError> {
    if !(0.0..=1.0).contains(&density) {
        return Err(usage("density must lie in [0, 1]"));
    }
    let instance = generate_instance(seed, n, k, c, density, plant)
        .map_err(|e| usage(format!("generation failed: {e}")))?;
    Ok(serialize_instance(&instance))
}

fn load_instance(input: &Path) -> Result<ProblemInstance, CliError> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| usage(format!("cannot read {}: {e}", input.display())))?;
    let bundle =
        parse_bundle(&text).map_err(|e| usage(format!("{}: {e}", input.display())))?;
    Ok(bundle.instance)
}

pub fn cmd_solve(
    input: &Path,
    mode: Mode,
    overrides: &ParamOverrides,
    max_states: Option<usize>,
    timeout_s: Option<u64>,
) -> Result<RunReport, CliError> {
    let instance = load_instance(input)?;
    let k = instance.pair_count();
    let c = instance.partition().clique_count();
    let params = compute_parameters(k, c, overrides);

    let mut report = RunReport::new("solve");
    report.push("input", input.display());
    report.push("mode", mode);
    push_parameters(&mut report, &params);

    let started = Instant::now();
    match mode {
        Mode::Oracle => solve_oracle(&mut report, &instance, max_states, timeout_s),
        Mode::Powerset | Mode::Explicit => {
            let h_mode = if mode == Mode::Powerset { HMode::Powerset } else { HMode::Explicit };
            let budget = SearchBudget {
                max_states,
                max_restricted_sets: None,
                timeout: timeout_s.map(Duration::from_secs),
            };
            solve_states(&mut report, &instance, &params, h_mode, &budget);
        }
        Mode::Trace => solve_trace(&mut report, &instance, &params, max_states),
    }
    report.timings.push(("solve".into(), started.elapsed()));
    Ok(report)
}

fn oracle_limits(max_states: Option<usize>) -> SearchLimits {
    match max_states {
        Some(states) => SearchLimits::nodes(states as u64),
        None => SearchLimits::unbounded(),
    }
}

fn attach_witness(report: &mut RunReport, instance: &ProblemInstance, witness: linkage_core::Linkage) {
    if let Err(defect) = validate_linkage(instance, &witness) {
        report.push("counterexample", format!("witness fails validation: {defect}"));
        report.verdict = Verdict::Counterexample;
        return;
    }
    report.push("min_total_vertices", witness.total_vertices());
    report.witness = Some(witness);
    report.verdict = Verdict::Yes;
}

fn solve_oracle(
    report: &mut RunReport,
    instance: &ProblemInstance,
    max_states: Option<usize>,
    timeout_s: Option<u64>,
) {
    if timeout_s.is_some() {
        eprintln!("note: --timeout-s applies to the state searches; oracle mode uses --max-states");
    }
    match minimum_linkage(instance, oracle_limits(max_states)) {
        Ok(result) => match result.witness {
            Some(witness) => attach_witness(report, instance, witness),
            None => report.verdict = Verdict::CertifiedNo,
        },
        Err(exceeded) => {
            report.push("nodes_explored", exceeded.nodes);
            report.verdict = Verdict::Inconclusive;
        }
    }
}

fn solve_states(
    report: &mut RunReport,
    instance: &ProblemInstance,
    params: &Parameters,
    mode: HMode,
    budget: &SearchBudget,
) {
    match minimum_linkage_size_via_h(instance, params, mode, budget) {
        SizeVerdict::Feasible { h_path, min_total_vertices } => {
            report.push("walk_states", h_path.len());
            match extract_linkage(&h_path, instance) {
                Ok(witness) if witness.total_vertices() != min_total_vertices => {
                    report.push(
                        "counterexample",
                        format!(
                            "walk length promises {min_total_vertices} vertices but the extraction has {}",
                            witness.total_vertices()
                        ),
                    );
                    report.verdict = Verdict::Counterexample;
                }
                Ok(witness) => attach_witness(report, instance, witness),
                Err(defect) => {
                    report.push("counterexample", format!("walk extraction failed: {defect}"));
                    report.verdict = Verdict::Counterexample;
                }
            }
            report.h_path = Some(h_path);
        }
        SizeVerdict::Infeasible { certified: true } => report.verdict = Verdict::CertifiedNo,
        SizeVerdict::Infeasible { certified: false } => {
            report.push("reason", "search space not certified complete under overrides");
            report.verdict = Verdict::Inconclusive;
        }
        SizeVerdict::BudgetExceeded { states } => {
            report.push("states_explored", states);
            report.verdict = Verdict::Inconclusive;
        }
    }
}

fn solve_trace(
    report: &mut RunReport,
    instance: &ProblemInstance,
    params: &Parameters,
    max_states: Option<usize>,
) {
    let oracle = match minimum_linkage(instance, oracle_limits(max_states)) {
        Ok(result) => result,
        Err(exceeded) => {
            report.push("nodes_explored", exceeded.nodes);
            report.verdict = Verdict::Inconclusive;
            return;
        }
    };
    let minimum = match oracle.witness {
        Some(witness) => witness,
        None => {
            report.verdict = Verdict::CertifiedNo;
            return;
        }
    };

    let enumeration = match vertex_order(instance, &minimum, params) {
        Ok(enumeration) => enumeration,
        Err(counterexample) => {
            report.push(
                "counterexample",
                format!(
                    "vertex enumeration failed after {:?}: {:?}",
                    counterexample.order, counterexample.failure
                ),
            );
            report.verdict = Verdict::Counterexample;
            return;
        }
    };
    let order_text: Vec<String> = enumeration.order.iter().map(usize::to_string).collect();
    report.push("order", order_text.join(" "));

    let (h_path, trace) = trace_linkage(instance, &minimum, &enumeration.order, params);
    report.push("stages", trace.stages);
    if trace.passed() {
        for h in 0..trace.stages {
            report.push(format!("stage {h}"), "ok");
        }
    } else {
        for failure in &trace.failures {
            report.push("trace_failure", failure);
        }
        report.h_path = Some(h_path);
        report.verdict = Verdict::Counterexample;
        return;
    }

    match extract_linkage(&h_path, instance) {
        Ok(extracted) if extracted == minimum => {
            attach_witness(report, instance, minimum);
            report.h_path = Some(h_path);
        }
        Ok(_) => {
            report.push("counterexample", "extraction differs from the oracle minimum");
            report.h_path = Some(h_path);
            report.verdict = Verdict::Counterexample;
        }
        Err(defect) => {
            report.push("counterexample", format!("walk extraction failed: {defect}"));
            report.h_path = Some(h_path);
            report.verdict = Verdict::Counterexample;
        }
    }
}

struct SuitePlan {
    seed: u64,
    count: Option<usize>,
}

impl SuitePlan {
    fn size(&self, default: usize) -> usize {
        self.count.unwrap_or(default)
    }
}

pub fn cmd_verify(
    seed: u64,
    suites: &[String],
    count: Option<usize>,
    out: Option<&Path>,
) -> Result<RunReport, CliError> {
    let selected: BTreeSet<&str> = if suites.is_empty() {
        SUITE_NAMES.iter().copied().collect()
    } else if suites.len() == 1 && suites[0] == "none" {
        BTreeSet::new()
    } else {
        let mut set = BTreeSet::new();
        for name in suites {
            if !SUITE_NAMES.contains(&name.as_str()) {
                return Err(usage(format!(
                    "unknown suite `{name}`; expected one of {} or none",
                    SUITE_NAMES.join(", ")
                )));
            }
            set.insert(name.as_str());
        }
        set
    };

    let plan = SuitePlan { seed, count };
    let mut report = RunReport::new("verify");
    report.push("seed", seed);
    let suite_list: Vec<&str> =
        SUITE_NAMES.iter().copied().filter(|name| selected.contains(name)).collect();
    report.push(
        "suites",
        if suite_list.is_empty() { "none".to_string() } else { suite_list.join(",") },
    );
    if let Some(count) = count {
        report.push("count", count);
    }

    let started = Instant::now();
    let needs_order = ["order", "separation", "trace", "shift"]
        .iter()
        .any(|name| selected.contains(name));
    let order_suite = needs_order.then(|| suite_vertex_order(plan.seed, plan.size(200)));

    let mut outcomes: Vec<SuiteOutcome> = Vec::new();
    for name in suite_list {
        let order_cases =
            || &order_suite.as_ref().expect("computed for order-dependent suites").cases[..];
        let outcome = match name {
            "reachability" => suite_oracle_reachability(plan.seed, plan.size(200)),
            "order" => order_suite.as_ref().expect("just computed").outcome.clone(),
            "separation" => suite_separation(order_cases()),
            "trace" => suite_trace(order_cases()),
            "powerset" => suite_powerset_equivalence(plan.seed, plan.size(100)).outcome,
            "explicit" => suite_explicit_equivalence(plan.seed, plan.size(50)).outcome,
            "wiggle" => suite_wiggle_brute(plan.seed, plan.size(500)),
            "matching" => suite_matching_brute(plan.seed, plan.size(200)),
            "shift" => suite_shift(order_cases()),
            _ => unreachable!("validated above"),
        };
        outcomes.push(outcome);
    }
    report.timings.push(("verify".into(), started.elapsed()));

    let mut total = 0;
    for outcome in &outcomes {
        report.push(
            format!("suite {}", outcome.name),
            format!("{} cases, {} counterexamples", outcome.cases, outcome.counterexamples.len()),
        );
        total += outcome.counterexamples.len();
    }
    for outcome in &outcomes {
        let mut counterexamples = outcome.counterexamples.clone();
        counterexamples.sort_by_key(|ce| ce.seed);
        let mut previous: Option<u64> = None;
        let mut duplicate = 0;
        for ce in counterexamples {
            if previous == Some(ce.seed) {
                duplicate += 1;
            } else {
                duplicate = 0;
            }
            previous = Some(ce.seed);
            report.push(format!("counterexample {} {}", outcome.name, ce.seed), &ce.description);
            let file_name = if duplicate == 0 {
                format!("counterexample-{}-{}.txt", outcome.name, ce.seed)
            } else {
                format!("counterexample-{}-{}-{duplicate}.txt", outcome.name, ce.seed)
            };
            let dir = out
                .and_then(Path::parent)
                .filter(|p| !p.as_os_str().is_empty())
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from("."));
            let path = dir.join(&file_name);
            std::fs::write(&path, &ce.bundle)
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            report.push(format!("artifact {} {}", outcome.name, ce.seed), path.display());
        }
    }
    report.push("counterexamples", total);
    report.verdict = if total == 0 { Verdict::Pass } else { Verdict::Counterexample };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse_subsets_and_reject_junk() {
        let parsed = parse_overrides("z=10,K=3").unwrap();
        assert_eq!(parsed.z, Some(10));
        assert_eq!(parsed.k_bound, Some(3));
        assert_eq!(parsed.w, None);
        assert!(parse_overrides("z=10,z=11").is_err());
        assert!(parse_overrides("q=1").is_err());
        assert!(parse_overrides("z=abc").is_err());
        assert!(parse_overrides("").is_err());
    }

    #[test]
    fn params_command_renders_the_table() {
        let report = cmd_params(1, 1).unwrap();
        let text = report.render();
        assert!(text.contains("table: z=6 w=1 r=1 s=5 t=19 K=1 exponent=28"));
        assert!(text.ends_with("verdict: pass\n"));
        assert!(cmd_params(0, 1).is_err());
    }

    #[test]
    fn gen_round_trips_through_the_parser() {
        let text = cmd_gen(1, 6, 1, 1, 0.2, false).unwrap();
        let bundle = parse_bundle(&text).unwrap();
        assert_eq!(bundle.instance.digraph().vertex_count(), 6);
        assert!(cmd_gen(1, 3, 2, 1, 0.2, false).is_err());
    }

    #[test]
    fn verify_with_no_suites_is_a_no_op() {
        let report = cmd_verify(7, &["none".to_string()], None, None).unwrap();
        let text = report.render();
        assert!(text.contains("suites: none"));
        assert!(text.contains("counterexamples: 0"));
        assert_eq!(report.verdict, Verdict::Pass);
    }
}
