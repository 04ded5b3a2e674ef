//! End-to-end tests against the compiled binary: exit codes, report shape,
//! determinism, and witness reload.

use std::path::PathBuf;
use std::process::{Command, Output};

use linkage_cli::parse_report;
use linkage_core::{parse_bundle, parse_instance, validate_linkage, DiPath, Linkage};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_linkage"))
}

fn fixture(name: &str) -> String {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.push("tests/data");
    path.push(name);
    path.to_str().expect("fixture paths are utf-8").to_string()
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary spawns")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("reports are utf-8")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal terminations")
}

fn scratch_dir(test: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("linkage-cli-{test}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir is writable");
    dir
}

#[test]
fn params_prints_the_table_and_rejects_zero() {
    let output = run(&["params", "-k", "1", "-c", "1"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout_of(&output);
    assert!(text.contains("table: z=6 w=1 r=1 s=5 t=19 K=1 exponent=28"));
    assert!(text.contains("verdict: pass"));

    let output = run(&["params", "-k", "2", "-c", "2"]);
    assert!(stdout_of(&output).contains("table: z=36 w=75 r=300 s=9 t=13856 K=298 exponent=11400"));

    let output = run(&["params", "-k", "0", "-c", "1"]);
    assert_eq!(exit_code(&output), 3);
}

#[test]
fn gen_output_parses_and_bad_parameters_fail() {
    let output = run(&["gen", "--seed", "1", "-n", "6", "-k", "1", "-c", "1"]);
    assert_eq!(exit_code(&output), 0);
    let instance = parse_instance(&stdout_of(&output)).expect("generated instance parses");
    assert_eq!(instance.digraph().vertex_count(), 6);

    let output = run(&["gen", "--seed", "1", "-n", "3", "-k", "2", "-c", "1"]);
    assert_eq!(exit_code(&output), 3);
}

#[test]
fn solve_oracle_reports_the_minimum() {
    let output = run(&["solve", "--input", &fixture("t1.inst"), "--mode", "oracle"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout_of(&output);
    assert!(text.contains("verdict: yes"));
    assert!(text.contains("min_total_vertices: 3"));
    assert!(text.contains("witness\npath 0 1 2\nend\n"));
}

#[test]
fn solve_powerset_reports_the_walk() {
    let output = run(&["solve", "--input", &fixture("t1.inst"), "--mode", "powerset"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout_of(&output);
    assert!(text.contains("walk_states: 2"));
    assert!(text.contains("stage 0 Y 0 1 1 D 0\nstage 1 Y 1 2 1 D 0 1\n"));
}

#[test]
fn blocked_instance_is_certified_no() {
    let output = run(&["solve", "--input", &fixture("t1-blocked.inst"), "--mode", "powerset"]);
    assert_eq!(exit_code(&output), 1);
    assert!(stdout_of(&output).contains("verdict: certified-no"));
}

#[test]
fn exhausted_budget_is_inconclusive() {
    let output = run(&[
        "solve",
        "--input",
        &fixture("t1.inst"),
        "--mode",
        "powerset",
        "--max-states",
        "0",
    ]);
    assert_eq!(exit_code(&output), 2);
    assert!(stdout_of(&output).contains("verdict: inconclusive"));
}

#[test]
fn trace_subcommand_verifies_every_stage() {
    let output = run(&["trace", "--input", &fixture("t1.inst")]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout_of(&output);
    assert!(text.contains("mode: trace"));
    assert!(text.contains("order: 1"));
    assert!(text.contains("stage 0: ok"));
    assert!(text.contains("stage 1: ok"));
    assert!(text.contains("verdict: yes"));
}

#[test]
fn identical_configurations_render_identical_bytes() {
    let first = run(&["solve", "--input", &fixture("t1.inst"), "--mode", "trace"]);
    let second = run(&["solve", "--input", &fixture("t1.inst"), "--mode", "trace"]);
    assert_eq!(first.stdout, second.stdout);

    let first = run(&["gen", "--seed", "9", "-n", "7", "-k", "2", "-c", "2", "--plant"]);
    let second = run(&["gen", "--seed", "9", "-n", "7", "-k", "2", "-c", "2", "--plant"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn yes_witness_revalidates_on_reload() {
    let dir = scratch_dir("reload");
    let report_path = dir.join("report.txt");
    let output = run(&[
        "solve",
        "--input",
        &fixture("t1.inst"),
        "--mode",
        "explicit",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);

    let text = std::fs::read_to_string(&report_path).expect("report written");
    assert_eq!(text, stdout_of(&output));
    let parsed = parse_report(&text).expect("report parses");
    assert_eq!(parsed.value("verdict"), Some("yes"));

    let instance_text = std::fs::read_to_string(fixture("t1.inst")).unwrap();
    let instance = parse_bundle(&instance_text).unwrap().instance;
    let members: Vec<DiPath> = parsed
        .witness_paths
        .iter()
        .map(|path| DiPath::new(path.clone()).expect("witness paths are simple"))
        .collect();
    let witness = Linkage::new(members);
    validate_linkage(&instance, &witness).expect("reloaded witness validates");

    let mirror = std::fs::read_to_string(dir.join("report.txt.kv")).expect("mirror written");
    assert!(mirror.contains("verdict=yes"));
    assert!(mirror.contains("witness.0=0 1 2"));
}

#[test]
fn override_flag_marks_the_report() {
    let output = run(&[
        "solve",
        "--input",
        &fixture("t1.inst"),
        "--mode",
        "explicit",
        "--override",
        "z=6,w=1",
    ]);
    assert_eq!(exit_code(&output), 0);
    assert!(stdout_of(&output).contains("overridden: true"));

    let output = run(&[
        "solve",
        "--input",
        &fixture("t1.inst"),
        "--override",
        "bogus",
    ]);
    assert_eq!(exit_code(&output), 3);
}

#[test]
fn verify_runs_selected_suites_and_none_is_a_no_op() {
    let dir = scratch_dir("verify");
    let report_path = dir.join("verify.txt");
    let output = run(&[
        "verify",
        "--suite",
        "wiggle,matching",
        "--count",
        "20",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout_of(&output);
    assert!(text.contains("suite wiggle-vs-brute: 20 cases, 0 counterexamples"));
    assert!(text.contains("verdict: pass"));

    let output = run(&["verify", "--suite", "none"]);
    assert_eq!(exit_code(&output), 0);
    assert!(stdout_of(&output).contains("suites: none"));

    let output = run(&["verify", "--suite", "imaginary"]);
    assert_eq!(exit_code(&output), 3);
}

#[test]
fn missing_input_and_unknown_commands_are_usage_errors() {
    let output = run(&["solve", "--input", "no-such-file.inst"]);
    assert_eq!(exit_code(&output), 3);

    let output = run(&["frobnicate"]);
    assert_eq!(exit_code(&output), 3);
}
