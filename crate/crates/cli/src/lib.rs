//! Command layer over `linkage-core`: argument plumbing, deterministic
//! report rendering, and the verification suite orchestration. The binary
//! in `main.rs` is a thin shell around [`commands::execute`].

pub mod commands;
pub mod report;

pub use commands::{
    cmd_gen, cmd_params, cmd_solve, cmd_verify, execute, parse_overrides, CliError, CommandSpec,
    Mode, Outcome, RunConfig, SUITE_NAMES,
};
pub use report::{
    parse_report, render_parsed, ParsedReport, ParsedStage, ReportParseError, RunReport, Verdict,
};
