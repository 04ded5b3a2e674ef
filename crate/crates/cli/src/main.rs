use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use linkage_cli::{commands, execute, CommandSpec, Outcome, RunConfig};
use linkage_core::ParamOverrides;

#[derive(Parser)]
#[command(
    name = "linkage",
    version,
    about = "k vertex-disjoint directed paths in digraphs partitioned into semicomplete cliques"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Exhaustive search over vertex-disjoint paths.
    Oracle,
    /// State-graph search over bare history subsets.
    Powerset,
    /// State-graph search over witnessed restricted sets.
    Explicit,
    /// Replay the oracle minimum through the state graph and verify it.
    Trace,
}

impl From<ModeArg> for commands::Mode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Oracle => commands::Mode::Oracle,
            ModeArg::Powerset => commands::Mode::Powerset,
            ModeArg::Explicit => commands::Mode::Explicit,
            ModeArg::Trace => commands::Mode::Trace,
        }
    }
}

fn overrides_arg(text: &str) -> Result<ParamOverrides, String> {
    commands::parse_overrides(text)
}

#[derive(clap::Args)]
struct SolveArgs {
    /// Instance file (bundle witnesses are ignored).
    #[arg(long)]
    input: PathBuf,
    /// Replace derived constants, e.g. z=6,w=1,K=2.
    #[arg(long = "override", value_parser = overrides_arg)]
    overrides: Option<ParamOverrides>,
    /// State cap for the searches; exceeding it is inconclusive.
    #[arg(long)]
    max_states: Option<usize>,
    /// Wall-clock cap for the state searches, in seconds.
    #[arg(long)]
    timeout_s: Option<u64>,
    /// Write the report here, with a key=value mirror alongside.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the derived parameter table for k pairs and c cliques.
    Params {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        c: usize,
        /// Write the report here, with a key=value mirror alongside.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a seeded instance and print or write its text form.
    Gen {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Vertex count.
        #[arg(short)]
        n: usize,
        /// Number of terminal pairs.
        #[arg(short)]
        k: usize,
        /// Number of cliques.
        #[arg(short)]
        c: usize,
        /// Probability of each cross-clique edge.
        #[arg(long, default_value_t = 0.2)]
        density: f64,
        /// Embed a disjoint solution so the instance is feasible.
        #[arg(long)]
        plant: bool,
        /// Write the instance here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide an instance and report verdict, witness, and walk.
    Solve {
        #[arg(long, value_enum, default_value_t = ModeArg::Oracle)]
        mode: ModeArg,
        #[command(flatten)]
        args: SolveArgs,
    },
    /// Alias of `solve --mode trace`.
    Trace {
        #[command(flatten)]
        args: SolveArgs,
    },
    /// Run the seeded verification suites and persist counterexamples.
    Verify {
        #[arg(long, default_value_t = linkage_core::DEFAULT_SEED)]
        seed: u64,
        /// Comma-separated suite names, or `none` for a no-op report.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        /// Override every suite's case count (for quick runs).
        #[arg(long)]
        count: Option<usize>,
        /// Write the report here, with a key=value mirror alongside;
        /// counterexample bundles land in the same directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn to_config(command: Command) -> RunConfig {
    match command {
        Command::Params { k, c, out } => {
            RunConfig { command: CommandSpec::Params { k, c }, out }
        }
        Command::Gen { seed, n, k, c, density, plant, out } => {
            RunConfig { command: CommandSpec::Gen { seed, n, k, c, density, plant }, out }
        }
        Command::Solve { mode, args } => RunConfig {
            command: CommandSpec::Solve {
                input: args.input,
                mode: mode.into(),
                overrides: args.overrides.unwrap_or_default(),
                max_states: args.max_states,
                timeout_s: args.timeout_s,
            },
            out: args.out,
        },
        Command::Trace { args } => RunConfig {
            command: CommandSpec::Solve {
                input: args.input,
                mode: commands::Mode::Trace,
                overrides: args.overrides.unwrap_or_default(),
                max_states: args.max_states,
                timeout_s: args.timeout_s,
            },
            out: args.out,
        },
        Command::Verify { seed, suite, count, out } => {
            RunConfig { command: CommandSpec::Verify { seed, suites: suite, count }, out }
        }
    }
}

fn write_file(path: &std::path::Path, content: &str) -> Result<(), ExitCode> {
    std::fs::write(path, content).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        ExitCode::from(3)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            use clap::error::ErrorKind;
            let code = match error.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = error.print();
            return ExitCode::from(code);
        }
    };

    let config = to_config(cli.command);
    let out = config.out.clone();
    match execute(&config) {
        Ok(Outcome::Report(report)) => {
            let text = report.render();
            print!("{text}");
            if let Some(out) = &out {
                if let Err(code) = write_file(out, &text) {
                    return code;
                }
                let mirror = PathBuf::from(format!("{}.kv", out.display()));
                if let Err(code) = write_file(&mirror, &report.render_mirror()) {
                    return code;
                }
            }
            for (label, elapsed) in &report.timings {
                eprintln!("timing {label}: {:.3}s", elapsed.as_secs_f64());
            }
            ExitCode::from(report.verdict.exit_code())
        }
        Ok(Outcome::Plain(text)) => {
            match &out {
                Some(out) => {
                    if let Err(code) = write_file(out, &text) {
                        return code;
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(3)
        }
    }
}
