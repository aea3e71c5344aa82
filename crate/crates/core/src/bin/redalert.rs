use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use redalert::oracle::Budget;
use redalert::pipeline::{run, AnalysisConfig, Format, OracleConfig};

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

/// Infers, for each predicate of a Prolog program, a groundness condition on
/// its arguments under which a call succeeds at most once.
#[derive(Parser)]
#[command(name = "redalert", version)]
struct Cli {
    /// Prolog source files; each is analysed independently.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Term depth kept by the depth-k success analysis.
    #[arg(long, default_value_t = 3)]
    depth_k: usize,
    /// Largest variable set tried when separating clause alternatives.
    #[arg(long, default_value_t = 4)]
    max_mux_arity: usize,
    /// Depth-k sets larger than this are widened to top.
    #[arg(long, default_value_t = 64)]
    dk_cap: usize,
    /// Drop cuts that break stratification instead of failing.
    #[arg(long)]
    relax_cut: bool,
    /// Update the determinacy environment once per sweep.
    #[arg(long)]
    jacobi: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
    /// Print the program in cut-normal form.
    #[arg(long)]
    dump_normal_form: bool,
    /// Print the groundness and depth-k success summaries.
    #[arg(long)]
    dump_success: bool,
    /// Check every condition with random calls (200 unless given).
    #[arg(long, value_name = "N")]
    oracle_check: Option<usize>,
    /// Seed for the oracle's random calls.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report the time spent in each phase.
    #[arg(long)]
    timings: bool,
}

/// Lets `--oracle-check` take its count optionally without swallowing a
/// following input path.
fn with_default_trials(args: impl Iterator<Item = String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut args = args.peekable();
    while let Some(a) = args.next() {
        let bare = a == "--oracle-check";
        out.push(a);
        if bare && !args.peek().is_some_and(|n| n.parse::<usize>().is_ok()) {
            out.push("200".into());
        }
    }
    out
}

fn main() -> ExitCode {
    // exit status 2 is reserved for oracle counterexamples
    let cli = match Cli::try_parse_from(with_default_trials(std::env::args())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let iteration_limit = match std::env::var("REDALERT_ITER_LIMIT") {
        Err(_) => 1000,
        Ok(v) => match v.parse() {
            Ok(n) => n,
            Err(_) => {
                eprintln!("error: REDALERT_ITER_LIMIT must be a positive integer, got {v:?}");
                return ExitCode::from(1);
            }
        },
    };
    let config = AnalysisConfig {
        inputs: cli.inputs,
        depth_k: cli.depth_k,
        max_subset: cli.max_mux_arity,
        dk_cap: cli.dk_cap,
        iteration_limit,
        relax_cut: cli.relax_cut,
        jacobi: cli.jacobi,
        oracle: cli.oracle_check.map(|trials| OracleConfig {
            trials,
            seed: cli.seed,
            budget: Budget::default(),
        }),
        format: match cli.format {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        },
        dump_normal_form: cli.dump_normal_form,
        dump_success: cli.dump_success,
        timings: cli.timings,
        out: cli.out,
    };
    ExitCode::from(run(&config) as u8)
}
