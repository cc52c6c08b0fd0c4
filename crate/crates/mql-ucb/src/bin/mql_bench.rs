//! Experiment runner CLI. All logic lives in the library; this binary
//! parses arguments, routes files, and maps errors to exit codes:
//! 0 success, 2 spec/validation failure, 3 run failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mql_ucb::bench::{
    compare_regret, load_trace_sets, resolve_output_dir, run_experiment, BenchError,
    ExperimentSpec,
};
use mql_ucb::eluder::ClassSpec;
use mql_ucb::env::{max_cumulative_reward, optimal_values, MdpSpec};

const EXIT_VALIDATION: u8 = 2;
const EXIT_RUN: u8 = 3;

#[derive(Parser)]
#[command(
    name = "mql-bench",
    about = "Seeded regret benchmarks for low-switching optimistic Q-learning",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute an expspec/v1 experiment file: one CSV trace per
    /// (agent, seed) run plus a summary/v1 JSON.
    Run {
        spec_file: PathBuf,
        /// Output directory (falls back to $MQL_BENCH_OUT, then the
        /// spec's output_dir field, then ./mql-bench-out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for the run grid.
        #[arg(long, default_value_t = num_cpus_default())]
        workers: usize,
        /// Added to every seed before seeding the per-run generator.
        #[arg(long, default_value_t = 0)]
        seed_offset: u64,
    },
    /// Compare agents across one or more experiment output directories
    /// sharing the same instance, episode count, and seeds.
    Compare {
        #[arg(required = true)]
        trace_dirs: Vec<PathBuf>,
    },
    /// Dimension calculators: run the generalized/standard eluder
    /// dimension relation check on a classspec/v1 file.
    Dims {
        class_spec: PathBuf,
        /// Write the dimreport/v1 JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate an mdp/v1 instance file.
    Validate { mdp_file: PathBuf },
}

fn num_cpus_default() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        CliError { code: EXIT_VALIDATION, message: message.into() }
    }

    fn run(message: impl Into<String>) -> Self {
        CliError { code: EXIT_RUN, message: message.into() }
    }
}

impl From<BenchError> for CliError {
    fn from(err: BenchError) -> Self {
        match err {
            BenchError::Io { .. } => CliError::run(err.to_string()),
            _ => CliError::validation(err.to_string()),
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { spec_file, out, workers, seed_offset } => {
            let spec = ExperimentSpec::from_file(&spec_file).map_err(|e| match e {
                BenchError::Io { .. } => CliError::validation(e.to_string()),
                other => other.into(),
            })?;
            let out_dir = resolve_output_dir(out.as_deref(), &spec);
            let outcome = run_experiment(&spec, &out_dir, workers, seed_offset)?;
            for agg in &outcome.summary.aggregates {
                println!(
                    "{:<18} runs {:>2}  mean regret {:>10.3}  mean switches {:>8.1}",
                    agg.agent, agg.runs, agg.mean_final_cum_regret, agg.mean_total_switches
                );
            }
            for failure in &outcome.summary.failures {
                eprintln!("run failed: {} seed {}: {}", failure.agent, failure.seed, failure.error);
            }
            if let Some(path) = &outcome.summary_path {
                println!("summary written to {}", path.display());
            }
            if outcome.all_succeeded() {
                Ok(())
            } else {
                Err(CliError::run(format!(
                    "{} of {} runs failed",
                    outcome.summary.failures.len(),
                    outcome.records.len()
                )))
            }
        }
        Command::Compare { trace_dirs } => {
            let mut sets = Vec::new();
            for dir in &trace_dirs {
                sets.extend(load_trace_sets(dir)?);
            }
            let table = compare_regret(&sets)?;
            print!("{table}");
            Ok(())
        }
        Command::Dims { class_spec, out } => {
            let text = read_input(&class_spec)?;
            let spec = ClassSpec::from_json(&text)
                .map_err(|e| CliError::validation(format!("{}: {e}", class_spec.display())))?;
            let report = spec
                .check()
                .map_err(|e| CliError::validation(format!("{}: {e}", class_spec.display())))?;
            let json = report.to_json();
            match out {
                Some(path) => std::fs::write(&path, json)
                    .map_err(|e| CliError::run(format!("failed to write {}: {e}", path.display())))?,
                None => println!("{json}"),
            }
            Ok(())
        }
        Command::Validate { mdp_file } => {
            let text = read_input(&mdp_file)?;
            let mdp = MdpSpec::from_json(&text)
                .map_err(|e| CliError::validation(format!("{}: {e}", mdp_file.display())))?;
            let tables = optimal_values(&mdp);
            println!(
                "{}: valid mdp/v1 ({} states, {} actions, horizon {}); max cumulative reward {:.6}, V*_1 range [{:.6}, {:.6}]",
                mdp_file.display(),
                mdp.num_states,
                mdp.num_actions,
                mdp.horizon,
                max_cumulative_reward(&mdp),
                tables.v[0].iter().cloned().fold(f64::INFINITY, f64::min),
                tables.v[0].iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            );
            Ok(())
        }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))
}
