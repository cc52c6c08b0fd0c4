//! Configuration-driven experiment runner.
//!
//! [`run_experiment`] executes the full agents-times-seeds grid of an
//! [`ExperimentSpec`] on a bounded worker pool, writes one CSV trace per
//! run plus one `summary/v1` JSON, and never lets one failed run abort its
//! siblings. Runs are deterministic given their seed: re-running a spec
//! reproduces the trace files byte for byte (the summary's wall-clock
//! timings are the one thing that moves).
//!
//! [`compare_regret`] lines up several runs of trace sets over the same
//! grid into a checkpointed regret/switching table.

mod compare;
mod spec;

pub use compare::{compare_regret, load_trace_sets, CompareRow, ComparisonTable, TraceSet};
pub use spec::{
    AgentEntry, AgentKind, EmitOptions, ExperimentSpec, InstanceSpec, ResolvedInstance,
    EXPSPEC_SCHEMA,
};

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{RunMetrics, TraceError, ViolationCounters};

pub const SUMMARY_SCHEMA: &str = "summary/v1";

/// Environment variable consulted for the output directory when no
/// explicit one is given.
pub const OUTPUT_DIR_ENV: &str = "MQL_BENCH_OUT";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{path}: {msg}")]
    Validation { path: String, msg: String },
    #[error("I/O error at {path:?}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("trace sets disagree: {0}")]
    GridMismatch(String),
    #[error("need at least two trace sets to compare, got {0}")]
    NotEnoughSets(usize),
    #[error("failed to parse {path:?}: {msg}")]
    Parse { path: PathBuf, msg: String },
}

/// One completed (or failed) cell of the run grid.
#[derive(Debug)]
pub struct RunRecord {
    pub agent: String,
    pub seed: u64,
    pub outcome: Result<RunMetrics, String>,
    pub trace_file: Option<String>,
}

#[derive(Debug)]
pub struct ExperimentOutcome {
    pub records: Vec<RunRecord>,
    pub summary: Summary,
    pub summary_path: Option<PathBuf>,
}

impl ExperimentOutcome {
    pub fn all_succeeded(&self) -> bool {
        self.records.iter().all(|r| r.outcome.is_ok())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub agent: String,
    pub seed: u64,
    pub final_cum_regret: f64,
    pub total_switches: usize,
    pub var_k: f64,
    pub wall_time_s: f64,
    pub optimism_checked: usize,
    pub violations: ViolationCounters,
    pub max_fit_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_file: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgentAggregate {
    pub agent: String,
    pub runs: usize,
    pub mean_final_cum_regret: f64,
    pub stderr_final_cum_regret: f64,
    pub mean_total_switches: f64,
    pub max_total_switches: usize,
    pub mean_var_k: f64,
    pub mean_sublinearity_ratio: f64,
    pub total_violations: usize,
    pub max_fit_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunFailure {
    pub agent: String,
    pub seed: u64,
    pub error: String,
}

/// The `summary/v1` document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub schema: String,
    pub spec: ExperimentSpec,
    pub seed_offset: u64,
    pub runs: Vec<RunSummary>,
    pub aggregates: Vec<AgentAggregate>,
    pub failures: Vec<RunFailure>,
}

impl Summary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        let summary: Summary = serde_json::from_str(text)
            .map_err(|e| BenchError::Parse { path: "<summary>".into(), msg: e.to_string() })?;
        if summary.schema != SUMMARY_SCHEMA {
            return Err(BenchError::Validation {
                path: "schema".into(),
                msg: format!("expected {SUMMARY_SCHEMA:?}, found {:?}", summary.schema),
            });
        }
        Ok(summary)
    }
}

/// Resolve the effective output directory: explicit flag, then the
/// environment variable, then the spec's own field, then `./mql-bench-out`.
pub fn resolve_output_dir(flag: Option<&Path>, spec: &ExperimentSpec) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Ok(env_dir) = std::env::var(OUTPUT_DIR_ENV) {
        if !env_dir.is_empty() {
            return PathBuf::from(env_dir);
        }
    }
    if let Some(dir) = &spec.output_dir {
        return PathBuf::from(dir);
    }
    PathBuf::from("mql-bench-out")
}

/// Execute every (agent, seed) cell of the grid on a pool of `workers`
/// threads. Each run's rng is seeded with `seed + seed_offset`; the
/// labeled seed stays the one written in the spec.
pub fn run_experiment(
    spec: &ExperimentSpec,
    out_dir: &Path,
    workers: usize,
    seed_offset: u64,
) -> Result<ExperimentOutcome, BenchError> {
    spec.validate()?;
    let instance = spec.instance.resolve(spec.num_episodes)?;
    if spec.emit.traces || spec.emit.summary {
        std::fs::create_dir_all(out_dir)
            .map_err(|e| BenchError::Io { path: out_dir.into(), source: e })?;
    }

    let grid: Vec<(usize, u64)> = spec
        .agents
        .iter()
        .enumerate()
        .flat_map(|(i, _)| spec.seeds.iter().map(move |&s| (i, s)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("worker pool construction cannot fail");
    let records: Vec<RunRecord> = pool.install(|| {
        grid.par_iter()
            .map(|&(agent_idx, seed)| {
                let entry = &spec.agents[agent_idx];
                let agent = entry.kind.resolve(&instance, spec.num_episodes);
                let mut rng = ChaCha12Rng::seed_from_u64(seed.wrapping_add(seed_offset));
                let outcome = agent
                    .run(&instance.mdp, &instance.class, spec.num_episodes, &mut rng)
                    .map_err(|e| e.to_string());
                let mut trace_file = None;
                if spec.emit.traces {
                    if let Ok(metrics) = &outcome {
                        let name = format!("trace_{}_{}.csv", entry.name, seed);
                        let path = out_dir.join(&name);
                        match std::fs::write(&path, metrics.to_csv()) {
                            Ok(()) => trace_file = Some(name),
                            Err(e) => {
                                return RunRecord {
                                    agent: entry.name.clone(),
                                    seed,
                                    outcome: Err(format!("failed to write {path:?}: {e}")),
                                    trace_file: None,
                                }
                            }
                        }
                    }
                }
                RunRecord { agent: entry.name.clone(), seed, outcome, trace_file }
            })
            .collect()
    });

    let summary = summarize(spec, seed_offset, &records);
    let summary_path = if spec.emit.summary {
        let path = out_dir.join("summary.json");
        std::fs::write(&path, summary.to_json())
            .map_err(|e| BenchError::Io { path: path.clone(), source: e })?;
        Some(path)
    } else {
        None
    };

    Ok(ExperimentOutcome { records, summary, summary_path })
}

fn summarize(spec: &ExperimentSpec, seed_offset: u64, records: &[RunRecord]) -> Summary {
    let mut runs = Vec::new();
    let mut failures = Vec::new();
    for rec in records {
        match &rec.outcome {
            Ok(m) => runs.push(RunSummary {
                agent: rec.agent.clone(),
                seed: rec.seed,
                final_cum_regret: m.final_cum_regret,
                total_switches: m.total_switches,
                var_k: m.var_k,
                wall_time_s: m.wall_time_s,
                optimism_checked: m.optimism_checked,
                violations: m.violations.clone(),
                max_fit_residual: m.max_fit_residual,
                trace_file: rec.trace_file.clone(),
            }),
            Err(e) => failures.push(RunFailure {
                agent: rec.agent.clone(),
                seed: rec.seed,
                error: e.clone(),
            }),
        }
    }

    let mut aggregates = Vec::new();
    for entry in &spec.agents {
        let group: Vec<&RunRecord> = records.iter().filter(|r| r.agent == entry.name).collect();
        let metrics: Vec<&RunMetrics> =
            group.iter().filter_map(|r| r.outcome.as_ref().ok()).collect();
        if metrics.is_empty() {
            continue;
        }
        let n = metrics.len() as f64;
        let finals: Vec<f64> = metrics.iter().map(|m| m.final_cum_regret).collect();
        let mean = finals.iter().sum::<f64>() / n;
        let var = finals.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
            / (n - 1.0).max(1.0);
        aggregates.push(AgentAggregate {
            agent: entry.name.clone(),
            runs: metrics.len(),
            mean_final_cum_regret: mean,
            stderr_final_cum_regret: (var / n).sqrt(),
            mean_total_switches: metrics.iter().map(|m| m.total_switches as f64).sum::<f64>() / n,
            max_total_switches: metrics.iter().map(|m| m.total_switches).max().unwrap_or(0),
            mean_var_k: metrics.iter().map(|m| m.var_k).sum::<f64>() / n,
            mean_sublinearity_ratio: metrics.iter().map(|m| m.sublinearity_ratio()).sum::<f64>()
                / n,
            total_violations: metrics.iter().map(|m| m.violations.total()).sum(),
            max_fit_residual: metrics
                .iter()
                .map(|m| m.max_fit_residual)
                .fold(0.0, f64::max),
        });
    }

    Summary {
        schema: SUMMARY_SCHEMA.to_string(),
        spec: spec.clone(),
        seed_offset,
        runs,
        aggregates,
        failures,
    }
}

#[cfg(test)]
mod tests;
