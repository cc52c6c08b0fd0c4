//! Checkpointed regret comparison across agents.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{BenchError, Summary};
use crate::metrics::RunMetrics;

/// All runs of one agent over one (instance, K, seeds) grid.
#[derive(Debug, Clone)]
pub struct TraceSet {
    pub label: String,
    /// Canonical JSON of the instance descriptor, used to match grids.
    pub instance: serde_json::Value,
    pub num_episodes: usize,
    /// `(seed, parsed trace)` sorted by seed.
    pub runs: Vec<(u64, RunMetrics)>,
}

impl TraceSet {
    fn seeds(&self) -> Vec<u64> {
        self.runs.iter().map(|(s, _)| *s).collect()
    }
}

/// Load every agent's trace set from an experiment output directory
/// (reads `summary.json` for the grid and the CSVs for the rows).
pub fn load_trace_sets(dir: &Path) -> Result<Vec<TraceSet>, BenchError> {
    let summary_path = dir.join("summary.json");
    let text = std::fs::read_to_string(&summary_path)
        .map_err(|e| BenchError::Io { path: summary_path.clone(), source: e })?;
    let summary = Summary::from_json(&text)?;
    let instance = serde_json::to_value(&summary.spec.instance)
        .expect("instance serialization cannot fail");

    let mut sets = Vec::new();
    for entry in &summary.spec.agents {
        let mut runs = Vec::new();
        for run in summary.runs.iter().filter(|r| r.agent == entry.name) {
            let Some(file) = &run.trace_file else {
                return Err(BenchError::Validation {
                    path: format!("runs[{}/{}]", run.agent, run.seed),
                    msg: "summary has no trace file for this run".into(),
                });
            };
            let path = dir.join(file);
            let csv = std::fs::read_to_string(&path)
                .map_err(|e| BenchError::Io { path: path.clone(), source: e })?;
            runs.push((run.seed, RunMetrics::from_csv(&csv)?));
        }
        runs.sort_by_key(|(s, _)| *s);
        sets.push(TraceSet {
            label: entry.name.clone(),
            instance: instance.clone(),
            num_episodes: summary.spec.num_episodes,
            runs,
        });
    }
    Ok(sets)
}

/// One comparison line: checkpointed mean regret with standard errors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareRow {
    pub label: String,
    pub runs: usize,
    /// Mean cumulative regret at K/4, K/2, K.
    pub regret_checkpoints: [f64; 3],
    /// Standard errors at the same checkpoints.
    pub regret_stderr: [f64; 3],
    pub mean_switches: f64,
    pub max_switches: usize,
    /// Mean of `(Regret(K) - Regret(K/2)) / Regret(K/2)` over seeds.
    pub mean_sublinearity_ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub num_episodes: usize,
    pub seeds: Vec<u64>,
    pub rows: Vec<CompareRow>,
}

impl fmt::Display for ComparisonTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.num_episodes;
        writeln!(
            f,
            "{} episodes x {} seeds; cumulative regret mean (stderr)",
            k,
            self.seeds.len()
        )?;
        writeln!(
            f,
            "{:<18} {:>14} {:>14} {:>14} {:>10} {:>8}",
            "agent",
            format!("K/4={}", k / 4),
            format!("K/2={}", k / 2),
            format!("K={k}"),
            "switches",
            "sublin"
        )?;
        for row in &self.rows {
            writeln!(
                f,
                "{:<18} {:>14} {:>14} {:>14} {:>10.1} {:>8.3}",
                row.label,
                format!("{:.2} ({:.2})", row.regret_checkpoints[0], row.regret_stderr[0]),
                format!("{:.2} ({:.2})", row.regret_checkpoints[1], row.regret_stderr[1]),
                format!("{:.2} ({:.2})", row.regret_checkpoints[2], row.regret_stderr[2]),
                row.mean_switches,
                row.mean_sublinearity_ratio,
            )?;
        }
        Ok(())
    }
}

/// Compare agents over identical grids. Every set must agree on the
/// instance, the episode count, and the seed list.
pub fn compare_regret(sets: &[TraceSet]) -> Result<ComparisonTable, BenchError> {
    if sets.len() < 2 {
        return Err(BenchError::NotEnoughSets(sets.len()));
    }
    let first = &sets[0];
    let seeds = first.seeds();
    for s in &sets[1..] {
        if s.instance != first.instance {
            return Err(BenchError::GridMismatch(format!(
                "instance of {:?} differs from {:?}",
                s.label, first.label
            )));
        }
        if s.num_episodes != first.num_episodes {
            return Err(BenchError::GridMismatch(format!(
                "{:?} ran {} episodes, {:?} ran {}",
                s.label, s.num_episodes, first.label, first.num_episodes
            )));
        }
        if s.seeds() != seeds {
            return Err(BenchError::GridMismatch(format!(
                "seed grids of {:?} and {:?} differ",
                s.label, first.label
            )));
        }
    }

    let k = first.num_episodes;
    let checkpoints = [(k / 4).max(1), (k / 2).max(1), k];
    let rows = sets
        .iter()
        .map(|set| {
            let n = set.runs.len() as f64;
            let mut means = [0.0; 3];
            let mut errs = [0.0; 3];
            for (i, &cp) in checkpoints.iter().enumerate() {
                let vals: Vec<f64> =
                    set.runs.iter().map(|(_, m)| m.cum_regret_at(cp)).collect();
                let mean = vals.iter().sum::<f64>() / n;
                let var = vals.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
                    / (n - 1.0).max(1.0);
                means[i] = mean;
                errs[i] = (var / n).sqrt();
            }
            CompareRow {
                label: set.label.clone(),
                runs: set.runs.len(),
                regret_checkpoints: means,
                regret_stderr: errs,
                mean_switches: set.runs.iter().map(|(_, m)| m.total_switches as f64).sum::<f64>()
                    / n,
                max_switches: set.runs.iter().map(|(_, m)| m.total_switches).max().unwrap_or(0),
                mean_sublinearity_ratio: set
                    .runs
                    .iter()
                    .map(|(_, m)| m.sublinearity_ratio())
                    .sum::<f64>()
                    / n,
            }
        })
        .collect();

    Ok(ComparisonTable { num_episodes: k, seeds, rows })
}
