//! Per-run metrics: per-episode rows plus aggregates, with CSV trace I/O.
//!
//! Every agent in the crate emits the same [`RunMetrics`] schema, so runs
//! are plug-compatible in the bench harness. Regret is the exact
//! dynamic-programming gap `V*_1(s_1^k) - V^{pi_k}_1(s_1^k)` of the policy
//! executed in episode `k`, not a realized-reward difference.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Fixed trace header; parsing rejects anything else.
pub const TRACE_HEADER: &str = "k,regret,cum_regret,switches,max_bonus,reward";

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("bad trace header: expected {TRACE_HEADER:?}, found {0:?}")]
    BadHeader(String),
    #[error("trace line {line}: {msg}")]
    BadLine { line: usize, msg: String },
    #[error("trace rows must cover k = 1..=K exactly; row {row} has k = {k}")]
    NonContiguous { row: usize, k: usize },
}

/// One per-episode record. `k` is 1-based in traces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRow {
    pub k: usize,
    pub regret: f64,
    pub cum_regret: f64,
    /// Cumulative switch count l_k.
    pub switches: usize,
    /// Largest bonus of the active value snapshot at the state-actions
    /// visited this episode.
    pub max_bonus: f64,
    /// Realized episode reward.
    pub reward: f64,
}

/// Invariant-violation counters collected during a run. All of these are
/// expected to stay zero; the acceptance suite asserts they do.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ViolationCounters {
    /// Optimistic values that failed to dominate V* at a visited state.
    pub optimism: usize,
    /// Pairs where the pessimistic value exceeded the optimistic one.
    pub ordering: usize,
    /// Monotone-stack regressions (Q increased or Q-check decreased).
    pub monotonicity: usize,
    /// Any value outside [0, 1].
    pub range: usize,
    /// Frozen-vs-current uncertainty stability failures between switches.
    pub stability: usize,
}

impl ViolationCounters {
    pub fn total(&self) -> usize {
        self.optimism + self.ordering + self.monotonicity + self.range + self.stability
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub rows: Vec<EpisodeRow>,
    pub final_cum_regret: f64,
    pub total_switches: usize,
    /// Cumulative one-step value variance of the executed policies along
    /// the visited state-actions, from the DP oracle.
    pub var_k: f64,
    pub wall_time_s: f64,
    /// Number of (k, h) pairs examined by the optimism counter.
    pub optimism_checked: usize,
    pub violations: ViolationCounters,
    /// Worst normal-equation residual ratio across all fits in the run.
    pub max_fit_residual: f64,
}

impl RunMetrics {
    pub fn num_episodes(&self) -> usize {
        self.rows.len()
    }

    /// Cumulative regret at episode `k` (1-based).
    pub fn cum_regret_at(&self, k: usize) -> f64 {
        self.rows[k - 1].cum_regret
    }

    /// `(Regret(K) - Regret(K/2)) / Regret(K/2)`; 0 when both halves
    /// accumulated nothing.
    pub fn sublinearity_ratio(&self) -> f64 {
        let k = self.rows.len();
        let half = self.cum_regret_at(k / 2);
        let full = self.cum_regret_at(k);
        if half == 0.0 {
            if full == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (full - half) / half
        }
    }

    /// Serialize the per-episode rows as CSV with the fixed header.
    /// Floats use shortest round-trip formatting, so emit/parse is exact.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * (self.rows.len() + 1));
        out.push_str(TRACE_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.k, r.regret, r.cum_regret, r.switches, r.max_bonus, r.reward
            ));
        }
        out
    }

    /// Parse rows from CSV and rebuild the row-derivable aggregates.
    /// Aggregates that cannot be recovered from rows (Var_K, wall time,
    /// counters) are left at zero.
    pub fn from_csv(text: &str) -> Result<Self, TraceError> {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default();
        if header != TRACE_HEADER {
            return Err(TraceError::BadHeader(header.to_string()));
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(TraceError::BadLine { line: i + 2, msg: format!("{} fields", fields.len()) });
            }
            let parse_f = |s: &str| -> Result<f64, TraceError> {
                s.parse().map_err(|e| TraceError::BadLine { line: i + 2, msg: format!("{e}") })
            };
            let parse_u = |s: &str| -> Result<usize, TraceError> {
                s.parse().map_err(|e| TraceError::BadLine { line: i + 2, msg: format!("{e}") })
            };
            let row = EpisodeRow {
                k: parse_u(fields[0])?,
                regret: parse_f(fields[1])?,
                cum_regret: parse_f(fields[2])?,
                switches: parse_u(fields[3])?,
                max_bonus: parse_f(fields[4])?,
                reward: parse_f(fields[5])?,
            };
            if row.k != rows.len() + 1 {
                return Err(TraceError::NonContiguous { row: rows.len(), k: row.k });
            }
            rows.push(row);
        }
        let final_cum_regret = rows.last().map_or(0.0, |r| r.cum_regret);
        let total_switches = rows.last().map_or(0, |r| r.switches);
        Ok(RunMetrics {
            rows,
            final_cum_regret,
            total_switches,
            var_k: 0.0,
            wall_time_s: 0.0,
            optimism_checked: 0,
            violations: ViolationCounters::default(),
            max_fit_residual: 0.0,
        })
    }
}

/// Incrementally builds RunMetrics inside an episode loop.
#[derive(Debug)]
pub struct MetricsRecorder {
    rows: Vec<EpisodeRow>,
    cum_regret: f64,
    var_k: f64,
    optimism_checked: usize,
    violations: ViolationCounters,
    max_fit_residual: f64,
    started: std::time::Instant,
}

impl MetricsRecorder {
    pub fn new(capacity: usize) -> Self {
        MetricsRecorder {
            rows: Vec::with_capacity(capacity),
            cum_regret: 0.0,
            var_k: 0.0,
            optimism_checked: 0,
            violations: ViolationCounters::default(),
            max_fit_residual: 0.0,
            started: std::time::Instant::now(),
        }
    }

    pub fn push_episode(&mut self, regret: f64, switches: usize, max_bonus: f64, reward: f64) {
        self.cum_regret += regret;
        self.rows.push(EpisodeRow {
            k: self.rows.len() + 1,
            regret,
            cum_regret: self.cum_regret,
            switches,
            max_bonus,
            reward,
        });
    }

    pub fn add_var(&mut self, v: f64) {
        self.var_k += v;
    }

    pub fn check_optimism(&mut self, optimistic: f64, exact: f64) {
        self.optimism_checked += 1;
        if optimistic < exact - 1e-9 {
            self.violations.optimism += 1;
        }
    }

    pub fn violations_mut(&mut self) -> &mut ViolationCounters {
        &mut self.violations
    }

    pub fn record_fit_residual(&mut self, residual: f64) {
        if residual > self.max_fit_residual {
            self.max_fit_residual = residual;
        }
    }

    pub fn finish(self) -> RunMetrics {
        let final_cum_regret = self.rows.last().map_or(0.0, |r| r.cum_regret);
        let total_switches = self.rows.last().map_or(0, |r| r.switches);
        RunMetrics {
            rows: self.rows,
            final_cum_regret,
            total_switches,
            var_k: self.var_k,
            wall_time_s: self.started.elapsed().as_secs_f64(),
            optimism_checked: self.optimism_checked,
            violations: self.violations,
            max_fit_residual: self.max_fit_residual,
        }
    }
}
