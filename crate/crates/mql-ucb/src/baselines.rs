//! Comparison agents, all emitting the same [`RunMetrics`] schema.
//!
//! - [`run_lsvi_ucb`]: optimistic least-squares value iteration with
//!   unweighted ridge regression and a per-episode replan (switch count is
//!   exactly K).
//! - [`run_det_rare_switch`]: the same learner, but replanning only when
//!   some stage's Gram determinant doubles since the last switch.
//! - [`run_uniform_random`]: fixed uniform policy, the regret reference.
//! - [`run_budget_limited`]: wraps any agent with a hard cap on planning
//!   passes; once the budget is spent the last policy is frozen. Used to
//!   exhibit the linear-regret phenomenon forced by too few switches.

use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::algorithm::{run_mql_ucb, AlgoConfig, AlgoError};
use crate::env::{optimal_values, policy_value, simulate_episode, MdpSpec, Policy};
use crate::funcclass::{
    DataEntry, LinearClass, ModelClass, StageDataset, Stats, TargetKind, UncertaintyState,
};
use crate::metrics::{MetricsRecorder, RunMetrics};

/// Shared knobs for the LSVI-style baselines. The bonus coefficient
/// defaults to the same practical constant as MQL-UCB so comparisons are
/// apples-to-apples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    pub lambda: f64,
    pub beta_c: f64,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig { lambda: 1.0, beta_c: 0.05 }
    }
}

/// A runnable agent description. `BudgetLimited` wraps any inner agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Agent {
    MqlUcb { config: AlgoConfig },
    LsviUcb { config: BaselineConfig },
    DetRareSwitch { config: BaselineConfig },
    UniformRandom,
    BudgetLimited { budget: usize, inner: Box<Agent> },
}

impl Agent {
    /// Run this agent for `num_episodes` episodes. For MQL-UCB the stored
    /// config's episode count is overridden by `num_episodes`.
    pub fn run(
        &self,
        mdp: &MdpSpec,
        class: &ModelClass,
        num_episodes: usize,
        rng: &mut ChaCha12Rng,
    ) -> Result<RunMetrics, AlgoError> {
        self.run_with_budget(mdp, class, num_episodes, None, rng)
    }

    fn run_with_budget(
        &self,
        mdp: &MdpSpec,
        class: &ModelClass,
        num_episodes: usize,
        budget: Option<usize>,
        rng: &mut ChaCha12Rng,
    ) -> Result<RunMetrics, AlgoError> {
        match self {
            Agent::MqlUcb { config } => {
                let mut cfg = config.clone();
                cfg.num_episodes = num_episodes;
                cfg.horizon = mdp.horizon;
                if budget.is_some() {
                    cfg.plan_budget = budget;
                }
                run_mql_ucb(mdp, class, &cfg, rng)
            }
            Agent::LsviUcb { config } => {
                run_lsvi(mdp, class, config, num_episodes, SwitchRule::EveryEpisode, budget, rng)
            }
            Agent::DetRareSwitch { config } => {
                run_lsvi(mdp, class, config, num_episodes, SwitchRule::DetDoubling, budget, rng)
            }
            Agent::UniformRandom => run_uniform_random(mdp, num_episodes, rng),
            Agent::BudgetLimited { budget: b, inner } => {
                let effective = budget.map_or(*b, |outer| outer.min(*b));
                inner.run_with_budget(mdp, class, num_episodes, Some(effective), rng)
            }
        }
    }
}

/// LSVI-UCB: unweighted ridge regression, bonus `beta sqrt(phi' A^-1 phi)`,
/// replanned every episode.
pub fn run_lsvi_ucb(
    mdp: &MdpSpec,
    class: &ModelClass,
    cfg: &BaselineConfig,
    num_episodes: usize,
    rng: &mut ChaCha12Rng,
) -> Result<RunMetrics, AlgoError> {
    run_lsvi(mdp, class, cfg, num_episodes, SwitchRule::EveryEpisode, None, rng)
}

/// LSVI-UCB replanning only when `det(A_h) >= 2 det(A_h at last switch)`
/// for some stage, tracked incrementally via the factor's log-det.
pub fn run_det_rare_switch(
    mdp: &MdpSpec,
    class: &ModelClass,
    cfg: &BaselineConfig,
    num_episodes: usize,
    rng: &mut ChaCha12Rng,
) -> Result<RunMetrics, AlgoError> {
    run_lsvi(mdp, class, cfg, num_episodes, SwitchRule::DetDoubling, None, rng)
}

/// Cap any agent at `budget` planning passes.
pub fn run_budget_limited(
    mdp: &MdpSpec,
    agent: &Agent,
    class: &ModelClass,
    budget: usize,
    num_episodes: usize,
    rng: &mut ChaCha12Rng,
) -> Result<RunMetrics, AlgoError> {
    agent.run_with_budget(mdp, class, num_episodes, Some(budget), rng)
}

/// The uniform-random reference policy (never plans, never switches).
pub fn run_uniform_random(
    mdp: &MdpSpec,
    num_episodes: usize,
    rng: &mut ChaCha12Rng,
) -> Result<RunMetrics, AlgoError> {
    let vstar = optimal_values(mdp);
    let policy = Policy::uniform(mdp);
    let v_pi = policy_value(mdp, &policy);
    let mut rec = MetricsRecorder::new(num_episodes);
    for k in 0..num_episodes {
        let traj = simulate_episode(mdp, &policy, k, rng)?;
        for step in &traj.steps {
            rec.add_var(one_step_variance(mdp, &v_pi.v[step.stage + 1], step));
        }
        let s1 = traj.steps[0].state;
        rec.push_episode(vstar.v[0][s1] - v_pi.v[0][s1], 0, 0.0, traj.total_reward());
    }
    Ok(rec.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SwitchRule {
    EveryEpisode,
    DetDoubling,
}

struct LsviStage {
    sketch: UncertaintyState,
    observations: Vec<(usize, f64, usize)>,
    q: Vec<f64>,
    v: Vec<f64>,
    bonus: Vec<f64>,
    log_det_at_switch: f64,
}

fn run_lsvi(
    mdp: &MdpSpec,
    class: &ModelClass,
    cfg: &BaselineConfig,
    num_episodes: usize,
    rule: SwitchRule,
    budget: Option<usize>,
    rng: &mut ChaCha12Rng,
) -> Result<RunMetrics, AlgoError> {
    let linear = match class {
        ModelClass::Linear(c) => c,
        ModelClass::Finite(_) => {
            return Err(AlgoError::BadConfig(
                "LSVI baselines require a linear feature class".into(),
            ))
        }
    };
    // Rebuild with the baseline's own regularizer; unit weights everywhere.
    let linear = LinearClass::new(linear.features().clone(), cfg.lambda, 1.0);
    let dim = linear.features().dim() as f64;
    let num_points = mdp.num_points();
    let num_states = mdp.num_states;
    let vstar = optimal_values(mdp);

    let mut stages: Vec<LsviStage> = (0..mdp.horizon)
        .map(|_| {
            let sketch = UncertaintyState::Linear(linear.sketch(1.0));
            let log_det = match &sketch {
                UncertaintyState::Linear(s) => s.log_det(),
                _ => unreachable!(),
            };
            LsviStage {
                sketch,
                observations: Vec::new(),
                q: vec![1.0; num_points],
                v: vec![1.0; num_states],
                bonus: vec![0.0; num_points],
                log_det_at_switch: log_det,
            }
        })
        .collect();

    let mut policy = greedy_from_tables(&stages, mdp);
    let mut v_pi = policy_value(mdp, &policy);
    let mut switches = 0usize;
    let mut rec = MetricsRecorder::new(num_episodes);

    for k in 1..=num_episodes {
        let wants_switch = match rule {
            SwitchRule::EveryEpisode => true,
            SwitchRule::DetDoubling => {
                k == 1
                    || stages.iter().any(|st| match &st.sketch {
                        UncertaintyState::Linear(s) => {
                            s.log_det() - st.log_det_at_switch >= std::f64::consts::LN_2
                        }
                        _ => unreachable!(),
                    })
            }
        };
        if wants_switch && budget.map_or(true, |b| switches < b) {
            switches += 1;
            let beta = cfg.beta_c * (dim * (1.0 + k as f64).ln()).sqrt();
            for h in (0..mdp.horizon).rev() {
                let v_next: Vec<f64> = if h + 1 < mdp.horizon {
                    stages[h + 1].v.clone()
                } else {
                    vec![0.0; num_states]
                };
                let stage = &mut stages[h];
                let mut data = StageDataset::new(1.0, 2.0);
                for &(point, reward, next_state) in &stage.observations {
                    let y = reward + v_next[next_state];
                    data.push(DataEntry {
                        point,
                        sigma_bar: 1.0,
                        target_opt: y,
                        target_pes: y,
                        target_sq: y * y,
                    })?;
                }
                let fit = linear.fit(&data, TargetKind::Optimistic)?;
                rec.record_fit_residual(fit.normal_eq_residual);
                for z in 0..num_points {
                    stage.bonus[z] = beta * stage.sketch.d2(z, Stats::Current).sqrt();
                    stage.q[z] = (fit.regressor.eval(z) + stage.bonus[z]).clamp(0.0, 1.0);
                }
                for s in 0..num_states {
                    let base = s * mdp.num_actions;
                    stage.v[s] = stage.q[base..base + mdp.num_actions]
                        .iter()
                        .cloned()
                        .fold(f64::NEG_INFINITY, f64::max);
                }
                stage.log_det_at_switch = match &stage.sketch {
                    UncertaintyState::Linear(s) => s.log_det(),
                    _ => unreachable!(),
                };
            }
            policy = greedy_from_tables(&stages, mdp);
            v_pi = policy_value(mdp, &policy);
        }
        if let Some(b) = budget {
            assert!(switches <= b, "plan budget exceeded: {switches} > {b}");
        }

        let traj = simulate_episode(mdp, &policy, k - 1, rng)?;
        let mut max_bonus = 0.0_f64;
        for step in &traj.steps {
            let h = step.stage;
            let z = mdp.point(step.state, step.action);
            rec.check_optimism(stages[h].v[step.state], vstar.v[h][step.state]);
            rec.add_var(one_step_variance(mdp, &v_pi.v[h + 1], step));
            max_bonus = max_bonus.max(stages[h].bonus[z]);
            let stage = &mut stages[h];
            stage.observations.push((z, step.reward, step.next_state));
            stage.sketch.update(z, 1.0)?;
        }
        let s1 = traj.steps[0].state;
        rec.push_episode(vstar.v[0][s1] - v_pi.v[0][s1], switches, max_bonus, traj.total_reward());
    }
    Ok(rec.finish())
}

fn greedy_from_tables(stages: &[LsviStage], mdp: &MdpSpec) -> Policy {
    Policy::Deterministic(
        stages
            .iter()
            .map(|st| {
                (0..mdp.num_states)
                    .map(|s| {
                        let base = s * mdp.num_actions;
                        let row = &st.q[base..base + mdp.num_actions];
                        let mut best = 0;
                        for (a, &v) in row.iter().enumerate() {
                            if v > row[best] {
                                best = a;
                            }
                        }
                        best
                    })
                    .collect()
            })
            .collect(),
    )
}

fn one_step_variance(mdp: &MdpSpec, v_next: &[f64], step: &crate::env::Step) -> f64 {
    let row = &mdp.transition[step.stage][step.state][step.action];
    let mut mean = 0.0;
    let mut second = 0.0;
    for (p, v) in row.iter().zip(v_next) {
        mean += p * v;
        second += p * v * v;
    }
    (second - mean * mean).max(0.0)
}
