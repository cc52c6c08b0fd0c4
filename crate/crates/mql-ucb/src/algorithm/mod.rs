//! MQL-UCB: monotone optimistic Q-learning with rare policy switching.
//!
//! One episode proceeds as: check the switching criterion (forced at the
//! first episode); if it fires, replan backward over stages — refit the
//! optimistic, pessimistic, and second-moment regressors against targets
//! recomputed from the current value stacks, freeze the uncertainty
//! statistics, and push new snapshots — then act greedily on the
//! optimistic values for a full episode, recording per-stage variance
//! weights and feeding the switch accumulators with frozen-statistics
//! uncertainty.
//!
//! Two deliberate asymmetries from the planning bonuses: the weight
//! `sigma_bar` uses D̄ against *current* statistics, while bonuses use the
//! snapshot frozen at their switch; and the second-moment regression is
//! the only unweighted one.

pub mod config;
mod qstack;
mod switch;
mod variance;

pub use config::{AlgoConfig, BetaMode, BetaValues};
pub use qstack::{QStack, Snapshot};
pub use switch::SwitchState;
pub use variance::{estimate_variance, VarianceRecord};

use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::env::{
    optimal_values, policy_value, simulate_episode, MdpError, MdpSpec, Policy, ValueTables,
};
use crate::funcclass::{
    DataEntry, FuncError, ModelClass, StageDataset, Stats, TargetKind, UncertaintyState,
};
use crate::metrics::{MetricsRecorder, RunMetrics, ViolationCounters};

#[derive(Debug, Error)]
pub enum AlgoError {
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error(transparent)]
    Mdp(#[from] MdpError),
    #[error("model class domain has {class_points} points but the MDP has {mdp_points}")]
    DomainMismatch { class_points: usize, mdp_points: usize },
}

/// Run MQL-UCB for `cfg.num_episodes` episodes and report metrics.
pub fn run_mql_ucb(
    mdp: &MdpSpec,
    class: &ModelClass,
    cfg: &AlgoConfig,
    rng: &mut ChaCha12Rng,
) -> Result<RunMetrics, AlgoError> {
    let mut state = MqlUcbState::new(mdp, class, cfg)?;
    let mut rec = MetricsRecorder::new(cfg.num_episodes);
    for k in 1..=cfg.num_episodes {
        state.episode(k, rng, &mut rec)?;
    }
    Ok(rec.finish())
}

struct Observation {
    point: usize,
    reward: f64,
    next_state: usize,
}

struct StageRuntime {
    observations: Vec<Observation>,
    sigma_bars: Vec<f64>,
    sketch: UncertaintyState,
    /// Latest regressors evaluated over all points.
    f_hat: Vec<f64>,
    f_check: Vec<f64>,
    f_tilde: Vec<f64>,
    stack: QStack,
}

/// The full per-run state of the algorithm; drives one episode at a time.
pub(crate) struct MqlUcbState<'a> {
    mdp: &'a MdpSpec,
    class: &'a ModelClass,
    cfg: &'a AlgoConfig,
    vstar: ValueTables,
    stages: Vec<StageRuntime>,
    switching: SwitchState,
    policy: Policy,
    v_pi: ValueTables,
    plans_used: usize,
}

impl<'a> MqlUcbState<'a> {
    pub(crate) fn new(
        mdp: &'a MdpSpec,
        class: &'a ModelClass,
        cfg: &'a AlgoConfig,
    ) -> Result<Self, AlgoError> {
        cfg.validate()?;
        if class.num_points() != mdp.num_points() {
            return Err(AlgoError::DomainMismatch {
                class_points: class.num_points(),
                mdp_points: mdp.num_points(),
            });
        }
        let num_points = mdp.num_points();
        let stages: Vec<StageRuntime> = (0..mdp.horizon)
            .map(|_| StageRuntime {
                observations: Vec::new(),
                sigma_bars: Vec::new(),
                sketch: class.uncertainty_state(cfg.alpha),
                f_hat: vec![0.0; num_points],
                f_check: vec![0.0; num_points],
                f_tilde: vec![0.0; num_points],
                stack: QStack::new(mdp.num_states, mdp.num_actions),
            })
            .collect();
        let policy = greedy_policy(&stages, mdp);
        let v_pi = policy_value(mdp, &policy);
        Ok(MqlUcbState {
            mdp,
            class,
            cfg,
            vstar: optimal_values(mdp),
            stages,
            switching: SwitchState::new(mdp.horizon),
            policy,
            v_pi,
            plans_used: 0,
        })
    }

    #[cfg(test)]
    pub(crate) fn stack(&self, stage: usize) -> &QStack {
        &self.stages[stage].stack
    }

    #[cfg(test)]
    pub(crate) fn switch_count(&self) -> usize {
        self.switching.switch_count
    }

    /// Execute episode `k` (1-based): maybe replan, then act for one
    /// episode and update the weighted history.
    pub(crate) fn episode(
        &mut self,
        k: usize,
        rng: &mut ChaCha12Rng,
        rec: &mut MetricsRecorder,
    ) -> Result<(), AlgoError> {
        let budget_ok = self.cfg.plan_budget.map_or(true, |b| self.plans_used < b);
        let switched = self.switching.should_switch(self.cfg.chi, k) && budget_ok;
        if switched {
            self.switching.record_switch(k);
            self.plans_used += 1;
            self.plan(k, rec)?;
            self.policy = greedy_policy(&self.stages, self.mdp);
            self.v_pi = policy_value(self.mdp, &self.policy);
        }
        if let Some(b) = self.cfg.plan_budget {
            assert!(self.plans_used <= b, "plan budget exceeded: {} > {b}", self.plans_used);
        }
        if self.cfg.check_stability && !switched && self.switching.k_last > 0 {
            self.stability_probes(rec.violations_mut());
        }

        let betas = self.cfg.betas(k, self.switching.switch_count);
        let traj = simulate_episode(self.mdp, &self.policy, k - 1, rng)?;
        let mut max_bonus = 0.0_f64;
        for step in &traj.steps {
            let h = step.stage;
            let z = self.mdp.point(step.state, step.action);
            rec.check_optimism(self.stages[h].stack.v_at(step.state), self.vstar.v[h][step.state]);
            rec.add_var(one_step_value_variance(self.mdp, &self.v_pi, h, step.state, step.action));
            max_bonus = max_bonus.max(self.stages[h].stack.latest_bonus(z));

            let stage = &mut self.stages[h];
            let d2_current = stage.sketch.d2(z, Stats::Current);
            let vr = estimate_variance(
                stage.f_hat[z],
                stage.f_check[z],
                stage.f_tilde[z],
                d2_current,
                &betas,
                self.cfg,
            );
            stage.observations.push(Observation {
                point: z,
                reward: step.reward,
                next_state: step.next_state,
            });
            stage.sigma_bars.push(vr.sigma_bar);
            stage.sketch.update(z, vr.sigma_bar)?;
            let d2_frozen = stage.sketch.d2(z, Stats::Frozen);
            self.switching.accumulate(h, d2_frozen / (vr.sigma_bar * vr.sigma_bar));
        }

        let s1 = traj.steps[0].state;
        let regret = self.vstar.v[0][s1] - self.v_pi.v[0][s1];
        rec.push_episode(regret, self.switching.switch_count, max_bonus, traj.total_reward());
        Ok(())
    }

    /// Backward planning pass at episode `k`. Stage `h` regresses against
    /// targets built from the stage-(h+1) tables as updated earlier in this
    /// same pass.
    fn plan(&mut self, k: usize, rec: &mut MetricsRecorder) -> Result<(), AlgoError> {
        let betas = self.cfg.betas(k, self.switching.switch_count);
        let num_points = self.mdp.num_points();
        let num_states = self.mdp.num_states;
        for h in (0..self.mdp.horizon).rev() {
            let (v_next, v_check_next): (Vec<f64>, Vec<f64>) = if h + 1 < self.mdp.horizon {
                let next = &self.stages[h + 1].stack;
                (
                    (0..num_states).map(|s| next.v_at(s)).collect(),
                    (0..num_states).map(|s| next.v_check_at(s)).collect(),
                )
            } else {
                (vec![0.0; num_states], vec![0.0; num_states])
            };

            let stage = &mut self.stages[h];
            let mut data = StageDataset::new(self.cfg.alpha, self.cfg.range_l);
            for (obs, sigma_bar) in stage.observations.iter().zip(&stage.sigma_bars) {
                let y_opt = obs.reward + v_next[obs.next_state];
                let y_pes = obs.reward + v_check_next[obs.next_state];
                data.push(DataEntry {
                    point: obs.point,
                    sigma_bar: *sigma_bar,
                    target_opt: y_opt,
                    target_pes: y_pes,
                    target_sq: y_opt * y_opt,
                })?;
            }

            let fit_hat = self.class.fit(&data, TargetKind::Optimistic)?;
            let fit_check = self.class.fit(&data, TargetKind::Pessimistic)?;
            let fit_tilde = self.class.fit(&data, TargetKind::Squared)?;
            rec.record_fit_residual(fit_hat.normal_eq_residual);
            rec.record_fit_residual(fit_check.normal_eq_residual);
            rec.record_fit_residual(fit_tilde.normal_eq_residual);

            for z in 0..num_points {
                stage.f_hat[z] = fit_hat.regressor.eval(z);
                stage.f_check[z] = fit_check.regressor.eval(z);
                stage.f_tilde[z] = fit_tilde.regressor.eval(z);
            }

            stage.sketch.freeze();
            let mut bonus = Vec::with_capacity(num_points);
            let mut bonus_check = Vec::with_capacity(num_points);
            for z in 0..num_points {
                let d_bar = stage.sketch.d2(z, Stats::Frozen).sqrt();
                bonus.push(betas.beta_hat * d_bar);
                bonus_check.push(betas.beta_check * d_bar);
            }
            stage.stack.push(
                Snapshot {
                    episode: k,
                    beta_hat: betas.beta_hat,
                    beta_check: betas.beta_check,
                    f_hat: fit_hat.regressor,
                    f_check: fit_check.regressor,
                    bonus,
                    bonus_check,
                },
                rec.violations_mut(),
            );
        }
        Ok(())
    }

    /// Between switches the current uncertainty may shrink below the
    /// frozen snapshot by at most the factor `1 + chi`. Probes a spread of
    /// points at every stage.
    fn stability_probes(&self, viol: &mut ViolationCounters) {
        let num_points = self.mdp.num_points();
        let stride = (num_points / 100).max(1);
        for stage in &self.stages {
            for z in (0..num_points).step_by(stride) {
                let current = stage.sketch.d2(z, Stats::Current);
                let frozen = stage.sketch.d2(z, Stats::Frozen);
                if current < frozen / (1.0 + self.cfg.chi) - 1e-9 {
                    viol.stability += 1;
                }
            }
        }
    }
}

fn greedy_policy(stages: &[StageRuntime], mdp: &MdpSpec) -> Policy {
    Policy::Deterministic(
        stages
            .iter()
            .map(|st| (0..mdp.num_states).map(|s| st.stack.greedy_action(s)).collect())
            .collect(),
    )
}

/// `Var_{s'}(V(s'))` for the one-step transition out of `(h, s, a)`; the
/// deterministic reward cancels.
fn one_step_value_variance(
    mdp: &MdpSpec,
    values: &ValueTables,
    h: usize,
    s: usize,
    a: usize,
) -> f64 {
    let row = &mdp.transition[h][s][a];
    let v_next = &values.v[h + 1];
    let mut mean = 0.0;
    let mut second = 0.0;
    for (p, v) in row.iter().zip(v_next) {
        mean += p * v;
        second += p * v * v;
    }
    (second - mean * mean).max(0.0)
}

#[cfg(test)]
mod tests;
