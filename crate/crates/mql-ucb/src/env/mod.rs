//! Finite time-inhomogeneous episodic MDPs and exact oracles.
//!
//! An [`MdpSpec`] holds stagewise transition kernels and deterministic
//! rewards under the contract that the summed reward along every reachable
//! trajectory is at most 1, which keeps all value functions inside `[0, 1]`.
//! That range is load-bearing: the planner clips its optimistic values at 1.
//!
//! Exact optimal and per-policy values come from backward dynamic
//! programming ([`optimal_values`], [`policy_value`]); episodes are sampled
//! by [`simulate_episode`]. [`hard`] builds the two-state sub-MDP family
//! used to exhibit the switching-cost lower bound.

mod dp;
mod generators;
mod hard;
mod io;
mod sim;

pub use dp::{max_cumulative_reward, optimal_values, policy_value};
pub use generators::{chain2, random_mdp};
pub use hard::{make_hard_instance, HardInstance};
pub use sim::simulate_episode;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::funcclass::FeatureMap;

/// Tolerance for transition-row normalization and the total-reward check.
pub const PROB_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum MdpError {
    #[error("transition row (h={h}, s={s}, a={a}) sums to {sum}, expected 1")]
    BadTransitionRow { h: usize, s: usize, a: usize, sum: f64 },
    #[error("transition entry (h={h}, s={s}, a={a}) is negative or not finite")]
    BadTransitionEntry { h: usize, s: usize, a: usize },
    #[error("reward (h={h}, s={s}, a={a}) = {value} outside [0, 1]")]
    RewardOutOfRange { h: usize, s: usize, a: usize, value: f64 },
    #[error("max cumulative reward along a reachable trajectory is {max}, exceeds 1")]
    TotalRewardExceedsOne { max: f64 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("initial-state schedule has {len} entries, episode {episode} requested")]
    MissingEpisode { episode: usize, len: usize },
    #[error("initial-state distribution must be a probability vector over states")]
    BadInitialDistribution,
    #[error("initial state {state} out of range (num_states = {num_states})")]
    BadInitialState { state: usize, num_states: usize },
    #[error("policy is not defined for all (stage, state) pairs: {0}")]
    PolicyIncomplete(String),
    #[error("hard instance needs d >= 4 and d divisible by 4, got d = {d}")]
    InvalidHardDim { d: usize },
    #[error("expected schema {expected:?}, found {found:?}")]
    BadSchema { expected: String, found: String },
    #[error("failed to parse MDP file: {0}")]
    Parse(String),
}

/// How the environment picks the initial state of each episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum InitialStateSchedule {
    /// Every episode starts in the same state.
    Fixed { state: usize },
    /// Initial state drawn i.i.d. from a categorical distribution.
    Categorical { probs: Vec<f64> },
    /// Adversarial per-episode list; episode `k` (0-based) uses `states[k]`.
    PerEpisode { states: Vec<usize> },
}

/// A finite episodic MDP with stagewise kernels and deterministic rewards.
///
/// Indexing: stages `h` run `0..horizon`, states `0..num_states`, actions
/// `0..num_actions`. `transition[h][s][a]` is a probability vector over the
/// next state and `reward[h][s][a]` is a deterministic reward in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MdpSpec {
    pub num_states: usize,
    pub num_actions: usize,
    pub horizon: usize,
    pub transition: Vec<Vec<Vec<Vec<f64>>>>,
    pub reward: Vec<Vec<Vec<f64>>>,
    pub initial: InitialStateSchedule,
}

impl MdpSpec {
    /// Build and validate in one step; constructors reject instances that
    /// could push values outside `[0, 1]`.
    pub fn new(
        num_states: usize,
        num_actions: usize,
        horizon: usize,
        transition: Vec<Vec<Vec<Vec<f64>>>>,
        reward: Vec<Vec<Vec<f64>>>,
        initial: InitialStateSchedule,
    ) -> Result<Self, MdpError> {
        let mdp = Self { num_states, num_actions, horizon, transition, reward, initial };
        mdp.validate()?;
        Ok(mdp)
    }

    /// Flat state-action index, used as the domain point id everywhere.
    #[inline]
    pub fn point(&self, state: usize, action: usize) -> usize {
        state * self.num_actions + action
    }

    /// Number of state-action points `|S| * |A|`.
    pub fn num_points(&self) -> usize {
        self.num_states * self.num_actions
    }

    /// One-hot feature embedding of the state-action space, ambient
    /// dimension `|S| * |A|`.
    pub fn tabular_features(&self) -> FeatureMap {
        FeatureMap::one_hot(self.num_points())
    }

    pub fn validate(&self) -> Result<(), MdpError> {
        if self.transition.len() != self.horizon || self.reward.len() != self.horizon {
            return Err(MdpError::Shape(format!(
                "expected {} stages, got transition {} / reward {}",
                self.horizon,
                self.transition.len(),
                self.reward.len()
            )));
        }
        for h in 0..self.horizon {
            if self.transition[h].len() != self.num_states || self.reward[h].len() != self.num_states {
                return Err(MdpError::Shape(format!("stage {h} state dimension mismatch")));
            }
            for s in 0..self.num_states {
                if self.transition[h][s].len() != self.num_actions
                    || self.reward[h][s].len() != self.num_actions
                {
                    return Err(MdpError::Shape(format!("stage {h} state {s} action dimension mismatch")));
                }
                for a in 0..self.num_actions {
                    let row = &self.transition[h][s][a];
                    if row.len() != self.num_states {
                        return Err(MdpError::Shape(format!(
                            "transition row (h={h}, s={s}, a={a}) has length {}",
                            row.len()
                        )));
                    }
                    if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
                        return Err(MdpError::BadTransitionEntry { h, s, a });
                    }
                    let sum: f64 = row.iter().sum();
                    if (sum - 1.0).abs() > PROB_TOL {
                        return Err(MdpError::BadTransitionRow { h, s, a, sum });
                    }
                    let r = self.reward[h][s][a];
                    if !r.is_finite() || !(0.0..=1.0).contains(&r) {
                        return Err(MdpError::RewardOutOfRange { h, s, a, value: r });
                    }
                }
            }
        }
        self.validate_initial()?;
        let max = max_cumulative_reward(self);
        if max > 1.0 + PROB_TOL {
            return Err(MdpError::TotalRewardExceedsOne { max });
        }
        Ok(())
    }

    fn validate_initial(&self) -> Result<(), MdpError> {
        match &self.initial {
            InitialStateSchedule::Fixed { state } => {
                if *state >= self.num_states {
                    return Err(MdpError::BadInitialState { state: *state, num_states: self.num_states });
                }
            }
            InitialStateSchedule::Categorical { probs } => {
                if probs.len() != self.num_states
                    || probs.iter().any(|p| !p.is_finite() || *p < 0.0)
                    || (probs.iter().sum::<f64>() - 1.0).abs() > PROB_TOL
                {
                    return Err(MdpError::BadInitialDistribution);
                }
            }
            InitialStateSchedule::PerEpisode { states } => {
                for &s in states {
                    if s >= self.num_states {
                        return Err(MdpError::BadInitialState { state: s, num_states: self.num_states });
                    }
                }
            }
        }
        Ok(())
    }
}

/// A stagewise policy: deterministic state-to-action maps or per-state
/// action distributions.
#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    /// `actions[h][s]` is the action taken at stage `h` in state `s`.
    Deterministic(Vec<Vec<usize>>),
    /// `probs[h][s]` is a distribution over actions.
    Stochastic(Vec<Vec<Vec<f64>>>),
}

impl Policy {
    /// The uniform-random policy for a given MDP.
    pub fn uniform(mdp: &MdpSpec) -> Self {
        let row = vec![1.0 / mdp.num_actions as f64; mdp.num_actions];
        Policy::Stochastic(vec![vec![row; mdp.num_states]; mdp.horizon])
    }

    pub fn check(&self, mdp: &MdpSpec) -> Result<(), MdpError> {
        match self {
            Policy::Deterministic(actions) => {
                if actions.len() != mdp.horizon || actions.iter().any(|row| row.len() != mdp.num_states) {
                    return Err(MdpError::PolicyIncomplete("wrong table shape".into()));
                }
                if actions.iter().flatten().any(|&a| a >= mdp.num_actions) {
                    return Err(MdpError::PolicyIncomplete("action index out of range".into()));
                }
            }
            Policy::Stochastic(probs) => {
                if probs.len() != mdp.horizon || probs.iter().any(|row| row.len() != mdp.num_states) {
                    return Err(MdpError::PolicyIncomplete("wrong table shape".into()));
                }
                for row in probs.iter().flatten() {
                    if row.len() != mdp.num_actions
                        || row.iter().any(|p| !p.is_finite() || *p < 0.0)
                        || (row.iter().sum::<f64>() - 1.0).abs() > PROB_TOL
                    {
                        return Err(MdpError::PolicyIncomplete("bad action distribution".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Exact value tables from dynamic programming.
///
/// `v[h][s]` for `h` in `0..=horizon` (`v[horizon]` is identically zero) and
/// `q[h][s][a]` for `h` in `0..horizon`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTables {
    pub v: Vec<Vec<f64>>,
    pub q: Vec<Vec<Vec<f64>>>,
}

impl ValueTables {
    pub fn value_at_start(&self, state: usize) -> f64 {
        self.v[0][state]
    }
}

/// One simulated episode: exactly `horizon` steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// 0-based episode index.
    pub episode: usize,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub stage: usize,
    pub state: usize,
    pub action: usize,
    pub reward: f64,
    pub next_state: usize,
}

impl Trajectory {
    pub fn total_reward(&self) -> f64 {
        self.steps.iter().map(|s| s.reward).sum()
    }
}
