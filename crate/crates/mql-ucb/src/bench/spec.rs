//! Experiment specifications, schema `expspec/v1`.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::algorithm::{AlgoConfig, BetaMode};
use crate::baselines::{Agent, BaselineConfig};
use crate::env::{chain2, make_hard_instance, random_mdp, MdpSpec};
use crate::funcclass::{LinearClass, ModelClass};

pub const EXPSPEC_SCHEMA: &str = "expspec/v1";

/// Which MDP an experiment runs on. `Hard` instances need the episode
/// count to lay out their epoch schedule, so resolution takes `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSpec {
    /// The two-state deterministic chain.
    Chain2,
    /// Dense random MDP, rewards rescaled to saturate the unit budget.
    Random { num_states: usize, num_actions: usize, horizon: usize, seed: u64 },
    /// Lower-bound hard instance of ambient dimension `d`.
    Hard { d: usize, horizon: usize, seed: u64 },
    /// External `mdp/v1` file.
    File { path: String },
}

impl InstanceSpec {
    pub fn resolve(&self, num_episodes: usize) -> Result<ResolvedInstance, BenchError> {
        let mdp = match self {
            InstanceSpec::Chain2 => chain2(),
            InstanceSpec::Random { num_states, num_actions, horizon, seed } => {
                let mut rng = ChaCha12Rng::seed_from_u64(*seed);
                random_mdp(*num_states, *num_actions, *horizon, &mut rng)
            }
            InstanceSpec::Hard { d, horizon, seed } => {
                let mut rng = ChaCha12Rng::seed_from_u64(*seed);
                make_hard_instance(*d, *horizon, num_episodes, &mut rng)
                    .map_err(|e| BenchError::Validation {
                        path: "instance".into(),
                        msg: e.to_string(),
                    })?
                    .mdp
            }
            InstanceSpec::File { path } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| BenchError::Io { path: path.into(), source: e })?;
                MdpSpec::from_json(&text).map_err(|e| BenchError::Validation {
                    path: format!("instance.file({path})"),
                    msg: e.to_string(),
                })?
            }
        };
        if let crate::env::InitialStateSchedule::PerEpisode { states } = &mdp.initial {
            if states.len() < num_episodes {
                return Err(BenchError::Validation {
                    path: "instance".into(),
                    msg: format!(
                        "per-episode initial schedule covers {} episodes, need {num_episodes}",
                        states.len()
                    ),
                });
            }
        }
        let class = ModelClass::Linear(LinearClass::unit_ball(mdp.tabular_features()));
        Ok(ResolvedInstance { mdp, class })
    }
}

/// An instance ready to run: the MDP plus its one-hot linear class.
#[derive(Debug, Clone)]
pub struct ResolvedInstance {
    pub mdp: MdpSpec,
    pub class: ModelClass,
}

/// Agent description inside a spec file. Configs are optional; omitted
/// ones resolve to the instance-derived defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AgentKind {
    MqlUcb {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mode: Option<BetaMode>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        config: Option<AlgoConfig>,
    },
    LsviUcb {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        config: Option<BaselineConfig>,
    },
    DetRareSwitch {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        config: Option<BaselineConfig>,
    },
    UniformRandom,
    BudgetLimited { budget: usize, inner: Box<AgentKind> },
}

impl AgentKind {
    /// Build the runnable agent for a resolved instance. Instance-derived
    /// fields (dimension proxy, horizon, episode count) always win over
    /// whatever a hand-written config carried.
    pub fn resolve(&self, instance: &ResolvedInstance, num_episodes: usize) -> Agent {
        match self {
            AgentKind::MqlUcb { mode, config } => {
                let dim = instance.class.dim_proxy();
                let horizon = instance.mdp.horizon;
                let mut cfg = match (config, mode) {
                    (Some(c), _) => c.clone(),
                    (None, Some(BetaMode::Theory)) => {
                        AlgoConfig::theory(dim, horizon, num_episodes)
                    }
                    (None, _) => AlgoConfig::practical(dim, horizon, num_episodes),
                };
                if let Some(m) = mode {
                    cfg.mode = *m;
                }
                cfg.dim_proxy = dim;
                cfg.horizon = horizon;
                cfg.num_episodes = num_episodes;
                Agent::MqlUcb { config: cfg }
            }
            AgentKind::LsviUcb { config } => {
                Agent::LsviUcb { config: config.clone().unwrap_or_default() }
            }
            AgentKind::DetRareSwitch { config } => {
                Agent::DetRareSwitch { config: config.clone().unwrap_or_default() }
            }
            AgentKind::UniformRandom => Agent::UniformRandom,
            AgentKind::BudgetLimited { budget, inner } => Agent::BudgetLimited {
                budget: *budget,
                inner: Box::new(inner.resolve(instance, num_episodes)),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentEntry {
    pub name: String,
    #[serde(flatten)]
    pub kind: AgentKind,
}

/// What gets written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmitOptions {
    #[serde(default = "default_true")]
    pub traces: bool,
    #[serde(default = "default_true")]
    pub summary: bool,
}

fn default_true() -> bool {
    true
}

impl Default for EmitOptions {
    fn default() -> Self {
        EmitOptions { traces: true, summary: true }
    }
}

/// A declarative experiment: one instance, several agents, several seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub schema: String,
    pub instance: InstanceSpec,
    pub agents: Vec<AgentEntry>,
    pub num_episodes: usize,
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
    #[serde(default)]
    pub emit: EmitOptions,
}

impl ExperimentSpec {
    /// Parse and validate, reporting the JSON path of whatever field is
    /// wrong.
    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: ExperimentSpec = serde_path_to_error::deserialize(de).map_err(|e| {
            BenchError::Validation { path: e.path().to_string(), msg: e.inner().to_string() }
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::Io { path: path.into(), source: e })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization cannot fail")
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let fail = |path: &str, msg: String| Err(BenchError::Validation { path: path.into(), msg });
        if self.schema != EXPSPEC_SCHEMA {
            return fail("schema", format!("expected {EXPSPEC_SCHEMA:?}, found {:?}", self.schema));
        }
        if self.num_episodes == 0 {
            return fail("num_episodes", "must be at least 1".into());
        }
        if self.agents.is_empty() {
            return fail("agents", "need at least one agent".into());
        }
        if self.seeds.is_empty() {
            return fail("seeds", "need at least one seed".into());
        }
        let mut seen = std::collections::HashSet::new();
        for (i, entry) in self.agents.iter().enumerate() {
            let path = format!("agents[{i}].name");
            if entry.name.is_empty() {
                return fail(&path, "must not be empty".into());
            }
            if !entry.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
                return fail(&path, format!("{:?} may only use [A-Za-z0-9_-]", entry.name));
            }
            if !seen.insert(entry.name.clone()) {
                return fail(&path, format!("duplicate agent name {:?}", entry.name));
            }
        }
        match &self.instance {
            InstanceSpec::Random { num_states, num_actions, horizon, .. } => {
                if *num_states == 0 || *num_actions == 0 || *horizon == 0 {
                    return fail("instance", "states, actions and horizon must be positive".into());
                }
            }
            InstanceSpec::Hard { d, horizon, .. } => {
                if *d < 4 || *d % 4 != 0 {
                    return fail("instance.d", format!("must be a positive multiple of 4, got {d}"));
                }
                if *horizon == 0 {
                    return fail("instance.horizon", "must be positive".into());
                }
            }
            _ => {}
        }
        Ok(())
    }
}
