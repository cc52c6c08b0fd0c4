//! Hard-to-learn instance family for the switching-cost lower bound.
//!
//! An instance with ambient dimension `d` is a disjoint union of `d/4`
//! two-state sub-MDPs over a shared two-action set. Each sub-MDP hides a
//! uniformly random special action sequence: playing it keeps the agent in
//! the start state and pays reward 1 at the last stage; any deviation drops
//! into an absorbing state that never pays. Episodes are partitioned into
//! `d/4` equal epochs and the (adversarial) initial-state schedule confines
//! each epoch to its own sub-MDP. The sub-MDPs are dynamically disconnected,
//! so nothing learned in one epoch transfers to the next.
//!
//! With 2·(d/4) states and 2 actions the one-hot embedding has dimension
//! exactly `d`.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use super::{InitialStateSchedule, MdpError, MdpSpec, Policy};

#[derive(Debug, Clone)]
pub struct HardInstance {
    /// Number of sub-MDPs, `d / 4`.
    pub sub_count: usize,
    /// `special_actions[i][h]` is sub-MDP `i`'s hidden action at stage `h`.
    pub special_actions: Vec<Vec<usize>>,
    /// Half-open episode ranges, one per sub-MDP.
    pub epochs: Vec<(usize, usize)>,
    /// The flattened MDP over `2 * sub_count` states and 2 actions.
    pub mdp: MdpSpec,
}

impl HardInstance {
    /// Start state of sub-MDP `i`.
    pub fn start_state(&self, sub: usize) -> usize {
        2 * sub
    }

    /// Absorbing state of sub-MDP `i`.
    pub fn absorbing_state(&self, sub: usize) -> usize {
        2 * sub + 1
    }

    /// Which sub-MDP episode `k` (0-based) is scheduled to start in.
    pub fn sub_of_episode(&self, k: usize) -> usize {
        self.epochs
            .iter()
            .position(|&(lo, hi)| k >= lo && k < hi)
            .unwrap_or(self.sub_count - 1)
    }

    /// The policy that plays sub-MDP `i`'s special sequence from its start
    /// state (and action 0 elsewhere).
    pub fn special_policy(&self, sub: usize) -> Policy {
        let mut actions = vec![vec![0; self.mdp.num_states]; self.mdp.horizon];
        for h in 0..self.mdp.horizon {
            actions[h][self.start_state(sub)] = self.special_actions[sub][h];
        }
        Policy::Deterministic(actions)
    }
}

/// Build a hard instance of ambient dimension `d` (divisible by 4) with
/// `num_episodes` episodes split evenly across the sub-MDPs.
pub fn make_hard_instance(
    d: usize,
    horizon: usize,
    num_episodes: usize,
    rng: &mut ChaCha12Rng,
) -> Result<HardInstance, MdpError> {
    if d < 4 || d % 4 != 0 {
        return Err(MdpError::InvalidHardDim { d });
    }
    let sub_count = d / 4;
    let num_states = 2 * sub_count;
    let num_actions = 2;

    let special_actions: Vec<Vec<usize>> = (0..sub_count)
        .map(|_| (0..horizon).map(|_| rng.random_range(0..num_actions)).collect())
        .collect();

    let mut transition =
        vec![vec![vec![vec![0.0; num_states]; num_actions]; num_states]; horizon];
    let mut reward = vec![vec![vec![0.0; num_actions]; num_states]; horizon];
    for h in 0..horizon {
        for i in 0..sub_count {
            let start = 2 * i;
            let absorb = 2 * i + 1;
            for a in 0..num_actions {
                let dest = if a == special_actions[i][h] { start } else { absorb };
                transition[h][start][a][dest] = 1.0;
                transition[h][absorb][a][absorb] = 1.0;
            }
        }
    }
    for i in 0..sub_count {
        reward[horizon - 1][2 * i][special_actions[i][horizon - 1]] = 1.0;
    }

    let epochs: Vec<(usize, usize)> = (0..sub_count)
        .map(|i| (i * num_episodes / sub_count, (i + 1) * num_episodes / sub_count))
        .collect();
    let states: Vec<usize> = epochs
        .iter()
        .enumerate()
        .flat_map(|(i, &(lo, hi))| std::iter::repeat(2 * i).take(hi - lo))
        .collect();

    let mdp = MdpSpec::new(
        num_states,
        num_actions,
        horizon,
        transition,
        reward,
        InitialStateSchedule::PerEpisode { states },
    )?;

    Ok(HardInstance { sub_count, special_actions, epochs, mdp })
}
