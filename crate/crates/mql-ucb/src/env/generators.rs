//! Benchmark instance generators.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use super::{max_cumulative_reward, InitialStateSchedule, MdpSpec};

/// Two-state, two-action, two-stage deterministic chain.
///
/// From `s0` at the first stage, action 0 moves to `s1` and action 1
/// self-loops; the only reward is 1 for action 0 at `s1` in the second
/// stage. So the optimal play is `(a0, a0)` with value 1.
pub fn chain2() -> MdpSpec {
    let horizon = 2;
    let mut transition = vec![vec![vec![vec![0.0; 2]; 2]; 2]; horizon];
    let mut reward = vec![vec![vec![0.0; 2]; 2]; horizon];
    // Stage 0: s0 --a0--> s1, s0 --a1--> s0, s1 self-loops.
    transition[0][0][0][1] = 1.0;
    transition[0][0][1][0] = 1.0;
    transition[0][1][0][1] = 1.0;
    transition[0][1][1][1] = 1.0;
    // Stage 1: transitions are terminal, keep self-loops.
    for s in 0..2 {
        for a in 0..2 {
            transition[1][s][a][s] = 1.0;
        }
    }
    reward[1][1][0] = 1.0;
    MdpSpec::new(2, 2, horizon, transition, reward, InitialStateSchedule::Fixed { state: 0 })
        .expect("chain2 is a valid instance")
}

/// Random dense MDP with uniformly drawn kernels and rewards, rescaled so
/// the best trajectory collects total reward exactly 1.
pub fn random_mdp(
    num_states: usize,
    num_actions: usize,
    horizon: usize,
    rng: &mut ChaCha12Rng,
) -> MdpSpec {
    let mut transition =
        vec![vec![vec![vec![0.0; num_states]; num_actions]; num_states]; horizon];
    let mut reward = vec![vec![vec![0.0; num_actions]; num_states]; horizon];
    for h in 0..horizon {
        for s in 0..num_states {
            for a in 0..num_actions {
                let mut row: Vec<f64> = (0..num_states).map(|_| rng.random::<f64>() + 1e-3).collect();
                let sum: f64 = row.iter().sum();
                row.iter_mut().for_each(|p| *p /= sum);
                transition[h][s][a] = row;
                reward[h][s][a] = rng.random::<f64>();
            }
        }
    }
    let mut mdp = MdpSpec {
        num_states,
        num_actions,
        horizon,
        transition,
        reward,
        initial: InitialStateSchedule::Fixed { state: 0 },
    };
    let max = max_cumulative_reward(&mdp);
    for stage in &mut mdp.reward {
        for row in stage {
            for r in row {
                *r /= max;
            }
        }
    }
    mdp.validate().expect("rescaled random MDP is valid");
    mdp
}
