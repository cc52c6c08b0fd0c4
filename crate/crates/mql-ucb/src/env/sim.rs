//! Episode simulation.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use super::{InitialStateSchedule, MdpError, MdpSpec, Policy, Step, Trajectory};

/// Run one episode under `policy`, episode index `k` (0-based).
///
/// The initial state comes from the spec's schedule; transitions are sampled
/// from the stage kernels. Deterministic given the rng state.
pub fn simulate_episode(
    mdp: &MdpSpec,
    policy: &Policy,
    k: usize,
    rng: &mut ChaCha12Rng,
) -> Result<Trajectory, MdpError> {
    let mut state = initial_state(mdp, k, rng)?;
    let mut steps = Vec::with_capacity(mdp.horizon);
    for h in 0..mdp.horizon {
        let action = match policy {
            Policy::Deterministic(actions) => actions[h][state],
            Policy::Stochastic(probs) => sample_index(&probs[h][state], rng),
        };
        let reward = mdp.reward[h][state][action];
        let next_state = sample_index(&mdp.transition[h][state][action], rng);
        steps.push(Step { stage: h, state, action, reward, next_state });
        state = next_state;
    }
    Ok(Trajectory { episode: k, steps })
}

pub(super) fn initial_state(
    mdp: &MdpSpec,
    k: usize,
    rng: &mut ChaCha12Rng,
) -> Result<usize, MdpError> {
    match &mdp.initial {
        InitialStateSchedule::Fixed { state } => Ok(*state),
        InitialStateSchedule::Categorical { probs } => Ok(sample_index(probs, rng)),
        InitialStateSchedule::PerEpisode { states } => states
            .get(k)
            .copied()
            .ok_or(MdpError::MissingEpisode { episode: k, len: states.len() }),
    }
}

/// Inverse-CDF sample from a probability vector. The final index absorbs any
/// rounding slack so the draw always lands.
fn sample_index(probs: &[f64], rng: &mut ChaCha12Rng) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}
