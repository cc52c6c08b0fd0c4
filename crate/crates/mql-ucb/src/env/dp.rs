//! Backward dynamic programming oracles.

use super::{MdpSpec, Policy, ValueTables};

/// Optimal values by backward induction:
/// `Q*_h(s,a) = r_h(s,a) + sum_{s'} P_h(s'|s,a) V*_{h+1}(s')` with
/// `V*_{H} = 0` and `V*_h(s) = max_a Q*_h(s,a)`.
pub fn optimal_values(mdp: &MdpSpec) -> ValueTables {
    backward(mdp, |_h, _s, q_row| {
        q_row.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    })
}

/// Value of a fixed stagewise policy by backward induction.
pub fn policy_value(mdp: &MdpSpec, policy: &Policy) -> ValueTables {
    backward(mdp, |h, s, q_row| match policy {
        Policy::Deterministic(actions) => q_row[actions[h][s]],
        Policy::Stochastic(probs) => probs[h][s].iter().zip(q_row).map(|(p, q)| p * q).sum(),
    })
}

fn backward(mdp: &MdpSpec, mut pick: impl FnMut(usize, usize, &[f64]) -> f64) -> ValueTables {
    let h_total = mdp.horizon;
    let mut v = vec![vec![0.0; mdp.num_states]; h_total + 1];
    let mut q = vec![vec![vec![0.0; mdp.num_actions]; mdp.num_states]; h_total];
    for h in (0..h_total).rev() {
        for s in 0..mdp.num_states {
            for a in 0..mdp.num_actions {
                let cont: f64 = mdp.transition[h][s][a]
                    .iter()
                    .zip(&v[h + 1])
                    .map(|(p, vn)| p * vn)
                    .sum();
                q[h][s][a] = mdp.reward[h][s][a] + cont;
            }
            v[h][s] = pick(h, s, &q[h][s]);
        }
    }
    ValueTables { v, q }
}

/// Maximum summed reward over trajectories with positive probability,
/// starting anywhere. Used to enforce the total-reward-at-most-1 contract.
pub fn max_cumulative_reward(mdp: &MdpSpec) -> f64 {
    let mut best_next = vec![0.0_f64; mdp.num_states];
    for h in (0..mdp.horizon).rev() {
        let mut best = vec![f64::NEG_INFINITY; mdp.num_states];
        for s in 0..mdp.num_states {
            for a in 0..mdp.num_actions {
                let reach = mdp.transition[h][s][a]
                    .iter()
                    .zip(&best_next)
                    .filter(|(p, _)| **p > 0.0)
                    .map(|(_, m)| *m)
                    .fold(f64::NEG_INFINITY, f64::max);
                best[s] = best[s].max(mdp.reward[h][s][a] + reach);
            }
        }
        best_next = best;
    }
    best_next.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}
