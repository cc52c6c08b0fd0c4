//! Minimal end-to-end run: MQL-UCB on a small stochastic MDP, with the
//! exact-DP regret printed at a few checkpoints.
//!
//! ```bash
//! cargo run --release --example quickstart
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use mql_ucb::algorithm::{run_mql_ucb, AlgoConfig};
use mql_ucb::env::random_mdp;
use mql_ucb::funcclass::{LinearClass, ModelClass};

fn main() {
    let num_episodes = 3000;
    let mut instance_rng = ChaCha12Rng::seed_from_u64(7);
    let mdp = random_mdp(4, 3, 3, &mut instance_rng);
    let class = ModelClass::Linear(LinearClass::unit_ball(mdp.tabular_features()));

    // Defaults: practical confidence radii, switching threshold chi = 1,
    // weight floor alpha = 1/sqrt(KH).
    let cfg = AlgoConfig::practical(class.dim_proxy(), mdp.horizon, num_episodes);

    let mut rng = ChaCha12Rng::seed_from_u64(1);
    let metrics = run_mql_ucb(&mdp, &class, &cfg, &mut rng).expect("run failed");

    println!(
        "MQL-UCB on a random |S|=4, |A|=3, H=3 instance ({} episodes)\n",
        num_episodes
    );
    println!("{:>8} {:>14} {:>10} {:>10}", "episode", "cum regret", "switches", "bonus");
    for k in [10, 100, 500, 1000, 2000, num_episodes] {
        let row = &metrics.rows[k - 1];
        println!(
            "{:>8} {:>14.3} {:>10} {:>10.4}",
            row.k, row.cum_regret, row.switches, row.max_bonus
        );
    }
    println!(
        "\nfinal: regret {:.2}, {} policy switches, Var_K {:.2}, sublinearity ratio {:.3}",
        metrics.final_cum_regret,
        metrics.total_switches,
        metrics.var_k,
        metrics.sublinearity_ratio()
    );
    println!(
        "invariant counters (should be zero): {:?}",
        metrics.violations
    );
}
