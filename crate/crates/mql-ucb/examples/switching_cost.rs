//! Measure the policy-switching cost of MQL-UCB as the episode budget
//! grows and compare it against the logarithmic reference curve
//! 3 d H log2(K+1). The switch count should stay far below it and grow
//! roughly logarithmically, not linearly.
//!
//! ```bash
//! cargo run --release --example switching_cost
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use mql_ucb::algorithm::{run_mql_ucb, AlgoConfig};
use mql_ucb::env::random_mdp;
use mql_ucb::funcclass::{LinearClass, ModelClass};

fn main() {
    let mut instance_rng = ChaCha12Rng::seed_from_u64(42);
    let mdp = random_mdp(4, 3, 3, &mut instance_rng);
    let class = ModelClass::Linear(LinearClass::unit_ball(mdp.tabular_features()));
    let d = class.dim_proxy();

    println!("one-hot dimension d = {d}, horizon H = {}\n", mdp.horizon);
    println!("{:>8} {:>10} {:>16} {:>12}", "K", "l_K", "3dH log2(K+1)", "regret");
    for k in [250usize, 500, 1000, 2000, 4000, 8000] {
        let cfg = AlgoConfig::practical(d, mdp.horizon, k);
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let metrics = run_mql_ucb(&mdp, &class, &cfg, &mut rng).expect("run failed");
        let bound = 3.0 * d * mdp.horizon as f64 * ((k + 1) as f64).log2();
        println!(
            "{:>8} {:>10} {:>16.0} {:>12.1}",
            k, metrics.total_switches, bound, metrics.final_cum_regret
        );
    }
}
