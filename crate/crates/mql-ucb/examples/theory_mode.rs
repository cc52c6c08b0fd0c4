//! Practical vs theory confidence schedules.
//!
//! Theory mode evaluates the analysis radii with all O(1) constants set
//! to 1 and covering numbers replaced by configured proxies. The radii
//! are enormous, which is the point: optimism then holds essentially
//! always, at the price of much slower regret decay. Practical mode
//! trades a little optimism for usable desk-scale regret.
//!
//! ```bash
//! cargo run --release --example theory_mode
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use mql_ucb::algorithm::{run_mql_ucb, AlgoConfig, BetaMode};
use mql_ucb::env::random_mdp;
use mql_ucb::funcclass::{LinearClass, ModelClass};

fn main() {
    let num_episodes = 2000;
    let mut instance_rng = ChaCha12Rng::seed_from_u64(42);
    let mdp = random_mdp(4, 3, 3, &mut instance_rng);
    let class = ModelClass::Linear(LinearClass::unit_ball(mdp.tabular_features()));

    let theory = AlgoConfig::theory(class.dim_proxy(), mdp.horizon, num_episodes);
    println!("theory-mode radii (l_k = 2):");
    println!("{:>8} {:>10} {:>10} {:>10} {:>8}", "k", "beta_hat", "beta", "beta_tld", "gamma");
    for k in [1usize, 10, 100, 1000, 2000] {
        let b = theory.betas(k, 2);
        println!(
            "{:>8} {:>10.2} {:>10.2} {:>10.2} {:>8.2}",
            k, b.beta_hat, b.beta, b.beta_tilde, b.gamma
        );
    }

    println!("\n{:>10} {:>12} {:>10} {:>20}", "mode", "cum regret", "switches", "optimism violations");
    for mode in [BetaMode::Practical, BetaMode::Theory] {
        let mut cfg = AlgoConfig::practical(class.dim_proxy(), mdp.horizon, num_episodes);
        cfg.mode = mode;
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let m = run_mql_ucb(&mdp, &class, &cfg, &mut rng).expect("run failed");
        println!(
            "{:>10} {:>12.1} {:>10} {:>12}/{}",
            format!("{mode:?}").to_lowercase(),
            m.final_cum_regret,
            m.total_switches,
            m.violations.optimism,
            m.optimism_checked
        );
    }
}
