//! MDP instance I/O: build an instance, serialize it as `mdp/v1`, reload
//! it, and show what the validator rejects (also available as
//! `mql-bench validate <file>`).
//!
//! ```bash
//! cargo run --release --example mdp_io
//! ```

use mql_ucb::env::{chain2, max_cumulative_reward, optimal_values, MdpSpec};

fn main() {
    let mdp = chain2();
    let text = mdp.to_json();
    println!("chain2 as mdp/v1 ({} bytes):\n{text}\n", text.len());

    let back = MdpSpec::from_json(&text).expect("round trip");
    assert_eq!(mdp, back);
    let tables = optimal_values(&back);
    println!(
        "reloaded: V*_1(s0) = {}, max cumulative reward = {}",
        tables.v[0][0],
        max_cumulative_reward(&back)
    );

    // The validator enforces the unit total-reward budget: adding a
    // stage-0 reward on the rewarding line pushes the best trajectory
    // above 1 and loading fails.
    let mut bad = back.clone();
    bad.reward[0][0][0] = 1.0;
    match MdpSpec::from_json(&bad.to_json()) {
        Err(e) => println!("\nover-budget variant rejected as expected: {e}"),
        Ok(_) => unreachable!("validator must reject a total reward above 1"),
    }
}
