//! The two D²-uncertainty oracles side by side: the linear elliptical
//! closed form and the brute-force pair-sup over a finite grid class,
//! plus the freeze/update semantics the rare-switching controller relies
//! on.
//!
//! ```bash
//! cargo run --release --example uncertainty_oracles
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use mql_ucb::funcclass::{FeatureMap, FiniteClass, LinearClass, Stats};

fn main() {
    let mut rng = ChaCha12Rng::seed_from_u64(9);
    // A shared point domain on the unit disk: 30 data points, 6 probes.
    let points: Vec<Vec<f64>> = (0..36)
        .map(|_| {
            let a = rng.random::<f64>() * std::f64::consts::TAU;
            let r = (0.2 + 0.8 * rng.random::<f64>()).sqrt();
            vec![r * a.cos(), r * a.sin()]
        })
        .collect();

    let linear = LinearClass::unit_ball(FeatureMap::from_rows(points.clone()).unwrap());
    let grid = FiniteClass::ball_grid(&points, 0.05, 1.0).unwrap();
    println!(
        "linear class (d = 2, lambda_eff = {}) vs {}-member 0.05-grid discretization\n",
        linear.lambda_eff(),
        grid.len()
    );

    let mut lin = linear.sketch(1e-6);
    let mut fin = grid.sketch(1e-6);
    for p in 0..30 {
        let sigma = 0.5 + rng.random::<f64>();
        lin.update(p, sigma).unwrap();
        fin.update(p, sigma).unwrap();
    }

    println!("{:>6} {:>14} {:>14} {:>10}", "probe", "closed form", "pair sup", "diff");
    for q in 30..36 {
        let a = lin.d2(q, Stats::Current);
        let b = fin.d2(q, Stats::Current);
        println!("{:>6} {:>14.6} {:>14.6} {:>10.2e}", q, a, b, (a - b).abs());
    }

    // Freeze, keep streaming, and watch current uncertainty fall below the
    // snapshot while the snapshot stays put.
    lin.freeze();
    let probe = 33;
    let frozen_before = lin.d2(probe, Stats::Frozen);
    for p in 0..30 {
        lin.update(p, 1.0).unwrap();
    }
    println!(
        "\nafter freezing and 30 more observations at probe {probe}: frozen D2 {:.6} -> {:.6}, current {:.6}",
        frozen_before,
        lin.d2(probe, Stats::Frozen),
        lin.d2(probe, Stats::Current),
    );
}
