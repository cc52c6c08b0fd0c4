//! Dimension calculators: capped generalized-dimension sums on concrete
//! weighted streams, exact brute-force eluder dimension for small finite
//! classes, and the relation check between them (also available as
//! `mql-bench dims <classspec.json>`).
//!
//! ```bash
//! cargo run --release --example eluder_dimensions
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use mql_ucb::eluder::{
    check_dimension_relation, eluder_dim_bruteforce, generalized_dim_linear, ClassSpec,
    CLASSSPEC_SCHEMA,
};
use mql_ucb::funcclass::FeatureMap;

fn main() {
    // A scalar class on a single repeated point: the capped sum walks the
    // harmonic series 1 + 1/2 + 1/3.
    let fm = FeatureMap::from_rows(vec![vec![1.0]]).unwrap();
    let harmonic = generalized_dim_linear(&fm, &[0, 0, 0], &[1.0; 3], 1.0).unwrap();
    println!("all-ones stream, T = 3: generalized dim = {harmonic} (= 11/6)");

    // Orthonormal one-hots: every fresh direction contributes a full unit.
    let d = 6;
    let fm = FeatureMap::one_hot(d);
    let seq: Vec<usize> = (0..d).collect();
    let full = generalized_dim_linear(&fm, &seq, &vec![1.0; d], 1.0).unwrap();
    println!("one pass over {d} orthonormal directions: generalized dim = {full}\n");

    // Brute-force standard eluder dimension on two instructive classes.
    let indicators = vec![
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
        vec![0.0, 0.0, 1.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
    ];
    println!(
        "4 one-hot indicators, eps = 0.5: dim_E = {} (pairs couple: any pair separating \
         the last point also separates a predecessor)",
        eluder_dim_bruteforce(&indicators, 0.5).unwrap()
    );
    let mut with_zero = indicators.clone();
    with_zero.push(vec![0.0; 4]);
    println!(
        "same class plus the zero function:   dim_E = {} (pairs (e_i, 0) decouple the points)\n",
        eluder_dim_bruteforce(&with_zero, 0.5).unwrap()
    );

    // Relation check on a random instance, and the same thing through the
    // classspec/v1 document the CLI consumes.
    let mut rng = ChaCha12Rng::seed_from_u64(3);
    let values: Vec<Vec<f64>> =
        (0..12).map(|_| (0..8).map(|_| rng.random::<f64>()).collect()).collect();
    let seq: Vec<usize> = (0..16).map(|_| rng.random_range(0..8)).collect();
    let sigmas: Vec<f64> = (0..16).map(|_| 0.5 + 1.5 * rng.random::<f64>()).collect();
    let report = check_dimension_relation(&values, &seq, &sigmas, 1.0).unwrap();
    println!(
        "random class: generalized {:.3} vs eluder-based bound {:.3} (ratio {:.3}, violated: {})",
        report.generalized_dim, report.relation_rhs, report.ratio, report.violated
    );

    let spec = ClassSpec {
        schema: CLASSSPEC_SCHEMA.to_string(),
        values,
        sequence: seq,
        sigmas,
        lambda: 1.0,
    };
    println!("\nclasspec/v1 -> dimreport/v1:\n{}", spec.check().unwrap().to_json());
}
