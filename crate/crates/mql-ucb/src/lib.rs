//! Desk-scale laboratory for low-switching optimistic Q-learning.
//!
//! The crate implements MQL-UCB (Monotonic Q-Learning with UCB) for episodic
//! MDPs with linear or finite function classes, together with everything
//! needed to measure its claims as runnable properties:
//!
//! - [`env`] — finite time-inhomogeneous episodic MDPs, exact dynamic
//!   programming oracles, benchmark generators, and the hard-instance family
//!   used to exhibit the switching-cost lower bound.
//! - [`funcclass`] — function-class abstractions: weighted least-squares
//!   fitting and the D²-uncertainty oracle for linear and finite classes,
//!   with rank-one updated factorizations and frozen snapshots.
//! - [`algorithm`] — the full MQL-UCB loop: rare-switching controller,
//!   monotone optimistic/pessimistic Q-stacks, and the variance-weighted
//!   regression pipeline.
//! - [`baselines`] — LSVI-UCB, determinant-criterion rare switching, a
//!   uniform-random reference, and a switch-budget wrapper.
//! - [`eluder`] — generalized and standard eluder-dimension calculators and
//!   the relation checker between them.
//! - [`bench`] — configuration-driven, seeded, reproducible experiment
//!   runner emitting CSV traces and JSON summaries.
//!
//! Start with the runnable examples (`cargo run --release --example
//! quickstart`) or the `mql-bench` binary.

pub mod algorithm;
pub mod baselines;
pub mod bench;
pub mod eluder;
pub mod env;
pub mod funcclass;
pub mod metrics;

pub use env::MdpSpec;
pub use metrics::RunMetrics;
