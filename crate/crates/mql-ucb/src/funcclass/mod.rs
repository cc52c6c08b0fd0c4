//! Function classes, weighted least squares, and D²-uncertainty oracles.
//!
//! Two concrete classes satisfy the same interface: a linear class over a
//! known feature map, where D² has the elliptical closed form
//! `phi' A^{-1} phi`, and a finite class of explicitly tabulated functions,
//! where D² is the exact sup over function pairs. Both support fitting
//! against a [`StageDataset`], incremental uncertainty updates, and frozen
//! snapshots captured at policy switches.

mod dataset;
mod features;
mod finite;
mod linear;

pub use dataset::{DataEntry, StageDataset, TargetKind};
pub use features::FeatureMap;
pub use finite::{FiniteClass, FiniteSketch, MAX_FINITE_FUNCTIONS};
pub use linear::{chol_rank_one_update, LinearClass, LinearSketch};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FuncError {
    #[error("weighted Gram matrix is ill-conditioned (condition estimate {estimate:.3e} > 1e12)")]
    IllConditioned { estimate: f64 },
    #[error("weight {sigma} below the floor alpha = {alpha}")]
    WeightBelowFloor { sigma: f64, alpha: f64 },
    #[error("target {value} for {kind:?} outside [{lo}, {hi}]")]
    TargetOutOfRange { kind: TargetKind, value: f64, lo: f64, hi: f64 },
    #[error("point id {point} out of range ({num_points} points)")]
    PointOutOfRange { point: usize, num_points: usize },
    #[error("finite class needs at least 2 functions, got {0}")]
    ClassTooSmall(usize),
    #[error("finite class capped at {max} functions, got {got}")]
    ClassTooLarge { got: usize, max: usize },
    #[error("function value {value} outside [0, {range}]")]
    ValueOutOfRange { value: f64, range: f64 },
    #[error("feature vector norm {norm} exceeds 1")]
    FeatureNormTooLarge { norm: f64 },
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

/// Which statistics a D² query runs against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stats {
    Current,
    /// The snapshot captured at the last [`UncertaintyState::freeze`].
    Frozen,
}

/// A fitted regressor, evaluable at any domain point.
#[derive(Debug, Clone)]
pub enum Regressor {
    /// Ridge solution with no data: evaluates to 0 everywhere.
    Zero,
    Linear { theta: Vec<f64>, features: std::sync::Arc<FeatureMap> },
    /// Selected member of a finite class (its value table, cloned).
    Finite { values: Vec<f64> },
}

impl Regressor {
    pub fn eval(&self, point: usize) -> f64 {
        match self {
            Regressor::Zero => 0.0,
            Regressor::Linear { theta, features } => features
                .phi(point)
                .iter()
                .zip(theta)
                .map(|(x, t)| x * t)
                .sum(),
            Regressor::Finite { values } => values[point],
        }
    }
}

/// Result of a least-squares fit, with the normal-equation residual
/// `max|A theta - b| / (1 + max|b|)` kept for the numerical-hygiene checks
/// (always 0 for finite classes, whose argmin is exact).
#[derive(Debug, Clone)]
pub struct FitResult {
    pub regressor: Regressor,
    pub normal_eq_residual: f64,
}

/// A function class usable by the planner: linear or finite.
#[derive(Debug, Clone)]
pub enum ModelClass {
    Linear(LinearClass),
    Finite(FiniteClass),
}

impl ModelClass {
    pub fn num_points(&self) -> usize {
        match self {
            ModelClass::Linear(c) => c.features().num_points(),
            ModelClass::Finite(c) => c.num_points(),
        }
    }

    /// Dimension surrogate entering the practical confidence schedules:
    /// the feature dimension, or `log2 |F|` for finite classes.
    pub fn dim_proxy(&self) -> f64 {
        match self {
            ModelClass::Linear(c) => c.features().dim() as f64,
            ModelClass::Finite(c) => (c.len() as f64).log2().max(1.0),
        }
    }

    /// Weighted least-squares fit against the selected target column.
    /// Empty datasets yield the zero regressor.
    pub fn fit(&self, data: &StageDataset, kind: TargetKind) -> Result<FitResult, FuncError> {
        match self {
            ModelClass::Linear(c) => c.fit(data, kind),
            ModelClass::Finite(c) => Ok(c.fit(data, kind)),
        }
    }

    /// Fresh uncertainty statistics with weight floor `alpha`.
    pub fn uncertainty_state(&self, alpha: f64) -> UncertaintyState {
        match self {
            ModelClass::Linear(c) => UncertaintyState::Linear(c.sketch(alpha)),
            ModelClass::Finite(c) => UncertaintyState::Finite(c.sketch(alpha)),
        }
    }
}

/// Per-stage sufficient statistics behind the D² oracle, with a frozen
/// snapshot from the last policy switch.
///
/// Single-writer: concurrent reads are fine between updates.
#[derive(Debug, Clone)]
pub enum UncertaintyState {
    Linear(LinearSketch),
    Finite(FiniteSketch),
}

impl UncertaintyState {
    /// The oracle value D̄² at `point`. For the linear closed form and the
    /// finite exact sup the accuracy ratio D̄/D is identically 1.
    pub fn d2(&self, point: usize, which: Stats) -> f64 {
        match self {
            UncertaintyState::Linear(s) => s.d2(point, which),
            UncertaintyState::Finite(s) => s.d2(point, which),
        }
    }

    /// Rank-one update with observation `point` at weight `sigma_bar`.
    /// The frozen snapshot is unaffected.
    pub fn update(&mut self, point: usize, sigma_bar: f64) -> Result<(), FuncError> {
        match self {
            UncertaintyState::Linear(s) => s.update(point, sigma_bar),
            UncertaintyState::Finite(s) => s.update(point, sigma_bar),
        }
    }

    /// Capture the current statistics as the frozen snapshot.
    pub fn freeze(&mut self) {
        match self {
            UncertaintyState::Linear(s) => s.freeze(),
            UncertaintyState::Finite(s) => s.freeze(),
        }
    }
}
