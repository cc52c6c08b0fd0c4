//! Complexity-measure calculators: generalized eluder dimension on concrete
//! weighted sequences, brute-force standard eluder dimension for finite
//! classes, and the relation checker between the two.
//!
//! # Standard eluder dimension, exactly
//!
//! A point `z` is eps-dependent on predecessors `z_1..z_k` w.r.t. class `G`
//! if every pair `g1, g2` with `sqrt(sum_i (g1(z_i) - g2(z_i))^2) <= eps`
//! also has `|g1(z) - g2(z)| <= eps`; independent means not dependent. The
//! dimension at `eps` is the length of the longest sequence in which every
//! element is eps'-independent of its predecessors for a single
//! `eps' >= eps` shared by the whole sequence.
//!
//! Two structural facts make exhaustive search tractable over finite
//! domains:
//!
//! 1. Whether `z` is independent of its predecessors depends only on the
//!    *set* of predecessors (the sums are order-free), so feasibility is a
//!    property of subsets and the longest sequence is found by dynamic
//!    programming over bitmasks.
//! 2. Repetition never helps even though the definition allows it: if `z`
//!    already occurs among the predecessors, any witness pair would need
//!    `(g1(z)-g2(z))^2 <= eps'^2` and `|g1(z)-g2(z)| > eps'` at once.
//!
//! The shared-`eps'` requirement is handled exactly by propagating, per
//! subset, the full *set of feasible eps' values* as a union of half-open
//! intervals: a pair witnesses independence of `z` from set `P` exactly
//! for `eps'` in `[sqrt(sum_P), |gap(z)|)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::funcclass::{FeatureMap, LinearClass, Stats};

pub const DIMREPORT_SCHEMA: &str = "dimreport/v1";

/// Frozen calibration constant for the relation check: the capped
/// generalized sum must not exceed this multiple of the eluder-based bound.
pub const RELATION_CALIBRATION: f64 = 10.0;

/// Exhaustive-search size limits.
pub const MAX_BRUTE_POINTS: usize = 12;
pub const MAX_BRUTE_FUNCTIONS: usize = 64;

#[derive(Debug, Error)]
pub enum EluderError {
    #[error("sequence has {points} points but {sigmas} weights")]
    LengthMismatch { points: usize, sigmas: usize },
    #[error("weights must be positive, got {0}")]
    BadWeight(f64),
    #[error("point id {point} out of range ({num_points} points)")]
    PointOutOfRange { point: usize, num_points: usize },
    #[error("domain has {got} points, exhaustive search capped at {max}")]
    DomainTooLarge { got: usize, max: usize },
    #[error("class has {got} functions, exhaustive search capped at {max}")]
    ClassTooLarge { got: usize, max: usize },
    #[error("function values must lie in [-1, 1] for the relation check, got {0}")]
    ValueOutOfRange(f64),
    #[error("class must be given as non-empty equal-length value rows")]
    BadClassShape,
    #[error("expected schema {expected:?}, found {found:?}")]
    BadSchema { expected: String, found: String },
    #[error("failed to parse: {0}")]
    Parse(String),
}

fn check_stream(num_points: usize, seq: &[usize], sigmas: &[f64]) -> Result<(), EluderError> {
    if seq.len() != sigmas.len() {
        return Err(EluderError::LengthMismatch { points: seq.len(), sigmas: sigmas.len() });
    }
    if let Some(&bad) = sigmas.iter().find(|s| !s.is_finite() || **s <= 0.0) {
        return Err(EluderError::BadWeight(bad));
    }
    if let Some(&p) = seq.iter().find(|p| **p >= num_points) {
        return Err(EluderError::PointOutOfRange { point: p, num_points });
    }
    Ok(())
}

/// `sum_i min(1, D^2(z_i; z_{[i-1]}, sigma_{[i-1]}) / sigma_i^2)` for a
/// linear class over the given features, with Gram regularizer `lambda`.
/// Each prefix excludes the current point.
pub fn generalized_dim_linear(
    features: &FeatureMap,
    seq: &[usize],
    sigmas: &[f64],
    lambda: f64,
) -> Result<f64, EluderError> {
    check_stream(features.num_points(), seq, sigmas)?;
    if seq.is_empty() {
        return Ok(0.0);
    }
    let floor = sigmas.iter().cloned().fold(f64::INFINITY, f64::min);
    let class = LinearClass::new(features.clone(), lambda, 1.0);
    let mut sketch = class.sketch(floor);
    let mut total = 0.0;
    for (&z, &sigma) in seq.iter().zip(sigmas) {
        let d2 = sketch.d2(z, Stats::Current);
        total += (d2 / (sigma * sigma)).min(1.0);
        sketch.update(z, sigma).expect("weights are at least the stream floor");
    }
    Ok(total)
}

/// Same capped sum for an explicit finite class `values[f][z]`, computing
/// the prefix D^2 as an exact sup over function pairs with incrementally
/// maintained denominators.
pub fn generalized_dim_finite(
    values: &[Vec<f64>],
    seq: &[usize],
    sigmas: &[f64],
    lambda: f64,
) -> Result<f64, EluderError> {
    let num_points = validate_class(values)?;
    check_stream(num_points, seq, sigmas)?;
    let n = values.len();
    let mut denom = vec![0.0_f64; n * (n - 1) / 2];
    let mut total = 0.0;
    for (&z, &sigma) in seq.iter().zip(sigmas) {
        let mut d2 = 0.0_f64;
        let mut idx = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                let gap = values[i][z] - values[j][z];
                d2 = d2.max(gap * gap / (denom[idx] + lambda));
                idx += 1;
            }
        }
        total += (d2 / (sigma * sigma)).min(1.0);
        let w = 1.0 / (sigma * sigma);
        let mut idx = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                let gap = values[i][z] - values[j][z];
                denom[idx] += w * gap * gap;
                idx += 1;
            }
        }
    }
    Ok(total)
}

fn validate_class(values: &[Vec<f64>]) -> Result<usize, EluderError> {
    let num_points = values.first().map_or(0, |r| r.len());
    if values.is_empty() || num_points == 0 || values.iter().any(|r| r.len() != num_points) {
        return Err(EluderError::BadClassShape);
    }
    Ok(num_points)
}

/// Brute-force standard eluder dimension of the finite class `values[f][z]`
/// over its whole point domain, at scale `epsilon`.
///
/// Exact: maximizes over the shared `eps' >= epsilon` as well as over
/// sequences, via the interval-set dynamic program described in the module
/// docs. Capped at [`MAX_BRUTE_POINTS`] points and [`MAX_BRUTE_FUNCTIONS`]
/// functions.
pub fn eluder_dim_bruteforce(values: &[Vec<f64>], epsilon: f64) -> Result<usize, EluderError> {
    let num_points = validate_class(values)?;
    if num_points > MAX_BRUTE_POINTS {
        return Err(EluderError::DomainTooLarge { got: num_points, max: MAX_BRUTE_POINTS });
    }
    if values.len() > MAX_BRUTE_FUNCTIONS {
        return Err(EluderError::ClassTooLarge { got: values.len(), max: MAX_BRUTE_FUNCTIONS });
    }

    // Pairwise squared gaps per point; keep only pairs that could ever
    // witness independence somewhere.
    let mut pair_delta2: Vec<Vec<f64>> = Vec::new();
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            let delta2: Vec<f64> = (0..num_points)
                .map(|z| {
                    let gap = values[i][z] - values[j][z];
                    gap * gap
                })
                .collect();
            if delta2.iter().any(|&d| d.sqrt() > epsilon) {
                pair_delta2.push(delta2);
            }
        }
    }
    // Pairs that can witness independence at a given point.
    let relevant: Vec<Vec<usize>> = (0..num_points)
        .map(|z| {
            pair_delta2
                .iter()
                .enumerate()
                .filter(|(_, d)| d[z].sqrt() > epsilon)
                .map(|(p, _)| p)
                .collect()
        })
        .collect();

    let full = 1usize << num_points;
    let mut feasible: Vec<IntervalSet> = vec![IntervalSet::empty(); full];
    feasible[0] = IntervalSet::from_lo(epsilon);
    let mut best = 0usize;
    for mask in 1..full {
        let mut acc = IntervalSet::empty();
        for z in 0..num_points {
            if mask & (1 << z) == 0 {
                continue;
            }
            let prefix = mask & !(1 << z);
            if feasible[prefix].is_empty() {
                continue;
            }
            // eps' ranges where z is independent of the prefix set.
            let mut raw: Vec<(f64, f64)> = Vec::new();
            for &p in &relevant[z] {
                let d = &pair_delta2[p];
                let mut sum = 0.0;
                for y in 0..num_points {
                    if prefix & (1 << y) != 0 {
                        sum += d[y];
                    }
                }
                let lo = sum.sqrt().max(epsilon);
                let hi = d[z].sqrt();
                if lo < hi {
                    raw.push((lo, hi));
                }
            }
            if raw.is_empty() {
                continue;
            }
            let indep = IntervalSet::from_raw(raw);
            acc.union_with(&feasible[prefix].intersect(&indep));
        }
        if !acc.is_empty() {
            best = best.max(mask.count_ones() as usize);
        }
        feasible[mask] = acc;
    }
    Ok(best)
}

/// Parameters echoed in a [`DimReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimParams {
    pub lambda: f64,
    /// Smallest weight in the stream.
    pub alpha: f64,
    /// Largest weight in the stream (M).
    pub sigma_max: f64,
    /// Stream length T.
    pub t: usize,
    /// Scale at which the standard dimension was computed, 1/sqrt(T).
    pub epsilon: f64,
}

/// Output of the relation check between the generalized and standard
/// eluder dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimReport {
    pub generalized_dim: f64,
    pub eluder_dim: usize,
    /// `dim_E log T log(lambda T) log(M/alpha) + 1/lambda`, log factors
    /// clamped at 0 (a negative factor would make the bound vacuous).
    pub relation_rhs: f64,
    /// `generalized_dim / relation_rhs`.
    pub ratio: f64,
    /// True iff the ratio exceeds [`RELATION_CALIBRATION`].
    pub violated: bool,
    pub params: DimParams,
}

impl DimReport {
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct File<'a> {
            schema: &'a str,
            #[serde(flatten)]
            report: &'a DimReport,
        }
        serde_json::to_string_pretty(&File { schema: DIMREPORT_SCHEMA, report: self })
            .expect("report serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, EluderError> {
        #[derive(Deserialize)]
        struct File {
            schema: String,
            #[serde(flatten)]
            report: DimReport,
        }
        let file: File =
            serde_json::from_str(text).map_err(|e| EluderError::Parse(e.to_string()))?;
        if file.schema != DIMREPORT_SCHEMA {
            return Err(EluderError::BadSchema {
                expected: DIMREPORT_SCHEMA.to_string(),
                found: file.schema,
            });
        }
        Ok(file.report)
    }
}

/// Compute both dimensions on one instance and compare them: the capped
/// generalized sum against `dim_E(1/sqrt(T)) log T log(lambda T)
/// log(M/alpha) + 1/lambda`, with the calibrated headroom constant. This
/// is a sanity harness, not a proof verifier.
///
/// Function values must lie in `[-1, 1]`.
pub fn check_dimension_relation(
    values: &[Vec<f64>],
    seq: &[usize],
    sigmas: &[f64],
    lambda: f64,
) -> Result<DimReport, EluderError> {
    for row in values {
        for &v in row {
            if !v.is_finite() || v.abs() > 1.0 {
                return Err(EluderError::ValueOutOfRange(v));
            }
        }
    }
    let t = seq.len().max(1);
    let epsilon = 1.0 / (t as f64).sqrt();
    let generalized = generalized_dim_finite(values, seq, sigmas, lambda)?;
    let eluder = eluder_dim_bruteforce(values, epsilon)?;
    let alpha = sigmas.iter().cloned().fold(f64::INFINITY, f64::min);
    let sigma_max = sigmas.iter().cloned().fold(0.0_f64, f64::max);
    let tf = t as f64;
    let rhs = eluder as f64
        * tf.ln().max(0.0)
        * (lambda * tf).ln().max(0.0)
        * (sigma_max / alpha).ln().max(0.0)
        + 1.0 / lambda;
    let ratio = generalized / rhs;
    Ok(DimReport {
        generalized_dim: generalized,
        eluder_dim: eluder,
        relation_rhs: rhs,
        ratio,
        violated: ratio > RELATION_CALIBRATION,
        params: DimParams { lambda, alpha, sigma_max, t, epsilon },
    })
}

pub const CLASSSPEC_SCHEMA: &str = "classspec/v1";

/// Input document for the dimension calculators, schema `classspec/v1`:
/// an explicit finite class (`values[f][z]`), a weighted point sequence,
/// and the regularizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSpec {
    pub schema: String,
    pub values: Vec<Vec<f64>>,
    pub sequence: Vec<usize>,
    pub sigmas: Vec<f64>,
    pub lambda: f64,
}

impl ClassSpec {
    pub fn from_json(text: &str) -> Result<Self, EluderError> {
        let spec: ClassSpec =
            serde_json::from_str(text).map_err(|e| EluderError::Parse(e.to_string()))?;
        if spec.schema != CLASSSPEC_SCHEMA {
            return Err(EluderError::BadSchema {
                expected: CLASSSPEC_SCHEMA.to_string(),
                found: spec.schema,
            });
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("class spec serialization cannot fail")
    }

    /// Run the full relation check on this instance.
    pub fn check(&self) -> Result<DimReport, EluderError> {
        check_dimension_relation(&self.values, &self.sequence, &self.sigmas, self.lambda)
    }
}

/// Disjoint, sorted, half-open intervals `[lo, hi)` over eps' values.
#[derive(Debug, Clone, PartialEq)]
struct IntervalSet(Vec<(f64, f64)>);

impl IntervalSet {
    fn empty() -> Self {
        IntervalSet(Vec::new())
    }

    fn from_lo(lo: f64) -> Self {
        IntervalSet(vec![(lo, f64::INFINITY)])
    }

    /// Normalize an arbitrary batch of intervals.
    fn from_raw(mut raw: Vec<(f64, f64)>) -> Self {
        raw.retain(|(lo, hi)| lo < hi);
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        IntervalSet(merged)
    }

    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (alo, ahi) = self.0[i];
            let (blo, bhi) = other.0[j];
            let lo = alo.max(blo);
            let hi = ahi.min(bhi);
            if lo < hi {
                out.push((lo, hi));
            }
            if ahi <= bhi {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet(out)
    }

    fn union_with(&mut self, other: &IntervalSet) {
        if other.is_empty() {
            return;
        }
        let mut raw = std::mem::take(&mut self.0);
        raw.extend_from_slice(&other.0);
        *self = IntervalSet::from_raw(raw);
    }
}
