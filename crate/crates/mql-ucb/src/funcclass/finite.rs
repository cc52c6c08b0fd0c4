//! Finite function class: exact argmin fits and brute-force D².
//!
//! D² queries and updates sweep every pair of class members, so cost grows
//! with `|F|^2`. Pair denominators are maintained incrementally, making a
//! query O(|F|^2) rather than O(|F|^2 k). This is a research-scale tool;
//! the class size is capped at [`MAX_FINITE_FUNCTIONS`].

use super::{FitResult, FuncError, Regressor, StageDataset, Stats, TargetKind};

pub const MAX_FINITE_FUNCTIONS: usize = 2048;

/// An explicit list of functions over a finite point domain, each with
/// values in `[0, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteClass {
    values: Vec<Vec<f64>>,
    range: f64,
    lambda: f64,
}

impl FiniteClass {
    pub fn new(values: Vec<Vec<f64>>, range: f64, lambda: f64) -> Result<Self, FuncError> {
        if values.len() < 2 {
            return Err(FuncError::ClassTooSmall(values.len()));
        }
        if values.len() > MAX_FINITE_FUNCTIONS {
            return Err(FuncError::ClassTooLarge { got: values.len(), max: MAX_FINITE_FUNCTIONS });
        }
        let num_points = values[0].len();
        for row in &values {
            if row.len() != num_points {
                return Err(FuncError::Shape("ragged function value rows".into()));
            }
            for &v in row {
                if !v.is_finite() || v < 0.0 || v > range {
                    return Err(FuncError::ValueOutOfRange { value: v, range });
                }
            }
        }
        Ok(FiniteClass { values, range, lambda })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn num_points(&self) -> usize {
        self.values[0].len()
    }

    pub fn value(&self, func: usize, point: usize) -> f64 {
        self.values[func][point]
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Argmin of the weighted squared loss over the class; ties go to the
    /// earliest function in list order. Empty data yields the zero
    /// regressor.
    pub fn fit(&self, data: &StageDataset, kind: TargetKind) -> FitResult {
        if data.is_empty() {
            return FitResult { regressor: Regressor::Zero, normal_eq_residual: 0.0 };
        }
        let mut best = 0;
        let mut best_loss = f64::INFINITY;
        for (f, row) in self.values.iter().enumerate() {
            let loss: f64 = data
                .iter()
                .map(|e| {
                    let diff = row[e.point] - e.target(kind);
                    e.weight(kind) * diff * diff
                })
                .sum();
            if loss < best_loss {
                best_loss = loss;
                best = f;
            }
        }
        FitResult {
            regressor: Regressor::Finite { values: self.values[best].clone() },
            normal_eq_residual: 0.0,
        }
    }

    pub fn sketch(&self, alpha: f64) -> FiniteSketch {
        let pairs = self.len() * (self.len() - 1) / 2;
        FiniteSketch {
            class: self.clone(),
            alpha,
            denom: vec![0.0; pairs],
            frozen_denom: vec![0.0; pairs],
        }
    }

    /// Discretization of the unit-ball linear class over explicit feature
    /// rows: one function `z -> (1 + theta . phi_z) / 2` per grid point
    /// `theta` with `||theta|| <= 1`, components stepped by `step`.
    ///
    /// The affine rescale keeps values in `[0, 1]` while pair differences
    /// `(theta_1 - theta_2) / 2` still sweep the full unit ball, so the
    /// brute-force D² of this class tracks the elliptical closed form with
    /// the same `lambda` up to the grid resolution.
    pub fn ball_grid(points: &[Vec<f64>], step: f64, lambda: f64) -> Result<Self, FuncError> {
        assert!(step > 0.0 && step <= 1.0);
        let dim = points.first().map_or(0, |p| p.len());
        let steps_half = (1.0 / step).floor() as i64;
        let mut thetas: Vec<Vec<f64>> = vec![vec![]];
        for _ in 0..dim {
            thetas = thetas
                .into_iter()
                .flat_map(|prefix| {
                    (-steps_half..=steps_half).map(move |i| {
                        let mut t = prefix.clone();
                        t.push(i as f64 * step);
                        t
                    })
                })
                .collect();
        }
        thetas.retain(|t| t.iter().map(|x| x * x).sum::<f64>() <= 1.0 + 1e-12);
        let values = thetas
            .iter()
            .map(|theta| {
                points
                    .iter()
                    .map(|phi| {
                        let dot: f64 = theta.iter().zip(phi).map(|(t, x)| t * x).sum();
                        (1.0 + dot) / 2.0
                    })
                    .collect()
            })
            .collect();
        FiniteClass::new(values, 1.0, lambda)
    }
}

/// Raw-data uncertainty statistics for a finite class: per-pair weighted
/// disagreement sums, with a frozen copy from the last switch.
#[derive(Debug, Clone)]
pub struct FiniteSketch {
    class: FiniteClass,
    alpha: f64,
    denom: Vec<f64>,
    frozen_denom: Vec<f64>,
}

impl FiniteSketch {
    /// Exact `sup_{f1,f2} (f1(z)-f2(z))^2 / (sum_i (f1(z_i)-f2(z_i))^2 /
    /// sigma_i^2 + lambda)`.
    pub fn d2(&self, point: usize, which: Stats) -> f64 {
        let denoms = match which {
            Stats::Current => &self.denom,
            Stats::Frozen => &self.frozen_denom,
        };
        let n = self.class.len();
        let mut best = 0.0_f64;
        let mut idx = 0;
        for i in 0..n {
            let vi = self.class.value(i, point);
            for j in (i + 1)..n {
                let gap = vi - self.class.value(j, point);
                best = best.max(gap * gap / (denoms[idx] + self.class.lambda));
                idx += 1;
            }
        }
        best
    }

    pub fn update(&mut self, point: usize, sigma_bar: f64) -> Result<(), FuncError> {
        if sigma_bar < self.alpha {
            return Err(FuncError::WeightBelowFloor { sigma: sigma_bar, alpha: self.alpha });
        }
        let w = 1.0 / (sigma_bar * sigma_bar);
        let n = self.class.len();
        let mut idx = 0;
        for i in 0..n {
            let vi = self.class.value(i, point);
            for j in (i + 1)..n {
                let gap = vi - self.class.value(j, point);
                self.denom[idx] += w * gap * gap;
                idx += 1;
            }
        }
        Ok(())
    }

    pub fn freeze(&mut self) {
        self.frozen_denom.clone_from(&self.denom);
    }
}
