//! Linear function class: weighted ridge regression and the elliptical D².

use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix, DVector};

use super::{FeatureMap, FitResult, FuncError, Regressor, StageDataset, Stats, TargetKind};

/// Condition-estimate threshold above which fits signal ill-conditioning.
const COND_LIMIT: f64 = 1e12;

/// Full factor recompute cadence for the incrementally updated sketch.
const RECOMPUTE_EVERY: usize = 256;

/// The class `{ z -> theta' phi(z) : ||theta|| <= W }` over a feature map.
///
/// Its D²-uncertainty has the closed form `phi' A^{-1} phi` with
/// `A = lambda_eff I + sum_i phi_i phi_i' / sigma_i^2` and
/// `lambda_eff = lambda / W^2`; the bonus oracle ratio is exactly 1.
#[derive(Debug, Clone)]
pub struct LinearClass {
    features: Arc<FeatureMap>,
    lambda: f64,
    radius: f64,
}

impl LinearClass {
    pub fn new(features: FeatureMap, lambda: f64, radius: f64) -> Self {
        assert!(lambda > 0.0 && radius > 0.0);
        LinearClass { features: Arc::new(features), lambda, radius }
    }

    /// Unit parameter ball with `lambda = 1`, so `lambda_eff = 1`.
    pub fn unit_ball(features: FeatureMap) -> Self {
        Self::new(features, 1.0, 1.0)
    }

    pub fn features(&self) -> &FeatureMap {
        &self.features
    }

    pub fn shared_features(&self) -> Arc<FeatureMap> {
        Arc::clone(&self.features)
    }

    pub fn lambda_eff(&self) -> f64 {
        self.lambda / (self.radius * self.radius)
    }

    /// Solve `(lambda_eff I + sum w phi phi') theta = sum w phi y` for the
    /// selected target column. Empty data yields the zero regressor.
    pub fn fit(&self, data: &StageDataset, kind: TargetKind) -> Result<FitResult, FuncError> {
        if data.is_empty() {
            return Ok(FitResult { regressor: Regressor::Zero, normal_eq_residual: 0.0 });
        }
        let d = self.features.dim();
        let mut gram = DMatrix::identity(d, d) * self.lambda_eff();
        let mut rhs = DVector::zeros(d);
        for entry in data.iter() {
            let w = entry.weight(kind);
            let y = entry.target(kind);
            let phi = self.features.phi(entry.point);
            for i in 0..d {
                rhs[i] += w * phi[i] * y;
                for j in 0..d {
                    gram[(i, j)] += w * phi[i] * phi[j];
                }
            }
        }
        let cond = condition_estimate(&gram, self.lambda_eff());
        if cond > COND_LIMIT {
            return Err(FuncError::IllConditioned { estimate: cond });
        }
        let chol = Cholesky::new(gram.clone())
            .ok_or(FuncError::IllConditioned { estimate: cond })?;
        let theta = chol.solve(&rhs);
        let residual = (&gram * &theta - &rhs).abs().max() / (1.0 + rhs.abs().max());
        Ok(FitResult {
            regressor: Regressor::Linear {
                theta: theta.iter().cloned().collect(),
                features: Arc::clone(&self.features),
            },
            normal_eq_residual: residual,
        })
    }

    /// Fresh uncertainty statistics (Gram = `lambda_eff I`).
    pub fn sketch(&self, alpha: f64) -> LinearSketch {
        LinearSketch::new(Arc::clone(&self.features), self.lambda_eff(), alpha)
    }
}

/// Weighted Gram statistics with a maintained Cholesky factor.
///
/// Rank-one updates keep the factor current; a full recompute from the
/// exactly-accumulated Gram runs every [`RECOMPUTE_EVERY`] updates or when
/// the condition estimate trips, bounding factor drift. A frozen copy of
/// the factor is captured by [`freeze`](Self::freeze) at policy switches.
#[derive(Debug, Clone)]
pub struct LinearSketch {
    features: Arc<FeatureMap>,
    lambda_eff: f64,
    alpha: f64,
    gram: DMatrix<f64>,
    factor: DMatrix<f64>,
    frozen_factor: DMatrix<f64>,
    updates_since_recompute: usize,
    recompute_every: usize,
}

impl LinearSketch {
    fn new(features: Arc<FeatureMap>, lambda_eff: f64, alpha: f64) -> Self {
        let d = features.dim();
        let gram = DMatrix::identity(d, d) * lambda_eff;
        let factor = DMatrix::identity(d, d) * lambda_eff.sqrt();
        LinearSketch {
            features,
            lambda_eff,
            alpha,
            gram,
            frozen_factor: factor.clone(),
            factor,
            updates_since_recompute: 0,
            recompute_every: RECOMPUTE_EVERY,
        }
    }

    pub fn lambda_eff(&self) -> f64 {
        self.lambda_eff
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// `D^2(point) = phi' A^{-1} phi = ||L^{-1} phi||^2` against the
    /// current or frozen factor.
    pub fn d2(&self, point: usize, which: Stats) -> f64 {
        let l = match which {
            Stats::Current => &self.factor,
            Stats::Frozen => &self.frozen_factor,
        };
        let phi = self.features.phi(point);
        forward_substitute_norm_sq(l, phi)
    }

    /// Rank-one update `A += phi phi' / sigma_bar^2`; frozen stats unchanged.
    pub fn update(&mut self, point: usize, sigma_bar: f64) -> Result<(), FuncError> {
        if sigma_bar < self.alpha {
            return Err(FuncError::WeightBelowFloor { sigma: sigma_bar, alpha: self.alpha });
        }
        let phi = self.features.phi(point);
        let d = phi.len();
        let v = DVector::from_iterator(d, phi.iter().map(|x| x / sigma_bar));
        for i in 0..d {
            for j in 0..d {
                self.gram[(i, j)] += v[i] * v[j];
            }
        }
        chol_rank_one_update(&mut self.factor, v);
        self.updates_since_recompute += 1;
        if self.updates_since_recompute >= self.recompute_every
            || condition_estimate(&self.gram, self.lambda_eff) > COND_LIMIT
        {
            self.recompute();
        }
        Ok(())
    }

    /// Capture the current factor as the frozen snapshot.
    pub fn freeze(&mut self) {
        self.frozen_factor = self.factor.clone();
    }

    /// `log det A` from the maintained factor, used by the determinant
    /// switching criterion.
    pub fn log_det(&self) -> f64 {
        2.0 * (0..self.factor.nrows()).map(|i| self.factor[(i, i)].ln()).sum::<f64>()
    }

    /// Rebuild the factor from the exactly-accumulated Gram.
    pub fn recompute(&mut self) {
        if let Some(chol) = Cholesky::new(self.gram.clone()) {
            self.factor = chol.unpack();
        }
        self.updates_since_recompute = 0;
    }

    /// Test hook: stretch or shrink the automatic recompute cadence.
    pub fn set_recompute_interval(&mut self, every: usize) {
        self.recompute_every = every.max(1);
    }
}

/// In-place Cholesky rank-one update: given lower-triangular `l` with
/// `A = l l'`, rewrite it so `A' = l' l'^T = A + v v'`. `v` is consumed as
/// workspace. Direct LINPACK-style formulation, O(d^2), no allocation.
pub fn chol_rank_one_update(l: &mut DMatrix<f64>, mut v: DVector<f64>) {
    let n = l.nrows();
    for j in 0..n {
        let ljj = l[(j, j)];
        let vj = v[j];
        let r = (ljj * ljj + vj * vj).sqrt();
        let c = r / ljj;
        let s = vj / ljj;
        l[(j, j)] = r;
        for i in (j + 1)..n {
            l[(i, j)] = (l[(i, j)] + s * v[i]) / c;
            v[i] = c * v[i] - s * l[(i, j)];
        }
    }
}

/// Since `A >= lambda_eff I`, `trace(A) / lambda_eff` upper-bounds the
/// condition number cheaply.
fn condition_estimate(gram: &DMatrix<f64>, lambda_eff: f64) -> f64 {
    gram.trace() / lambda_eff
}

fn forward_substitute_norm_sq(l: &DMatrix<f64>, phi: &[f64]) -> f64 {
    let n = phi.len();
    let mut y = phi.to_vec();
    let mut norm_sq = 0.0;
    for i in 0..n {
        let mut acc = y[i];
        for j in 0..i {
            acc -= l[(i, j)] * y[j];
        }
        let yi = acc / l[(i, i)];
        y[i] = yi;
        norm_sq += yi * yi;
    }
    norm_sq
}
