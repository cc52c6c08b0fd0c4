//! Feature embeddings of a finite point domain.

use serde::{Deserialize, Serialize};

use super::FuncError;

/// A feature map over a finite domain of points, `phi: point -> R^d` with
/// `||phi||_2 <= 1` for every point (checked exhaustively at construction).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMap {
    dim: usize,
    rows: Vec<Vec<f64>>,
}

impl FeatureMap {
    /// One-hot embedding: point `i` maps to the `i`-th basis vector of
    /// `R^n`.
    pub fn one_hot(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut row = vec![0.0; n];
                row[i] = 1.0;
                row
            })
            .collect();
        FeatureMap { dim: n, rows }
    }

    /// Build from explicit rows, enforcing the unit norm bound.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, FuncError> {
        let dim = rows.first().map_or(0, |r| r.len());
        for row in &rows {
            if row.len() != dim {
                return Err(FuncError::Shape("ragged feature rows".into()));
            }
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1.0 + 1e-9 {
                return Err(FuncError::FeatureNormTooLarge { norm });
            }
        }
        Ok(FeatureMap { dim, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_points(&self) -> usize {
        self.rows.len()
    }

    pub fn phi(&self, point: usize) -> &[f64] {
        &self.rows[point]
    }
}
