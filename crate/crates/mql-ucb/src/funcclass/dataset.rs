//! Per-stage regression datasets.

use super::FuncError;

/// Which regression target column a fit reads.
///
/// Optimistic and pessimistic fits are inverse-variance weighted; the
/// squared-target fit always uses unit weights (it is the only unweighted
/// regression in the pipeline).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetKind {
    Optimistic,
    Pessimistic,
    Squared,
}

/// One observation: a domain point, its recorded weight, and the three
/// regression targets materialized against the current value functions.
#[derive(Debug, Clone, PartialEq)]
pub struct DataEntry {
    pub point: usize,
    pub sigma_bar: f64,
    pub target_opt: f64,
    pub target_pes: f64,
    pub target_sq: f64,
}

impl DataEntry {
    pub fn target(&self, kind: TargetKind) -> f64 {
        match kind {
            TargetKind::Optimistic => self.target_opt,
            TargetKind::Pessimistic => self.target_pes,
            TargetKind::Squared => self.target_sq,
        }
    }

    /// Regression weight for the given target: `1 / sigma_bar^2`, except
    /// the squared target which is unweighted.
    pub fn weight(&self, kind: TargetKind) -> f64 {
        match kind {
            TargetKind::Optimistic | TargetKind::Pessimistic => 1.0 / (self.sigma_bar * self.sigma_bar),
            TargetKind::Squared => 1.0,
        }
    }
}

/// Append-only ordered history of weighted observations for one stage.
///
/// Enforces `sigma_bar >= alpha > 0`, optimistic/pessimistic targets in
/// `[0, L]` and squared targets in `[0, L^2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StageDataset {
    alpha: f64,
    range: f64,
    entries: Vec<DataEntry>,
}

impl StageDataset {
    pub fn new(alpha: f64, range: f64) -> Self {
        assert!(alpha > 0.0 && range > 0.0);
        StageDataset { alpha, range, entries: Vec::new() }
    }

    pub fn push(&mut self, entry: DataEntry) -> Result<(), FuncError> {
        if entry.sigma_bar < self.alpha {
            return Err(FuncError::WeightBelowFloor { sigma: entry.sigma_bar, alpha: self.alpha });
        }
        for kind in [TargetKind::Optimistic, TargetKind::Pessimistic] {
            let v = entry.target(kind);
            if !(0.0..=self.range).contains(&v) {
                return Err(FuncError::TargetOutOfRange { kind, value: v, lo: 0.0, hi: self.range });
            }
        }
        let sq = entry.target_sq;
        let hi = self.range * self.range;
        if !(0.0..=hi).contains(&sq) {
            return Err(FuncError::TargetOutOfRange { kind: TargetKind::Squared, value: sq, lo: 0.0, hi });
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, DataEntry> {
        self.entries.iter()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn range(&self) -> f64 {
        self.range
    }
}
