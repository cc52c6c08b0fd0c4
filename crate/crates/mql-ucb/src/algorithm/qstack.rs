//! Monotone optimistic/pessimistic value stacks.
//!
//! Each policy switch pushes one snapshot: the freshly fitted regressors
//! together with their bonus, evaluated against the uncertainty statistics
//! frozen at that switch. The optimistic value is the clipped running min
//! over snapshots, the pessimistic value the clipped running max:
//!
//! `Q(z)  = max(0, min(1, min_j f_hat_j(z) + b_j(z)))`
//! `Qc(z) = min(1, max(0, max_j f_check_j(z) - bc_j(z)))`
//!
//! Over a finite domain the running extrema are cached as tables, so
//! evaluation is O(1) and the monotone/range invariants hold by
//! construction; [`QStack::push`] still re-verifies them and reports
//! violations, and [`QStack::eval_from_snapshots`] recomputes values from
//! raw snapshots as an independent check.

use crate::funcclass::Regressor;
use crate::metrics::ViolationCounters;

/// One per-switch snapshot of a stage's value estimate.
#[derive(Debug, Clone)]
pub struct Snapshot {
    /// Episode (1-based) at which the switch happened.
    pub episode: usize,
    pub beta_hat: f64,
    pub beta_check: f64,
    pub f_hat: Regressor,
    pub f_check: Regressor,
    /// `beta_hat * sqrt(D2_frozen(z))` per point.
    pub bonus: Vec<f64>,
    /// `beta_check * sqrt(D2_frozen(z))` per point.
    pub bonus_check: Vec<f64>,
}

/// Per-stage monotone value representation with cached tables.
#[derive(Debug, Clone)]
pub struct QStack {
    num_states: usize,
    num_actions: usize,
    snapshots: Vec<Snapshot>,
    q: Vec<f64>,
    q_check: Vec<f64>,
    v: Vec<f64>,
    v_check: Vec<f64>,
}

impl QStack {
    /// Fresh stack: optimistic values start at 1, pessimistic at 0.
    pub fn new(num_states: usize, num_actions: usize) -> Self {
        QStack {
            num_states,
            num_actions,
            snapshots: Vec::new(),
            q: vec![1.0; num_states * num_actions],
            q_check: vec![0.0; num_states * num_actions],
            v: vec![1.0; num_states],
            v_check: vec![0.0; num_states],
        }
    }

    pub fn num_snapshots(&self) -> usize {
        self.snapshots.len()
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    #[inline]
    pub fn q_at(&self, point: usize) -> f64 {
        self.q[point]
    }

    #[inline]
    pub fn q_check_at(&self, point: usize) -> f64 {
        self.q_check[point]
    }

    #[inline]
    pub fn v_at(&self, state: usize) -> f64 {
        self.v[state]
    }

    #[inline]
    pub fn v_check_at(&self, state: usize) -> f64 {
        self.v_check[state]
    }

    /// Bonus of the most recent snapshot at `point`; 0 before any switch.
    pub fn latest_bonus(&self, point: usize) -> f64 {
        self.snapshots.last().map_or(0.0, |s| s.bonus[point])
    }

    /// Greedy action at `state`, ties to the lowest action index.
    pub fn greedy_action(&self, state: usize) -> usize {
        let base = state * self.num_actions;
        let mut best = 0;
        for a in 1..self.num_actions {
            if self.q[base + a] > self.q[base + best] {
                best = a;
            }
        }
        best
    }

    /// Push a snapshot, update the cached tables, and verify the monotone,
    /// range, and ordering invariants on every point, counting violations
    /// into `viol`.
    pub fn push(&mut self, snap: Snapshot, viol: &mut ViolationCounters) {
        let n = self.q.len();
        for z in 0..n {
            let old_q = self.q[z];
            let old_qc = self.q_check[z];
            let layer = snap.f_hat.eval(z) + snap.bonus[z];
            let layer_check = snap.f_check.eval(z) - snap.bonus_check[z];
            let new_q = old_q.min(layer).clamp(0.0, 1.0);
            let new_qc = old_qc.max(layer_check).clamp(0.0, 1.0);
            if new_q > old_q + 1e-12 || new_qc < old_qc - 1e-12 {
                viol.monotonicity += 1;
            }
            if !(0.0..=1.0).contains(&new_q) || !(0.0..=1.0).contains(&new_qc) {
                viol.range += 1;
            }
            if new_qc > new_q + 1e-9 {
                viol.ordering += 1;
            }
            self.q[z] = new_q;
            self.q_check[z] = new_qc;
        }
        for s in 0..self.num_states {
            let base = s * self.num_actions;
            self.v[s] = self.q[base..base + self.num_actions]
                .iter()
                .cloned()
                .fold(f64::NEG_INFINITY, f64::max);
            self.v_check[s] = self.q_check[base..base + self.num_actions]
                .iter()
                .cloned()
                .fold(f64::NEG_INFINITY, f64::max);
        }
        self.snapshots.push(snap);
    }

    /// Recompute `(Q, Qc)` at `point` directly from the stored snapshots,
    /// bypassing the cached tables. Test oracle for the cache.
    pub fn eval_from_snapshots(&self, point: usize) -> (f64, f64) {
        let mut q = 1.0_f64;
        let mut qc = 0.0_f64;
        for snap in &self.snapshots {
            q = q.min(snap.f_hat.eval(point) + snap.bonus[point]);
            qc = qc.max(snap.f_check.eval(point) - snap.bonus_check[point]);
        }
        (q.clamp(0.0, 1.0), qc.clamp(0.0, 1.0))
    }
}
