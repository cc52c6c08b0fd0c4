//! Rare-switching controller.
//!
//! Per stage, the controller accumulates the frozen-statistics uncertainty
//! of incoming observations, `S_h += D2_frozen(z_{k,h}) / sigma_bar^2`.
//! A replan triggers when any stage's accumulator reaches the threshold
//! chi (or at the forced initial episode).

#[derive(Debug, Clone)]
pub struct SwitchState {
    /// Episode (1-based) of the last switch; 0 before the first plan.
    pub k_last: usize,
    /// Number of switches so far, l_k.
    pub switch_count: usize,
    accumulators: Vec<f64>,
}

impl SwitchState {
    pub fn new(horizon: usize) -> Self {
        SwitchState { k_last: 0, switch_count: 0, accumulators: vec![0.0; horizon] }
    }

    /// Test constructor with preset accumulators.
    pub fn with_accumulators(accumulators: Vec<f64>) -> Self {
        SwitchState { k_last: 1, switch_count: 1, accumulators }
    }

    /// True iff this is the forced first episode or some stage accumulated
    /// at least `chi` since the last switch.
    pub fn should_switch(&self, chi: f64, k: usize) -> bool {
        k == 1 || self.accumulators.iter().any(|&s| s >= chi)
    }

    pub fn accumulate(&mut self, stage: usize, value: f64) {
        self.accumulators[stage] += value;
    }

    pub fn accumulator(&self, stage: usize) -> f64 {
        self.accumulators[stage]
    }

    /// Register a switch at episode `k`: bump the counter and reset all
    /// accumulators.
    pub fn record_switch(&mut self, k: usize) {
        self.k_last = k;
        self.switch_count += 1;
        self.accumulators.fill(0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_episode_forces_a_plan() {
        let sw = SwitchState::new(2);
        assert!(sw.should_switch(1.0, 1));
        assert!(!sw.should_switch(1.0, 2));
    }

    #[test]
    fn threshold_is_per_stage() {
        let below = SwitchState::with_accumulators(vec![0.3, 0.9]);
        assert!(!below.should_switch(1.0, 5));
        let at = SwitchState::with_accumulators(vec![1.0, 0.0]);
        assert!(at.should_switch(1.0, 5));
    }

    #[test]
    fn record_switch_resets_accumulators() {
        let mut sw = SwitchState::new(2);
        sw.accumulate(0, 2.0);
        sw.record_switch(3);
        assert_eq!(sw.k_last, 3);
        assert_eq!(sw.switch_count, 1);
        assert_eq!(sw.accumulator(0), 0.0);
        assert!(!sw.should_switch(1.0, 4));
    }
}
