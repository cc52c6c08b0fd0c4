//! Variance estimator for the weighted-regression targets.
//!
//! The recorded weight combines the estimated one-step variance of the
//! optimistic value with two correction bonuses:
//!
//! - `[VbarV] = clip0(f_tilde(z) - f_hat(z)^2)`, second moment minus
//!   squared first moment;
//! - `E = (2 L beta + beta_tilde) min(1, Dbar)` controls the estimation
//!   error of that variance;
//! - `F = f_mult * clip0(min(1, 2 f_hat - 2 f_check + 4 beta Dbar))`
//!   dominates the variance of the optimistic-minus-optimal gap (it
//!   upper-bounds a variance, hence the clip at 0);
//!
//! then `sigma = sqrt([VbarV] + E + F)` and the weight is floored:
//! `sigma_bar = max(sigma, alpha, gamma sqrt(Dbar))`.
//!
//! `Dbar` here is evaluated against the *current* statistics, unlike the
//! planner's bonuses which use their switch-frozen snapshots.

use super::config::{AlgoConfig, BetaValues};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceRecord {
    /// Clipped second-minus-first-moment variance estimate.
    pub vbar: f64,
    pub e_bonus: f64,
    pub f_bonus: f64,
    pub sigma: f64,
    /// The floored regression weight actually recorded.
    pub sigma_bar: f64,
    /// The (unsquared) uncertainty Dbar the record was computed with.
    pub d_bar: f64,
}

/// Evaluate the estimator at one state-action from the latest regressor
/// values and the current D².
pub fn estimate_variance(
    f_hat_z: f64,
    f_check_z: f64,
    f_tilde_z: f64,
    d2_current: f64,
    betas: &BetaValues,
    cfg: &AlgoConfig,
) -> VarianceRecord {
    let d_bar = d2_current.max(0.0).sqrt();
    let vbar = (f_tilde_z - f_hat_z * f_hat_z).max(0.0);
    let e_bonus = (2.0 * cfg.range_l * betas.beta + betas.beta_tilde) * d_bar.min(1.0);
    let f_raw = 2.0 * f_hat_z - 2.0 * f_check_z + 4.0 * betas.beta * d_bar;
    let f_bonus = betas.f_multiplier * f_raw.clamp(0.0, 1.0);
    let sigma = (vbar + e_bonus + f_bonus).max(0.0).sqrt();
    let sigma_bar = sigma.max(cfg.alpha).max(betas.gamma * d_bar.sqrt());
    VarianceRecord { vbar, e_bonus, f_bonus, sigma, sigma_bar, d_bar }
}
