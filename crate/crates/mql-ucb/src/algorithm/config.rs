//! Planner configuration and confidence-radius schedules.

use serde::{Deserialize, Serialize};

use super::AlgoError;

/// Which confidence-radius schedule the planner runs.
///
/// `Theory` evaluates the analysis schedules with every O(1) constant set
/// to 1 and covering numbers replaced by configured proxies; the radii it
/// produces are far too conservative to give good desk-scale regret but
/// keep optimism essentially always valid. `Practical` uses
/// `c * sqrt(d log(1+k))` radii.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaMode {
    Practical,
    Theory,
}

/// Full planner configuration.
///
/// The confidence radii `beta_hat` and `beta_check` are kept equal (one
/// coefficient drives both); all schedules are nondecreasing in `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgoConfig {
    /// D² regularizer lambda.
    pub lambda: f64,
    /// Parameter-ball radius W; the effective regularizer is lambda / W^2.
    pub radius_w: f64,
    /// Weight floor alpha.
    pub alpha: f64,
    /// Uncertainty-weight coefficient gamma (practical mode; theory mode
    /// derives its own).
    pub gamma: f64,
    /// Switching threshold chi.
    pub chi: f64,
    /// Function range bound L.
    pub range_l: f64,
    pub mode: BetaMode,
    /// Practical-mode coefficient for beta_hat = beta_check.
    pub c_bernstein: f64,
    /// Practical-mode coefficient for the Hoeffding radius beta.
    pub c_hoeffding: f64,
    /// Practical-mode coefficient for the second-moment radius beta_tilde.
    pub c_second: f64,
    /// log-covering proxy for the function class, log N_F(eps).
    pub log_nf: f64,
    /// log-covering proxy for the bonus class, log N(B, .).
    pub log_nb: f64,
    /// Covering radius eps entering the theory schedules.
    pub eps_cov: f64,
    /// Confidence level delta.
    pub delta: f64,
    /// Multiplier on the F variance bonus in practical mode (the theory
    /// value log(N_F) + log(N_eps(K)) is vacuous at desk scale).
    pub f_multiplier: f64,
    /// Bonus-oracle accuracy ratio C; both built-in oracles are exact, so
    /// this stays 1 and is carried for forward compatibility.
    pub oracle_ratio_c: f64,
    /// Dimension surrogate in the practical radii (feature dimension, or
    /// log2 |F| for finite classes).
    pub dim_proxy: f64,
    pub horizon: usize,
    pub num_episodes: usize,
    /// Probe the frozen-vs-current uncertainty stability bound each
    /// episode and count violations.
    pub check_stability: bool,
    /// Maximum number of planning passes; `None` is unlimited. With a
    /// budget of 0 the initial all-ones value function is never replaced.
    pub plan_budget: Option<usize>,
}

impl AlgoConfig {
    /// Practical defaults: alpha = 1/sqrt(KH), lambda = W = chi = 1,
    /// c1 = c2 = c3 = 0.05, gamma = 1, L = 2. The radius coefficients are
    /// calibrated to desk scale; larger values keep the bonuses above the
    /// value gaps for far too long on thousand-episode benchmarks.
    pub fn practical(dim_proxy: f64, horizon: usize, num_episodes: usize) -> Self {
        let kh = (num_episodes * horizon) as f64;
        AlgoConfig {
            lambda: 1.0,
            radius_w: 1.0,
            alpha: 1.0 / kh.sqrt(),
            gamma: 1.0,
            chi: 1.0,
            range_l: 2.0,
            mode: BetaMode::Practical,
            c_bernstein: 0.05,
            c_hoeffding: 0.05,
            c_second: 0.05,
            log_nf: 1.0,
            log_nb: 1.0,
            eps_cov: 1.0 / (num_episodes as f64 * 2.0 * horizon as f64),
            delta: 0.01,
            f_multiplier: 1.0,
            oracle_ratio_c: 1.0,
            dim_proxy,
            horizon,
            num_episodes,
            check_stability: true,
            plan_budget: None,
        }
    }

    /// Theory mode with the schedule parameters of the main regret theorem:
    /// alpha = 1/sqrt(KH), eps = 1/(K L H), lambda = 1.
    pub fn theory(dim_proxy: f64, horizon: usize, num_episodes: usize) -> Self {
        let mut cfg = Self::practical(dim_proxy, horizon, num_episodes);
        cfg.mode = BetaMode::Theory;
        cfg
    }

    pub fn lambda_eff(&self) -> f64 {
        self.lambda / (self.radius_w * self.radius_w)
    }

    pub fn validate(&self) -> Result<(), AlgoError> {
        let positive = [
            ("lambda", self.lambda),
            ("radius_w", self.radius_w),
            ("alpha", self.alpha),
            ("chi", self.chi),
            ("range_l", self.range_l),
            ("delta", self.delta),
        ];
        for (name, v) in positive {
            if !v.is_finite() || v <= 0.0 {
                return Err(AlgoError::BadConfig(format!("{name} must be positive, got {v}")));
            }
        }
        let nonnegative = [
            ("gamma", self.gamma),
            ("c_bernstein", self.c_bernstein),
            ("c_hoeffding", self.c_hoeffding),
            ("c_second", self.c_second),
            ("log_nf", self.log_nf),
            ("log_nb", self.log_nb),
            ("eps_cov", self.eps_cov),
            ("f_multiplier", self.f_multiplier),
            ("dim_proxy", self.dim_proxy),
        ];
        for (name, v) in nonnegative {
            if !v.is_finite() || v < 0.0 {
                return Err(AlgoError::BadConfig(format!("{name} must be nonnegative, got {v}")));
            }
        }
        if self.oracle_ratio_c < 1.0 {
            return Err(AlgoError::BadConfig(format!(
                "oracle_ratio_c must be at least 1, got {}",
                self.oracle_ratio_c
            )));
        }
        if self.num_episodes == 0 || self.horizon == 0 {
            return Err(AlgoError::BadConfig("num_episodes and horizon must be positive".into()));
        }
        Ok(())
    }

    /// Evaluate every schedule at episode `k` (1-based) with `l_k` policy
    /// switches so far.
    pub fn betas(&self, k: usize, l_k: usize) -> BetaValues {
        match self.mode {
            BetaMode::Practical => {
                let scale = (self.dim_proxy * (1.0 + k as f64).ln()).sqrt();
                // The Bernstein radius keeps the theory's additive
                // sqrt(lambda) floor: it makes the no-data bonus cover the
                // full value range, so the monotone stack cannot clip the
                // initial optimistic values below 1.
                let floor = self.lambda_eff().sqrt();
                BetaValues {
                    beta_hat: (self.c_bernstein * scale).max(floor),
                    beta_check: (self.c_bernstein * scale).max(floor),
                    beta: self.c_hoeffding * scale,
                    beta_tilde: self.c_second * scale,
                    gamma: self.gamma,
                    f_multiplier: self.f_multiplier,
                }
            }
            BetaMode::Theory => self.theory_betas(k, l_k),
        }
    }

    /// The analysis schedules with O(1) constants set to 1 and covering
    /// numbers replaced by the configured proxies. The value-class covering
    /// proxy grows with the switch count: log N_eps(k) = (l_k + 1)(log N_F
    /// + log N_B).
    fn theory_betas(&self, k: usize, l_k: usize) -> BetaValues {
        let kf = k as f64;
        let h = self.horizon as f64;
        let l = self.range_l;
        let a2 = self.alpha * self.alpha;
        let log_neps_k = (l_k as f64 + 1.0) * (self.log_nf + self.log_nb);

        let beta_hat_sq = beta_hat_sq_from_parts(
            bernstein_log_term(kf, l, self.alpha, h, self.delta),
            self.log_nf,
            self.lambda,
            self.eps_cov,
            kf,
            l,
            self.alpha,
        );

        // Hoeffding-type radii: sqrt(128 log(N_eps(k) N_F H / delta) +
        // 64 L eps k / alpha^2), the second-moment variant without the
        // 1/alpha^2.
        let log_term = log_neps_k + self.log_nf + (h / self.delta).ln();
        let beta = (128.0 * log_term + 64.0 * l * self.eps_cov * kf / a2).sqrt();
        let beta_tilde = (128.0 * log_term + 64.0 * l * self.eps_cov * kf).sqrt();

        // gamma^2 = log(2 H K^2 (2 log(L^2 K / alpha^4) + 2)
        //               (log(4L/alpha^2) + 2) N_F^4 N_eps^2 / delta).
        let kk = self.num_episodes as f64;
        let gamma_sq = (2.0 * h * kk * kk * (2.0 * (l * l * kk / (a2 * a2)).ln() + 2.0)
            * ((4.0 * l / a2).ln() + 2.0)
            / self.delta)
            .ln()
            + 4.0 * self.log_nf
            + 2.0 * log_neps_k;

        BetaValues {
            beta_hat: beta_hat_sq.sqrt(),
            beta_check: beta_hat_sq.sqrt(),
            beta,
            beta_tilde,
            gamma: gamma_sq.max(0.0).sqrt(),
            f_multiplier: self.log_nf + log_neps_k,
        }
    }
}

/// One evaluation of all schedules at a given episode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaValues {
    /// Bernstein-type radius for the optimistic regression bonus.
    pub beta_hat: f64,
    /// Equal to `beta_hat` (the analysis sets them equal).
    pub beta_check: f64,
    /// Hoeffding-type radius entering the variance bonuses.
    pub beta: f64,
    /// Second-moment radius.
    pub beta_tilde: f64,
    pub gamma: f64,
    /// Multiplier on the F bonus.
    pub f_multiplier: f64,
}

/// The log factor inside the Bernstein radius:
/// `log(2 k^2 (2 log(L^2 k / alpha^4) + 2) (log(4 L / alpha^2) + 2) H / delta)`.
pub fn bernstein_log_term(k: f64, range_l: f64, alpha: f64, horizon: f64, delta: f64) -> f64 {
    let a2 = alpha * alpha;
    (2.0 * k * k
        * (2.0 * (range_l * range_l * k / (a2 * a2)).ln() + 2.0)
        * ((4.0 * range_l / a2).ln() + 2.0)
        * horizon
        / delta)
        .ln()
}

/// `beta_hat^2 = log_term (log N_F + 1) + lambda + eps k L / alpha^2`.
pub fn beta_hat_sq_from_parts(
    log_term: f64,
    log_nf: f64,
    lambda: f64,
    eps_cov: f64,
    k: f64,
    range_l: f64,
    alpha: f64,
) -> f64 {
    log_term * (log_nf + 1.0) + lambda + eps_cov * k * range_l / (alpha * alpha)
}
