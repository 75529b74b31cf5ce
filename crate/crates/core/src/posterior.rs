//! Bayesian updating of the voter's belief about the challenger after a
//! mandatory debate.

use serde::Serialize;

use crate::error::{DebateError, Result};
use crate::model::GameConfig;
use crate::numeric::brent;
use crate::payoff::BeliefState;

/// Posterior quantities after a mandatory debate under the full prior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PosteriorSummary {
    /// Ex-ante probability that the challenger wins the debate.
    pub win_mass: f64,
    pub mean_given_win: f64,
    pub mean_given_loss: f64,
    /// Quality at which `θ(q, q_I)` equals the win mass.
    pub crossing_quality: f64,
}

/// Debate posteriors starting from an arbitrary belief.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DebatePosterior {
    pub win_mass: f64,
    pub mean_given_win: f64,
    pub mean_given_loss: f64,
}

fn check_win_mass(w: f64, tie_tol: f64) -> Result<f64> {
    if !w.is_finite() || w <= tie_tol || w >= 1.0 - tie_tol {
        Err(DebateError::DegenerateWinMass { win_mass: w })
    } else {
        Ok(w)
    }
}

/// Debate posteriors when the voter enters the debate holding `belief`.
pub fn posterior_under(belief: &BeliefState, config: &GameConfig) -> Result<DebatePosterior> {
    let s = config.numerics();
    let w = check_win_mass(belief.expect(|q| config.theta(q), config)?, s.tie_tol)?;
    let win_first = belief.expect(|q| config.theta(q) * q, config)?;
    let loss_first = belief.expect(|q| (1.0 - config.theta(q)) * q, config)?;
    Ok(DebatePosterior {
        win_mass: w,
        mean_given_win: win_first / w,
        mean_given_loss: loss_first / (1.0 - w),
    })
}

/// `∫ p(q) θ(q, q_I) dq`.
pub fn win_mass(config: &GameConfig) -> Result<f64> {
    let w = config
        .prior()
        .integrate_range(|q| config.theta(q), 0.0, f64::INFINITY, config.numerics())?;
    check_win_mass(w, config.numerics().tie_tol)
}

/// Posterior density (or atom mass, for discrete priors) at `q` after a debate win.
pub fn posterior_density_win(q: f64, config: &GameConfig) -> Result<f64> {
    if !(q >= 0.0) {
        return Err(DebateError::Domain(q));
    }
    let w = win_mass(config)?;
    Ok(config.prior().density_or_mass(q) * config.theta(q) / w)
}

/// Posterior density (or atom mass) at `q` after a debate loss.
pub fn posterior_density_loss(q: f64, config: &GameConfig) -> Result<f64> {
    if !(q >= 0.0) {
        return Err(DebateError::Domain(q));
    }
    let w = win_mass(config)?;
    Ok(config.prior().density_or_mass(q) * (1.0 - config.theta(q)) / (1.0 - w))
}

/// Posterior means after a win and after a loss, the win mass and the crossing
/// quality. Fails if the ordering `win > prior > loss` or the total-expectation
/// identity does not hold numerically.
pub fn posterior_means(config: &GameConfig) -> Result<PosteriorSummary> {
    let post = posterior_under(&BeliefState::full_prior(config.prior()), config)?;
    let mean = config.prior().mean();
    if !(post.mean_given_win > mean && mean > post.mean_given_loss) {
        return Err(DebateError::Precondition(format!(
            "posterior ordering fails: win {} / prior {} / loss {}",
            post.mean_given_win, mean, post.mean_given_loss
        )));
    }
    let mixture = post.win_mass * post.mean_given_win + (1.0 - post.win_mass) * post.mean_given_loss;
    if (mixture - mean).abs() > 1e-8 {
        return Err(DebateError::Precondition(format!(
            "total expectation mismatch: {mixture} vs prior mean {mean}"
        )));
    }
    let crossing = crossing_from(post.win_mass, config)?;
    Ok(PosteriorSummary {
        win_mass: post.win_mass,
        mean_given_win: post.mean_given_win,
        mean_given_loss: post.mean_given_loss,
        crossing_quality: crossing,
    })
}

fn crossing_from(w: f64, config: &GameConfig) -> Result<f64> {
    let tol = config.numerics().root_abs_tol;
    let mean = config.prior().mean();
    // A concave θ puts the root below the mean; otherwise look up to the top of the support.
    let hi = if config.theta(mean) >= w {
        mean
    } else {
        config.prior().support_upper()
    };
    brent(|q| config.theta(q) - w, 0.0, hi, tol, tol, 500)
}

/// Solves `θ(q̂, q_I) = win_mass`. The root lies in `[0, prior mean]` when θ
/// is concave in the challenger's quality.
pub fn crossing_quality(config: &GameConfig) -> Result<f64> {
    crossing_from(win_mass(config)?, config)
}

/// Empirical curvature of `G` over an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Curvature {
    Concave,
    Convex,
    Mixed,
    Affine,
}

pub const CURVATURE_SAMPLES: usize = 64;
const CURVATURE_NOISE: f64 = 1e-13;

/// Classifies `G` on `[lo, hi]` from second differences at evenly spaced points.
pub fn classify_curvature(config: &GameConfig, lo: f64, hi: f64) -> Curvature {
    let n = CURVATURE_SAMPLES;
    let values: Vec<f64> = (0..n)
        .map(|i| config.g(lo + (hi - lo) * i as f64 / (n - 1) as f64))
        .collect();
    let (mut up, mut down) = (false, false);
    for w in values.windows(3) {
        let d2 = w[0] - 2.0 * w[1] + w[2];
        up |= d2 > CURVATURE_NOISE;
        down |= d2 < -CURVATURE_NOISE;
    }
    match (up, down) {
        (false, false) => Curvature::Affine,
        (true, false) => Curvature::Convex,
        (false, true) => Curvature::Concave,
        (true, true) => Curvature::Mixed,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingReport {
    /// `mean_given_win > prior mean > mean_given_loss`.
    pub ordering_holds: bool,
    /// The weakest type does worse in a debate than without one.
    pub extreme_low: bool,
    /// A very strong type does better in a debate than without one.
    pub extreme_high: bool,
    pub high_probe: f64,
    pub jensen_direction: Curvature,
    /// Whether the incumbent's debate payoff sits on the side implied by the
    /// curvature; `None` when curvature is mixed.
    pub jensen_holds: Option<bool>,
    pub debate_payoff: f64,
    pub no_debate_payoff: f64,
    pub posterior: DebatePosterior,
}

/// Affine shocks must reproduce the no-debate payoff to this accuracy.
pub const AFFINE_EQUALITY_TOL: f64 = 1e-10;

pub fn check_posterior_ordering(config: &GameConfig) -> Result<OrderingReport> {
    let post = posterior_under(&BeliefState::full_prior(config.prior()), config)?;
    let q_i = config.q_i();
    let mean = config.prior().mean();
    let g_win = config.g(post.mean_given_win - q_i);
    let g_loss = config.g(post.mean_given_loss - q_i);
    let g_prior = config.g(mean - q_i);
    let high_probe = 10.0 * config.prior().support_upper();
    let debate_at = |q: f64| {
        let t = config.theta(q);
        t * g_win + (1.0 - t) * g_loss
    };
    let debate_payoff = post.win_mass * g_win + (1.0 - post.win_mass) * g_loss;
    let curvature = classify_curvature(
        config,
        post.mean_given_loss - q_i,
        post.mean_given_win - q_i,
    );
    let jensen_holds = match curvature {
        Curvature::Concave => Some(debate_payoff < g_prior),
        Curvature::Convex => Some(debate_payoff > g_prior),
        Curvature::Affine => Some((debate_payoff - g_prior).abs() <= AFFINE_EQUALITY_TOL),
        Curvature::Mixed => None,
    };
    Ok(OrderingReport {
        ordering_holds: post.mean_given_win > mean && mean > post.mean_given_loss,
        extreme_low: debate_at(0.0) < g_prior,
        extreme_high: debate_at(high_probe) > g_prior,
        high_probe,
        jensen_direction: curvature,
        jensen_holds,
        debate_payoff,
        no_debate_payoff: g_prior,
        posterior: post,
    })
}
