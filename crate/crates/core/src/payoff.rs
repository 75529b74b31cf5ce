//! Expected vote shares for each pair of debate announcements.

use std::fmt;

use serde::Serialize;

use crate::error::{DebateError, Result};
use crate::model::GameConfig;
use crate::posterior::{posterior_means, posterior_under, DebatePosterior};

/// Belief the voter adopts when the challenger refuses a debate that every
/// type accepts in equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OffPathBeliefPolicy {
    /// Keep the prior.
    FullPrior,
    /// Condition on quality at most the given value.
    RightTruncateAt(f64),
    /// Believe the challenger has exactly this quality.
    PointMassAt(f64),
}

impl Default for OffPathBeliefPolicy {
    fn default() -> Self {
        OffPathBeliefPolicy::PointMassAt(0.0)
    }
}

impl OffPathBeliefPolicy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            OffPathBeliefPolicy::FullPrior => Ok(()),
            OffPathBeliefPolicy::RightTruncateAt(v) | OffPathBeliefPolicy::PointMassAt(v) => {
                if v.is_finite() && v >= 0.0 {
                    Ok(())
                } else {
                    Err(DebateError::config(
                        "off_path.value",
                        format!("must be a finite non-negative quality, got {v}"),
                    ))
                }
            }
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            OffPathBeliefPolicy::FullPrior => "full-prior",
            OffPathBeliefPolicy::RightTruncateAt(_) => "right-truncate-at",
            OffPathBeliefPolicy::PointMassAt(_) => "point-mass-at",
        }
    }

    pub fn belief(&self, config: &GameConfig) -> Result<BeliefState> {
        let shape = match *self {
            OffPathBeliefPolicy::FullPrior => BeliefShape::FullPrior,
            OffPathBeliefPolicy::RightTruncateAt(v) => BeliefShape::RightTruncated(v),
            OffPathBeliefPolicy::PointMassAt(v) => BeliefShape::PointMass(v),
        };
        BeliefState::new(shape, config)
    }
}

/// Support of a voter belief, always derived from the configured prior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "shape", content = "at", rename_all = "kebab-case")]
pub enum BeliefShape {
    FullPrior,
    /// Prior conditioned on `q >= at`.
    LeftTruncated(f64),
    /// Prior conditioned on `q <= at`.
    RightTruncated(f64),
    PointMass(f64),
}

impl fmt::Display for BeliefShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BeliefShape::FullPrior => write!(f, "prior"),
            BeliefShape::LeftTruncated(q) => write!(f, "prior | q >= {q}"),
            BeliefShape::RightTruncated(q) => write!(f, "prior | q <= {q}"),
            BeliefShape::PointMass(q) => write!(f, "point mass at {q}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeliefState {
    pub shape: BeliefShape,
    pub mean: f64,
    #[serde(skip)]
    mass: f64,
}

impl BeliefState {
    pub fn full_prior(prior: &crate::model::ChallengerPrior) -> Self {
        Self {
            shape: BeliefShape::FullPrior,
            mean: prior.mean(),
            mass: 1.0,
        }
    }

    pub fn new(shape: BeliefShape, config: &GameConfig) -> Result<Self> {
        let prior = config.prior();
        let mass = match shape {
            BeliefShape::FullPrior => return Ok(Self::full_prior(prior)),
            BeliefShape::PointMass(q) => {
                if !(q.is_finite() && q >= 0.0) {
                    return Err(DebateError::Domain(q));
                }
                return Ok(Self { shape, mean: q, mass: 1.0 });
            }
            BeliefShape::LeftTruncated(q) => prior.mass_range(q, f64::INFINITY),
            BeliefShape::RightTruncated(q) => prior.mass_range(0.0, q),
        };
        if !(mass > 0.0) {
            return Err(DebateError::EmptyBelief {
                shape: shape.to_string(),
            });
        }
        let mut b = Self { shape, mean: f64::NAN, mass };
        b.mean = b.expect(|q| q, config)?;
        Ok(b)
    }

    /// `E[f(q)]` under this belief.
    pub fn expect<F: Fn(f64) -> f64>(&self, f: F, config: &GameConfig) -> Result<f64> {
        let prior = config.prior();
        let s = config.numerics();
        let (lo, hi) = match self.shape {
            BeliefShape::PointMass(q) => return Ok(f(q)),
            BeliefShape::FullPrior => (0.0, f64::INFINITY),
            BeliefShape::LeftTruncated(q) => (q, f64::INFINITY),
            BeliefShape::RightTruncated(q) => (0.0, q),
        };
        Ok(prior.integrate_range(f, lo, hi, s)? / self.mass)
    }
}

/// `G(mean − q_I)`: the challenger's vote share when no debate takes place.
pub fn no_debate_payoff(belief: &BeliefState, config: &GameConfig) -> f64 {
    config.g(belief.mean - config.q_i())
}

/// Challenger vote share in a debate won with probability `theta`,
/// given the voter's posterior means after each outcome.
pub fn debate_payoff_given(theta: f64, post: &DebatePosterior, config: &GameConfig) -> f64 {
    let q_i = config.q_i();
    theta * config.g(post.mean_given_win - q_i) + (1.0 - theta) * config.g(post.mean_given_loss - q_i)
}

/// Expected vote share of a type-`q_c` challenger in a debate the voter
/// entered holding `belief`.
pub fn challenger_debate_payoff(q_c: f64, belief: &BeliefState, config: &GameConfig) -> Result<f64> {
    if !(q_c >= 0.0) {
        return Err(DebateError::Domain(q_c));
    }
    let post = posterior_under(belief, config)?;
    Ok(debate_payoff_given(config.theta(q_c), &post, config))
}

/// Ex-ante challenger vote share in a mandatory debate; the incumbent's
/// payoff is one minus this.
pub fn incumbent_debate_payoff(config: &GameConfig) -> Result<f64> {
    let s = posterior_means(config)?;
    let q_i = config.q_i();
    Ok(s.win_mass * config.g(s.mean_given_win - q_i)
        + (1.0 - s.win_mass) * config.g(s.mean_given_loss - q_i))
}

/// Debate payoff minus the no-debate payoff; negative means the incumbent
/// (who keeps one minus the share) strictly prefers to debate.
pub fn debate_margin(config: &GameConfig) -> Result<f64> {
    Ok(incumbent_debate_payoff(config)?
        - no_debate_payoff(&BeliefState::full_prior(config.prior()), config))
}

/// Whose payoff the matrix reports for the challenger.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "q_c", rename_all = "kebab-case")]
pub enum PayoffProbe {
    ExAnte,
    Type(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PayoffCell {
    pub incumbent: f64,
    pub challenger: f64,
    pub beliefs: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OffPathCheck {
    pub policy: &'static str,
    pub belief_mean: f64,
    pub below_prior_mean: bool,
    /// `G(off-path mean − q_I)` lies below the ex-ante debate payoff.
    pub below_debate_payoff: bool,
}

/// Vote shares indexed by (incumbent announcement, challenger announcement).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PayoffMatrix {
    pub probe: PayoffProbe,
    pub both_p: PayoffCell,
    pub incumbent_p_challenger_np: PayoffCell,
    pub incumbent_np_challenger_p: PayoffCell,
    pub both_np: PayoffCell,
    /// Debate payoff minus no-debate payoff, unrounded.
    pub margin: f64,
    pub off_path: OffPathCheck,
}

impl PayoffMatrix {
    /// Cells in row-major order: (P,P), (P,NP), (NP,P), (NP,NP).
    pub fn cells(&self) -> [(&'static str, &'static str, &PayoffCell); 4] {
        [
            ("P", "P", &self.both_p),
            ("P", "NP", &self.incumbent_p_challenger_np),
            ("NP", "P", &self.incumbent_np_challenger_p),
            ("NP", "NP", &self.both_np),
        ]
    }
}

pub fn payoff_matrix(probe: PayoffProbe, config: &GameConfig) -> Result<PayoffMatrix> {
    let prior_belief = BeliefState::full_prior(config.prior());
    let debate_ex_ante = incumbent_debate_payoff(config)?;
    let challenger_debate = match probe {
        PayoffProbe::ExAnte => debate_ex_ante,
        PayoffProbe::Type(q) => challenger_debate_payoff(q, &prior_belief, config)?,
    };
    let policy = config.off_path();
    let off = policy.belief(config)?;
    let prior_mean = config.prior().mean();
    if off.mean >= prior_mean && *policy != OffPathBeliefPolicy::FullPrior {
        return Err(DebateError::config(
            "off_path",
            format!(
                "off-path belief mean {} must lie below the prior mean {prior_mean}",
                off.mean
            ),
        ));
    }
    let g_off = no_debate_payoff(&off, config);
    let g_prior = no_debate_payoff(&prior_belief, config);
    let np_cell = || PayoffCell {
        incumbent: 1.0 - g_prior,
        challenger: g_prior,
        beliefs: "no debate: prior".to_string(),
    };
    Ok(PayoffMatrix {
        probe,
        both_p: PayoffCell {
            incumbent: 1.0 - debate_ex_ante,
            challenger: challenger_debate,
            beliefs: "debate: posterior after win / loss".to_string(),
        },
        incumbent_p_challenger_np: PayoffCell {
            incumbent: 1.0 - g_off,
            challenger: g_off,
            beliefs: format!("challenger refused: {}", off.shape),
        },
        incumbent_np_challenger_p: np_cell(),
        both_np: np_cell(),
        margin: debate_ex_ante - g_prior,
        off_path: OffPathCheck {
            policy: policy.tag(),
            belief_mean: off.mean,
            below_prior_mean: off.mean < prior_mean,
            below_debate_payoff: g_off < debate_ex_ante,
        },
    })
}
