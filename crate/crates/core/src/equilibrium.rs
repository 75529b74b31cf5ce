//! Equilibrium classification, the threshold-rule consistency scan and
//! equilibrium enumeration for each order of announcements.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{DebateError, Result};
use crate::model::GameConfig;
use crate::payoff::{
    debate_payoff_given, incumbent_debate_payoff, no_debate_payoff, BeliefShape, BeliefState,
};
use crate::posterior::{posterior_means, posterior_under, PosteriorSummary};

/// Continuous priors are replaced by this many equal-mass atoms wherever the
/// analysis needs a finite type space.
pub const SCAN_ATOMS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Announcement {
    P,
    NP,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Debate,
    NoDebate,
    KnifeEdge,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumOutcome {
    pub regime: Regime,
    /// Incumbent announcements supported in equilibrium; both under a tie.
    pub incumbent_announcements: Vec<Announcement>,
    pub challenger_rule: ThresholdStrategy,
    /// Ex-ante challenger vote share when a debate is held.
    pub debate_payoff: f64,
    /// Challenger vote share without a debate.
    pub no_debate_payoff: f64,
    pub margin: f64,
    pub posterior: PosteriorSummary,
}

/// The incumbent debates when the debate payoff falls short of the
/// no-debate payoff by more than `tie_tol`, refuses when it exceeds it by
/// more than `tie_tol`, and is indifferent otherwise.
pub fn classify_equilibrium(config: &GameConfig) -> Result<EquilibriumOutcome> {
    let posterior = posterior_means(config)?;
    let debate = incumbent_debate_payoff(config)?;
    let no_debate = no_debate_payoff(&BeliefState::full_prior(config.prior()), config);
    let margin = debate - no_debate;
    let tol = config.numerics().tie_tol;
    let (regime, announcements) = if margin < -tol {
        (Regime::Debate, vec![Announcement::P])
    } else if margin > tol {
        (Regime::NoDebate, vec![Announcement::NP])
    } else {
        (Regime::KnifeEdge, vec![Announcement::P, Announcement::NP])
    };
    Ok(EquilibriumOutcome {
        regime,
        incumbent_announcements: announcements,
        challenger_rule: ThresholdStrategy::AlwaysP,
        debate_payoff: debate,
        no_debate_payoff: no_debate,
        margin,
        posterior,
    })
}

/// A challenger's response to an incumbent who announced P.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ThresholdStrategy {
    AlwaysP,
    AlwaysNP,
    /// P iff quality is at least `q_star`.
    Threshold { q_star: f64 },
}

impl ThresholdStrategy {
    pub fn prescribes(&self, q: f64) -> Announcement {
        match *self {
            ThresholdStrategy::AlwaysP => Announcement::P,
            ThresholdStrategy::AlwaysNP => Announcement::NP,
            ThresholdStrategy::Threshold { q_star } if q >= q_star => Announcement::P,
            ThresholdStrategy::Threshold { .. } => Announcement::NP,
        }
    }
}

/// A copy of `config` whose prior has finitely many atoms.
pub fn finite_type_config(config: &GameConfig) -> Result<GameConfig> {
    if config.prior().is_discrete() {
        return Ok(config.clone());
    }
    let prior = config.prior().discretize(SCAN_ATOMS, config.numerics())?;
    config.with_prior(prior)
}

fn support(config: &GameConfig) -> Vec<f64> {
    match config.prior().kind() {
        crate::model::PriorKind::Discrete(d) => d.points().to_vec(),
        crate::model::PriorKind::Continuous(_) => unreachable!("finite type space required"),
    }
}

/// Every constant rule plus a threshold at each support point above the lowest.
pub fn default_strategy_grid(config: &GameConfig) -> Result<Vec<ThresholdStrategy>> {
    let scan = finite_type_config(config)?;
    let mut grid = vec![ThresholdStrategy::AlwaysP, ThresholdStrategy::AlwaysNP];
    grid.extend(
        support(&scan)
            .into_iter()
            .skip(1)
            .map(|q_star| ThresholdStrategy::Threshold { q_star }),
    );
    Ok(grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deviation {
    pub q_c: f64,
    pub prescribed: Announcement,
    /// Payoff of the other announcement minus the prescribed one.
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyCheck {
    pub strategy: ThresholdStrategy,
    pub belief_after_p: BeliefState,
    pub belief_after_np: BeliefState,
    pub consistent: bool,
    /// Types for which P is a best response.
    pub p_best_response: Vec<f64>,
    pub witness: Option<Deviation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub support_size: usize,
    pub checks: Vec<StrategyCheck>,
    pub consistent: Vec<ThresholdStrategy>,
    /// Always-P is the only consistent rule.
    pub always_p_unique: bool,
}

/// Voter beliefs after P and after NP when the challenger follows `strategy`.
///
/// Under always-NP an offer to debate is off-path; it is met with the full
/// prior, the most skeptical belief that still credits the deviator with
/// quality of at least zero.
fn beliefs_for(
    strategy: ThresholdStrategy,
    points: &[f64],
    config: &GameConfig,
) -> Result<(BeliefState, BeliefState)> {
    let full = BeliefState::full_prior(config.prior());
    match strategy {
        ThresholdStrategy::AlwaysP => Ok((full, config.off_path().belief(config)?)),
        ThresholdStrategy::AlwaysNP => Ok((full, full)),
        ThresholdStrategy::Threshold { q_star } => {
            let (lo, hi) = (points[0], points[points.len() - 1]);
            if !(q_star > lo && q_star <= hi) {
                return Err(DebateError::Precondition(format!(
                    "threshold {q_star} must lie in ({lo}, {hi}]"
                )));
            }
            let below = points[points.partition_point(|&p| p < q_star) - 1];
            Ok((
                BeliefState::new(BeliefShape::LeftTruncated(q_star), config)?,
                BeliefState::new(BeliefShape::RightTruncated(below), config)?,
            ))
        }
    }
}

fn check_strategy(
    strategy: ThresholdStrategy,
    points: &[f64],
    config: &GameConfig,
) -> Result<StrategyCheck> {
    let tol = config.numerics().tie_tol;
    let (after_p, after_np) = beliefs_for(strategy, points, config)?;
    let post = posterior_under(&after_p, config)?;
    let np_payoff = no_debate_payoff(&after_np, config);

    let mut witness: Option<Deviation> = None;
    let mut p_best = Vec::new();
    let mut last_class = i8::MIN;
    for &q in points {
        let p_payoff = debate_payoff_given(config.theta(q), &post, config);
        let diff = p_payoff - np_payoff;
        let class = if diff > tol {
            1
        } else if diff < -tol {
            -1
        } else {
            0
        };
        if class < last_class {
            return Err(DebateError::Resolution(format!(
                "best responses under {strategy:?} are not monotone in quality at q = {q}"
            )));
        }
        last_class = class;
        if class >= 0 {
            p_best.push(q);
        }
        let prescribed = strategy.prescribes(q);
        let gain = match prescribed {
            Announcement::P => -diff,
            Announcement::NP => diff,
        };
        if gain > tol && witness.is_none_or(|w| gain > w.gain) {
            witness = Some(Deviation {
                q_c: q,
                prescribed,
                gain,
            });
        }
    }
    Ok(StrategyCheck {
        strategy,
        belief_after_p: after_p,
        belief_after_np: after_np,
        consistent: witness.is_none(),
        p_best_response: p_best,
        witness,
    })
}

/// Tests each candidate response rule for consistency with Bayesian updating
/// and type-by-type best responses. Continuous priors are first replaced by
/// [`SCAN_ATOMS`] equal-mass atoms.
pub fn threshold_consistency_scan(
    config: &GameConfig,
    strategies: &[ThresholdStrategy],
) -> Result<ConsistencyReport> {
    let scan = finite_type_config(config)?;
    let points = support(&scan);
    let checks = strategies
        .par_iter()
        .map(|&s| check_strategy(s, &points, &scan))
        .collect::<Result<Vec<_>>>()?;
    let consistent: Vec<ThresholdStrategy> = checks
        .iter()
        .filter(|c| c.consistent)
        .map(|c| c.strategy)
        .collect();
    let always_p_unique = consistent == [ThresholdStrategy::AlwaysP];
    Ok(ConsistencyReport {
        support_size: points.len(),
        checks,
        consistent,
        always_p_unique,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sequence {
    Simultaneous,
    IncumbentFirst,
    ChallengerFirst,
}

impl Sequence {
    pub const ALL: [Sequence; 3] = [
        Sequence::Simultaneous,
        Sequence::IncumbentFirst,
        Sequence::ChallengerFirst,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnouncementPair {
    pub incumbent: Announcement,
    pub challenger: Announcement,
    pub debate: bool,
    pub challenger_payoff: f64,
    pub incumbent_payoff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceGameResult {
    pub sequence: Sequence,
    pub equilibria: Vec<AnnouncementPair>,
    /// `None` when equilibria disagree on whether a debate is held.
    pub debate_occurs: Option<bool>,
    pub knife_edge: bool,
}

/// Payoff ingredients shared by every announcement order.
struct Ingredients {
    debate: f64,
    no_debate: f64,
    off_path: f64,
    per_type: Vec<f64>,
    tol: f64,
}

impl Ingredients {
    fn new(config: &GameConfig) -> Result<Self> {
        let scan = finite_type_config(config)?;
        let full = BeliefState::full_prior(scan.prior());
        let post = posterior_under(&full, &scan)?;
        let per_type = support(&scan)
            .into_iter()
            .map(|q| debate_payoff_given(scan.theta(q), &post, &scan))
            .collect();
        Ok(Self {
            debate: incumbent_debate_payoff(config)?,
            no_debate: no_debate_payoff(&BeliefState::full_prior(config.prior()), config),
            off_path: no_debate_payoff(&config.off_path().belief(config)?, config),
            per_type,
            tol: config.numerics().tie_tol,
        })
    }

    fn incumbent_accepts(&self) -> bool {
        self.debate <= self.no_debate + self.tol
    }

    fn incumbent_refuses(&self) -> bool {
        self.debate >= self.no_debate - self.tol
    }

    /// Every type weakly prefers a debate (belief: prior) to refusing
    /// (belief: off-path policy).
    fn pooling_on_p_holds(&self) -> bool {
        self.per_type.iter().all(|&d| d >= self.off_path - self.tol)
    }

    /// No type gains by forcing a debate (belief after the offer: full prior).
    fn pooling_on_np_holds(&self) -> bool {
        self.per_type.iter().all(|&d| self.no_debate >= d - self.tol)
    }

    fn pair(&self, incumbent: Announcement, challenger: Announcement) -> AnnouncementPair {
        let debate = incumbent == Announcement::P && challenger == Announcement::P;
        let share = if debate { self.debate } else { self.no_debate };
        AnnouncementPair {
            incumbent,
            challenger,
            debate,
            challenger_payoff: share,
            incumbent_payoff: 1.0 - share,
        }
    }
}

use Announcement::{NP, P};

fn simultaneous(v: &Ingredients) -> Vec<(Announcement, Announcement)> {
    let mut out = Vec::new();
    for a_i in [P, NP] {
        for a_c in [P, NP] {
            // The challenger's move only matters when the incumbent says P.
            let challenger_ok = match a_c {
                P => v.pooling_on_p_holds(),
                NP => v.pooling_on_np_holds(),
            };
            let incumbent_ok = match (a_i, a_c) {
                (P, P) => v.incumbent_accepts(),
                (NP, P) => v.incumbent_refuses(),
                (_, NP) => true,
            };
            if challenger_ok && incumbent_ok {
                out.push((a_i, a_c));
            }
        }
    }
    out
}

fn incumbent_first(v: &Ingredients) -> Vec<(Announcement, Announcement)> {
    let mut out = Vec::new();
    for reply_to_p in [P, NP] {
        let reply_ok = match reply_to_p {
            P => v.pooling_on_p_holds(),
            NP => v.pooling_on_np_holds(),
        };
        if !reply_ok {
            continue;
        }
        // After NP the challenger is indifferent, so either reply is optimal.
        for reply_to_np in [P, NP] {
            for a_i in [P, NP] {
                let incumbent_ok = match (a_i, reply_to_p) {
                    (P, P) => v.incumbent_accepts(),
                    (NP, P) => v.incumbent_refuses(),
                    (_, NP) => true,
                };
                if incumbent_ok {
                    let reply = if a_i == P { reply_to_p } else { reply_to_np };
                    out.push((a_i, reply));
                }
            }
        }
    }
    out
}

fn challenger_first(v: &Ingredients) -> Vec<(Announcement, Announcement)> {
    let mut out = Vec::new();
    for response_to_p in [P, NP] {
        let response_ok = match response_to_p {
            P => v.incumbent_accepts(),
            NP => v.incumbent_refuses(),
        };
        if !response_ok {
            continue;
        }
        // No debate follows NP whatever the incumbent says.
        for response_to_np in [P, NP] {
            for a_c in [P, NP] {
                let offer_value = |d: f64| if response_to_p == P { d } else { v.no_debate };
                let challenger_ok = match a_c {
                    P => v
                        .per_type
                        .iter()
                        .all(|&d| offer_value(d) >= v.off_path - v.tol),
                    NP => v
                        .per_type
                        .iter()
                        .all(|&d| v.no_debate >= offer_value(d) - v.tol),
                };
                if challenger_ok {
                    let response = if a_c == P { response_to_p } else { response_to_np };
                    out.push((response, a_c));
                }
            }
        }
    }
    out
}

/// Enumerates pure-strategy equilibria with a pooled challenger for one order
/// of announcements, reported as distinct (incumbent, challenger) outcomes.
pub fn sequential_equilibria(config: &GameConfig, sequence: Sequence) -> Result<SequenceGameResult> {
    let v = Ingredients::new(config)?;
    let raw = match sequence {
        Sequence::Simultaneous => simultaneous(&v),
        Sequence::IncumbentFirst => incumbent_first(&v),
        Sequence::ChallengerFirst => challenger_first(&v),
    };
    let mut equilibria: Vec<AnnouncementPair> = Vec::new();
    for (a_i, a_c) in raw {
        if !equilibria
            .iter()
            .any(|e| e.incumbent == a_i && e.challenger == a_c)
        {
            equilibria.push(v.pair(a_i, a_c));
        }
    }
    equilibria.sort_by_key(|e| (e.incumbent == NP, e.challenger == NP));
    let debate_occurs = if equilibria.iter().all(|e| e.debate) {
        Some(true)
    } else if equilibria.iter().all(|e| !e.debate) {
        Some(false)
    } else {
        None
    };
    Ok(SequenceGameResult {
        sequence,
        equilibria,
        debate_occurs: if v.incumbent_accepts() && v.incumbent_refuses() {
            None
        } else {
            debate_occurs
        },
        knife_edge: v.incumbent_accepts() && v.incumbent_refuses(),
    })
}

/// Payoffs from different orders must agree to this accuracy.
pub const INVARIANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub regime: Regime,
    /// Set when the incumbent is indifferent and the comparison is not made.
    pub refused: bool,
    pub invariant: bool,
    pub sequences: Vec<SequenceGameResult>,
    /// Largest gap between equilibrium challenger payoffs across all orders.
    pub payoff_spread: f64,
}

/// Checks that whether a debate happens, and the resulting payoffs, do not
/// depend on the order of announcements.
pub fn sequence_invariance_check(config: &GameConfig) -> Result<InvarianceReport> {
    let regime = classify_equilibrium(config)?.regime;
    let sequences = Sequence::ALL
        .iter()
        .map(|&s| sequential_equilibria(config, s))
        .collect::<Result<Vec<_>>>()?;
    let payoffs = sequences
        .iter()
        .flat_map(|s| s.equilibria.iter().map(|e| e.challenger_payoff));
    let (lo, hi) = payoffs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (lo.min(p), hi.max(p))
    });
    let spread = if hi >= lo { hi - lo } else { 0.0 };
    let refused = regime == Regime::KnifeEdge;
    let expected = Some(regime == Regime::Debate);
    let invariant = !refused
        && sequences
            .iter()
            .all(|s| !s.equilibria.is_empty() && s.debate_occurs == expected)
        && spread <= INVARIANCE_TOL;
    Ok(InvarianceReport {
        regime,
        refused,
        invariant,
        sequences,
        payoff_spread: spread,
    })
}
