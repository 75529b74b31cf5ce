//! Monte Carlo replay of the election: draw a quality, play the debate, draw
//! the shock, count votes. Used as an independent check on the analytic
//! payoffs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{DebateError, Result};
use crate::model::GameConfig;
use crate::payoff::{challenger_debate_payoff, incumbent_debate_payoff, BeliefState};
use crate::posterior::{posterior_under, DebatePosterior};

/// Trials per independently seeded stream. Fixed so results do not depend on
/// the number of worker threads.
pub const BATCH: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "q_c", rename_all = "kebab-case")]
pub enum Scenario {
    DebateExAnte,
    DebateConditional(f64),
    NoDebate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationSpec {
    pub scenario: Scenario,
    pub n: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationResult {
    pub scenario: Scenario,
    /// Fraction of trials the challenger won.
    pub estimate: f64,
    pub stderr: f64,
    pub n: u64,
    pub seed: u64,
    pub challenger_wins: u64,
    pub debates_won: u64,
}

#[derive(Default, Clone, Copy)]
struct Counts {
    wins: u64,
    debates_won: u64,
}

fn binomial_stderr(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

fn run_batch(
    spec: &SimulationSpec,
    post: Option<&DebatePosterior>,
    config: &GameConfig,
    batch: u64,
) -> Counts {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(batch);
    let start = batch * BATCH;
    let len = BATCH.min(spec.n - start);
    let q_i = config.q_i();
    let mean = config.prior().mean();
    let mut c = Counts::default();
    for _ in 0..len {
        let q = match spec.scenario {
            Scenario::DebateConditional(q) => q,
            _ => config.prior().sample(&mut rng),
        };
        let believed = match post {
            Some(p) => {
                let won = rng.random::<f64>() < config.theta(q);
                c.debates_won += won as u64;
                if won {
                    p.mean_given_win
                } else {
                    p.mean_given_loss
                }
            }
            None => mean,
        };
        let shock = config.shock().sample(&mut rng);
        // Ties go to the incumbent.
        if believed - q_i > shock {
            c.wins += 1;
        }
    }
    c
}

/// Deterministic in `(spec, config)` regardless of how many threads run it.
pub fn simulate_election(spec: &SimulationSpec, config: &GameConfig) -> Result<SimulationResult> {
    if spec.n == 0 {
        return Err(DebateError::config("n", "need at least one trial"));
    }
    if let Scenario::DebateConditional(q) = spec.scenario {
        if !(q.is_finite() && q >= 0.0) {
            return Err(DebateError::config("scenario.q_c", format!("quality must be finite and non-negative, got {q}")));
        }
    }
    let post = match spec.scenario {
        Scenario::NoDebate => None,
        _ => Some(posterior_under(&BeliefState::full_prior(config.prior()), config)?),
    };
    let batches = spec.n.div_ceil(BATCH);
    let totals = (0..batches)
        .into_par_iter()
        .map(|b| run_batch(spec, post.as_ref(), config, b))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Counts::default(), |a, b| Counts {
            wins: a.wins + b.wins,
            debates_won: a.debates_won + b.debates_won,
        });
    let estimate = totals.wins as f64 / spec.n as f64;
    Ok(SimulationResult {
        scenario: spec.scenario,
        estimate,
        stderr: binomial_stderr(estimate, spec.n),
        n: spec.n,
        seed: spec.seed,
        challenger_wins: totals.wins,
        debates_won: totals.debates_won,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The sample has zero spread, so the band is empty.
    Inconclusive,
}

pub const ORACLE_BAND: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub name: String,
    pub analytic: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub verdict: Verdict,
}

fn compare(name: String, analytic: f64, estimate: f64, stderr: f64) -> Comparison {
    let gap = (analytic - estimate).abs();
    let verdict = if stderr == 0.0 {
        if gap <= 1e-12 {
            Verdict::Pass
        } else {
            Verdict::Inconclusive
        }
    } else if gap <= ORACLE_BAND * stderr {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Comparison {
        name,
        analytic,
        estimate,
        stderr,
        verdict,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub n: u64,
    pub seed: u64,
    pub comparisons: Vec<Comparison>,
    pub simulations: Vec<SimulationResult>,
    pub all_pass: bool,
}

/// Prior quantiles at which the conditional debate payoff is probed.
pub const PROBE_QUANTILES: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

/// Seed for the `k`-th simulation of an oracle run.
fn derived_seed(seed: u64, k: u64) -> u64 {
    seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Compares every analytic payoff with its simulated frequency.
pub fn oracle_check(config: &GameConfig, n: u64, seed: u64) -> Result<OracleReport> {
    let full = BeliefState::full_prior(config.prior());
    let post = posterior_under(&full, config)?;
    let mut specs = vec![
        (Scenario::NoDebate, "no-debate payoff".to_string()),
        (Scenario::DebateExAnte, "ex-ante debate payoff".to_string()),
    ];
    for u in PROBE_QUANTILES {
        let q = config.prior().quantile(u);
        specs.push((
            Scenario::DebateConditional(q),
            format!("debate payoff at prior quantile {u} (q_c = {q})"),
        ));
    }
    let sims = specs
        .iter()
        .enumerate()
        .map(|(k, (scenario, _))| {
            simulate_election(
                &SimulationSpec {
                    scenario: *scenario,
                    n,
                    seed: derived_seed(seed, k as u64),
                },
                config,
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let mut comparisons = Vec::new();
    for ((scenario, name), sim) in specs.into_iter().zip(&sims) {
        let analytic = match scenario {
            Scenario::NoDebate => config.g(config.prior().mean() - config.q_i()),
            Scenario::DebateExAnte => incumbent_debate_payoff(config)?,
            Scenario::DebateConditional(q) => challenger_debate_payoff(q, &full, config)?,
        };
        comparisons.push(compare(name, analytic, sim.estimate, sim.stderr));
        if scenario == Scenario::DebateExAnte {
            let freq = sim.debates_won as f64 / n as f64;
            comparisons.push(compare(
                "debate win frequency".to_string(),
                post.win_mass,
                freq,
                binomial_stderr(freq, n),
            ));
        }
    }
    let all_pass = comparisons.iter().all(|c| c.verdict == Verdict::Pass);
    Ok(OracleReport {
        n,
        seed,
        comparisons,
        simulations: sims,
        all_pass,
    })
}
