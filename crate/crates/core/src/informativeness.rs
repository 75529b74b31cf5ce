//! Whether holding a debate moves the challenger's expected vote share
//! closer to its full-information value than skipping it.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::model::GameConfig;
use crate::numeric::brent;
use crate::payoff::{debate_payoff_given, BeliefState};
use crate::posterior::{posterior_under, DebatePosterior};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Label {
    Informative,
    Noisy,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InformativenessResult {
    pub q_c: f64,
    /// `|debate payoff − G(q_c − q_I)|`
    pub debate_error: f64,
    /// `|G(prior mean − q_I) − G(q_c − q_I)|`
    pub no_debate_error: f64,
    pub label: Label,
}

struct Errors<'a> {
    config: &'a GameConfig,
    post: DebatePosterior,
    no_debate: f64,
}

impl<'a> Errors<'a> {
    fn new(config: &'a GameConfig) -> Result<Self> {
        let post = posterior_under(&BeliefState::full_prior(config.prior()), config)?;
        let no_debate = config.g(config.prior().mean() - config.q_i());
        Ok(Self {
            config,
            post,
            no_debate,
        })
    }

    fn at(&self, q: f64) -> (f64, f64) {
        let c = self.config;
        let truth = c.g(q - c.q_i());
        let debate = debate_payoff_given(c.theta(q), &self.post, c);
        ((debate - truth).abs(), (self.no_debate - truth).abs())
    }

    fn gap(&self, q: f64) -> f64 {
        let (d, n) = self.at(q);
        d - n
    }

    fn classify(&self, q: f64) -> InformativenessResult {
        let (debate_error, no_debate_error) = self.at(q);
        let tol = self.config.numerics().tie_tol;
        let label = if debate_error < no_debate_error - tol {
            Label::Informative
        } else if debate_error > no_debate_error + tol {
            Label::Noisy
        } else {
            Label::Boundary
        };
        InformativenessResult {
            q_c: q,
            debate_error,
            no_debate_error,
            label,
        }
    }
}

/// Both errors use the posteriors of a debate every type accepts.
pub fn classify_debate(q_c: f64, config: &GameConfig) -> Result<InformativenessResult> {
    if !(q_c >= 0.0) {
        return Err(crate::DebateError::Domain(q_c));
    }
    Ok(Errors::new(config)?.classify(q_c))
}

/// Labels at `steps` evenly spaced qualities in `[lo, hi]`.
pub fn informativeness_sweep(
    config: &GameConfig,
    lo: f64,
    hi: f64,
    steps: usize,
) -> Result<Vec<InformativenessResult>> {
    if !(lo >= 0.0) {
        return Err(crate::DebateError::Domain(lo));
    }
    let e = Errors::new(config)?;
    Ok(grid(lo, hi, steps)
        .into_par_iter()
        .map(|q| e.classify(q))
        .collect())
}

/// Evenly spaced points; a single step yields `lo`.
pub fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => vec![],
        1 => vec![lo],
        n => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

pub const LOWER_SCAN_POINTS: usize = 512;
pub const UPPER_SCAN_POINTS: usize = 1024;
/// The upper search ends at this multiple of the prior's support bound.
pub const UPPER_PROBE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdPair {
    /// Below this quality the debate is informative; `None` if that branch is empty.
    pub q_l: Option<f64>,
    /// Above this quality (up to the probe bound) the debate is informative.
    pub q_h: Option<f64>,
    /// Every root of `debate_error − no_debate_error` found on the probe range.
    pub sign_change_points: Vec<f64>,
    pub upper_probe: f64,
    /// Value of `debate_error − no_debate_error` at the prior mean; never negative.
    pub gap_at_mean: f64,
}

fn roots_on(e: &Errors, xs: &[f64], tol: f64) -> Result<Vec<f64>> {
    let hs: Vec<f64> = xs.par_iter().map(|&q| e.gap(q)).collect();
    let mut roots = Vec::new();
    for k in 0..xs.len() {
        if hs[k] == 0.0 {
            roots.push(xs[k]);
            continue;
        }
        if k + 1 < xs.len() && hs[k + 1] != 0.0 && hs[k].signum() != hs[k + 1].signum() {
            let scale = xs[k + 1].abs().max(1.0);
            roots.push(brent(
                |q| e.gap(q),
                xs[k],
                xs[k + 1],
                4.0 * f64::EPSILON * scale,
                tol,
                500,
            )?);
        }
    }
    Ok(roots)
}

/// Locates the outermost informative regions on either side of the prior mean.
///
/// The upper branch is searched up to ten times the prior's support bound on
/// a geometric grid; roots are refined with Brent's method.
pub fn informativeness_thresholds(config: &GameConfig) -> Result<ThresholdPair> {
    let e = Errors::new(config)?;
    let mean = config.prior().mean();
    let upper = UPPER_PROBE_FACTOR * config.prior().support_upper().max(mean);
    let tol = config.numerics().root_abs_tol;

    let lower_grid = grid(0.0, mean, LOWER_SCAN_POINTS);
    let ratio = upper / mean;
    let upper_grid: Vec<f64> = (0..UPPER_SCAN_POINTS)
        .map(|k| mean * ratio.powf(k as f64 / (UPPER_SCAN_POINTS - 1) as f64))
        .collect();

    let lower_roots = roots_on(&e, &lower_grid, tol)?;
    let upper_roots = roots_on(&e, &upper_grid[1..], tol)?;
    let mut all: Vec<f64> = lower_roots.iter().chain(upper_roots.iter()).copied().collect();
    all.dedup();

    let q_l = if e.gap(lower_grid[0]) < 0.0 {
        lower_roots.first().copied().filter(|&q| q > 0.0 && q < mean)
    } else {
        None
    };
    let q_h = if e.gap(upper) < 0.0 {
        // A root sits between the mean (gap >= 0) and the probe bound even when
        // the first grid cell holds it.
        match upper_roots.last() {
            Some(&q) => Some(q),
            None => Some(brent(|q| e.gap(q), mean, upper_grid[1], 4.0 * f64::EPSILON * upper, tol, 500)?),
        }
        .filter(|&q| q > mean)
    } else {
        None
    };
    if let (None, Some(q)) = (upper_roots.last(), q_h) {
        all.push(q);
    }
    Ok(ThresholdPair {
        q_l,
        q_h,
        sign_change_points: all,
        upper_probe: upper,
        gap_at_mean: e.gap(mean),
    })
}
