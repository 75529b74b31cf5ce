//! One-parameter sweeps producing rows suitable for plotting.

use serde::Serialize;

use crate::equilibrium::{classify_equilibrium, Regime};
use crate::error::{DebateError, Result};
use crate::informativeness::{classify_debate, grid, Label};
use crate::model::{ConfigDoc, GameConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum SweepParameter {
    IncumbentQuality,
    ChallengerQuality,
    /// A named parameter of a parametric prior, e.g. `shape` or `sigma`.
    Prior(String),
}

impl SweepParameter {
    /// Accepts `q_I`, `q_C` and `prior.<key>`.
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "q_I" => Ok(Self::IncumbentQuality),
            "q_C" => Ok(Self::ChallengerQuality),
            _ => match text.strip_prefix("prior.") {
                Some(key) if !key.is_empty() => Ok(Self::Prior(key.to_string())),
                _ => Err(DebateError::config(
                    "param",
                    format!("expected q_I, q_C or prior.<key>, got {text:?}"),
                )),
            },
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::IncumbentQuality => "q_I".into(),
            Self::ChallengerQuality => "q_C".into(),
            Self::Prior(k) => format!("prior.{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter: String,
    pub value: f64,
    pub regime: Regime,
    pub margin: f64,
    pub debate_payoff: f64,
    pub no_debate_payoff: f64,
    pub debate_error: Option<f64>,
    pub no_debate_error: Option<f64>,
    pub label: Option<Label>,
}

/// `config` with one parameter replaced.
pub fn with_parameter(config: &GameConfig, param: &SweepParameter, value: f64) -> Result<GameConfig> {
    match param {
        SweepParameter::IncumbentQuality => config.with_q_i(value),
        SweepParameter::ChallengerQuality => Ok(config.clone()),
        SweepParameter::Prior(key) => {
            let mut doc = config.to_json_value();
            let slot = doc
                .get_mut("prior")
                .and_then(|p| p.get_mut("params"))
                .and_then(|p| p.get_mut(key.as_str()))
                .filter(|v| v.is_number())
                .ok_or_else(|| {
                    DebateError::config(
                        format!("prior.params.{key}"),
                        format!("not a scalar parameter of the {} prior", config.prior().family_tag()),
                    )
                })?;
            *slot = serde_json::json!(value);
            let doc: ConfigDoc = serde_json::from_value(doc)
                .map_err(|e| DebateError::config(format!("prior.params.{key}"), e.to_string()))?;
            GameConfig::from_doc(&doc)
        }
    }
}

/// Evaluates the equilibrium at `steps` evenly spaced values of `param`.
/// Every grid point is validated before any analysis runs.
pub fn run_sweep(
    config: &GameConfig,
    param: &SweepParameter,
    lo: f64,
    hi: f64,
    steps: usize,
) -> Result<Vec<SweepRow>> {
    if steps == 0 {
        return Err(DebateError::config("steps", "need at least one step"));
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(DebateError::config("range", "bounds must be finite"));
    }
    let values = grid(lo, hi, steps);
    let configs = values
        .iter()
        .map(|&v| {
            if *param == SweepParameter::ChallengerQuality && !(v >= 0.0) {
                return Err(DebateError::config("range", format!("q_C must be non-negative, got {v}")));
            }
            with_parameter(config, param, v)
        })
        .collect::<Result<Vec<_>>>()?;
    values
        .iter()
        .zip(&configs)
        .map(|(&v, c)| {
            let eq = classify_equilibrium(c)?;
            let info = match param {
                SweepParameter::ChallengerQuality => Some(classify_debate(v, c)?),
                _ => None,
            };
            Ok(SweepRow {
                parameter: param.name(),
                value: v,
                regime: eq.regime,
                margin: eq.margin,
                debate_payoff: eq.debate_payoff,
                no_debate_payoff: eq.no_debate_payoff,
                debate_error: info.map(|i| i.debate_error),
                no_debate_error: info.map(|i| i.no_debate_error),
                label: info.map(|i| i.label),
            })
        })
        .collect()
}
