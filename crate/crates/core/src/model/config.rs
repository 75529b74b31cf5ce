use std::path::Path;

use serde::{Deserialize, Serialize};

use super::csf::{ContestSuccess, CustomGrid};
use super::prior::{ChallengerPrior, ContinuousFamily, PriorKind, MASS_GUARD};
use super::settings::NumericSettings;
use super::shock::ShockDistribution;
use crate::error::{DebateError, Result};
use crate::payoff::OffPathBeliefPolicy;

/// Commonly known incumbent quality, restricted to `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct IncumbentQuality(f64);

impl IncumbentQuality {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(Self(value))
        } else {
            Err(DebateError::config("q_I", format!("must lie in (0, 1], got {value}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A complete, validated game instance.
#[derive(Debug, Clone)]
pub struct GameConfig {
    q_i: IncumbentQuality,
    prior: ChallengerPrior,
    shock: ShockDistribution,
    csf: ContestSuccess,
    numerics: NumericSettings,
    off_path: OffPathBeliefPolicy,
}

impl GameConfig {
    pub fn new(
        q_i: IncumbentQuality,
        prior: ChallengerPrior,
        shock: ShockDistribution,
        csf: ContestSuccess,
        numerics: NumericSettings,
        off_path: OffPathBeliefPolicy,
    ) -> Result<Self> {
        numerics.validate()?;
        if let PriorKind::Continuous(c) = prior.kind() {
            if let Some(u) = c.truncation_quantile() {
                if u != numerics.truncation_quantile {
                    return Err(DebateError::config(
                        "prior",
                        "prior was truncated with a different truncation_quantile than numerics",
                    ));
                }
            }
        }
        off_path.validate()?;
        Ok(Self {
            q_i,
            prior,
            shock,
            csf,
            numerics,
            off_path,
        })
    }

    /// Shorthand with default numerics and off-path policy.
    pub fn basic(
        q_i: f64,
        prior: ChallengerPrior,
        shock: ShockDistribution,
        csf: ContestSuccess,
    ) -> Result<Self> {
        Self::new(
            IncumbentQuality::new(q_i)?,
            prior,
            shock,
            csf,
            NumericSettings::default(),
            OffPathBeliefPolicy::default(),
        )
    }

    pub fn q_i(&self) -> f64 {
        self.q_i.value()
    }

    pub fn prior(&self) -> &ChallengerPrior {
        &self.prior
    }

    pub fn shock(&self) -> &ShockDistribution {
        &self.shock
    }

    pub fn csf(&self) -> &ContestSuccess {
        &self.csf
    }

    pub fn numerics(&self) -> &NumericSettings {
        &self.numerics
    }

    pub fn off_path(&self) -> &OffPathBeliefPolicy {
        &self.off_path
    }

    /// `θ(q_C, q_I)` at this game's incumbent quality.
    pub fn theta(&self, q_c: f64) -> f64 {
        self.csf.theta(q_c, self.q_i())
    }

    /// Shock CDF `G`.
    pub fn g(&self, x: f64) -> f64 {
        self.shock.cdf(x)
    }

    pub fn with_q_i(&self, q_i: f64) -> Result<Self> {
        Ok(Self {
            q_i: IncumbentQuality::new(q_i)?,
            ..self.clone()
        })
    }

    pub fn with_prior(&self, prior: ChallengerPrior) -> Result<Self> {
        Self::new(self.q_i, prior, self.shock, self.csf.clone(), self.numerics, self.off_path)
    }

    pub fn with_shock(&self, shock: ShockDistribution) -> Self {
        Self {
            shock,
            ..self.clone()
        }
    }

    pub fn with_off_path(&self, off_path: OffPathBeliefPolicy) -> Result<Self> {
        off_path.validate()?;
        Ok(Self {
            off_path,
            ..self.clone()
        })
    }

    pub fn with_csf(&self, csf: ContestSuccess) -> Self {
        Self {
            csf,
            ..self.clone()
        }
    }

    /// Parses and validates a JSON game document.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: ConfigDoc = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            DebateError::config(if path == "." { "$".into() } else { path }, e.into_inner().to_string())
        })?;
        Self::from_doc(&doc)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| DebateError::config(path.display().to_string(), e.to_string()))?;
        Self::from_json_str(&text)
    }

    pub fn from_doc(doc: &ConfigDoc) -> Result<Self> {
        let numerics = doc.numerics;
        numerics.validate()?;
        let q_i = IncumbentQuality::new(doc.q_i)?;
        let prior = doc.prior.build(&numerics)?;
        let shock = doc.shock.build()?;
        let csf = doc.csf.build()?;
        let off_path = doc.off_path.into();
        Self::new(q_i, prior, shock, csf, numerics, off_path)
    }

    /// Normalised document that reloads to an identical game.
    pub fn to_doc(&self) -> ConfigDoc {
        let prior = match self.prior.kind() {
            PriorKind::Discrete(d) => PriorDoc::Discrete {
                points: d.atoms().collect(),
            },
            PriorKind::Continuous(c) => match c.family().clone() {
                ContinuousFamily::Gamma { shape, scale } => PriorDoc::Gamma {
                    params: GammaParams { shape, scale },
                },
                ContinuousFamily::LogNormal { mu, sigma } => PriorDoc::Lognormal {
                    params: LogNormalParams { mu, sigma },
                },
                ContinuousFamily::TruncatedExponential { rate, upper } => {
                    PriorDoc::TruncatedExponential {
                        params: TruncExpParams { rate, upper },
                    }
                }
                ContinuousFamily::GridDensity { grid, density } => PriorDoc::GridDensity {
                    params: GridParams { grid, density },
                },
            },
        };
        let shock = match self.shock {
            ShockDistribution::Normal { mu, sigma } => ShockDoc::Normal {
                params: NormalParams { mu, sigma },
            },
            ShockDistribution::Logistic { mu, s } => ShockDoc::Logistic {
                params: LogisticParams { mu, s },
            },
            ShockDistribution::Uniform { a, b } => ShockDoc::Uniform {
                params: UniformParams { a, b },
            },
            ShockDistribution::Gumbel { mu, beta } => ShockDoc::Gumbel {
                params: GumbelParams { mu, beta },
            },
            ShockDistribution::NegExp => ShockDoc::Negexp {
                params: EmptyParams {},
            },
        };
        let csf = match &self.csf {
            ContestSuccess::Tullock => CsfDoc::Tullock {
                params: EmptyParams {},
            },
            ContestSuccess::PowerTullock { r } => CsfDoc::PowerTullock {
                params: PowerParams { r: *r },
            },
            ContestSuccess::CustomGrid(g) => CsfDoc::CustomGrid {
                params: GridCsfParams {
                    q_c: g.q_c().to_vec(),
                    q_i: g.q_i().to_vec(),
                    theta: g.theta().to_vec(),
                },
            },
        };
        ConfigDoc {
            q_i: self.q_i(),
            prior,
            shock,
            csf,
            numerics: self.numerics,
            off_path: self.off_path.into(),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_doc()).expect("config documents always serialise")
    }
}

/// On-disk shape of a game instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    #[serde(rename = "q_I")]
    pub q_i: f64,
    pub prior: PriorDoc,
    pub shock: ShockDoc,
    pub csf: CsfDoc,
    #[serde(default)]
    pub numerics: NumericSettings,
    #[serde(default)]
    pub off_path: OffPathDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PriorDoc {
    Discrete { points: Vec<(f64, f64)> },
    Gamma { params: GammaParams },
    Lognormal { params: LogNormalParams },
    TruncatedExponential { params: TruncExpParams },
    GridDensity { params: GridParams },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaParams {
    pub shape: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogNormalParams {
    pub mu: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncExpParams {
    pub rate: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
}

impl PriorDoc {
    fn build(&self, numerics: &NumericSettings) -> Result<ChallengerPrior> {
        match self {
            PriorDoc::Discrete { points } => {
                let total: f64 = points.iter().map(|p| p.1).sum();
                if !((total - 1.0).abs() <= MASS_GUARD) {
                    return Err(DebateError::config(
                        "prior.points",
                        format!("masses sum to {total}, expected 1 within {MASS_GUARD:e}"),
                    ));
                }
                ChallengerPrior::discrete(points)
            }
            PriorDoc::Gamma { params } => ChallengerPrior::gamma(params.shape, params.scale, numerics),
            PriorDoc::Lognormal { params } => {
                ChallengerPrior::lognormal(params.mu, params.sigma, numerics)
            }
            PriorDoc::TruncatedExponential { params } => {
                ChallengerPrior::truncated_exponential(params.rate, params.upper, numerics)
            }
            PriorDoc::GridDensity { params } => {
                ChallengerPrior::grid_density(params.grid.clone(), params.density.clone(), numerics)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmptyParams {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalParams {
    pub mu: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogisticParams {
    pub mu: f64,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformParams {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GumbelParams {
    pub mu: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ShockDoc {
    Normal { params: NormalParams },
    Logistic { params: LogisticParams },
    Uniform { params: UniformParams },
    Gumbel { params: GumbelParams },
    Negexp {
        #[serde(default)]
        params: EmptyParams,
    },
}

impl ShockDoc {
    fn build(&self) -> Result<ShockDistribution> {
        match self {
            ShockDoc::Normal { params } => ShockDistribution::normal(params.mu, params.sigma),
            ShockDoc::Logistic { params } => ShockDistribution::logistic(params.mu, params.s),
            ShockDoc::Uniform { params } => ShockDistribution::uniform(params.a, params.b),
            ShockDoc::Gumbel { params } => ShockDistribution::gumbel(params.mu, params.beta),
            ShockDoc::Negexp { .. } => Ok(ShockDistribution::NegExp),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerParams {
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridCsfParams {
    pub q_c: Vec<f64>,
    pub q_i: Vec<f64>,
    pub theta: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CsfDoc {
    Tullock {
        #[serde(default)]
        params: EmptyParams,
    },
    PowerTullock { params: PowerParams },
    CustomGrid { params: GridCsfParams },
}

impl CsfDoc {
    fn build(&self) -> Result<ContestSuccess> {
        match self {
            CsfDoc::Tullock { .. } => Ok(ContestSuccess::Tullock),
            CsfDoc::PowerTullock { params } => ContestSuccess::power_tullock(params.r),
            CsfDoc::CustomGrid { params } => Ok(ContestSuccess::CustomGrid(CustomGrid::new(
                params.q_c.clone(),
                params.q_i.clone(),
                params.theta.clone(),
            )?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OffPathDoc {
    FullPrior,
    RightTruncateAt { value: f64 },
    PointMassAt { value: f64 },
}

impl Default for OffPathDoc {
    fn default() -> Self {
        OffPathDoc::PointMassAt { value: 0.0 }
    }
}

impl From<OffPathDoc> for OffPathBeliefPolicy {
    fn from(d: OffPathDoc) -> Self {
        match d {
            OffPathDoc::FullPrior => OffPathBeliefPolicy::FullPrior,
            OffPathDoc::RightTruncateAt { value } => OffPathBeliefPolicy::RightTruncateAt(value),
            OffPathDoc::PointMassAt { value } => OffPathBeliefPolicy::PointMassAt(value),
        }
    }
}

impl From<OffPathBeliefPolicy> for OffPathDoc {
    fn from(p: OffPathBeliefPolicy) -> Self {
        match p {
            OffPathBeliefPolicy::FullPrior => OffPathDoc::FullPrior,
            OffPathBeliefPolicy::RightTruncateAt(value) => OffPathDoc::RightTruncateAt { value },
            OffPathBeliefPolicy::PointMassAt(value) => OffPathDoc::PointMassAt { value },
        }
    }
}
