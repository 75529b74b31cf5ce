//! Game primitives: qualities, the challenger prior, the election shock, the
//! contest success function, numeric settings and the assembled game.

mod config;
mod csf;
mod prior;
mod settings;
mod shock;

pub use config::{ConfigDoc, GameConfig, IncumbentQuality};
pub use csf::{
    validate_csf, ConditionCheck, ContestSuccess, CustomGrid, ValidationReport, Witness,
    CSF_PROBE_MAX,
};
pub use prior::{
    expect_over_prior, prior_mean, ChallengerPrior, ContinuousFamily, ContinuousPrior,
    DiscretePrior, PriorKind, MASS_GUARD,
};
pub use settings::{NumericSettings, MAX_QUAD_SEGMENTS};
pub use shock::ShockDistribution;
