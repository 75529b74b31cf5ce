use thiserror::Error;

/// Errors raised while building or analysing a game instance.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DebateError {
    /// A configuration value is out of its domain. `path` names the offending field.
    #[error("{path}: {message}")]
    InvalidConfig { path: String, message: String },

    /// A function evaluated to a non-finite value.
    #[error("non-finite value {value} from {what} at {point}")]
    NonFinite {
        what: &'static str,
        point: String,
        value: f64,
    },

    /// Debate-win mass is 0 or 1, so posterior conditioning is impossible.
    #[error("degenerate debate-win mass {win_mass}: posterior conditioning impossible")]
    DegenerateWinMass { win_mass: f64 },

    /// A belief restriction keeps no probability mass.
    #[error("belief {shape} retains no probability mass")]
    EmptyBelief { shape: String },

    #[error("quality {0} is outside the domain [0, inf)")]
    Domain(f64),

    #[error("quadrature did not converge: estimated error {achieved:e} above target {target:e}")]
    QuadratureFailed { achieved: f64, target: f64 },

    #[error("no sign change on [{a}, {b}] (f(a) = {fa}, f(b) = {fb})")]
    NoSignChange { a: f64, fa: f64, b: f64, fb: f64 },

    #[error("root finder exhausted {0} iterations")]
    MaxIterations(usize),

    /// The consistency scan could not certify a monotone best-response set.
    #[error("grid too coarse: {0}")]
    Resolution(String),

    /// The operation is not defined in the current equilibrium regime.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl DebateError {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        DebateError::InvalidConfig {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by user input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            DebateError::InvalidConfig { .. } | DebateError::Domain(_)
        )
    }
}

pub type Result<T, E = DebateError> = std::result::Result<T, E>;
