//! Pre-election debates between an incumbent and a challenger of uncertain
//! quality: posterior updating, announcement payoffs, equilibrium
//! classification, informativeness thresholds and Monte Carlo cross-checks.

// `!(x >= 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod numeric;
pub mod model;
pub mod posterior;
pub mod payoff;
pub mod equilibrium;
pub mod informativeness;
pub mod montecarlo;
pub mod sweep;
pub mod export;

pub use error::{DebateError, Result};
pub use model::*;
pub use equilibrium::*;
pub use informativeness::*;
pub use montecarlo::*;
pub use payoff::*;
pub use posterior::*;
pub use sweep::*;
