use serde::{Deserialize, Serialize};

use crate::error::{DebateError, Result};

/// Subdivision budget for one adaptive integration.
pub const MAX_QUAD_SEGMENTS: usize = 4096;

/// Tolerances shared by every numerical routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericSettings {
    pub quad_rel_tol: f64,
    /// Upper quantile at which unbounded continuous priors are cut.
    pub truncation_quantile: f64,
    pub root_abs_tol: f64,
    /// Margins within this distance of zero count as ties.
    pub tie_tol: f64,
    pub csf_probe_grid_size: usize,
}

impl Default for NumericSettings {
    fn default() -> Self {
        Self {
            quad_rel_tol: 1e-10,
            truncation_quantile: 1.0 - 1e-10,
            root_abs_tol: 1e-12,
            tie_tol: 1e-9,
            csf_probe_grid_size: 2048,
        }
    }
}

impl NumericSettings {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("numerics.quad_rel_tol", self.quad_rel_tol),
            ("numerics.root_abs_tol", self.root_abs_tol),
            ("numerics.tie_tol", self.tie_tol),
        ];
        for (path, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(DebateError::config(path, format!("must be positive, got {v}")));
            }
        }
        if !(self.truncation_quantile > 0.5 && self.truncation_quantile < 1.0) {
            return Err(DebateError::config(
                "numerics.truncation_quantile",
                format!("must lie in (0.5, 1), got {}", self.truncation_quantile),
            ));
        }
        if self.csf_probe_grid_size < 8 {
            return Err(DebateError::config(
                "numerics.csf_probe_grid_size",
                format!("must be at least 8, got {}", self.csf_probe_grid_size),
            ));
        }
        Ok(())
    }
}
