//! Contest success functions and their structural audit.

use serde::Serialize;

use super::settings::NumericSettings;
use crate::error::{DebateError, Result};

/// Upper end of the quality probe range used by [`validate_csf`].
pub const CSF_PROBE_MAX: f64 = 1e6;

/// Probability `θ(q_C, q_I)` that the challenger wins the debate.
#[derive(Debug, Clone, PartialEq)]
pub enum ContestSuccess {
    /// `q_C / (q_C + q_I)`
    Tullock,
    /// `q_C^r / (q_C^r + q_I^r)` with `0 < r <= 1`.
    PowerTullock { r: f64 },
    /// Tabulated values, linear between knots, with a smooth tail to 1.
    CustomGrid(CustomGrid),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CustomGrid {
    q_c: Vec<f64>,
    q_i: Vec<f64>,
    /// `theta[i][j]` is the value at `(q_c[j], q_i[i])`.
    theta: Vec<Vec<f64>>,
}

impl CustomGrid {
    pub fn new(q_c: Vec<f64>, q_i: Vec<f64>, theta: Vec<Vec<f64>>) -> Result<Self> {
        if q_c.len() < 2 {
            return Err(DebateError::config("csf.params.q_c", "need at least two knots"));
        }
        if q_c[0] != 0.0 {
            return Err(DebateError::config("csf.params.q_c[0]", "first knot must be 0"));
        }
        for (i, w) in q_c.windows(2).enumerate() {
            if !(w[1] > w[0] && w[1].is_finite()) {
                return Err(DebateError::config(
                    format!("csf.params.q_c[{}]", i + 1),
                    "knots must be finite and strictly increasing",
                ));
            }
        }
        if q_i.is_empty() {
            return Err(DebateError::config("csf.params.q_i", "need at least one row"));
        }
        for (i, w) in q_i.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(DebateError::config(
                    format!("csf.params.q_i[{}]", i + 1),
                    "rows must be strictly increasing",
                ));
            }
        }
        if q_i.iter().any(|&v| !(v > 0.0 && v <= 1.0)) {
            return Err(DebateError::config("csf.params.q_i", "rows must lie in (0, 1]"));
        }
        if theta.len() != q_i.len() {
            return Err(DebateError::config("csf.params.theta", "one row per q_i value required"));
        }
        for (i, row) in theta.iter().enumerate() {
            if row.len() != q_c.len() {
                return Err(DebateError::config(
                    format!("csf.params.theta[{i}]"),
                    "row length must match q_c",
                ));
            }
            for (j, &v) in row.iter().enumerate() {
                if !(v.is_finite() && (0.0..1.0).contains(&v)) {
                    return Err(DebateError::config(
                        format!("csf.params.theta[{i}][{j}]"),
                        format!("value must lie in [0, 1), got {v}"),
                    ));
                }
            }
        }
        Ok(Self { q_c, q_i, theta })
    }

    pub fn q_c(&self) -> &[f64] {
        &self.q_c
    }

    pub fn q_i(&self) -> &[f64] {
        &self.q_i
    }

    pub fn theta(&self) -> &[Vec<f64>] {
        &self.theta
    }

    fn row_value(&self, row: &[f64], q: f64) -> f64 {
        let n = self.q_c.len();
        let last = n - 1;
        if q >= self.q_c[last] {
            let slope = (row[last] - row[last - 1]) / (self.q_c[last] - self.q_c[last - 1]);
            let gap = 1.0 - row[last];
            if slope <= 0.0 {
                return row[last];
            }
            // Matches value and slope at the last knot, concave, tends to 1.
            return 1.0 - gap * (-slope * (q - self.q_c[last]) / gap).exp();
        }
        let k = self.q_c.partition_point(|&x| x <= q).clamp(1, last);
        let (x0, x1) = (self.q_c[k - 1], self.q_c[k]);
        let t = (q - x0) / (x1 - x0);
        row[k - 1] + t * (row[k] - row[k - 1])
    }

    fn value(&self, q_c: f64, q_i: f64) -> f64 {
        if self.q_i.len() == 1 {
            return self.row_value(&self.theta[0], q_c);
        }
        let last = self.q_i.len() - 1;
        let k = self.q_i.partition_point(|&x| x <= q_i).clamp(1, last);
        let (y0, y1) = (self.q_i[k - 1], self.q_i[k]);
        let t = ((q_i - y0) / (y1 - y0)).clamp(0.0, 1.0);
        let a = self.row_value(&self.theta[k - 1], q_c);
        let b = self.row_value(&self.theta[k], q_c);
        a + t * (b - a)
    }
}

impl ContestSuccess {
    pub fn power_tullock(r: f64) -> Result<Self> {
        if !(r > 0.0 && r <= 1.0) {
            return Err(DebateError::config("csf.params.r", format!("must lie in (0, 1], got {r}")));
        }
        Ok(Self::PowerTullock { r })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::Tullock => "tullock",
            Self::PowerTullock { .. } => "power-tullock",
            Self::CustomGrid(_) => "custom-grid",
        }
    }

    pub fn theta(&self, q_c: f64, q_i: f64) -> f64 {
        match self {
            Self::Tullock | Self::PowerTullock { .. } if q_c == 0.0 => 0.0,
            Self::Tullock => q_c / (q_c + q_i),
            Self::PowerTullock { r } => {
                // Ratio form stays finite for huge q_c.
                1.0 / (1.0 + (q_i / q_c).powf(*r))
            }
            Self::CustomGrid(g) => g.value(q_c, q_i),
        }
    }

    /// Knots where the function may have kinks.
    pub fn breakpoints(&self) -> &[f64] {
        match self {
            Self::CustomGrid(g) => &g.q_c,
            _ => &[],
        }
    }
}

/// A failed condition's location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub q_c: f64,
    pub q_i: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub passed: bool,
    pub witness: Option<Witness>,
}

impl ConditionCheck {
    fn pass() -> Self {
        Self {
            passed: true,
            witness: None,
        }
    }

    fn fail(q_c: f64, q_i: f64) -> Self {
        Self {
            passed: false,
            witness: Some(Witness { q_c, q_i }),
        }
    }
}

/// Outcome of auditing a contest success function at one incumbent quality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub decreasing_in_q_i: ConditionCheck,
    pub increasing_in_q_c: ConditionCheck,
    pub concave_in_q_c: ConditionCheck,
    pub zero_at_origin: ConditionCheck,
    pub limit_one: ConditionCheck,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.passed)
    }

    pub fn checks(&self) -> [(&'static str, &ConditionCheck); 5] {
        [
            ("decreasing-in-q_I", &self.decreasing_in_q_i),
            ("increasing-in-q_C", &self.increasing_in_q_c),
            ("concave-in-q_C", &self.concave_in_q_c),
            ("zero-at-origin", &self.zero_at_origin),
            ("limit-one", &self.limit_one),
        ]
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks()
            .iter()
            .filter(|(_, c)| !c.passed)
            .map(|(n, _)| *n)
            .collect()
    }
}

fn probe_grid(csf: &ContestSuccess, settings: &NumericSettings) -> Vec<f64> {
    let n = settings.csf_probe_grid_size;
    let (lo, hi) = (1e-6f64.ln(), CSF_PROBE_MAX.ln());
    let mut grid: Vec<f64> = (0..n)
        .map(|k| (lo + (hi - lo) * k as f64 / (n - 1) as f64).exp())
        .collect();
    grid.extend(csf.breakpoints().iter().copied().filter(|&q| q > 0.0));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Checks the five structural conditions on `θ` at incumbent quality `q_i`:
/// strictly decreasing in `q_I`, strictly increasing and concave in `q_C`,
/// `θ(0, q_I) = 0`, and `θ → 1` as `q_C` grows.
///
/// Derivatives are central finite differences with step `1e-5·(1 + q_C)`.
pub fn validate_csf(
    csf: &ContestSuccess,
    q_i: f64,
    settings: &NumericSettings,
) -> Result<ValidationReport> {
    let theta = |q_c: f64, qi: f64| -> Result<f64> {
        let v = csf.theta(q_c, qi);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(DebateError::NonFinite {
                what: "contest success function",
                point: format!("(q_C, q_I) = ({q_c}, {qi})"),
                value: v,
            })
        }
    };
    let grid = probe_grid(csf, settings);
    // Rounding noise floor of a second difference of values in [0, 1].
    let curvature_noise = 16.0 * f64::EPSILON;

    let zero = theta(0.0, q_i)?;
    let zero_at_origin = if zero == 0.0 {
        ConditionCheck::pass()
    } else {
        ConditionCheck::fail(0.0, q_i)
    };

    let mut increasing = ConditionCheck::pass();
    let mut concave = ConditionCheck::pass();
    let mut decreasing = ConditionCheck::pass();
    let h_i = 1e-5 * q_i;
    // Within 1e-9 of the limit the finite-difference step can no longer
    // resolve the slope, so exact ties there are not violations.
    let saturated = |a: f64, b: f64| a == b && 1.0 - a <= 1e-9;
    for &q in &grid {
        let h = 1e-5 * (1.0 + q);
        let mid = theta(q, q_i)?;
        let up = theta(q + h, q_i)?;
        let down = theta((q - h).max(0.0), q_i)?;
        if increasing.passed && !(up > down || saturated(up, down)) {
            increasing = ConditionCheck::fail(q, q_i);
        }
        if concave.passed && q >= h && up - 2.0 * mid + down > curvature_noise {
            concave = ConditionCheck::fail(q, q_i);
        }
        let right = theta(q, q_i + h_i)?;
        let left = theta(q, q_i - h_i)?;
        if decreasing.passed && !(right < left || saturated(right, left)) {
            decreasing = ConditionCheck::fail(q, q_i);
        }
    }

    // The gap 1 - θ must vanish at the probe bound or keep shrinking decade
    // over decade, which separates a limit of 1 from a limit below 1.
    let gap = |q: f64| theta(q, q_i).map(|v| 1.0 - v);
    let top = gap(CSF_PROBE_MAX)?;
    let limit_one = if top <= 1e-3 {
        ConditionCheck::pass()
    } else {
        let mut ok = true;
        for k in 0..3 {
            let far = CSF_PROBE_MAX / 10f64.powi(k);
            let near = far / 10.0;
            let (g_far, g_near) = (gap(far)?, gap(near)?);
            if !(g_near > 0.0 && g_far / g_near <= 0.99) {
                ok = false;
            }
        }
        if ok {
            ConditionCheck::pass()
        } else {
            ConditionCheck::fail(CSF_PROBE_MAX, q_i)
        }
    };

    Ok(ValidationReport {
        decreasing_in_q_i: decreasing,
        increasing_in_q_c: increasing,
        concave_in_q_c: concave,
        zero_at_origin,
        limit_one,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> NumericSettings {
        NumericSettings::default()
    }

    #[test]
    fn tullock_passes_everywhere() {
        for &qi in &[0.01, 0.1, 0.5, 1.0] {
            let r = validate_csf(&ContestSuccess::Tullock, qi, &s()).unwrap();
            assert!(r.passed(), "q_I = {qi}: {:?}", r.failures());
        }
    }

    #[test]
    fn power_tullock_passes() {
        for &r in &[0.1, 0.5, 0.8, 1.0] {
            let csf = ContestSuccess::power_tullock(r).unwrap();
            for &qi in &[0.05, 0.5, 1.0] {
                let rep = validate_csf(&csf, qi, &s()).unwrap();
                assert!(rep.passed(), "r = {r}, q_I = {qi}: {:?}", rep.failures());
            }
        }
    }

    #[test]
    fn constant_half_fails() {
        let g = CustomGrid::new(vec![0.0, 1.0], vec![1.0], vec![vec![0.5, 0.5]]).unwrap();
        let rep = validate_csf(&ContestSuccess::CustomGrid(g), 1.0, &s()).unwrap();
        assert!(!rep.zero_at_origin.passed);
        assert!(!rep.increasing_in_q_c.passed);
        assert!(!rep.passed());
    }

    #[test]
    fn convex_grid_fails_concavity() {
        let g = CustomGrid::new(
            vec![0.0, 1.0, 2.0],
            vec![0.5, 1.0],
            vec![vec![0.0, 0.2, 0.7], vec![0.0, 0.1, 0.6]],
        )
        .unwrap();
        let rep = validate_csf(&ContestSuccess::CustomGrid(g), 1.0, &s()).unwrap();
        assert!(!rep.concave_in_q_c.passed);
        assert_eq!(rep.concave_in_q_c.witness.unwrap().q_c, 1.0);
    }

    #[test]
    fn concave_grid_passes() {
        let g = CustomGrid::new(
            vec![0.0, 0.5, 1.0, 3.0],
            vec![0.25, 1.0],
            vec![vec![0.0, 0.5, 0.7, 0.9], vec![0.0, 0.3, 0.5, 0.75]],
        )
        .unwrap();
        let rep = validate_csf(&ContestSuccess::CustomGrid(g), 0.6, &s()).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
    }

    #[test]
    fn zero_at_origin_for_all_families() {
        for csf in [ContestSuccess::Tullock, ContestSuccess::power_tullock(0.3).unwrap()] {
            assert_eq!(csf.theta(0.0, 0.7), 0.0);
        }
    }

    #[test]
    fn power_tullock_domain() {
        assert!(ContestSuccess::power_tullock(1.5).is_err());
        assert!(ContestSuccess::power_tullock(0.0).is_err());
    }
}
