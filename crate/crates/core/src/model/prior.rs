//! The challenger's quality prior.
//!
//! Discrete priors are finite lists of `(quality, mass)` atoms. Continuous
//! priors carry a closed-form density on `[0, upper]`; unbounded families are
//! cut at a high quantile and renormalised so the retained density integrates
//! to one.

use rand::Rng;
use rand_distr::Distribution;
use statrs::distribution::{Continuous, ContinuousCDF, Gamma, LogNormal};

use super::settings::{NumericSettings, MAX_QUAD_SEGMENTS};
use crate::error::{DebateError, Result};
use crate::numeric::integrate;

/// Raw sums of discrete masses must lie this close to one before normalisation.
pub const MASS_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum ContinuousFamily {
    Gamma { shape: f64, scale: f64 },
    LogNormal { mu: f64, sigma: f64 },
    /// Exponential with the given rate, conditioned on `q <= upper`.
    TruncatedExponential { rate: f64, upper: f64 },
    /// Piecewise-linear density through `(grid[i], density[i])`.
    GridDensity { grid: Vec<f64>, density: Vec<f64> },
}

impl ContinuousFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            ContinuousFamily::Gamma { .. } => "gamma",
            ContinuousFamily::LogNormal { .. } => "lognormal",
            ContinuousFamily::TruncatedExponential { .. } => "truncated-exponential",
            ContinuousFamily::GridDensity { .. } => "grid-density",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiscretePrior {
    points: Vec<f64>,
    masses: Vec<f64>,
    cumulative: Vec<f64>,
}

impl DiscretePrior {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().copied().zip(self.masses.iter().copied())
    }
}

#[derive(Debug, Clone)]
pub struct ContinuousPrior {
    family: ContinuousFamily,
    lower: f64,
    upper: f64,
    /// Raw probability of `[lower, upper]`.
    norm: f64,
    /// `Some(u)` when the family is unbounded and was cut at quantile `u`.
    truncation_quantile: Option<f64>,
    breaks: Vec<f64>,
    grid_cumulative: Vec<f64>,
}

impl ContinuousPrior {
    pub fn family(&self) -> &ContinuousFamily {
        &self.family
    }

    pub fn truncation_quantile(&self) -> Option<f64> {
        self.truncation_quantile
    }

    fn raw_pdf(&self, q: f64) -> f64 {
        if q < self.lower || q > self.upper {
            return 0.0;
        }
        match &self.family {
            ContinuousFamily::Gamma { shape, scale } => {
                if q == 0.0 {
                    // pdf is infinite at 0 for shape < 1; quadrature never samples 0.
                    return if *shape == 1.0 { 1.0 / scale } else { 0.0 };
                }
                gamma_dist(*shape, *scale).pdf(q)
            }
            ContinuousFamily::LogNormal { mu, sigma } => {
                if q <= 0.0 {
                    0.0
                } else {
                    LogNormal::new(*mu, *sigma).expect("validated").pdf(q)
                }
            }
            ContinuousFamily::TruncatedExponential { rate, .. } => rate * (-rate * q).exp(),
            ContinuousFamily::GridDensity { grid, density } => {
                let i = segment_index(grid, q);
                let t = (q - grid[i]) / (grid[i + 1] - grid[i]);
                density[i] + t * (density[i + 1] - density[i])
            }
        }
    }

    fn raw_cdf(&self, q: f64) -> f64 {
        if q <= self.lower {
            return 0.0;
        }
        match &self.family {
            ContinuousFamily::Gamma { shape, scale } => gamma_dist(*shape, *scale).cdf(q),
            ContinuousFamily::LogNormal { mu, sigma } => {
                LogNormal::new(*mu, *sigma).expect("validated").cdf(q)
            }
            ContinuousFamily::TruncatedExponential { rate, upper } => {
                1.0 - (-rate * q.min(*upper)).exp()
            }
            ContinuousFamily::GridDensity { grid, density } => {
                if q >= self.upper {
                    return self.norm;
                }
                let i = segment_index(grid, q);
                let dx = q - grid[i];
                let slope = (density[i + 1] - density[i]) / (grid[i + 1] - grid[i]);
                self.grid_cumulative[i] + dx * (density[i] + 0.5 * slope * dx)
            }
        }
    }

    fn raw_quantile(&self, p: f64) -> f64 {
        match &self.family {
            ContinuousFamily::Gamma { shape, scale } => {
                gamma_dist(*shape, *scale).inverse_cdf(p)
            }
            ContinuousFamily::LogNormal { mu, sigma } => {
                LogNormal::new(*mu, *sigma).expect("validated").inverse_cdf(p)
            }
            ContinuousFamily::TruncatedExponential { rate, .. } => -(-p).ln_1p() / rate,
            ContinuousFamily::GridDensity { grid, density } => {
                let cum = &self.grid_cumulative;
                let i = match cum.partition_point(|&c| c <= p) {
                    0 => 0,
                    k => (k - 1).min(grid.len() - 2),
                };
                let target = p - cum[i];
                let d0 = density[i];
                let slope = (density[i + 1] - density[i]) / (grid[i + 1] - grid[i]);
                // Solve d0*x + slope*x^2/2 = target for x in the segment.
                let x = if slope.abs() < 1e-300 {
                    if d0 > 0.0 {
                        target / d0
                    } else {
                        0.0
                    }
                } else {
                    let disc = (d0 * d0 + 2.0 * slope * target).max(0.0);
                    2.0 * target / (d0 + disc.sqrt())
                };
                (grid[i] + x).clamp(grid[i], grid[i + 1])
            }
        }
    }
}

fn gamma_dist(shape: f64, scale: f64) -> Gamma {
    Gamma::new(shape, 1.0 / scale).expect("validated")
}

fn segment_index(grid: &[f64], q: f64) -> usize {
    let k = grid.partition_point(|&g| g <= q);
    k.saturating_sub(1).min(grid.len() - 2)
}

#[derive(Debug, Clone)]
pub enum PriorKind {
    Discrete(DiscretePrior),
    Continuous(ContinuousPrior),
}

/// Distribution of the challenger's quality, with its mean cached.
#[derive(Debug, Clone)]
pub struct ChallengerPrior {
    kind: PriorKind,
    mean: f64,
}

fn positive(path: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(DebateError::config(path, format!("must be positive and finite, got {v}")))
    }
}

impl ChallengerPrior {
    /// Builds a discrete prior, merging repeated qualities and normalising masses.
    pub fn discrete(atoms: &[(f64, f64)]) -> Result<Self> {
        if atoms.is_empty() {
            return Err(DebateError::config("prior.points", "at least one atom required"));
        }
        for (i, &(q, m)) in atoms.iter().enumerate() {
            if !(q.is_finite() && q >= 0.0) {
                return Err(DebateError::config(
                    format!("prior.points[{i}][0]"),
                    format!("quality must be finite and >= 0, got {q}"),
                ));
            }
            if !(m.is_finite() && m > 0.0) {
                return Err(DebateError::config(
                    format!("prior.points[{i}][1]"),
                    format!("mass must be positive, got {m}"),
                ));
            }
        }
        let mut sorted = atoms.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut points: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut masses: Vec<f64> = Vec::with_capacity(sorted.len());
        for (q, m) in sorted {
            if points.last() == Some(&q) {
                *masses.last_mut().unwrap() += m;
            } else {
                points.push(q);
                masses.push(m);
            }
        }
        let total: f64 = masses.iter().sum();
        // Leave already-normalised masses untouched so that normalisation is idempotent.
        if (total - 1.0).abs() > masses.len() as f64 * f64::EPSILON {
            masses.iter_mut().for_each(|m| *m /= total);
        }
        let cumulative = masses
            .iter()
            .scan(0.0, |acc, m| {
                *acc += m;
                Some(*acc)
            })
            .collect();
        let mean: f64 = points.iter().zip(&masses).map(|(q, m)| q * m).sum();
        if !(mean > 0.0 && mean.is_finite()) {
            return Err(DebateError::config(
                "prior",
                format!("prior mean must be positive and finite, got {mean}"),
            ));
        }
        Ok(Self {
            kind: PriorKind::Discrete(DiscretePrior {
                points,
                masses,
                cumulative,
            }),
            mean,
        })
    }

    pub fn gamma(shape: f64, scale: f64, settings: &NumericSettings) -> Result<Self> {
        positive("prior.params.shape", shape)?;
        positive("prior.params.scale", scale)?;
        Self::continuous(ContinuousFamily::Gamma { shape, scale }, settings)
    }

    pub fn lognormal(mu: f64, sigma: f64, settings: &NumericSettings) -> Result<Self> {
        if !mu.is_finite() {
            return Err(DebateError::config("prior.params.mu", "must be finite"));
        }
        positive("prior.params.sigma", sigma)?;
        Self::continuous(ContinuousFamily::LogNormal { mu, sigma }, settings)
    }

    pub fn truncated_exponential(rate: f64, upper: f64, settings: &NumericSettings) -> Result<Self> {
        positive("prior.params.rate", rate)?;
        positive("prior.params.upper", upper)?;
        Self::continuous(ContinuousFamily::TruncatedExponential { rate, upper }, settings)
    }

    pub fn grid_density(grid: Vec<f64>, density: Vec<f64>, settings: &NumericSettings) -> Result<Self> {
        if grid.len() < 2 || grid.len() != density.len() {
            return Err(DebateError::config(
                "prior.params",
                "grid and density need equal length >= 2",
            ));
        }
        for (i, w) in grid.windows(2).enumerate() {
            if !(w[0].is_finite() && w[1].is_finite() && w[1] > w[0]) {
                return Err(DebateError::config(
                    format!("prior.params.grid[{}]", i + 1),
                    "grid must be finite and strictly increasing",
                ));
            }
        }
        if grid[0] < 0.0 {
            return Err(DebateError::config("prior.params.grid[0]", "grid must start at >= 0"));
        }
        for (i, &d) in density.iter().enumerate() {
            if !(d.is_finite() && d >= 0.0) {
                return Err(DebateError::config(
                    format!("prior.params.density[{i}]"),
                    format!("density must be finite and >= 0, got {d}"),
                ));
            }
        }
        Self::continuous(ContinuousFamily::GridDensity { grid, density }, settings)
    }

    fn continuous(family: ContinuousFamily, settings: &NumericSettings) -> Result<Self> {
        settings.validate()?;
        let mut prior = ContinuousPrior {
            family,
            lower: 0.0,
            upper: f64::INFINITY,
            norm: 1.0,
            truncation_quantile: None,
            breaks: Vec::new(),
            grid_cumulative: Vec::new(),
        };
        match &prior.family {
            ContinuousFamily::Gamma { .. } | ContinuousFamily::LogNormal { .. } => {
                let u = settings.truncation_quantile;
                prior.upper = prior.raw_quantile(u);
                prior.norm = prior.raw_cdf(prior.upper);
                prior.truncation_quantile = Some(u);
            }
            ContinuousFamily::TruncatedExponential { upper, .. } => {
                prior.upper = *upper;
                prior.norm = prior.raw_cdf(*upper);
            }
            ContinuousFamily::GridDensity { grid, density } => {
                let mut cum = vec![0.0];
                for i in 0..grid.len() - 1 {
                    let area = 0.5 * (density[i] + density[i + 1]) * (grid[i + 1] - grid[i]);
                    cum.push(cum[i] + area);
                }
                let total = *cum.last().unwrap();
                if !(total > 0.0) {
                    return Err(DebateError::config("prior.params.density", "density has zero mass"));
                }
                prior.lower = grid[0];
                prior.upper = *grid.last().unwrap();
                prior.norm = total;
                prior.breaks = grid.clone();
                prior.grid_cumulative = cum;
            }
        }
        if !(prior.upper.is_finite() && prior.upper > 0.0 && prior.norm > 0.0) {
            return Err(DebateError::config("prior", "support has no usable mass"));
        }
        if prior.breaks.is_empty() {
            let qs = [1e-6, 1e-3, 0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99, 0.999, 0.99999];
            prior.breaks = qs.iter().map(|&u| prior.raw_quantile(u * prior.norm)).collect();
        }
        let mut out = Self {
            kind: PriorKind::Continuous(prior),
            mean: f64::NAN,
        };
        out.mean = out.integrate_range(|q| q, 0.0, f64::INFINITY, settings)?;
        if !(out.mean > 0.0 && out.mean.is_finite()) {
            return Err(DebateError::config(
                "prior",
                format!("prior mean must be positive and finite, got {}", out.mean),
            ));
        }
        Ok(out)
    }

    pub fn kind(&self) -> &PriorKind {
        &self.kind
    }

    pub fn family_tag(&self) -> &'static str {
        match &self.kind {
            PriorKind::Discrete(_) => "discrete",
            PriorKind::Continuous(c) => c.family.tag(),
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self.kind, PriorKind::Discrete(_))
    }

    /// Cached prior mean.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Largest quality carrying mass: the top atom, or the truncation point.
    pub fn support_upper(&self) -> f64 {
        match &self.kind {
            PriorKind::Discrete(d) => *d.points.last().unwrap(),
            PriorKind::Continuous(c) => c.upper,
        }
    }

    pub fn support_lower(&self) -> f64 {
        match &self.kind {
            PriorKind::Discrete(d) => d.points[0],
            PriorKind::Continuous(c) => c.lower,
        }
    }

    /// Interior points where integrands are likely to change character.
    pub fn breakpoints(&self) -> &[f64] {
        match &self.kind {
            PriorKind::Discrete(_) => &[],
            PriorKind::Continuous(c) => &c.breaks,
        }
    }

    /// `∫ p(q) f(q) dq` over `[lo, hi]` (atoms counted inclusively).
    pub fn integrate_range<F: Fn(f64) -> f64>(
        &self,
        f: F,
        lo: f64,
        hi: f64,
        settings: &NumericSettings,
    ) -> Result<f64> {
        match &self.kind {
            PriorKind::Discrete(d) => {
                let mut acc = 0.0;
                for (q, m) in d.atoms().filter(|&(q, _)| q >= lo && q <= hi) {
                    let v = f(q);
                    if !v.is_finite() {
                        return Err(DebateError::NonFinite {
                            what: "integrand",
                            point: format!("q = {q}"),
                            value: v,
                        });
                    }
                    acc += m * v;
                }
                Ok(acc)
            }
            PriorKind::Continuous(c) => {
                let a = lo.max(c.lower);
                let b = hi.min(c.upper);
                if b <= a {
                    return Ok(0.0);
                }
                let norm = c.norm;
                let quad = integrate(
                    |q| {
                        let p = c.raw_pdf(q);
                        if p == 0.0 {
                            0.0
                        } else {
                            p * f(q) / norm
                        }
                    },
                    a,
                    b,
                    &c.breaks,
                    settings.quad_rel_tol,
                    MAX_QUAD_SEGMENTS,
                )?;
                Ok(quad.value)
            }
        }
    }

    /// Probability of `[lo, hi]`.
    pub fn mass_range(&self, lo: f64, hi: f64) -> f64 {
        if hi < lo {
            return 0.0;
        }
        match &self.kind {
            PriorKind::Discrete(d) => d
                .atoms()
                .filter(|&(q, _)| q >= lo && q <= hi)
                .map(|(_, m)| m)
                .sum(),
            PriorKind::Continuous(c) => {
                let a = lo.max(c.lower);
                let b = hi.min(c.upper);
                if b <= a {
                    0.0
                } else {
                    (c.raw_cdf(b) - c.raw_cdf(a)) / c.norm
                }
            }
        }
    }

    /// Density at `q` (continuous) or the atom's mass (discrete, zero off-support).
    pub fn density_or_mass(&self, q: f64) -> f64 {
        match &self.kind {
            PriorKind::Discrete(d) => d
                .atoms()
                .find(|&(p, _)| p == q)
                .map(|(_, m)| m)
                .unwrap_or(0.0),
            PriorKind::Continuous(c) => c.raw_pdf(q) / c.norm,
        }
    }

    pub fn cdf(&self, q: f64) -> f64 {
        match &self.kind {
            PriorKind::Discrete(d) => {
                let k = d.points.partition_point(|&p| p <= q);
                if k == 0 {
                    0.0
                } else {
                    d.cumulative[k - 1].min(1.0)
                }
            }
            PriorKind::Continuous(c) => (c.raw_cdf(q.min(c.upper)) / c.norm).clamp(0.0, 1.0),
        }
    }

    /// Smallest quality whose cumulative probability reaches `u`.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match &self.kind {
            PriorKind::Discrete(d) => {
                let k = d.cumulative.partition_point(|&c| c < u - 1e-15);
                d.points[k.min(d.points.len() - 1)]
            }
            PriorKind::Continuous(c) => {
                if u <= 0.0 {
                    c.lower
                } else if u >= 1.0 {
                    c.upper
                } else {
                    c.raw_quantile(u * c.norm).clamp(c.lower, c.upper)
                }
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            PriorKind::Discrete(d) => {
                let u: f64 = rng.random();
                let k = d.cumulative.partition_point(|&c| c <= u);
                d.points[k.min(d.points.len() - 1)]
            }
            PriorKind::Continuous(c) => match &c.family {
                ContinuousFamily::Gamma { shape, scale } => {
                    let g = rand_distr::Gamma::new(*shape, *scale).expect("validated");
                    loop {
                        let q = g.sample(rng);
                        if q <= c.upper {
                            return q;
                        }
                    }
                }
                ContinuousFamily::LogNormal { mu, sigma } => {
                    let g = rand_distr::LogNormal::new(*mu, *sigma).expect("validated");
                    loop {
                        let q = g.sample(rng);
                        if q <= c.upper {
                            return q;
                        }
                    }
                }
                _ => {
                    let u: f64 = rng.random();
                    c.raw_quantile(u * c.norm).clamp(c.lower, c.upper)
                }
            },
        }
    }

    /// Mass-matched discretisation into `n` equal-probability cells, each
    /// represented by its conditional mean. Discrete priors are returned as is.
    pub fn discretize(&self, n: usize, settings: &NumericSettings) -> Result<ChallengerPrior> {
        let c = match &self.kind {
            PriorKind::Discrete(_) => return Ok(self.clone()),
            PriorKind::Continuous(c) => c,
        };
        let n = n.max(1);
        let mut edges: Vec<f64> = (0..=n).map(|k| self.quantile(k as f64 / n as f64)).collect();
        edges[0] = c.lower;
        edges[n] = c.upper;
        let mut atoms = Vec::with_capacity(n);
        for w in edges.windows(2) {
            let mass = self.mass_range(w[0], w[1]);
            if mass <= 0.0 {
                continue;
            }
            let first = self.integrate_range(|q| q, w[0], w[1], settings)?;
            atoms.push(((first / mass).clamp(w[0], w[1]), mass));
        }
        ChallengerPrior::discrete(&atoms)
    }
}

/// `E_p[f]` under the prior, exact for discrete priors and adaptive
/// quadrature on the truncated support otherwise.
pub fn expect_over_prior<F: Fn(f64) -> f64>(
    f: F,
    prior: &ChallengerPrior,
    settings: &NumericSettings,
) -> Result<f64> {
    prior.integrate_range(f, 0.0, f64::INFINITY, settings)
}

pub fn prior_mean(prior: &ChallengerPrior) -> f64 {
    prior.mean()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn s() -> NumericSettings {
        NumericSettings::default()
    }

    fn two_point() -> ChallengerPrior {
        ChallengerPrior::discrete(&[(0.0, 0.5), (2.0, 0.5)]).unwrap()
    }

    #[test]
    fn discrete_expectations() {
        let p = two_point();
        assert_abs_diff_eq!(expect_over_prior(|_| 1.0, &p, &s()).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(expect_over_prior(|q| q, &p, &s()).unwrap(), 1.0, epsilon = 1e-15);
        let v = expect_over_prior(|q| q / (q + 1.0), &p, &s()).unwrap();
        assert_abs_diff_eq!(v, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn discrete_means() {
        assert_abs_diff_eq!(prior_mean(&two_point()), 1.0);
        let p = ChallengerPrior::discrete(&[(0.0, 0.5), (0.4, 0.5)]).unwrap();
        assert_abs_diff_eq!(prior_mean(&p), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn discrete_normalises_and_merges() {
        let p = ChallengerPrior::discrete(&[(2.0, 1.0), (0.0, 1.0), (2.0, 2.0)]).unwrap();
        let PriorKind::Discrete(d) = p.kind() else { unreachable!() };
        assert_eq!(d.points(), &[0.0, 2.0]);
        assert_abs_diff_eq!(d.masses()[1], 0.75, epsilon = 1e-15);
    }

    #[test]
    fn discrete_normalisation_is_idempotent() {
        let p = ChallengerPrior::discrete(&[(0.1, 0.3), (0.7, 0.3), (2.0, 0.3)]).unwrap();
        let PriorKind::Discrete(d) = p.kind() else { unreachable!() };
        let atoms: Vec<_> = d.atoms().collect();
        let again = ChallengerPrior::discrete(&atoms).unwrap();
        let PriorKind::Discrete(d2) = again.kind() else { unreachable!() };
        assert_eq!(d.masses(), d2.masses());
    }

    #[test]
    fn rejects_point_mass_at_zero() {
        assert!(ChallengerPrior::discrete(&[(0.0, 1.0)]).is_err());
    }

    #[test]
    fn rejects_negative_quality_with_path() {
        let e = ChallengerPrior::discrete(&[(1.0, 0.5), (-1.0, 0.5)]).unwrap_err();
        assert!(e.to_string().starts_with("prior.points[1][0]"), "{e}");
    }

    #[test]
    fn gamma_mean_matches_closed_form() {
        let p = ChallengerPrior::gamma(2.0, 0.5, &s()).unwrap();
        assert_abs_diff_eq!(prior_mean(&p), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn lognormal_mean_matches_closed_form() {
        let p = ChallengerPrior::lognormal(0.0, 0.5, &s()).unwrap();
        assert_abs_diff_eq!(prior_mean(&p), (0.125f64).exp(), epsilon = 1e-8);
    }

    #[test]
    fn truncated_exponential_mean() {
        let (rate, b) = (1.5, 3.0);
        let p = ChallengerPrior::truncated_exponential(rate, b, &s()).unwrap();
        let z = 1.0 - (-rate * b).exp();
        let exact = (1.0 / rate - (b + 1.0 / rate) * (-rate * b).exp()) / z;
        assert_abs_diff_eq!(prior_mean(&p), exact, epsilon = 1e-12);
    }

    #[test]
    fn grid_density_triangle() {
        // Triangle on [0, 2] peaking at 1 has mean 1.
        let p = ChallengerPrior::grid_density(vec![0.0, 1.0, 2.0], vec![0.0, 3.0, 0.0], &s()).unwrap();
        assert_abs_diff_eq!(prior_mean(&p), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.cdf(1.0), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(p.quantile(0.125), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn continuous_density_integrates_to_one() {
        for p in [
            ChallengerPrior::gamma(2.0, 0.5, &s()).unwrap(),
            ChallengerPrior::gamma(0.7, 1.3, &s()).unwrap(),
            ChallengerPrior::lognormal(-0.3, 0.8, &s()).unwrap(),
            ChallengerPrior::truncated_exponential(0.5, 6.0, &s()).unwrap(),
        ] {
            let total = expect_over_prior(|_| 1.0, &p, &s()).unwrap();
            assert!((total - 1.0).abs() <= 10.0 * s().quad_rel_tol, "{} {total}", p.family_tag());
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        let p = ChallengerPrior::gamma(3.0, 0.4, &s()).unwrap();
        for u in [0.01, 0.3, 0.5, 0.9, 0.999] {
            assert_abs_diff_eq!(p.cdf(p.quantile(u)), u, epsilon = 1e-9);
        }
    }

    #[test]
    fn discretization_preserves_mean() {
        let p = ChallengerPrior::lognormal(0.0, 0.5, &s()).unwrap();
        let d = p.discretize(256, &s()).unwrap();
        let PriorKind::Discrete(dd) = d.kind() else { unreachable!() };
        assert_eq!(dd.points().len(), 256);
        assert_abs_diff_eq!(d.mean(), p.mean(), epsilon = 1e-9);
    }

    #[test]
    fn sampling_matches_mean() {
        use rand::SeedableRng;
        let p = ChallengerPrior::truncated_exponential(1.0, 4.0, &s()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 200_000;
        let m: f64 = (0..n).map(|_| p.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((m - p.mean()).abs() < 0.01);
    }
}
