//! Election-day shock distributions.

use rand::Rng;
use rand_distr::Distribution;

use crate::error::{DebateError, Result};

/// Distribution `G` of the nature shock. The voter picks the challenger iff
/// `expected_quality - q_I > shock`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShockDistribution {
    Normal { mu: f64, sigma: f64 },
    Logistic { mu: f64, s: f64 },
    Uniform { a: f64, b: f64 },
    Gumbel { mu: f64, beta: f64 },
    /// CDF `min(e^x, 1)`: the negative of a unit exponential.
    NegExp,
}

impl ShockDistribution {
    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        Self::Normal { mu, sigma }.validated()
    }

    pub fn logistic(mu: f64, s: f64) -> Result<Self> {
        Self::Logistic { mu, s }.validated()
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Self::Uniform { a, b }.validated()
    }

    pub fn gumbel(mu: f64, beta: f64) -> Result<Self> {
        Self::Gumbel { mu, beta }.validated()
    }

    pub fn standard_normal() -> Self {
        Self::Normal { mu: 0.0, sigma: 1.0 }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::Normal { .. } => "normal",
            Self::Logistic { .. } => "logistic",
            Self::Uniform { .. } => "uniform",
            Self::Gumbel { .. } => "gumbel",
            Self::NegExp => "negexp",
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::Normal { mu, sigma } => 0.5 * libm::erfc(-(x - mu) / (sigma * std::f64::consts::SQRT_2)),
            Self::Logistic { mu, s } => 1.0 / (1.0 + (-(x - mu) / s).exp()),
            Self::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            Self::Gumbel { mu, beta } => (-(-(x - mu) / beta).exp()).exp(),
            Self::NegExp => x.min(0.0).exp(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Normal { mu, sigma } => rand_distr::Normal::new(mu, sigma)
                .expect("validated")
                .sample(rng),
            Self::Logistic { mu, s } => {
                let u = open_unit(rng);
                mu + s * (u / (1.0 - u)).ln()
            }
            Self::Uniform { a, b } => a + (b - a) * rng.random::<f64>(),
            Self::Gumbel { mu, beta } => rand_distr::Gumbel::new(mu, beta)
                .expect("validated")
                .sample(rng),
            Self::NegExp => open_unit(rng).ln(),
        }
    }

    /// Parameter checks plus a numerical CDF audit: monotone on a grid and
    /// reaching 0 and 1 at the far probe points.
    pub fn validated(self) -> Result<Self> {
        let finite = |path: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(DebateError::config(path, format!("must be finite, got {v}")))
            }
        };
        let positive = |path: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(DebateError::config(path, format!("must be positive, got {v}")))
            }
        };
        let (center, scale) = match self {
            Self::Normal { mu, sigma } => {
                finite("shock.params.mu", mu)?;
                positive("shock.params.sigma", sigma)?;
                (mu, sigma)
            }
            Self::Logistic { mu, s } => {
                finite("shock.params.mu", mu)?;
                positive("shock.params.s", s)?;
                (mu, s)
            }
            Self::Uniform { a, b } => {
                finite("shock.params.a", a)?;
                finite("shock.params.b", b)?;
                if b <= a {
                    return Err(DebateError::config("shock.params.b", "must exceed a"));
                }
                (0.5 * (a + b), b - a)
            }
            Self::Gumbel { mu, beta } => {
                finite("shock.params.mu", mu)?;
                positive("shock.params.beta", beta)?;
                (mu, beta)
            }
            Self::NegExp => (0.0, 1.0),
        };
        let mut prev = self.cdf(center - 60.0 * scale);
        for i in 1..=1200 {
            let x = center - 60.0 * scale + 0.1 * scale * i as f64;
            let v = self.cdf(x);
            if !(v.is_finite() && (0.0..=1.0).contains(&v)) || v < prev {
                return Err(DebateError::config(
                    "shock",
                    format!("cdf is not a nondecreasing probability at x = {x}"),
                ));
            }
            prev = v;
        }
        if self.cdf(-1e6) > 1e-9 || self.cdf(1e6) < 1.0 - 1e-9 {
            return Err(DebateError::config("shock", "cdf does not reach 0 and 1 at +-1e6"));
        }
        Ok(self)
    }
}

fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}
