use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;
use statrs::function::beta::beta_reg;
use statrs::function::erf::erfc;
use statrs::function::gamma::{gamma_ur, ln_gamma};

use crate::{Error, Result};

/// Largest rate handled by a single run of Knuth's product method; larger
/// rates are split into a sum of independent chunks.
const KNUTH_CHUNK: f64 = 500.0;

/// Binomials with more trials than this are sampled by cdf inversion instead
/// of summing Bernoulli draws.
const BERNOULLI_SUM_LIMIT: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Bernoulli { p: f64 },
    Binomial { n: u64, p: f64 },
    Poisson { rate: f64 },
    Exponential { rate: f64 },
    Normal { mean: f64, variance: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Bernoulli { .. } => "bernoulli",
            Family::Binomial { .. } => "binomial",
            Family::Poisson { .. } => "poisson",
            Family::Exponential { .. } => "exponential",
            Family::Normal { .. } => "normal",
        }
    }
}

/// A validated member of one of the supported parametric families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ParametricModel {
    family: Family,
}

impl ParametricModel {
    pub fn new(family: Family) -> Result<Self> {
        let ok = match family {
            Family::Bernoulli { p } | Family::Binomial { p, .. } => (0.0..=1.0).contains(&p),
            Family::Poisson { rate } | Family::Exponential { rate } => {
                rate.is_finite() && rate > 0.0
            }
            Family::Normal { mean, variance } => {
                mean.is_finite() && variance.is_finite() && variance > 0.0
            }
        };
        if !ok {
            return Err(Error::InvalidParameter(format!("{family:?}")));
        }
        Ok(Self { family })
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        Self::new(Family::Bernoulli { p })
    }

    pub fn binomial(n: u64, p: f64) -> Result<Self> {
        Self::new(Family::Binomial { n, p })
    }

    pub fn poisson(rate: f64) -> Result<Self> {
        Self::new(Family::Poisson { rate })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::new(Family::Exponential { rate })
    }

    pub fn normal(mean: f64, variance: f64) -> Result<Self> {
        Self::new(Family::Normal { mean, variance })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn is_discrete(&self) -> bool {
        matches!(
            self.family,
            Family::Bernoulli { .. } | Family::Binomial { .. } | Family::Poisson { .. }
        )
    }

    /// pmf for discrete families (zero at non-integers), pdf for continuous ones.
    pub fn density(&self, x: f64) -> f64 {
        match self.family {
            Family::Bernoulli { p } => {
                if x == 0.0 {
                    1.0 - p
                } else if x == 1.0 {
                    p
                } else {
                    0.0
                }
            }
            Family::Binomial { n, p } => match as_count(x) {
                Some(k) if k <= n => binomial_pmf(n, p, k),
                _ => 0.0,
            },
            Family::Poisson { rate } => match as_count(x) {
                Some(k) => poisson_pmf(rate, k),
                None => 0.0,
            },
            Family::Exponential { rate } => {
                if x > 0.0 {
                    rate * (-rate * x).exp()
                } else {
                    0.0
                }
            }
            Family::Normal { mean, variance } => {
                (-(x - mean).powi(2) / (2.0 * variance)).exp() / (2.0 * PI * variance).sqrt()
            }
        }
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        match self.family {
            Family::Bernoulli { p } => {
                if x < 0.0 {
                    0.0
                } else if x < 1.0 {
                    1.0 - p
                } else {
                    1.0
                }
            }
            Family::Binomial { n, p } => {
                if x < 0.0 {
                    return 0.0;
                }
                let k = x.floor();
                if k >= n as f64 {
                    return 1.0;
                }
                let k = k as u64;
                if p == 0.0 {
                    1.0
                } else if p == 1.0 {
                    0.0
                } else {
                    // P(X <= k) = I_{1-p}(n - k, k + 1)
                    beta_reg((n - k) as f64, (k + 1) as f64, 1.0 - p)
                }
            }
            Family::Poisson { rate } => {
                if x < 0.0 {
                    return 0.0;
                }
                if x.is_infinite() {
                    return 1.0;
                }
                gamma_ur(x.floor() + 1.0, rate)
            }
            Family::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            Family::Normal { mean, variance } => {
                0.5 * erfc(-(x - mean) / (2.0 * variance).sqrt())
            }
        }
    }

    /// Exact mean and variance.
    pub fn moments(&self) -> (f64, f64) {
        match self.family {
            Family::Bernoulli { p } => (p, p * (1.0 - p)),
            Family::Binomial { n, p } => (n as f64 * p, n as f64 * p * (1.0 - p)),
            Family::Poisson { rate } => (rate, rate),
            Family::Exponential { rate } => (1.0 / rate, 1.0 / (rate * rate)),
            Family::Normal { mean, variance } => (mean, variance),
        }
    }

    /// Draws `count` realizations.
    ///
    /// Bernoulli and exponential use inversion, Poisson uses Knuth's
    /// multiplication method, normal uses Box–Muller, and binomial sums
    /// Bernoulli draws up to 64 trials and inverts its cdf table above that.
    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<f64> {
        match self.family {
            Family::Bernoulli { p } => (0..count)
                .map(|_| if rng.random::<f64>() < p { 1.0 } else { 0.0 })
                .collect(),
            Family::Binomial { n, p } if n <= BERNOULLI_SUM_LIMIT => (0..count)
                .map(|_| (0..n).filter(|_| rng.random::<f64>() < p).count() as f64)
                .collect(),
            Family::Binomial { n, p } => {
                let mut acc = 0.0;
                let mut cdf: Vec<f64> = (0..=n)
                    .map(|k| {
                        acc += binomial_pmf(n, p, k);
                        acc
                    })
                    .collect();
                if let Some(last) = cdf.last_mut() {
                    *last = f64::INFINITY;
                }
                (0..count)
                    .map(|_| {
                        let u: f64 = rng.random();
                        cdf.partition_point(|&c| c <= u) as f64
                    })
                    .collect()
            }
            Family::Poisson { rate } => (0..count).map(|_| knuth_poisson(rate, rng) as f64).collect(),
            Family::Exponential { rate } => (0..count)
                .map(|_| -(1.0 - rng.random::<f64>()).ln() / rate)
                .collect(),
            Family::Normal { mean, variance } => {
                let sd = variance.sqrt();
                let mut out = Vec::with_capacity(count + 1);
                while out.len() < count {
                    let (a, b) = box_muller(rng);
                    out.push(mean + sd * a);
                    out.push(mean + sd * b);
                }
                out.truncate(count);
                out
            }
        }
    }
}

fn as_count(x: f64) -> Option<u64> {
    (x >= 0.0 && x.fract() == 0.0 && x.is_finite()).then_some(x as u64)
}

pub(crate) fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

fn binomial_pmf(n: u64, p: f64, k: u64) -> f64 {
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    (ln_binomial(n, k) + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p()).exp()
}

fn poisson_pmf(rate: f64, k: u64) -> f64 {
    (k as f64 * rate.ln() - rate - ln_gamma(k as f64 + 1.0)).exp()
}

fn knuth_poisson<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> u64 {
    let mut remaining = rate;
    let mut total = 0;
    while remaining > 0.0 {
        let chunk = remaining.min(KNUTH_CHUNK);
        remaining -= chunk;
        let limit = (-chunk).exp();
        let mut k = 0;
        let mut prod: f64 = rng.random();
        while prod > limit {
            k += 1;
            prod *= rng.random::<f64>();
        }
        total += k;
    }
    total
}

fn box_muller<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let u1 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * PI * u2;
    (r * theta.cos(), r * theta.sin())
}
