use rand::Rng;
use serde::Serialize;

use crate::{Error, Result};

/// Inputs whose total deviates from 1 by more than this are rejected; smaller
/// deviations are renormalized away.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

pub(crate) fn validate_mass(mass: &mut [f64]) -> Result<()> {
    if mass.is_empty() {
        return Err(Error::Empty);
    }
    for (index, &value) in mass.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidProbability { index, value });
        }
    }
    let sum: f64 = mass.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NotNormalized { sum });
    }
    if sum != 1.0 {
        mass.iter_mut().for_each(|p| *p /= sum);
    }
    Ok(())
}

/// Probability mass over the alphabet `{0, 1, ..., n-1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteDistribution {
    mass: Vec<f64>,
}

impl FiniteDistribution {
    pub fn new(mass: Vec<f64>) -> Result<Self> {
        let mut mass = mass;
        validate_mass(&mut mass)?;
        Ok(Self { mass })
    }

    pub fn uniform(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Empty);
        }
        Ok(Self {
            mass: vec![1.0 / size as f64; size],
        })
    }

    pub fn point_mass(size: usize, at: usize) -> Result<Self> {
        if at >= size {
            return Err(Error::SymbolOutOfRange { symbol: at, size });
        }
        let mut mass = vec![0.0; size];
        mass[at] = 1.0;
        Ok(Self { mass })
    }

    /// Two-symbol distribution `(1 - p, p)`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("bernoulli p = {p}")));
        }
        Ok(Self {
            mass: vec![1.0 - p, p],
        })
    }

    /// Relative frequencies of a count vector.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Empty);
        }
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptySample);
        }
        let n = total as f64;
        Ok(Self {
            mass: counts.iter().map(|&c| c as f64 / n).collect(),
        })
    }

    /// Skips the normalization check; callers guarantee a valid mass vector.
    pub(crate) fn from_raw(mass: Vec<f64>) -> Self {
        Self { mass }
    }

    pub fn alphabet_size(&self) -> usize {
        self.mass.len()
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn prob(&self, symbol: usize) -> f64 {
        self.mass.get(symbol).copied().unwrap_or(0.0)
    }

    /// Mean and variance with symbol `i` taken as the value `i`.
    pub fn moments(&self) -> (f64, f64) {
        let mean: f64 = self.mass.iter().enumerate().map(|(i, p)| i as f64 * p).sum();
        let var = self
            .mass
            .iter()
            .enumerate()
            .map(|(i, p)| p * (i as f64 - mean).powi(2))
            .sum();
        (mean, var)
    }

    /// Mean and variance with symbol `i` taken as the value `values[i]`.
    pub fn moments_on(&self, values: &[f64]) -> Result<(f64, f64)> {
        if values.len() != self.mass.len() {
            return Err(Error::LengthMismatch(values.len(), self.mass.len()));
        }
        let mean: f64 = self.mass.iter().zip(values).map(|(p, v)| p * v).sum();
        let var = self
            .mass
            .iter()
            .zip(values)
            .map(|(p, v)| p * (v - mean).powi(2))
            .sum();
        Ok((mean, var))
    }

    pub fn sampler(&self) -> CategoricalSampler {
        CategoricalSampler::new(&self.mass)
    }

    /// Draws `count` symbols by inverting the cumulative table.
    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<usize> {
        let sampler = self.sampler();
        (0..count).map(|_| sampler.draw(rng)).collect()
    }
}

/// Cumulative table for repeated inversion sampling.
#[derive(Debug, Clone)]
pub struct CategoricalSampler {
    cdf: Vec<f64>,
}

impl CategoricalSampler {
    fn new(mass: &[f64]) -> Self {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = mass
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        // Pin the top of the table so u in [0,1) always lands on a positive-mass symbol.
        if let Some(last) = mass.iter().rposition(|&p| p > 0.0) {
            for c in &mut cdf[last..] {
                *c = 1.0;
            }
        }
        Self { cdf }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        self.cdf.partition_point(|&c| c <= u)
    }
}
