use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Normalization of the sample variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceConvention {
    /// Divide by `n`.
    #[default]
    Population,
    /// Divide by `n - 1`.
    Unbiased,
}

/// Location, spread and the dimensionless ratios built from them.
///
/// `snr` is `mean / sd` and is infinite for constant data; `cv` is its
/// reciprocal and `index_of_dispersion` is `variance / mean`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleStats {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub snr: f64,
    pub cv: f64,
    pub index_of_dispersion: f64,
}

pub fn sample_stats(samples: &[f64], convention: VarianceConvention) -> Result<SampleStats> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let ss: f64 = samples.iter().map(|x| (x - mean).powi(2)).sum();
    let variance = match convention {
        VarianceConvention::Population => ss / n as f64,
        VarianceConvention::Unbiased => ss / (n - 1) as f64,
    };
    if mean == 0.0 {
        return Err(Error::DegenerateMean);
    }
    let sd = variance.sqrt();
    let snr = if sd == 0.0 {
        f64::INFINITY.copysign(mean)
    } else {
        mean / sd
    };
    Ok(SampleStats {
        n,
        mean,
        variance,
        snr,
        cv: sd / mean,
        index_of_dispersion: variance / mean,
    })
}
