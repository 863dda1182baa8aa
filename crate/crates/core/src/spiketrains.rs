//! Direct-method discretization of spike trains and maximum-entropy
//! benchmarks for time and rate codes.
//!
//! A train observed for `T` seconds is cut into bins of width `Δt`; bin `i`
//! covers `[iΔt, (i+1)Δt)` and holds 1 if it contains a spike. Sliding windows
//! of `L` bins become integer words, the least significant bit being the
//! first bin of the window.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::estimators::{Histogram, MAX_TABLE_CELLS};
use crate::prob::ln_binomial;
use crate::processes::{SpikeTrain, SymbolSeries};
use crate::{Bits, Error, Result};

/// Relative slack when mapping times onto bin edges, so that e.g. `T = 6 ms`
/// with `Δt = 2 ms` gives exactly 3 bins despite rounding.
const EDGE_SLACK: f64 = 1e-9;

/// Tail mass left out of the exact Poisson entropy sum.
pub const POISSON_TAIL_MASS: f64 = 1e-12;

/// Longest word that fits the `u64` encoding.
pub const MAX_WORD_LENGTH: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyMode {
    Exact,
    Stirling,
}

fn bin_count(duration: f64, dt: f64) -> Result<usize> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::NonpositiveBinWidth(dt));
    }
    Ok(((duration / dt) - EDGE_SLACK).ceil().max(1.0) as usize)
}

fn bin_index(t: f64, dt: f64, n_bins: usize) -> usize {
    let r = t / dt;
    let near = r.round();
    let idx = if (r - near).abs() < EDGE_SLACK * near.max(1.0) {
        near
    } else {
        r.floor()
    };
    (idx as usize).min(n_bins - 1)
}

/// Binary series with `ceil(T / Δt)` symbols; fails with
/// [`Error::MultiSpikeBin`] if any bin receives two spikes.
pub fn bin_spikes(train: &SpikeTrain, dt: f64) -> Result<SymbolSeries> {
    let n_bins = bin_count(train.duration(), dt)?;
    let mut bins = vec![0usize; n_bins];
    for &t in train.times() {
        let i = bin_index(t, dt, n_bins);
        if bins[i] == 1 {
            return Err(Error::MultiSpikeBin { bin: i });
        }
        bins[i] = 1;
    }
    Ok(SymbolSeries::new(bins, 2)?.with_bin_width(dt))
}

/// Like [`bin_spikes`] but a bin with several spikes is recorded as a single
/// 1. Returns the series and the number of spikes merged away.
pub fn bin_spikes_saturating(train: &SpikeTrain, dt: f64) -> Result<(SymbolSeries, usize)> {
    let n_bins = bin_count(train.duration(), dt)?;
    let mut bins = vec![0usize; n_bins];
    let mut merged = 0;
    for &t in train.times() {
        let i = bin_index(t, dt, n_bins);
        if bins[i] == 1 {
            merged += 1;
        }
        bins[i] = 1;
    }
    Ok((SymbolSeries::new(bins, 2)?.with_bin_width(dt), merged))
}

/// Binary words cut from a binned spike train.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordSeries {
    words: Vec<u64>,
    word_length: usize,
    stride: usize,
    bin_width: Option<f64>,
}

impl WordSeries {
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn word_length(&self) -> usize {
        self.word_length
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn bin_width(&self) -> Option<f64> {
        self.bin_width
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Histogram over all `2^L` possible words.
    pub fn histogram(&self) -> Result<Histogram> {
        let bins = 1u128 << self.word_length;
        if bins > MAX_TABLE_CELLS as u128 {
            return Err(Error::TableTooLarge {
                cells: bins,
                limit: MAX_TABLE_CELLS,
            });
        }
        let symbols: Vec<usize> = self.words.iter().map(|&w| w as usize).collect();
        Histogram::from_symbols(&symbols, bins as usize)
    }
}

/// Windows of `word_length` bins taken every `stride` bins.
pub fn words(series: &SymbolSeries, word_length: usize, stride: usize) -> Result<WordSeries> {
    if series.alphabet_size() > 2 {
        return Err(Error::InvalidParameter("word extraction needs a binary series".into()));
    }
    if word_length == 0 || word_length > MAX_WORD_LENGTH {
        return Err(Error::InvalidParameter(format!(
            "word length must be in 1..={MAX_WORD_LENGTH}"
        )));
    }
    if stride == 0 {
        return Err(Error::InvalidParameter("stride must be at least 1".into()));
    }
    let bits = series.symbols();
    if bits.len() < word_length {
        return Err(Error::SeriesTooShort {
            needed: word_length - 1,
            got: bits.len(),
        });
    }
    let words = (0..=bits.len() - word_length)
        .step_by(stride)
        .map(|start| {
            bits[start..start + word_length]
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, &b)| acc | ((b as u64) << j))
        })
        .collect();
    Ok(WordSeries {
        words,
        word_length,
        stride,
        bin_width: series.bin_width(),
    })
}

/// Entropy of the uniform law over binary strings of `n_bins` bins holding
/// exactly `spikes` ones: `log2 C(N, r)`.
///
/// The Stirling form is `N · H2(r / N)`.
pub fn time_code_max_entropy(n_bins: u64, spikes: u64, mode: EntropyMode) -> Result<Bits> {
    if spikes > n_bins {
        return Err(Error::InvalidRate { n: n_bins, r: spikes });
    }
    // C(N, r) = C(N, N - r); evaluating one side makes the symmetry exact
    let spikes = spikes.min(n_bins - spikes);
    if spikes == 0 {
        return Ok(Bits::ZERO);
    }
    Ok(match mode {
        EntropyMode::Exact => Bits::from_nats(ln_binomial(n_bins, spikes).max(0.0)),
        EntropyMode::Stirling => {
            let n = n_bins as f64;
            let q = spikes as f64 / n;
            Bits(-n * (q * q.log2() + (1.0 - q) * (1.0 - q).log2()))
        }
    })
}

/// Entropy of a Poisson spike count with mean `mean_count`.
///
/// Exact mode sums the pmf outward from the mode until less than
/// [`POISSON_TAIL_MASS`] is left; Stirling mode is `½ log2(2πeN̄)`.
pub fn rate_code_entropy_poisson(mean_count: f64, mode: EntropyMode) -> Result<Bits> {
    if !(mean_count.is_finite() && mean_count > 0.0) {
        return Err(Error::NonpositiveMean(mean_count));
    }
    if mode == EntropyMode::Stirling {
        let c = 2.0 * std::f64::consts::PI * std::f64::consts::E * mean_count;
        return Ok(Bits(0.5 * c.log2()));
    }
    let ln_rate = mean_count.ln();
    let ln_pmf = |k: u64| k as f64 * ln_rate - mean_count - ln_gamma(k as f64 + 1.0);
    let mode_k = mean_count.floor() as u64;
    let mut mass = 0.0;
    let mut nats = 0.0;
    for k in (0..=mode_k).rev() {
        let lp = ln_pmf(k);
        let p = lp.exp();
        if p == 0.0 {
            break;
        }
        mass += p;
        nats -= p * lp;
    }
    for k in mode_k + 1.. {
        let lp = ln_pmf(k);
        let p = lp.exp();
        mass += p;
        nats -= p * lp;
        if 1.0 - mass < POISSON_TAIL_MASS || p == 0.0 {
            break;
        }
    }
    Ok(Bits::from_nats(nats))
}

/// `log2(1 + N̄) + N̄ log2(1 + 1/N̄)`, the entropy of a geometric count law
/// with mean `N̄`.
pub fn rate_code_entropy_exponential(mean_count: f64) -> Result<Bits> {
    if !(mean_count.is_finite() && mean_count > 0.0) {
        return Err(Error::NonpositiveMean(mean_count));
    }
    let n = mean_count;
    Ok(Bits(n.ln_1p() / std::f64::consts::LN_2 + n * (1.0 / n).ln_1p() / std::f64::consts::LN_2))
}

pub fn entropy_per_spike(total: Bits, spike_count: u64) -> Result<Bits> {
    if spike_count == 0 {
        return Err(Error::ZeroSpikes);
    }
    Ok(total / spike_count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn binning_examples() {
        let t = SpikeTrain::new(vec![0.001, 0.0041], 0.006).unwrap();
        assert_eq!(bin_spikes(&t, 0.002).unwrap().symbols(), &[1, 0, 1]);
        let empty = SpikeTrain::new(vec![], 0.010).unwrap();
        assert_eq!(bin_spikes(&empty, 0.002).unwrap().symbols(), &[0, 0, 0, 0, 0]);
        let close = SpikeTrain::new(vec![0.0010, 0.0015], 0.010).unwrap();
        assert_eq!(bin_spikes(&close, 0.002), Err(Error::MultiSpikeBin { bin: 0 }));
        assert_eq!(bin_spikes(&empty, 0.0), Err(Error::NonpositiveBinWidth(0.0)));
    }

    #[test]
    fn spike_on_bin_edge_opens_the_next_bin() {
        let t = SpikeTrain::new(vec![0.0, 0.004], 0.006).unwrap();
        assert_eq!(bin_spikes(&t, 0.002).unwrap().symbols(), &[1, 0, 1]);
    }

    #[test]
    fn saturating_binning_counts_merges() {
        let close = SpikeTrain::new(vec![0.0010, 0.0015, 0.005], 0.010).unwrap();
        let (s, merged) = bin_spikes_saturating(&close, 0.002).unwrap();
        assert_eq!(s.symbols(), &[1, 0, 1, 0, 0]);
        assert_eq!(merged, 1);
    }

    #[test]
    fn word_examples() {
        let s = SymbolSeries::new(vec![1, 0, 1], 2).unwrap();
        assert_eq!(words(&s, 2, 1).unwrap().words(), &[1, 2]);
        let zeros = SymbolSeries::new(vec![0; 10], 2).unwrap();
        assert!(words(&zeros, 3, 2).unwrap().words().iter().all(|&w| w == 0));
        assert_eq!(words(&s, 3, 1).unwrap().words(), &[5]);
        assert!(matches!(words(&s, 4, 1), Err(Error::SeriesTooShort { .. })));
        let s = SymbolSeries::new(vec![1, 1, 0, 0, 1, 0, 1], 2).unwrap();
        let w = words(&s, 3, 2).unwrap();
        assert_eq!(w.words(), &[3, 4, 5]);
        assert_eq!(w.histogram().unwrap().bin_count(), 8);
    }

    #[test]
    fn time_code_examples() {
        assert_abs_diff_eq!(
            time_code_max_entropy(10, 3, EntropyMode::Exact).unwrap().0,
            120f64.log2(),
            epsilon = 1e-10
        );
        assert_eq!(time_code_max_entropy(10, 0, EntropyMode::Exact).unwrap().0, 0.0);
        assert_eq!(time_code_max_entropy(10, 10, EntropyMode::Stirling).unwrap().0, 0.0);
        let exact = time_code_max_entropy(10_000, 1_000, EntropyMode::Exact).unwrap().0;
        let stirling = time_code_max_entropy(10_000, 1_000, EntropyMode::Stirling).unwrap().0;
        assert!((exact - stirling).abs() / exact < 0.01);
        assert_eq!(
            time_code_max_entropy(3, 4, EntropyMode::Exact),
            Err(Error::InvalidRate { n: 3, r: 4 })
        );
    }

    #[test]
    fn poisson_rate_code_examples() {
        // oracle: direct pmf summation far into the tail
        let oracle = |mean: f64| -> f64 {
            let mut p = (-mean).exp();
            let mut h = 0.0;
            for k in 0..2000u32 {
                if k > 0 {
                    p *= mean / k as f64;
                }
                if p > 0.0 {
                    h -= p * p.log2();
                }
            }
            h
        };
        let exact = rate_code_entropy_poisson(10.0, EntropyMode::Exact).unwrap().0;
        assert_abs_diff_eq!(exact, oracle(10.0), epsilon = 1e-9);
        assert_abs_diff_eq!(exact, 3.695333411304837, epsilon = 1e-9);
        let stirling = rate_code_entropy_poisson(10.0, EntropyMode::Stirling).unwrap().0;
        assert_abs_diff_eq!(stirling, 3.7080596326243223, epsilon = 1e-12);
        let big = rate_code_entropy_poisson(100.0, EntropyMode::Exact).unwrap().0;
        assert_abs_diff_eq!(big, oracle(100.0), epsilon = 1e-9);
        let big_s = rate_code_entropy_poisson(100.0, EntropyMode::Stirling).unwrap().0;
        assert!((big - big_s).abs() < 0.01);
        assert_eq!(
            rate_code_entropy_poisson(0.0, EntropyMode::Exact),
            Err(Error::NonpositiveMean(0.0))
        );
    }

    #[test]
    fn exponential_rate_code_examples() {
        assert_eq!(rate_code_entropy_exponential(1.0).unwrap().0, 2.0);
        assert!(rate_code_entropy_exponential(1e-12).unwrap().0 < 1e-9);
        assert_abs_diff_eq!(
            rate_code_entropy_exponential(10.0).unwrap().0,
            4.834466856136648,
            epsilon = 1e-12
        );
        assert!(rate_code_entropy_exponential(-1.0).is_err());
    }

    #[test]
    fn per_spike_examples() {
        let total = time_code_max_entropy(10, 3, EntropyMode::Exact).unwrap();
        assert_abs_diff_eq!(entropy_per_spike(total, 3).unwrap().0, 6.906890595608519 / 3.0, epsilon = 1e-10);
        assert_eq!(entropy_per_spike(Bits(4.2), 1).unwrap(), Bits(4.2));
        assert_eq!(entropy_per_spike(Bits(4.2), 0), Err(Error::ZeroSpikes));
    }

    #[test]
    fn per_spike_time_code_falls_with_bin_width() {
        // 40 Hz for 1 s: 40 spikes, bins from 1 ms to 20 ms
        let per_spike: Vec<f64> = [0.001f64, 0.002, 0.005, 0.01, 0.02]
            .iter()
            .map(|dt| {
                let n = (1.0 / dt).round() as u64;
                let h = time_code_max_entropy(n, 40, EntropyMode::Exact).unwrap();
                entropy_per_spike(h, 40).unwrap().0
            })
            .collect();
        assert!(per_spike.windows(2).all(|w| w[1] < w[0]), "{per_spike:?}");
    }
}
