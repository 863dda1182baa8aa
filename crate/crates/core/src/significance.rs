//! Surrogate-data permutation tests for MI and TE estimates.
//!
//! The null distribution is built by re-evaluating the statistic on shuffled
//! copies of the source series. The target series, and with it the target's
//! own history, is left untouched unless [`ShuffleSide::Both`] is requested.
//! Surrogate `i` is generated from seed `seed + i`, so the null values come
//! out in the same order whether or not they are computed in parallel.

use std::borrow::Cow;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::estimators::EstimatorResult;
use crate::processes::SymbolSeries;
use crate::{seeded_rng, Bits, Error, Result};

/// Fewest surrogates accepted by [`permutation_test`].
pub const MIN_SURROGATES: usize = 19;

pub const DEFAULT_SURROGATES: usize = 199;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShuffleScheme {
    /// Uniform random permutation of all time points.
    #[default]
    FullPermutation,
    /// Random reordering of consecutive blocks; structure inside a block is
    /// kept. The last block may be shorter.
    Block { length: usize },
}

/// Which series are shuffled to build the null.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShuffleSide {
    #[default]
    Source,
    Both,
}

pub fn shuffle<R: Rng + ?Sized>(
    series: &SymbolSeries,
    scheme: ShuffleScheme,
    rng: &mut R,
) -> Result<SymbolSeries> {
    let mut symbols = series.symbols().to_vec();
    match scheme {
        ShuffleScheme::FullPermutation => symbols.shuffle(rng),
        ShuffleScheme::Block { length } => {
            if length == 0 || length > symbols.len() {
                return Err(Error::BadBlockLength {
                    block: length,
                    len: symbols.len(),
                });
            }
            let mut blocks: Vec<&[usize]> = series.symbols().chunks(length).collect();
            blocks.shuffle(rng);
            symbols = blocks.concat();
        }
    }
    Ok(series.with_symbols(symbols))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestConfig {
    pub surrogates: usize,
    pub scheme: ShuffleScheme,
    pub side: ShuffleSide,
    pub seed: u64,
}

impl TestConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            surrogates: DEFAULT_SURROGATES,
            scheme: ShuffleScheme::default(),
            side: ShuffleSide::default(),
            seed,
        }
    }

    pub fn surrogates(mut self, surrogates: usize) -> Self {
        self.surrogates = surrogates;
        self
    }

    pub fn scheme(mut self, scheme: ShuffleScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn side(mut self, side: ShuffleSide) -> Self {
        self.side = side;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub observed: Bits,
    /// Statistic on each surrogate, in surrogate-index order.
    pub null_values: Vec<Bits>,
    pub p_value: f64,
    pub surrogate_count: usize,
    pub scheme: ShuffleScheme,
    pub side: ShuffleSide,
    pub seed: u64,
}

/// Add-one permutation p-value `(1 + #{null >= observed}) / (1 + n)`.
pub fn p_value(observed: Bits, null_values: &[Bits]) -> f64 {
    let exceed = null_values.iter().filter(|v| v.0 >= observed.0).count();
    (1 + exceed) as f64 / (1 + null_values.len()) as f64
}

/// Tests `statistic(source, target)` against its surrogate distribution.
pub fn permutation_test<F>(
    statistic: F,
    source: &SymbolSeries,
    target: &SymbolSeries,
    config: TestConfig,
) -> Result<TestReport>
where
    F: Fn(&SymbolSeries, &SymbolSeries) -> Result<EstimatorResult> + Sync,
{
    if config.surrogates < MIN_SURROGATES {
        return Err(Error::TooFewSurrogates {
            min: MIN_SURROGATES,
            got: config.surrogates,
        });
    }
    let observed = statistic(source, target)?.value;
    let null_values = (0..config.surrogates)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeded_rng(config.seed.wrapping_add(i as u64));
            let shuffled_source = shuffle(source, config.scheme, &mut rng)?;
            let shuffled_target = match config.side {
                ShuffleSide::Source => Cow::Borrowed(target),
                ShuffleSide::Both => Cow::Owned(shuffle(target, config.scheme, &mut rng)?),
            };
            statistic(&shuffled_source, &shuffled_target).map(|r| r.value)
        })
        .collect::<Result<Vec<Bits>>>()?;
    Ok(TestReport {
        observed,
        p_value: p_value(observed, &null_values),
        null_values,
        surrogate_count: config.surrogates,
        scheme: config.scheme,
        side: config.side,
        seed: config.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{te_plugin, Method};

    fn matches_statistic(s: &SymbolSeries, t: &SymbolSeries) -> Result<EstimatorResult> {
        let hits = s.symbols().iter().zip(t.symbols()).filter(|(a, b)| a == b).count();
        Ok(EstimatorResult {
            value: Bits(hits as f64),
            method: Method::Mle,
            n: s.len() as u64,
            bins: 0,
            occupied: 0,
            correction: Bits::ZERO,
        })
    }

    #[test]
    fn constant_series_is_fixed() {
        let s = SymbolSeries::new(vec![3; 40], 4).unwrap();
        let mut rng = seeded_rng(1);
        for scheme in [ShuffleScheme::FullPermutation, ShuffleScheme::Block { length: 7 }] {
            assert_eq!(shuffle(&s, scheme, &mut rng).unwrap(), s);
        }
    }

    #[test]
    fn whole_series_block_is_identity() {
        let s = SymbolSeries::from_symbols((0..25).collect()).unwrap();
        let out = shuffle(&s, ShuffleScheme::Block { length: 25 }, &mut seeded_rng(2)).unwrap();
        assert_eq!(out, s);
        assert_eq!(
            shuffle(&s, ShuffleScheme::Block { length: 26 }, &mut seeded_rng(2)).unwrap_err(),
            Error::BadBlockLength { block: 26, len: 25 }
        );
        assert!(shuffle(&s, ShuffleScheme::Block { length: 0 }, &mut seeded_rng(2)).is_err());
    }

    #[test]
    fn block_shuffle_keeps_blocks_contiguous() {
        let s = SymbolSeries::from_symbols((0..20).collect()).unwrap();
        let out = shuffle(&s, ShuffleScheme::Block { length: 5 }, &mut seeded_rng(3)).unwrap();
        for chunk in out.symbols().chunks(5) {
            assert_eq!(chunk[0] % 5, 0);
            assert!(chunk.windows(2).all(|w| w[1] == w[0] + 1));
        }
    }

    #[test]
    fn dominant_observation_gives_minimal_p() {
        let s = SymbolSeries::from_symbols((0..50).collect()).unwrap();
        let report =
            permutation_test(matches_statistic, &s, &s, TestConfig::new(9).surrogates(99)).unwrap();
        assert_eq!(report.observed, Bits(50.0));
        assert_eq!(report.p_value, 1.0 / 100.0);
        assert_eq!(report.null_values.len(), 99);
    }

    #[test]
    fn too_few_surrogates() {
        let s = SymbolSeries::from_symbols(vec![0, 1, 0, 1]).unwrap();
        assert_eq!(
            permutation_test(matches_statistic, &s, &s, TestConfig::new(0).surrogates(10)).unwrap_err(),
            Error::TooFewSurrogates { min: 19, got: 10 }
        );
    }

    #[test]
    fn reports_are_reproducible() {
        let (x, y) = crate::processes::coupled_binary_pair(0.3, 1, 2000, &mut seeded_rng(4)).unwrap();
        let te = |s: &SymbolSeries, t: &SymbolSeries| te_plugin(s, t, 1, 1);
        let config = TestConfig::new(77).surrogates(39);
        let a = permutation_test(te, &x, &y, config).unwrap();
        let b = permutation_test(te, &x, &y, config).unwrap();
        assert_eq!(a, b);
        let both = permutation_test(te, &x, &y, config.side(ShuffleSide::Both)).unwrap();
        assert_eq!(both.observed, a.observed);
        assert_ne!(both.null_values, a.null_values);
    }

    #[test]
    fn p_value_counts_ties() {
        let nulls = [Bits(1.0), Bits(2.0), Bits(3.0)];
        assert_eq!(p_value(Bits(2.0), &nulls), 3.0 / 4.0);
        assert_eq!(p_value(Bits(5.0), &nulls), 1.0 / 4.0);
    }
}
