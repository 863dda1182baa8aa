//! Data-generating processes: Poisson spike trains (homogeneous and
//! piecewise-constant rate), order-k Markov chains over finite alphabets, and
//! a coupled binary pair with known transfer entropy.
//!
//! Times are in seconds and rates in Hz throughout.

use rand::Rng;
use serde::Serialize;

use crate::prob::{CategoricalSampler, FiniteDistribution, JointTable};
use crate::{Error, Result};

/// Event times observed on `[0, duration)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpikeTrain {
    times: Vec<f64>,
    duration: f64,
}

impl SpikeTrain {
    pub fn new(times: Vec<f64>, duration: f64) -> Result<Self> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::InvalidParameter(format!("duration {duration}")));
        }
        let in_window = times.iter().all(|&t| (0.0..duration).contains(&t));
        let increasing = times.windows(2).all(|w| w[0] < w[1]);
        if !in_window || !increasing {
            return Err(Error::InvalidSpikeTimes);
        }
        Ok(Self { times, duration })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn spike_count(&self) -> usize {
        self.times.len()
    }

    /// Mean firing rate in Hz.
    pub fn rate(&self) -> f64 {
        self.times.len() as f64 / self.duration
    }

    /// Gaps between consecutive spikes.
    pub fn interarrivals(&self) -> Result<Vec<f64>> {
        if self.times.len() < 2 {
            return Err(Error::InsufficientSpikes(self.times.len()));
        }
        Ok(self.times.windows(2).map(|w| w[1] - w[0]).collect())
    }

    /// Spike counts in consecutive windows of length `window`; a trailing
    /// partial window is dropped.
    pub fn window_counts(&self, window: f64) -> Result<Vec<u64>> {
        if !(window.is_finite() && window > 0.0) {
            return Err(Error::InvalidParameter(format!("window {window}")));
        }
        let n_windows = (self.duration / window + 1e-9).floor() as usize;
        let mut counts = vec![0u64; n_windows];
        for &t in &self.times {
            let idx = (t / window).floor() as usize;
            if idx < n_windows {
                counts[idx] += 1;
            }
        }
        Ok(counts)
    }

    /// Variance-to-mean ratio of windowed spike counts; 1 for a Poisson process.
    pub fn fano_factor(&self, window: f64) -> Result<f64> {
        let counts = self.window_counts(window)?;
        if counts.len() < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: counts.len(),
            });
        }
        let n = counts.len() as f64;
        let mean = counts.iter().sum::<u64>() as f64 / n;
        if mean == 0.0 {
            return Err(Error::DegenerateMean);
        }
        let var = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / n;
        Ok(var / mean)
    }
}

/// Integer-coded discrete time series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolSeries {
    symbols: Vec<usize>,
    alphabet_size: usize,
    bin_width: Option<f64>,
}

impl SymbolSeries {
    pub fn new(symbols: Vec<usize>, alphabet_size: usize) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::InvalidParameter("alphabet size 0".into()));
        }
        if let Some(&symbol) = symbols.iter().find(|&&s| s >= alphabet_size) {
            return Err(Error::SymbolOutOfRange {
                symbol,
                size: alphabet_size,
            });
        }
        Ok(Self {
            symbols,
            alphabet_size,
            bin_width: None,
        })
    }

    /// Alphabet inferred as `max + 1`.
    pub fn from_symbols(symbols: Vec<usize>) -> Result<Self> {
        let size = symbols.iter().max().map_or(1, |m| m + 1);
        Self::new(symbols, size)
    }

    pub fn with_bin_width(mut self, bin_width: f64) -> Self {
        self.bin_width = Some(bin_width);
        self
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn bin_width(&self) -> Option<f64> {
        self.bin_width
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Same alphabet and metadata, new symbols; callers keep them in range.
    pub(crate) fn with_symbols(&self, symbols: Vec<usize>) -> Self {
        Self {
            symbols,
            alphabet_size: self.alphabet_size,
            bin_width: self.bin_width,
        }
    }
}

/// Rate function of a Poisson process.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RateProfile {
    Constant { rate: f64 },
    /// `rates[i]` holds on `[starts[i], starts[i + 1])`; the last rate extends
    /// to infinity. `starts[0]` must be 0.
    Piecewise { starts: Vec<f64>, rates: Vec<f64> },
}

impl RateProfile {
    pub fn constant(rate: f64) -> Result<Self> {
        check_rate(rate)?;
        Ok(RateProfile::Constant { rate })
    }

    pub fn piecewise(starts: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        if starts.is_empty() || starts.len() != rates.len() {
            return Err(Error::LengthMismatch(starts.len(), rates.len()));
        }
        if starts[0] != 0.0 || !starts.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(
                "segment starts must begin at 0 and increase".into(),
            ));
        }
        for &r in &rates {
            check_rate(r)?;
        }
        Ok(RateProfile::Piecewise { starts, rates })
    }

    pub fn rate_at(&self, t: f64) -> f64 {
        match self {
            RateProfile::Constant { rate } => *rate,
            RateProfile::Piecewise { starts, rates } => {
                let i = starts.partition_point(|&s| s <= t).saturating_sub(1);
                rates[i]
            }
        }
    }

    pub fn max_rate(&self) -> f64 {
        match self {
            RateProfile::Constant { rate } => *rate,
            RateProfile::Piecewise { rates, .. } => rates.iter().copied().fold(0.0, f64::max),
        }
    }

    /// Expected event count on `[0, duration)`.
    pub fn integral(&self, duration: f64) -> f64 {
        match self {
            RateProfile::Constant { rate } => rate * duration,
            RateProfile::Piecewise { starts, rates } => {
                let mut total = 0.0;
                for (i, (&s, &r)) in starts.iter().zip(rates).enumerate() {
                    if s >= duration {
                        break;
                    }
                    let end = starts.get(i + 1).copied().unwrap_or(f64::INFINITY).min(duration);
                    total += r * (end - s);
                }
                total
            }
        }
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if rate < 0.0 {
        return Err(Error::NegativeRate(rate));
    }
    if !rate.is_finite() {
        return Err(Error::InvalidParameter(format!("rate {rate}")));
    }
    Ok(())
}

fn exponential_gap<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> f64 {
    loop {
        let gap = -(1.0 - rng.random::<f64>()).ln() / rate;
        if gap > 0.0 {
            return gap;
        }
    }
}

/// Simulates a Poisson process on `[0, duration)`.
///
/// A constant profile is generated from exponential interarrival times; a
/// piecewise profile is generated by thinning a homogeneous process at the
/// profile's maximum rate.
pub fn simulate_poisson<R: Rng + ?Sized>(
    profile: &RateProfile,
    duration: f64,
    rng: &mut R,
) -> Result<SpikeTrain> {
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::InvalidParameter(format!("duration {duration}")));
    }
    let envelope = profile.max_rate();
    check_rate(envelope)?;
    let mut times = Vec::new();
    if envelope > 0.0 {
        let thinning = matches!(profile, RateProfile::Piecewise { .. });
        let mut t = 0.0;
        loop {
            t += exponential_gap(envelope, rng);
            if t >= duration {
                break;
            }
            if thinning {
                let u: f64 = rng.random();
                if u * envelope >= profile.rate_at(t) {
                    continue;
                }
            }
            times.push(t);
        }
    }
    Ok(SpikeTrain { times, duration })
}

/// Order-k Markov chain over `{0, .., A-1}`.
///
/// Histories are indexed positionally in base `A` with the most recent symbol
/// least significant: `Σ_j x[t-j] · A^(j-1)` for `j = 1..=k`.
#[derive(Debug, Clone)]
pub struct MarkovModel {
    order: usize,
    alphabet_size: usize,
    rows: Vec<FiniteDistribution>,
    samplers: Vec<CategoricalSampler>,
}

impl MarkovModel {
    /// `rows[h]` is the law of the next symbol after history index `h`.
    pub fn new(order: usize, alphabet_size: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if order == 0 || alphabet_size == 0 {
            return Err(Error::InvalidParameter(
                "order and alphabet size must be positive".into(),
            ));
        }
        let n_hist = (alphabet_size as u128).pow(order as u32);
        if n_hist * alphabet_size as u128 > (1 << 24) {
            return Err(Error::TableTooLarge {
                cells: n_hist * alphabet_size as u128,
                limit: 1 << 24,
            });
        }
        if rows.len() as u128 != n_hist {
            return Err(Error::LengthMismatch(rows.len(), n_hist as usize));
        }
        let rows = rows
            .into_iter()
            .map(|r| {
                if r.len() != alphabet_size {
                    return Err(Error::LengthMismatch(r.len(), alphabet_size));
                }
                FiniteDistribution::new(r)
            })
            .collect::<Result<Vec<_>>>()?;
        let samplers = rows.iter().map(FiniteDistribution::sampler).collect();
        Ok(Self {
            order,
            alphabet_size,
            rows,
            samplers,
        })
    }

    /// Builds the transition rows from a function of the history, given
    /// oldest symbol first.
    pub fn from_fn<F>(order: usize, alphabet_size: usize, transition: F) -> Result<Self>
    where
        F: Fn(&[usize]) -> Vec<f64>,
    {
        if order == 0 || alphabet_size == 0 {
            return Err(Error::InvalidParameter(
                "order and alphabet size must be positive".into(),
            ));
        }
        let n_hist = alphabet_size.checked_pow(order as u32).ok_or(Error::TableTooLarge {
            cells: u128::MAX,
            limit: 1 << 24,
        })?;
        let rows = (0..n_hist)
            .map(|h| {
                let mut history = vec![0; order];
                let mut rest = h;
                // most recent symbol is least significant and sits last
                for slot in history.iter_mut().rev() {
                    *slot = rest % alphabet_size;
                    rest /= alphabet_size;
                }
                transition(&history)
            })
            .collect();
        Self::new(order, alphabet_size, rows)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn row(&self, history_index: usize) -> &FiniteDistribution {
        &self.rows[history_index]
    }

    /// Index of a history given oldest symbol first.
    pub fn history_index(&self, history: &[usize]) -> usize {
        history
            .iter()
            .fold(0, |acc, &s| acc * self.alphabet_size + s)
    }
}

/// Runs the chain for `steps` symbols after `initial_history` (oldest first).
/// The returned series holds only the generated symbols.
pub fn simulate_markov<R: Rng + ?Sized>(
    model: &MarkovModel,
    steps: usize,
    initial_history: &[usize],
    rng: &mut R,
) -> Result<SymbolSeries> {
    if initial_history.len() != model.order {
        return Err(Error::HistoryLengthMismatch {
            expected: model.order,
            got: initial_history.len(),
        });
    }
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be positive".into()));
    }
    let a = model.alphabet_size;
    if let Some(&symbol) = initial_history.iter().find(|&&s| s >= a) {
        return Err(Error::SymbolOutOfRange { symbol, size: a });
    }
    let modulus = a.pow(model.order as u32);
    let mut history = model.history_index(initial_history);
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let next = model.samplers[history].draw(rng);
        out.push(next);
        history = (history * a + next) % modulus;
    }
    Ok(SymbolSeries {
        symbols: out,
        alphabet_size: a,
        bin_width: None,
    })
}

/// Binary source `X` (iid fair) driving target `Y`: with probability
/// `coupling`, `Y[t] = X[t - lag]`, otherwise `Y[t]` is a fresh fair coin.
/// The first `lag` target symbols are fair coins.
pub fn coupled_binary_pair<R: Rng + ?Sized>(
    coupling: f64,
    lag: usize,
    length: usize,
    rng: &mut R,
) -> Result<(SymbolSeries, SymbolSeries)> {
    if !(0.0..=1.0).contains(&coupling) {
        return Err(Error::InvalidParameter(format!("coupling {coupling}")));
    }
    if lag == 0 {
        return Err(Error::InvalidParameter("lag must be at least 1".into()));
    }
    if length <= lag {
        return Err(Error::SeriesTooShort {
            needed: lag,
            got: length,
        });
    }
    let coin = |rng: &mut R| usize::from(rng.random::<bool>());
    let x: Vec<usize> = (0..length).map(|_| coin(rng)).collect();
    let y: Vec<usize> = (0..length)
        .map(|t| {
            if t >= lag && rng.random::<f64>() < coupling {
                x[t - lag]
            } else {
                coin(rng)
            }
        })
        .collect();
    Ok((
        SymbolSeries {
            symbols: x,
            alphabet_size: 2,
            bin_width: None,
        },
        SymbolSeries {
            symbols: y,
            alphabet_size: 2,
            bin_width: None,
        },
    ))
}

/// Stationary law of `(Y[t+1], Y[t], X[t+1-lag])` for [`coupled_binary_pair`],
/// laid out as (next target, target history, source history) for
/// [`crate::measures::transfer_entropy_exact`].
pub fn coupled_pair_exact_joint(coupling: f64) -> Result<JointTable> {
    if !(0.0..=1.0).contains(&coupling) {
        return Err(Error::InvalidParameter(format!("coupling {coupling}")));
    }
    let mut mass = Vec::with_capacity(8);
    for next in 0..2 {
        for _past in 0..2 {
            for source in 0..2 {
                let hit = if next == source { coupling } else { 0.0 };
                mass.push(0.25 * (hit + (1.0 - coupling) * 0.5));
            }
        }
    }
    JointTable::new(vec![2, 2, 2], mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{sample_stats, VarianceConvention};
    use crate::seeded_rng;

    #[test]
    fn poisson_examples() {
        let mut rng = seeded_rng(11);
        let silent = simulate_poisson(&RateProfile::constant(0.0).unwrap(), 10.0, &mut rng).unwrap();
        assert_eq!(silent.spike_count(), 0);

        let train = simulate_poisson(&RateProfile::constant(5.0).unwrap(), 1000.0, &mut rng).unwrap();
        let n = train.spike_count() as f64;
        assert!((n - 5000.0).abs() < 3.0 * 5000f64.sqrt());
        let gaps = train.interarrivals().unwrap();
        let cv = sample_stats(&gaps, VarianceConvention::Population).unwrap().cv;
        assert!((cv - 1.0).abs() < 0.05, "cv {cv}");
        assert!(train.times().iter().all(|&t| t < 1000.0));
    }

    #[test]
    fn negative_rate_rejected() {
        assert_eq!(RateProfile::constant(-1.0), Err(Error::NegativeRate(-1.0)));
        assert_eq!(
            RateProfile::piecewise(vec![0.0, 1.0], vec![1.0, -2.0]),
            Err(Error::NegativeRate(-2.0))
        );
    }

    #[test]
    fn piecewise_rate_counts() {
        let profile = RateProfile::piecewise(vec![0.0, 50.0], vec![2.0, 20.0]).unwrap();
        assert_eq!(profile.integral(100.0), 1100.0);
        assert_eq!(profile.rate_at(49.9), 2.0);
        assert_eq!(profile.rate_at(50.0), 20.0);
        let train = simulate_poisson(&profile, 100.0, &mut seeded_rng(3)).unwrap();
        let early = train.times().iter().filter(|&&t| t < 50.0).count() as f64;
        let late = train.spike_count() as f64 - early;
        assert!((early - 100.0).abs() < 5.0 * 10.0);
        assert!((late - 1000.0).abs() < 5.0 * 1000f64.sqrt());
    }

    #[test]
    fn interarrival_examples() {
        let t = SpikeTrain::new(vec![0.1, 0.3, 0.6], 1.0).unwrap();
        let gaps = t.interarrivals().unwrap();
        assert!((gaps[0] - 0.2).abs() < 1e-15 && (gaps[1] - 0.3).abs() < 1e-15);

        let single = SpikeTrain::new(vec![0.5], 1.0).unwrap();
        assert_eq!(single.interarrivals(), Err(Error::InsufficientSpikes(1)));

        let train =
            simulate_poisson(&RateProfile::constant(10.0).unwrap(), 1e4, &mut seeded_rng(8)).unwrap();
        let gaps = train.interarrivals().unwrap();
        let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
        assert!((mean - 0.1).abs() < 0.002);
    }

    #[test]
    fn spike_train_validation() {
        assert!(SpikeTrain::new(vec![0.2, 0.1], 1.0).is_err());
        assert!(SpikeTrain::new(vec![0.2, 0.2], 1.0).is_err());
        assert!(SpikeTrain::new(vec![1.0], 1.0).is_err());
        assert!(SpikeTrain::new(vec![], 0.0).is_err());
    }

    #[test]
    fn fano_factor_of_poisson_is_one() {
        let train =
            simulate_poisson(&RateProfile::constant(20.0).unwrap(), 2000.0, &mut seeded_rng(9)).unwrap();
        let f = train.fano_factor(1.0).unwrap();
        assert!((f - 1.0).abs() < 0.15, "fano {f}");
        let regular = SpikeTrain::new((0..100).map(|i| i as f64 * 0.1 + 0.05).collect(), 10.0).unwrap();
        assert_eq!(regular.fano_factor(1.0).unwrap(), 0.0);
    }

    #[test]
    fn markov_cycle_is_periodic() {
        let model = MarkovModel::from_fn(1, 3, |h| {
            let mut row = vec![0.0; 3];
            row[(h[0] + 1) % 3] = 1.0;
            row
        })
        .unwrap();
        let s = simulate_markov(&model, 9, &[0], &mut seeded_rng(1)).unwrap();
        assert_eq!(s.symbols(), &[1, 2, 0, 1, 2, 0, 1, 2, 0]);
    }

    #[test]
    fn markov_parity_chain() {
        let model = MarkovModel::from_fn(2, 2, |h| {
            let mut row = vec![0.0; 2];
            row[h[0] ^ h[1]] = 1.0;
            row
        })
        .unwrap();
        let s = simulate_markov(&model, 200, &[1, 0], &mut seeded_rng(2)).unwrap();
        let full: Vec<usize> = [1, 0].iter().chain(s.symbols()).copied().collect();
        assert!(full.windows(3).all(|w| w[2] == w[0] ^ w[1]));
    }

    #[test]
    fn markov_iid_rows_match_law() {
        let law = vec![0.1, 0.2, 0.7];
        let model = MarkovModel::from_fn(1, 3, |_| law.clone()).unwrap();
        let s = simulate_markov(&model, 100_000, &[0], &mut seeded_rng(3)).unwrap();
        for (sym, p) in law.iter().enumerate() {
            let freq = s.symbols().iter().filter(|&&x| x == sym).count() as f64 / 1e5;
            assert!((freq - p).abs() < 0.01);
        }
    }

    #[test]
    fn markov_history_mismatch() {
        let model = MarkovModel::from_fn(2, 2, |_| vec![0.5, 0.5]).unwrap();
        assert_eq!(
            simulate_markov(&model, 5, &[0], &mut seeded_rng(0)).unwrap_err(),
            Error::HistoryLengthMismatch { expected: 2, got: 1 }
        );
    }

    #[test]
    fn coupled_pair_examples() {
        let (x, y) = coupled_binary_pair(1.0, 1, 1000, &mut seeded_rng(4)).unwrap();
        assert_eq!(&y.symbols()[1..], &x.symbols()[..999]);
        let (x, y) = coupled_binary_pair(1.0, 3, 100, &mut seeded_rng(4)).unwrap();
        assert_eq!(&y.symbols()[3..], &x.symbols()[..97]);
        assert!(coupled_binary_pair(0.5, 5, 5, &mut seeded_rng(0)).is_err());
        assert!(coupled_binary_pair(1.5, 1, 50, &mut seeded_rng(0)).is_err());
    }
}
