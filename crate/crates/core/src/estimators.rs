//! Histogram estimators of entropy, mutual information and transfer entropy.
//!
//! The plug-in (maximum-likelihood) entropy underestimates the true entropy
//! when the histogram is sparsely filled. Two corrections are provided:
//!
//! - Miller–Madow adds `(m̂ - 1) / 2N` nats, `m̂` being the number of occupied
//!   bins.
//! - The Efron–Stein jackknife combines the full-sample estimate with the `N`
//!   leave-one-out estimates: `N·Ĥ - ((N-1)/N)·Σⱼ Ĥ₋ⱼ`. Leave-one-out values
//!   are obtained by decrementing one count at a time, so the cost is linear in
//!   the number of bins rather than in `N`.
//!
//! Plug-in MI and TE, by contrast, are biased upwards.

use serde::{Deserialize, Serialize};

use crate::measures::transfer_entropy_exact;
use crate::prob::JointTable;
use crate::processes::SymbolSeries;
use crate::{Bits, Error, Result};

/// Largest number of cells a plug-in joint table may have.
pub const MAX_TABLE_CELLS: usize = 1 << 24;

/// How raw samples are assigned to bins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Binning {
    /// Integer sample `i` goes to bin `i`.
    Discrete { bins: usize },
    /// `bins` equal-width bins over `[lo, hi]`; the last bin is closed on the
    /// right so that `hi` itself is counted.
    EqualWidth { lo: f64, hi: f64, bins: usize },
}

impl Binning {
    pub fn bins(&self) -> usize {
        match *self {
            Binning::Discrete { bins } | Binning::EqualWidth { bins, .. } => bins,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Binning::Discrete { bins } | Binning::EqualWidth { bins, .. } if bins == 0 => {
                Err(Error::DegenerateRange("bin count must be at least 1".into()))
            }
            Binning::EqualWidth { lo, hi, .. } if !(lo.is_finite() && hi.is_finite() && lo < hi) => {
                Err(Error::DegenerateRange(format!("range [{lo}, {hi}]")))
            }
            _ => Ok(()),
        }
    }

    fn bin_of(&self, x: f64) -> Result<usize> {
        match *self {
            Binning::Discrete { bins } => {
                if x >= 0.0 && x.fract() == 0.0 && x < bins as f64 {
                    Ok(x as usize)
                } else {
                    Err(Error::OutOfRangeSample { value: x })
                }
            }
            Binning::EqualWidth { lo, hi, bins } => {
                if !(lo..=hi).contains(&x) {
                    return Err(Error::OutOfRangeSample { value: x });
                }
                let idx = ((x - lo) / (hi - lo) * bins as f64).floor() as usize;
                Ok(idx.min(bins - 1))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    binning: Binning,
    counts: Vec<u64>,
    total: u64,
}

impl Histogram {
    pub fn build(samples: &[f64], binning: Binning) -> Result<Self> {
        binning.validate()?;
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut counts = vec![0u64; binning.bins()];
        for &x in samples {
            counts[binning.bin_of(x)?] += 1;
        }
        Ok(Self {
            binning,
            counts,
            total: samples.len() as u64,
        })
    }

    /// Identity binning of integer symbols into `bins` bins.
    pub fn from_symbols(symbols: &[usize], bins: usize) -> Result<Self> {
        let binning = Binning::Discrete { bins };
        binning.validate()?;
        if symbols.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut counts = vec![0u64; bins];
        for &s in symbols {
            *counts
                .get_mut(s)
                .ok_or(Error::OutOfRangeSample { value: s as f64 })? += 1;
        }
        Ok(Self {
            binning,
            counts,
            total: symbols.len() as u64,
        })
    }

    pub fn from_series(series: &SymbolSeries) -> Result<Self> {
        Self::from_symbols(series.symbols(), series.alphabet_size())
    }

    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        let binning = Binning::Discrete { bins: counts.len() };
        binning.validate()?;
        let total = counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptySample);
        }
        Ok(Self {
            binning,
            counts,
            total,
        })
    }

    pub fn binning(&self) -> &Binning {
        &self.binning
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn bin_count(&self) -> usize {
        self.counts.len()
    }

    pub fn occupied(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Relative frequencies, the maximum-likelihood cell probabilities.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.total as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "MLE")]
    Mle,
    MillerMadow,
    Jackknife,
}

/// An estimate together with the data it was computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub value: Bits,
    pub method: Method,
    /// Number of samples (or embedding vectors for TE).
    pub n: u64,
    /// Number of bins / table cells.
    pub bins: usize,
    /// Number of non-empty bins.
    pub occupied: usize,
    /// `value` minus the plug-in estimate.
    pub correction: Bits,
}

fn xlogx(c: u64) -> f64 {
    if c == 0 {
        0.0
    } else {
        let c = c as f64;
        c * c.ln()
    }
}

/// Plug-in entropy in nats of a count multiset. Counts are summed in sorted
/// order so the result depends only on the multiset, not on bin order.
fn count_entropy_nats(counts: impl IntoIterator<Item = u64>) -> f64 {
    let mut nonzero: Vec<u64> = counts.into_iter().filter(|&c| c > 0).collect();
    nonzero.sort_unstable();
    let n: u64 = nonzero.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let s: f64 = nonzero.iter().map(|&c| xlogx(c)).sum();
    ((n as f64).ln() - s / n as f64).max(0.0)
}

pub fn entropy_mle(hist: &Histogram) -> EstimatorResult {
    EstimatorResult {
        value: Bits::from_nats(count_entropy_nats(hist.counts.iter().copied())),
        method: Method::Mle,
        n: hist.total,
        bins: hist.bin_count(),
        occupied: hist.occupied(),
        correction: Bits::ZERO,
    }
}

pub fn entropy_miller_madow(hist: &Histogram) -> EstimatorResult {
    let mle = entropy_mle(hist);
    let correction = Bits::from_nats((mle.occupied as f64 - 1.0) / (2.0 * hist.total as f64));
    EstimatorResult {
        value: mle.value + correction,
        method: Method::MillerMadow,
        correction,
        ..mle
    }
}

pub fn entropy_jackknife(hist: &Histogram) -> Result<EstimatorResult> {
    let total = hist.total;
    if total < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: total as usize,
        });
    }
    let n = total as f64;
    let mle = entropy_mle(hist);
    let h_full = mle.value.to_nats();
    let s: f64 = hist.counts.iter().map(|&c| xlogx(c)).sum();
    let ln_rest = (n - 1.0).ln();
    // Σⱼ Ĥ₋ⱼ grouped by the bin of the dropped sample
    let loo_sum: f64 = hist
        .counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let s_without = s - xlogx(c) + xlogx(c - 1);
            c as f64 * (ln_rest - s_without / (n - 1.0)).max(0.0)
        })
        .sum();
    let h_jk = n * h_full - (n - 1.0) / n * loo_sum;
    let value = Bits::from_nats(h_jk);
    Ok(EstimatorResult {
        value,
        method: Method::Jackknife,
        correction: value - mle.value,
        ..mle
    })
}

/// Dispatches to the estimator named by `method`.
pub fn estimate_entropy(hist: &Histogram, method: Method) -> Result<EstimatorResult> {
    match method {
        Method::Mle => Ok(entropy_mle(hist)),
        Method::MillerMadow => Ok(entropy_miller_madow(hist)),
        Method::Jackknife => entropy_jackknife(hist),
    }
}

fn guard_cells(cells: u128) -> Result<usize> {
    if cells > MAX_TABLE_CELLS as u128 {
        return Err(Error::TableTooLarge {
            cells,
            limit: MAX_TABLE_CELLS,
        });
    }
    Ok(cells as usize)
}

/// Plug-in MI of two aligned series, `Ĥ(X) + Ĥ(Y) - Ĥ(X,Y)`.
///
/// Swapping the arguments gives a bit-identical value.
pub fn mi_plugin(x: &SymbolSeries, y: &SymbolSeries) -> Result<EstimatorResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(Error::EmptySample);
    }
    let (ax, ay) = (x.alphabet_size(), y.alphabet_size());
    let cells = guard_cells(ax as u128 * ay as u128)?;
    let mut joint = vec![0u64; cells];
    let mut cx = vec![0u64; ax];
    let mut cy = vec![0u64; ay];
    for (&a, &b) in x.symbols().iter().zip(y.symbols()) {
        joint[a * ay + b] += 1;
        cx[a] += 1;
        cy[b] += 1;
    }
    let hx = count_entropy_nats(cx);
    let hy = count_entropy_nats(cy);
    let hxy = count_entropy_nats(joint.iter().copied());
    Ok(EstimatorResult {
        value: Bits::from_nats((hx + hy - hxy).max(0.0)),
        method: Method::Mle,
        n: x.len() as u64,
        bins: cells,
        occupied: joint.iter().filter(|&&c| c > 0).count(),
        correction: Bits::ZERO,
    })
}

/// Plug-in transfer entropy from `source` to `target` with `k` steps of
/// target history and `l` steps of source history.
///
/// Histories are collapsed to base-`A` integers and the empirical joint over
/// (next target symbol, target history, source history) is passed to
/// [`transfer_entropy_exact`]. `N - max(k, l)` embedding vectors are used.
pub fn te_plugin(
    source: &SymbolSeries,
    target: &SymbolSeries,
    k: usize,
    l: usize,
) -> Result<EstimatorResult> {
    if source.len() != target.len() {
        return Err(Error::LengthMismatch(source.len(), target.len()));
    }
    if k == 0 || l == 0 {
        return Err(Error::InvalidParameter("history lengths must be at least 1".into()));
    }
    let span = k.max(l);
    let len = target.len();
    if len <= span + 1 {
        return Err(Error::SeriesTooShort {
            needed: span + 1,
            got: len,
        });
    }
    let at = target.alphabet_size() as u128;
    let as_ = source.alphabet_size() as u128;
    let target_hist = at.checked_pow(k as u32);
    let source_hist = as_.checked_pow(l as u32);
    let (target_hist, source_hist) = match (target_hist, source_hist) {
        (Some(t), Some(s)) => (t, s),
        _ => {
            return Err(Error::TableTooLarge {
                cells: u128::MAX,
                limit: MAX_TABLE_CELLS,
            })
        }
    };
    let cells = guard_cells(at.saturating_mul(target_hist).saturating_mul(source_hist))?;
    let (n_next, n_th, n_sh) = (at as usize, target_hist as usize, source_hist as usize);

    let t = target.symbols();
    let s = source.symbols();
    let encode = |series: &[usize], end: usize, width: usize, base: usize| {
        series[end + 1 - width..=end]
            .iter()
            .fold(0usize, |acc, &v| acc * base + v)
    };
    let mut counts = vec![0u64; cells];
    for n in (span - 1)..(len - 1) {
        let th = encode(t, n, k, n_next);
        let sh = encode(s, n, l, source.alphabet_size());
        counts[(t[n + 1] * n_th + th) * n_sh + sh] += 1;
    }
    let embeddings = (len - span) as u64;
    let joint = JointTable::from_counts(vec![n_next, n_th, n_sh], &counts)?;
    Ok(EstimatorResult {
        value: transfer_entropy_exact(&joint)?,
        method: Method::Mle,
        n: embeddings,
        bins: cells,
        occupied: counts.iter().filter(|&&c| c > 0).count(),
        correction: Bits::ZERO,
    })
}
