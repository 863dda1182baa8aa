use serde::Serialize;
use serde_json::{json, Value};
use spikeinfo::estimators::{
    estimate_entropy, mi_plugin, te_plugin, Binning, EstimatorResult, Histogram,
};
use spikeinfo::measures::{channel_capacity, Channel};
use spikeinfo::processes::{
    coupled_binary_pair, simulate_poisson, RateProfile, SpikeTrain, SymbolSeries,
};
use spikeinfo::significance::{permutation_test, ShuffleScheme, ShuffleSide, TestConfig, TestReport};
use spikeinfo::spiketrains::{bin_spikes, bin_spikes_saturating, words};
use spikeinfo::{seeded_rng, Bits};

use crate::args::{
    CapacityArgs, EntropyArgs, MiArgs, Process, SchemeArg, SimulateArgs, SpikeEntropyArgs, TeArgs,
};
use crate::error::{CliError, CliResult};
use crate::io;

pub type Outcome = (Value, Value);

fn echo<T: Serialize>(args: &T) -> CliResult<Value> {
    Ok(serde_json::to_value(args)?)
}

fn parse_segments(spec: &str) -> CliResult<RateProfile> {
    let mut starts = Vec::new();
    let mut rates = Vec::new();
    for pair in spec.split(',') {
        let (start, rate) = pair
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("segment {pair:?} is not start:rate")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("segment {pair:?}: {v:?} is not a number")))
        };
        starts.push(parse(start)?);
        rates.push(parse(rate)?);
    }
    Ok(RateProfile::piecewise(starts, rates)?)
}

pub fn simulate(args: &SimulateArgs) -> CliResult<Outcome> {
    let result = match &args.process {
        Process::Poisson {
            rate,
            segments,
            duration,
            seed,
            out,
        } => {
            let profile = match (rate, segments) {
                (Some(rate), None) => RateProfile::constant(*rate)?,
                (None, Some(spec)) => parse_segments(spec)?,
                _ => return Err(CliError::Usage("give exactly one of --rate, --segments".into())),
            };
            let train = simulate_poisson(&profile, *duration, &mut seeded_rng(*seed))?;
            io::write_column(out, "t", train.times())?;
            json!({
                "spikes": train.spike_count(),
                "expected_spikes": profile.integral(*duration),
                "rate": train.rate(),
            })
        }
        Process::Coupled {
            coupling,
            lag,
            length,
            seed,
            out_x,
            out_y,
        } => {
            let (x, y) = coupled_binary_pair(*coupling, *lag, *length, &mut seeded_rng(*seed))?;
            io::write_column(out_x, "s", x.symbols())?;
            io::write_column(out_y, "s", y.symbols())?;
            json!({ "length": x.len() })
        }
        Process::Uniform {
            alphabet,
            length,
            seed,
            out,
        } => {
            let dist = spikeinfo::prob::FiniteDistribution::uniform(*alphabet)?;
            let symbols = dist.sample(*length, &mut seeded_rng(*seed));
            io::write_column(out, "s", &symbols)?;
            json!({ "length": symbols.len() })
        }
    };
    Ok((echo(args)?, result))
}

pub fn entropy(args: &EntropyArgs) -> CliResult<Outcome> {
    let samples = io::read_samples(&args.input)?;
    let binning = match (args.lo, args.hi) {
        (Some(lo), Some(hi)) => Binning::EqualWidth {
            lo,
            hi,
            bins: args.bins,
        },
        _ => Binning::Discrete { bins: args.bins },
    };
    let hist = Histogram::build(&samples, binning)?;
    let estimate = estimate_entropy(&hist, args.method.into())?;
    Ok((echo(args)?, serde_json::to_value(estimate)?))
}

fn series(path: &std::path::Path) -> CliResult<SymbolSeries> {
    Ok(SymbolSeries::from_symbols(io::read_symbols(path)?)?)
}

pub fn mi(args: &MiArgs) -> CliResult<Outcome> {
    let x = series(&args.x)?;
    let y = series(&args.y)?;
    Ok((echo(args)?, serde_json::to_value(mi_plugin(&x, &y)?)?))
}

#[derive(Serialize)]
struct TeOutcome {
    estimate: EstimatorResult,
    test: TestReport,
}

/// Source and target share one alphabet: the larger of the two inferred ones.
fn aligned_pair(source: Vec<usize>, target: Vec<usize>) -> CliResult<(SymbolSeries, SymbolSeries)> {
    let alphabet = source.iter().chain(&target).copied().max().unwrap_or(0) + 1;
    Ok((SymbolSeries::new(source, alphabet)?, SymbolSeries::new(target, alphabet)?))
}

pub fn te(args: &TeArgs) -> CliResult<Outcome> {
    let (source, target) = aligned_pair(io::read_symbols(&args.source)?, io::read_symbols(&args.target)?)?;
    let scheme = match (args.scheme, args.block_length) {
        (SchemeArg::Full, _) => ShuffleScheme::FullPermutation,
        (SchemeArg::Block, Some(length)) => ShuffleScheme::Block { length },
        (SchemeArg::Block, None) => return Err(CliError::Usage("--scheme block needs --block-length".into())),
    };
    let side = if args.shuffle_target { ShuffleSide::Both } else { ShuffleSide::Source };
    let (k, l) = (args.k, args.l);
    let statistic = |s: &SymbolSeries, t: &SymbolSeries| te_plugin(s, t, k, l);
    let estimate = statistic(&source, &target)?;
    let config = TestConfig::new(args.seed)
        .surrogates(args.surrogates)
        .scheme(scheme)
        .side(side);
    let test = permutation_test(statistic, &source, &target, config)?;
    Ok((echo(args)?, serde_json::to_value(TeOutcome { estimate, test })?))
}

pub fn capacity(args: &CapacityArgs) -> CliResult<Outcome> {
    let channel = Channel::new(io::read_channel(&args.channel)?)?;
    let c = channel_capacity(&channel, args.tol)?;
    let result = json!({
        "capacity": c.capacity,
        "upper_bound": c.upper_bound,
        "input": c.input.mass(),
        "iterations": c.iterations,
        "converged": c.converged,
    });
    Ok((echo(args)?, result))
}

#[derive(Serialize)]
struct SpikeEntropyOutcome {
    bins: usize,
    spikes: usize,
    merged_spikes: usize,
    words: usize,
    estimate: EstimatorResult,
    /// Word entropy divided by the word duration `L * dt`.
    bits_per_second: f64,
    /// Entropy rate divided by the spike rate; absent without spikes.
    bits_per_spike: Option<f64>,
}

pub fn spike_entropy(args: &SpikeEntropyArgs) -> CliResult<Outcome> {
    let train = SpikeTrain::new(io::read_times(&args.input)?, args.duration)?;
    let (binned, merged) = if args.saturate {
        bin_spikes_saturating(&train, args.dt)?
    } else {
        (bin_spikes(&train, args.dt)?, 0)
    };
    let word_series = words(&binned, args.word_length, args.stride)?;
    let estimate = estimate_entropy(&word_series.histogram()?, args.method.into())?;
    let Bits(h) = estimate.value;
    let bits_per_second = h / (args.word_length as f64 * args.dt);
    let bits_per_spike = (train.spike_count() > 0).then(|| bits_per_second / train.rate());
    let outcome = SpikeEntropyOutcome {
        bins: binned.len(),
        spikes: train.spike_count(),
        merged_spikes: merged,
        words: word_series.len(),
        estimate,
        bits_per_second,
        bits_per_spike,
    };
    Ok((echo(args)?, serde_json::to_value(outcome)?))
}
