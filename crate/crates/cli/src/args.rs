use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "spikeinfo", version, about = "Entropy, mutual information and transfer entropy for symbol series and spike trains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate synthetic data (spike trains or symbol series) as CSV.
    Simulate(SimulateArgs),
    /// Histogram entropy of a single column of samples.
    Entropy(EntropyArgs),
    /// Plug-in mutual information of two aligned symbol series.
    Mi(MiArgs),
    /// Plug-in transfer entropy with a surrogate significance test.
    Te(TeArgs),
    /// Capacity of a discrete memoryless channel.
    Capacity(CapacityArgs),
    /// Direct-method word entropy of a spike train.
    SpikeEntropy(SpikeEntropyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Entropy(_) => "entropy",
            Command::Mi(_) => "mi",
            Command::Te(_) => "te",
            Command::Capacity(_) => "capacity",
            Command::SpikeEntropy(_) => "spike-entropy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodArg {
    Mle,
    Mm,
    Jk,
}

impl From<MethodArg> for spikeinfo::estimators::Method {
    fn from(m: MethodArg) -> Self {
        use spikeinfo::estimators::Method;
        match m {
            MethodArg::Mle => Method::Mle,
            MethodArg::Mm => Method::MillerMadow,
            MethodArg::Jk => Method::Jackknife,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeArg {
    Full,
    Block,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[command(subcommand)]
    #[serde(flatten)]
    pub process: Process,
    /// Where to write the JSON report (default: stdout).
    #[serde(skip)]
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "process", rename_all = "snake_case")]
pub enum Process {
    /// Poisson spike train, constant or piecewise-constant rate (Hz).
    Poisson {
        /// Constant rate in Hz.
        #[arg(long, conflicts_with = "segments", required_unless_present = "segments")]
        rate: Option<f64>,
        /// Piecewise rate as `start:rate` pairs, e.g. `0:5,1.5:40`.
        #[arg(long)]
        segments: Option<String>,
        /// Duration in seconds.
        #[arg(long)]
        duration: f64,
        #[arg(long)]
        seed: u64,
        /// CSV file to write (header `t`).
        #[arg(long)]
        out: PathBuf,
    },
    /// Binary pair where Y copies X with a lag, with probability `coupling`.
    Coupled {
        #[arg(long)]
        coupling: f64,
        #[arg(long, default_value_t = 1)]
        lag: usize,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        seed: u64,
        /// CSV file for the source X (header `s`).
        #[arg(long)]
        out_x: PathBuf,
        /// CSV file for the target Y (header `s`).
        #[arg(long)]
        out_y: PathBuf,
    },
    /// IID uniform symbols.
    Uniform {
        #[arg(long)]
        alphabet: usize,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        seed: u64,
        /// CSV file to write (header `s`).
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct EntropyArgs {
    /// Single-column CSV headed `s` (integer symbols), `x` (reals) or `t` (times).
    #[arg(long)]
    pub input: PathBuf,
    /// Number of bins m.
    #[arg(long)]
    pub bins: usize,
    #[arg(long, value_enum, default_value = "mle")]
    pub method: MethodArg,
    /// Lower edge for equal-width binning; requires --hi.
    #[arg(long, requires = "hi", allow_negative_numbers = true)]
    pub lo: Option<f64>,
    /// Upper edge for equal-width binning; requires --lo.
    #[arg(long, requires = "lo", allow_negative_numbers = true)]
    pub hi: Option<f64>,
    #[serde(skip)]
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct MiArgs {
    /// Symbol series CSV (header `s`).
    #[arg(long)]
    pub x: PathBuf,
    /// Symbol series CSV (header `s`).
    #[arg(long)]
    pub y: PathBuf,
    #[serde(skip)]
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct TeArgs {
    /// Source symbol series CSV (header `s`).
    #[arg(long)]
    pub source: PathBuf,
    /// Target symbol series CSV (header `s`).
    #[arg(long)]
    pub target: PathBuf,
    /// Target history length.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Source history length.
    #[arg(long, default_value_t = 1)]
    pub l: usize,
    #[arg(long, default_value_t = spikeinfo::significance::DEFAULT_SURROGATES)]
    pub surrogates: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "full")]
    pub scheme: SchemeArg,
    /// Block length for `--scheme block`.
    #[arg(long, required_if_eq("scheme", "block"))]
    pub block_length: Option<usize>,
    /// Shuffle the target as well as the source.
    #[arg(long)]
    pub shuffle_target: bool,
    #[serde(skip)]
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CapacityArgs {
    /// JSON array of rows; row x is the output distribution for input x.
    #[arg(long)]
    pub channel: PathBuf,
    /// Width of the capacity bracket at which iteration stops, in bits.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[serde(skip)]
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SpikeEntropyArgs {
    /// Spike times CSV in seconds (header `t`).
    #[arg(long)]
    pub input: PathBuf,
    /// Recording duration T in seconds.
    #[arg(long)]
    pub duration: f64,
    /// Bin width in seconds.
    #[arg(long)]
    pub dt: f64,
    #[arg(long)]
    pub word_length: usize,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[arg(long, value_enum, default_value = "mle")]
    pub method: MethodArg,
    /// Clip bins holding several spikes to 1 instead of failing.
    #[arg(long)]
    pub saturate: bool,
    #[serde(skip)]
    #[arg(long)]
    pub output: Option<PathBuf>,
}
