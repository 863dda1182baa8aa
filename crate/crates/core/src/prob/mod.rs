//! Finite and parametric probability models, their exact moments, and sample
//! statistics.

mod finite;
mod joint;
mod parametric;
mod stats;

pub use finite::{CategoricalSampler, FiniteDistribution, NORMALIZATION_TOLERANCE};
pub use joint::JointTable;
pub use parametric::{Family, ParametricModel};
pub use stats::{sample_stats, SampleStats, VarianceConvention};

pub(crate) use parametric::ln_binomial;
