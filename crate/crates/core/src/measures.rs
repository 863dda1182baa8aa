//! Exact information measures on fully known distributions.
//!
//! Everything is computed with natural logarithms and converted to [`Bits`]
//! once at the boundary. Terms with zero probability contribute nothing
//! (`0 · log 0 = 0`).
//!
//! | Function | Quantity |
//! |---|---|
//! | [`information_content`] | `h(p) = -log p` |
//! | [`entropy`], [`joint_entropy`], [`conditional_entropy`] | `H(X)`, `H(X,Y)`, `H(X|Y)` |
//! | [`pmi`], [`mutual_information`], [`mi_as_kl`] | `i(x;y)`, `I(X;Y)` |
//! | [`conditional_mutual_information`], [`multi_information`] | `I(X;Y|Z)`, interaction information |
//! | [`kl_divergence`], [`kl_closed_form`], [`cross_entropy`] | divergences |
//! | [`transfer_entropy_exact`] | `TE(Y→X)` from a joint over (next, target past, source past) |
//! | [`channel_capacity`] | `max_p I(X;Y)` by alternating maximization |

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::prob::{Family, FiniteDistribution, JointTable, ParametricModel, NORMALIZATION_TOLERANCE};
use crate::{Bits, Error, Result};

/// Largest rank accepted by [`multi_information`]; the recursion visits every
/// conditioning slice, so cost grows exponentially with rank.
pub const MAX_INTERACTION_RANK: usize = 6;

/// Iteration cap for [`channel_capacity`].
pub const CAPACITY_MAX_ITERATIONS: usize = 10_000;

fn entropy_nats(mass: &[f64]) -> f64 {
    -mass
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

/// `-log2 p`. Values above 1 by no more than [`NORMALIZATION_TOLERANCE`]
/// (summation noise in marginals) are treated as 1.
pub fn information_content(p: f64) -> Result<Bits> {
    if p == 0.0 {
        return Err(Error::ZeroProbability);
    }
    if !(p > 0.0 && p <= 1.0 + NORMALIZATION_TOLERANCE) {
        return Err(Error::InvalidParameter(format!("probability {p}")));
    }
    Ok(Bits(-p.min(1.0).log2()))
}

pub fn entropy(dist: &FiniteDistribution) -> Bits {
    Bits::from_nats(entropy_nats(dist.mass()))
}

/// Entropy of the distribution `(1 - p, p)`.
pub fn binary_entropy(p: f64) -> Bits {
    Bits::from_nats(entropy_nats(&[p, 1.0 - p]))
}

/// Entropy of the whole table, any rank.
pub fn joint_entropy(joint: &JointTable) -> Bits {
    Bits::from_nats(entropy_nats(joint.mass()))
}

/// `H(target | other)` for a rank-2 table.
pub fn conditional_entropy(joint: &JointTable, target_axis: usize) -> Result<Bits> {
    joint.require_rank(2)?;
    if target_axis > 1 {
        return Err(Error::AxisOutOfRange {
            axis: target_axis,
            rank: 2,
        });
    }
    let other = joint.marginal(1 - target_axis)?;
    let h = entropy_nats(joint.mass()) - entropy_nats(other.mass());
    Ok(Bits::from_nats(h.max(0.0)))
}

/// Point-wise mutual information `log2 [P(x,y) / (P(x) P(y))]`.
///
/// Positive when `x` and `y` co-occur more often than under independence.
/// A zero joint cell with positive marginals gives `-inf`.
pub fn pmi(joint: &JointTable, x: usize, y: usize) -> Result<Bits> {
    joint.require_rank(2)?;
    let pxy = joint.get(&[x, y])?;
    let px = joint.marginal(0)?.prob(x);
    let py = joint.marginal(1)?.prob(y);
    if px == 0.0 || py == 0.0 {
        return Err(Error::ZeroMarginal);
    }
    if pxy == 0.0 {
        return Ok(Bits(f64::NEG_INFINITY));
    }
    Ok(Bits((pxy / (px * py)).log2()))
}

fn mi_nats(joint: &JointTable) -> Result<f64> {
    joint.require_rank(2)?;
    let px = joint.marginal(0)?;
    let py = joint.marginal(1)?;
    let cols = joint.shape()[1];
    let sum: f64 = joint
        .mass()
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(i, &p)| p * (p / (px.mass()[i / cols] * py.mass()[i % cols])).ln())
        .sum();
    Ok(sum.max(0.0))
}

/// `I(X;Y)` as the expectation of [`pmi`] over a rank-2 table.
pub fn mutual_information(joint: &JointTable) -> Result<Bits> {
    mi_nats(joint).map(Bits::from_nats)
}

/// `I(X;Y | Z)` for a rank-3 table, `Z` being `condition_axis`.
pub fn conditional_mutual_information(joint: &JointTable, condition_axis: usize) -> Result<Bits> {
    joint.require_rank(3)?;
    cmi_nats(joint, condition_axis).map(Bits::from_nats)
}

fn cmi_nats(joint: &JointTable, condition_axis: usize) -> Result<f64> {
    if condition_axis >= joint.rank() {
        return Err(Error::AxisOutOfRange {
            axis: condition_axis,
            rank: joint.rank(),
        });
    }
    let mut total = 0.0;
    for z in 0..joint.shape()[condition_axis] {
        let (weight, slice) = joint.slice(condition_axis, z)?;
        if weight > 0.0 {
            let conditional = scaled(slice, 1.0 / weight)?;
            total += weight * mi_nats(&conditional)?;
        }
    }
    Ok(total.max(0.0))
}

fn scaled(table: JointTable, factor: f64) -> Result<JointTable> {
    let shape = table.shape().to_vec();
    let mass = table.mass().iter().map(|p| p * factor).collect();
    JointTable::new(shape, mass)
}

/// Interaction information of all axes, defined recursively by
/// `I(X1;..;Xn) = I(X1;..;Xn-1) - I(X1;..;Xn-1 | Xn)` down to pairwise MI.
///
/// May be negative. Ranks 3 through [`MAX_INTERACTION_RANK`] are accepted.
pub fn multi_information(joint: &JointTable) -> Result<Bits> {
    if joint.rank() < 3 || joint.rank() > MAX_INTERACTION_RANK {
        return Err(Error::RankMismatch {
            expected: format!("3..={MAX_INTERACTION_RANK}"),
            got: joint.rank(),
        });
    }
    interaction_nats(joint).map(Bits::from_nats)
}

fn interaction_nats(joint: &JointTable) -> Result<f64> {
    let rank = joint.rank();
    if rank == 2 {
        return mi_nats(joint);
    }
    let last = rank - 1;
    let head: Vec<usize> = (0..last).collect();
    let unconditioned = interaction_nats(&joint.marginalize_onto(&head)?)?;
    let mut conditioned = 0.0;
    for z in 0..joint.shape()[last] {
        let (weight, slice) = joint.slice(last, z)?;
        if weight > 0.0 {
            conditioned += weight * interaction_nats(&scaled(slice, 1.0 / weight)?)?;
        }
    }
    Ok(unconditioned - conditioned)
}

fn same_alphabet(p: &FiniteDistribution, q: &FiniteDistribution) -> Result<()> {
    if p.alphabet_size() != q.alphabet_size() {
        return Err(Error::LengthMismatch(p.alphabet_size(), q.alphabet_size()));
    }
    Ok(())
}

fn kl_nats(p: &[f64], q: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            if qi == 0.0 {
                return Err(Error::SupportViolation);
            }
            sum += pi * (pi / qi).ln();
        }
    }
    Ok(sum.max(0.0))
}

/// `D_KL(p ‖ q)`. Fails with [`Error::SupportViolation`] when the divergence
/// is infinite.
pub fn kl_divergence(p: &FiniteDistribution, q: &FiniteDistribution) -> Result<Bits> {
    same_alphabet(p, q)?;
    kl_nats(p.mass(), q.mass()).map(Bits::from_nats)
}

/// Closed-form KL divergence between two normals or two exponentials.
pub fn kl_closed_form(p: &ParametricModel, q: &ParametricModel) -> Result<Bits> {
    let nats = match (p.family(), q.family()) {
        (
            Family::Normal {
                mean: m1,
                variance: v1,
            },
            Family::Normal {
                mean: m2,
                variance: v2,
            },
        ) => {
            let ratio = v1 / v2;
            (m1 - m2).powi(2) / (2.0 * v2) + 0.5 * (ratio - ratio.ln() - 1.0)
        }
        (Family::Exponential { rate: l1 }, Family::Exponential { rate: l2 }) => {
            l1.ln() - l2.ln() + l2 / l1 - 1.0
        }
        (a, b) if std::mem::discriminant(a) != std::mem::discriminant(b) => {
            return Err(Error::FamilyMismatch)
        }
        (a, _) => return Err(Error::UnsupportedFamily(a.name())),
    };
    Ok(Bits::from_nats(nats))
}

/// `-Σ p log q`.
pub fn cross_entropy(p: &FiniteDistribution, q: &FiniteDistribution) -> Result<Bits> {
    same_alphabet(p, q)?;
    let mut sum = 0.0;
    for (&pi, &qi) in p.mass().iter().zip(q.mass()) {
        if pi > 0.0 {
            if qi == 0.0 {
                return Err(Error::SupportViolation);
            }
            sum -= pi * qi.ln();
        }
    }
    Ok(Bits::from_nats(sum))
}

/// `I(X;Y)` computed as `D_KL(P(x,y) ‖ P(x) P(y))`.
pub fn mi_as_kl(joint: &JointTable) -> Result<Bits> {
    joint.require_rank(2)?;
    let px = joint.marginal(0)?;
    let py = joint.marginal(1)?;
    let product = JointTable::product(&[&px, &py])?;
    kl_nats(joint.mass(), product.mass()).map(Bits::from_nats)
}

/// Normalizations of `I(X;Y)`, with `X` on axis 0 and `Y` on axis 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizedMi {
    /// `I / H(Y)`
    Constraint,
    /// `I / H(X)`
    Uncertainty,
    /// Entropy-weighted mean of both uncertainty coefficients, `2I / (H(X) + H(Y))`.
    SymmetricUncertainty,
    /// `I / (H(X) + H(Y))`, at most 1/2.
    Redundancy,
}

pub fn normalized_mi(joint: &JointTable, variant: NormalizedMi) -> Result<f64> {
    let mi = mi_nats(joint)?;
    let hx = entropy_nats(joint.marginal(0)?.mass());
    let hy = entropy_nats(joint.marginal(1)?.mass());
    let denominator = match variant {
        NormalizedMi::Constraint => hy,
        NormalizedMi::Uncertainty => hx,
        NormalizedMi::SymmetricUncertainty | NormalizedMi::Redundancy => hx + hy,
    };
    if denominator <= 0.0 {
        return Err(Error::DegenerateEntropy);
    }
    let numerator = match variant {
        NormalizedMi::SymmetricUncertainty => {
            // H(X)·U(X|Y) + H(Y)·U(Y|X) with U(X|Y) = I/H(X) and U(Y|X) = I/H(Y)
            let from_x = if hx > 0.0 { hx * (mi / hx) } else { 0.0 };
            let from_y = if hy > 0.0 { hy * (mi / hy) } else { 0.0 };
            from_x + from_y
        }
        _ => mi,
    };
    Ok((numerator / denominator).clamp(0.0, 1.0))
}

/// Discrete memoryless channel: `rows[x][y] = P(y | x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Channel {
    rows: Vec<Vec<f64>>,
}

impl Channel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let outputs = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || outputs == 0 {
            return Err(Error::Empty);
        }
        for (row, r) in rows.iter().enumerate() {
            let valid = r.len() == outputs
                && r.iter().all(|p| p.is_finite() && *p >= 0.0)
                && (r.iter().sum::<f64>() - 1.0).abs() <= NORMALIZATION_TOLERANCE;
            if !valid {
                return Err(Error::NonStochasticChannel { row });
            }
        }
        Ok(Self { rows })
    }

    /// Binary symmetric channel with crossover probability `flip`.
    pub fn binary_symmetric(flip: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&flip) {
            return Err(Error::InvalidParameter(format!("flip {flip}")));
        }
        Self::new(vec![vec![1.0 - flip, flip], vec![flip, 1.0 - flip]])
    }

    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn outputs(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Joint law of input and output when the input follows `input`.
    pub fn joint(&self, input: &FiniteDistribution) -> Result<JointTable> {
        if input.alphabet_size() != self.inputs() {
            return Err(Error::LengthMismatch(input.alphabet_size(), self.inputs()));
        }
        let mass = self
            .rows
            .iter()
            .zip(input.mass())
            .flat_map(|(row, &px)| row.iter().map(move |w| px * w))
            .collect();
        JointTable::new(vec![self.inputs(), self.outputs()], mass)
    }
}

/// Result of [`channel_capacity`].
#[derive(Debug, Clone, Serialize)]
pub struct Capacity {
    /// Mutual information achieved by `input`; a lower bound on capacity.
    pub capacity: Bits,
    /// Upper bound on capacity at termination.
    pub upper_bound: Bits,
    pub input: FiniteDistribution,
    pub iterations: usize,
    pub converged: bool,
    /// Achieved mutual information after each iteration.
    pub trace: Vec<Bits>,
}

/// Capacity of a discrete memoryless channel by Blahut–Arimoto alternating
/// maximization, starting from the uniform input.
///
/// Each iteration brackets the capacity between the achieved mutual
/// information `I(p)` and `max_x D(W(.|x) ‖ q)`; iteration stops once the
/// bracket is narrower than `tolerance` bits or after
/// [`CAPACITY_MAX_ITERATIONS`].
pub fn channel_capacity(channel: &Channel, tolerance: f64) -> Result<Capacity> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance {tolerance}")));
    }
    let tol_nats = tolerance * std::f64::consts::LN_2;
    let n_in = channel.inputs();
    let n_out = channel.outputs();
    let mut p = vec![1.0 / n_in as f64; n_in];
    let mut trace = Vec::new();
    let mut divergence = vec![0.0; n_in];
    let mut achieved = 0.0;
    let mut upper = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;

    loop {
        iterations += 1;
        let mut q = vec![0.0; n_out];
        for (row, &px) in channel.rows.iter().zip(&p) {
            for (qy, w) in q.iter_mut().zip(row) {
                *qy += px * w;
            }
        }
        for (d, row) in divergence.iter_mut().zip(&channel.rows) {
            *d = row
                .iter()
                .zip(&q)
                .filter(|(&w, _)| w > 0.0)
                .map(|(&w, &qy)| w * (w / qy).ln())
                .sum();
        }
        achieved = p.iter().zip(&divergence).map(|(px, d)| px * d).sum::<f64>().max(0.0);
        upper = divergence.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        trace.push(Bits::from_nats(achieved));
        if upper - achieved < tol_nats {
            converged = true;
            break;
        }
        // keep `p` paired with the reported capacity
        if iterations == CAPACITY_MAX_ITERATIONS {
            break;
        }
        // p(x) ∝ p(x) exp(D(W(.|x) ‖ q)), shifted by the max for stability
        let weights: Vec<f64> = p
            .iter()
            .zip(&divergence)
            .map(|(px, d)| px * (d - upper).exp())
            .collect();
        let total: f64 = weights.iter().sum();
        p = weights.into_iter().map(|w| w / total).collect();
    }

    Ok(Capacity {
        capacity: Bits::from_nats(achieved),
        upper_bound: Bits::from_nats(upper),
        input: FiniteDistribution::from_raw(p),
        iterations,
        converged,
        trace,
    })
}

/// Transfer entropy from a rank-3 joint with axes
/// (target next state, collapsed target history, collapsed source history):
///
/// `Σ P(x', xₖ, yₗ) log [P(x' | xₖ, yₗ) / P(x' | xₖ)]`.
pub fn transfer_entropy_exact(joint: &JointTable) -> Result<Bits> {
    joint.require_rank(3)?;
    let shape = joint.shape();
    let (n_hist, n_src) = (shape[1], shape[2]);
    let p_hist_src = joint.marginalize_onto(&[1, 2])?;
    let p_next_hist = joint.marginalize_onto(&[0, 1])?;
    let p_hist = joint.marginal(1)?;
    let mut sum = 0.0;
    for (flat, &p) in joint.mass().iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        let src = flat % n_src;
        let hist = (flat / n_src) % n_hist;
        let next = flat / (n_src * n_hist);
        let numerator = p * p_hist.mass()[hist];
        let denominator = p_hist_src.mass()[hist * n_src + src] * p_next_hist.mass()[next * n_hist + hist];
        sum += p * (numerator / denominator).ln();
    }
    Ok(Bits::from_nats(sum.max(0.0)))
}

/// Differential entropy of a normal law, `½ log2(2πeσ²)`; independent of the
/// mean.
pub fn differential_entropy_closed_form(model: &ParametricModel) -> Result<Bits> {
    match model.family() {
        Family::Normal { variance, .. } => Ok(Bits(0.5 * (2.0 * PI * E * variance).log2())),
        other => Err(Error::UnsupportedFamily(other.name())),
    }
}
