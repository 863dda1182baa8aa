use serde::Serialize;

use super::finite::{validate_mass, FiniteDistribution};
use crate::{Error, Result};

/// Dense probability tensor over a product of finite alphabets.
///
/// Entries are stored row-major: the last axis varies fastest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointTable {
    shape: Vec<usize>,
    mass: Vec<f64>,
}

impl JointTable {
    pub fn new(shape: Vec<usize>, mass: Vec<f64>) -> Result<Self> {
        check_shape(&shape, mass.len())?;
        let mut mass = mass;
        validate_mass(&mut mass)?;
        Ok(Self { shape, mass })
    }

    /// Rank-2 table; rows index axis 0.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_rows = rows.len();
        if n_rows == 0 {
            return Err(Error::Empty);
        }
        let n_cols = rows[0].len();
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::ShapeMismatch {
                shape: vec![n_rows, n_cols],
                len: rows.iter().map(Vec::len).sum(),
            });
        }
        Self::new(vec![n_rows, n_cols], rows.concat())
    }

    /// Empirical table from cell counts.
    pub fn from_counts(shape: Vec<usize>, counts: &[u64]) -> Result<Self> {
        check_shape(&shape, counts.len())?;
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptySample);
        }
        let n = total as f64;
        Ok(Self {
            shape,
            mass: counts.iter().map(|&c| c as f64 / n).collect(),
        })
    }

    /// Joint law of independent variables.
    pub fn product(factors: &[&FiniteDistribution]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Empty);
        }
        let mut mass = vec![1.0];
        for f in factors {
            mass = mass
                .iter()
                .flat_map(|a| f.mass().iter().map(move |b| a * b))
                .collect();
        }
        let shape = factors.iter().map(|f| f.alphabet_size()).collect();
        Ok(Self { shape, mass })
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn get(&self, index: &[usize]) -> Result<f64> {
        Ok(self.mass[self.flat_index(index)?])
    }

    pub fn flat_index(&self, index: &[usize]) -> Result<usize> {
        if index.len() != self.rank() {
            return Err(Error::RankMismatch {
                expected: index.len().to_string(),
                got: self.rank(),
            });
        }
        let mut flat = 0;
        for (&i, &size) in index.iter().zip(&self.shape) {
            if i >= size {
                return Err(Error::SymbolOutOfRange { symbol: i, size });
            }
            flat = flat * size + i;
        }
        Ok(flat)
    }

    /// The whole table as one distribution over composite (row-major) symbols.
    pub fn flattened(&self) -> FiniteDistribution {
        FiniteDistribution::from_raw(self.mass.clone())
    }

    pub fn marginal(&self, axis: usize) -> Result<FiniteDistribution> {
        let table = self.marginalize_onto(&[axis])?;
        Ok(FiniteDistribution::from_raw(table.mass))
    }

    /// Sums out every axis not listed in `keep`; the result's axes follow the
    /// order of `keep`.
    pub fn marginalize_onto(&self, keep: &[usize]) -> Result<JointTable> {
        for &axis in keep {
            self.check_axis(axis)?;
        }
        if keep.is_empty() {
            return Err(Error::Empty);
        }
        for (i, a) in keep.iter().enumerate() {
            if keep[..i].contains(a) {
                return Err(Error::InvalidParameter(format!("axis {a} listed twice")));
            }
        }
        let shape: Vec<usize> = keep.iter().map(|&a| self.shape[a]).collect();
        let mut mass = vec![0.0; shape.iter().product()];
        let mut coords = vec![0usize; self.rank()];
        for &p in &self.mass {
            let mut out = 0;
            for (&a, &size) in keep.iter().zip(&shape) {
                out = out * size + coords[a];
            }
            mass[out] += p;
            advance(&mut coords, &self.shape);
        }
        Ok(JointTable { shape, mass })
    }

    /// Reorders axes: axis `i` of the result is axis `order[i]` of `self`.
    pub fn permute_axes(&self, order: &[usize]) -> Result<JointTable> {
        if order.len() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank().to_string(),
                got: order.len(),
            });
        }
        self.marginalize_onto(order)
    }

    /// Normalized slice at `axis = value`, with that axis removed.
    pub fn conditional_table(&self, axis: usize, value: usize) -> Result<JointTable> {
        let (weight, mut slice) = self.slice(axis, value)?;
        if weight <= 0.0 {
            return Err(Error::ZeroConditioningEvent);
        }
        slice.mass.iter_mut().for_each(|p| *p /= weight);
        Ok(slice)
    }

    /// Conditional law of the remaining axes (flattened row-major) given
    /// `axis = value`.
    pub fn conditional(&self, axis: usize, value: usize) -> Result<FiniteDistribution> {
        let table = self.conditional_table(axis, value)?;
        Ok(FiniteDistribution::from_raw(table.mass))
    }

    /// Unnormalized slice and its total mass.
    pub(crate) fn slice(&self, axis: usize, value: usize) -> Result<(f64, JointTable)> {
        self.check_axis(axis)?;
        if self.rank() < 2 {
            return Err(Error::RankMismatch {
                expected: ">= 2".into(),
                got: self.rank(),
            });
        }
        if value >= self.shape[axis] {
            return Err(Error::SymbolOutOfRange {
                symbol: value,
                size: self.shape[axis],
            });
        }
        let mut shape = self.shape.clone();
        shape.remove(axis);
        let mut mass = Vec::with_capacity(shape.iter().product());
        let mut coords = vec![0usize; self.rank()];
        for &p in &self.mass {
            if coords[axis] == value {
                mass.push(p);
            }
            advance(&mut coords, &self.shape);
        }
        let weight = mass.iter().sum();
        Ok((weight, JointTable { shape, mass }))
    }

    /// Largest absolute difference between the table and the product of its
    /// two marginals; zero exactly when the variables are independent.
    pub fn independence_defect(&self) -> Result<f64> {
        self.require_rank(2)?;
        let px = self.marginal(0)?;
        let py = self.marginal(1)?;
        let cols = self.shape[1];
        Ok(self
            .mass
            .iter()
            .enumerate()
            .map(|(i, p)| (p - px.mass()[i / cols] * py.mass()[i % cols]).abs())
            .fold(0.0, f64::max))
    }

    pub(crate) fn require_rank(&self, rank: usize) -> Result<()> {
        if self.rank() != rank {
            return Err(Error::RankMismatch {
                expected: rank.to_string(),
                got: self.rank(),
            });
        }
        Ok(())
    }

    fn check_axis(&self, axis: usize) -> Result<()> {
        if axis >= self.rank() {
            return Err(Error::AxisOutOfRange {
                axis,
                rank: self.rank(),
            });
        }
        Ok(())
    }
}

fn check_shape(shape: &[usize], len: usize) -> Result<()> {
    if shape.is_empty() || shape.contains(&0) || shape.iter().product::<usize>() != len {
        return Err(Error::ShapeMismatch {
            shape: shape.to_vec(),
            len,
        });
    }
    Ok(())
}

/// Row-major odometer increment.
fn advance(coords: &mut [usize], shape: &[usize]) {
    for axis in (0..coords.len()).rev() {
        coords[axis] += 1;
        if coords[axis] < shape[axis] {
            return;
        }
        coords[axis] = 0;
    }
}
