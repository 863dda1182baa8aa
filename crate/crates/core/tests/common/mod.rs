#![allow(dead_code)]

use proptest::prelude::*;
use spikeinfo::prob::{FiniteDistribution, JointTable};

/// Nonnegative weights with some exact zeros, normalized to sum to 1.
pub fn mass(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![1 => Just(0.0), 4 => 0.0..1.0f64], len).prop_map(|mut w| {
        if w.iter().all(|&x| x == 0.0) {
            w[0] = 1.0;
        }
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
        w
    })
}

/// Strictly positive weights, for cases where zeros would break support.
pub fn positive_mass(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-3..1.0f64, len).prop_map(|w| {
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect()
    })
}

pub fn distribution(max_len: usize) -> impl Strategy<Value = FiniteDistribution> {
    (1..=max_len)
        .prop_flat_map(mass)
        .prop_map(|m| FiniteDistribution::new(m).unwrap())
}

pub fn joint(rank: usize, max_side: usize) -> impl Strategy<Value = JointTable> {
    prop::collection::vec(1..=max_side, rank).prop_flat_map(|shape| {
        let cells = shape.iter().product();
        mass(cells).prop_map(move |m| JointTable::new(shape.clone(), m).unwrap())
    })
}
