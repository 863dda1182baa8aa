use std::fmt;
use std::ops::{Add, Div, Sub};

use serde::{Deserialize, Serialize};

/// An amount of information in bits (base-2 logarithm).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bits(pub f64);

impl Bits {
    pub const ZERO: Bits = Bits(0.0);

    /// Converts a value computed with natural logarithms.
    pub fn from_nats(nats: f64) -> Self {
        Bits(nats / std::f64::consts::LN_2)
    }

    pub fn to_nats(self) -> f64 {
        self.0 * std::f64::consts::LN_2
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

impl Add for Bits {
    type Output = Bits;
    fn add(self, rhs: Bits) -> Bits {
        Bits(self.0 + rhs.0)
    }
}

impl Sub for Bits {
    type Output = Bits;
    fn sub(self, rhs: Bits) -> Bits {
        Bits(self.0 - rhs.0)
    }
}

impl Div<f64> for Bits {
    type Output = Bits;
    fn div(self, rhs: f64) -> Bits {
        Bits(self.0 / rhs)
    }
}

impl From<Bits> for f64 {
    fn from(b: Bits) -> f64 {
        b.0
    }
}
