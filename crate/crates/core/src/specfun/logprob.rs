//! Probabilities carried in the log domain.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A probability stored as its natural logarithm. `−∞` represents zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LogProbability(f64);

impl LogProbability {
    pub const ZERO: Self = Self(f64::NEG_INFINITY);
    pub const ONE: Self = Self(0.0);

    /// From a log value `≤ 0`; values slightly above zero from rounding are
    /// clamped.
    pub fn from_ln(ln: f64) -> Self {
        debug_assert!(!ln.is_nan());
        Self(ln.min(0.0))
    }

    pub fn from_prob(p: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&p), "probability out of range: {p}");
        Self(p.ln().min(0.0))
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn prob(self) -> f64 {
        self.0.exp()
    }

    pub fn log10(self) -> f64 {
        self.0 / std::f64::consts::LN_10
    }

    /// `ln(1 − p)`.
    pub fn complement(self) -> Self {
        if self.0 > -std::f64::consts::LN_2 {
            Self((-self.0.exp_m1()).ln())
        } else {
            Self((-self.0.exp()).ln_1p())
        }
    }
}

impl std::ops::Mul for LogProbability {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl std::iter::Product for LogProbability {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ONE, |a, b| a * b)
    }
}

impl fmt::Display for LogProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.prob())
    }
}
