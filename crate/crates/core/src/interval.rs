use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Half-open interval `[lo, hi)` on the transversal segment.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Scalar,
    pub hi: Scalar,
}

impl Interval {
    /// Panics if `hi < lo`.
    pub fn new(lo: Scalar, hi: Scalar) -> Self {
        assert!(lo <= hi, "interval with hi < lo");
        Interval { lo, hi }
    }

    pub fn empty() -> Self {
        Interval { lo: Scalar::zero(), hi: Scalar::zero() }
    }

    pub fn measure(&self) -> Scalar {
        &self.hi - &self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        &self.lo <= x && x < &self.hi
    }

    /// Exact intersection. Disjoint inputs give a canonical empty interval.
    pub fn intersect(&self, other: &Interval) -> Interval {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        if lo < hi {
            Interval { lo, hi }
        } else {
            Interval::empty()
        }
    }

    pub fn shift(&self, r: &Scalar) -> Interval {
        Interval { lo: &self.lo + r, hi: &self.hi + r }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}
