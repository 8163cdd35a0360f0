use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// The class `p[a] + q[b]` in the first homology of a torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVector {
    pub p: i64,
    pub q: i64,
}

impl LatticeVector {
    pub const fn new(p: i64, q: i64) -> Self {
        LatticeVector { p, q }
    }

    /// Transversal measure `p|a| - q|b|`; `a` and `b^-1` are the positive transversal cycles.
    pub fn measure(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a.times(self.p) - b.times(self.q)
    }

    /// Time-like cost `p|a| + q|b|`: the height reached by the vertical flow.
    pub fn flow_cost(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a.times(self.p) + b.times(self.q)
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, o: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.p + o.p, self.q + o.q)
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, o: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.p - o.p, self.q - o.q)
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector::new(-self.p, -self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn measure_is_linear(p1 in -40i64..40, q1 in -40i64..40, p2 in -40i64..40, q2 in -40i64..40, an in 1i64..30, bq in 1i64..9) {
            let a = Scalar::ratio(an, 7);
            let b = Scalar::surd(1, 3, bq, 5, 2);
            let h1 = LatticeVector::new(p1, q1);
            let h2 = LatticeVector::new(p2, q2);
            prop_assert_eq!((h1 + h2).measure(&a, &b), h1.measure(&a, &b) + h2.measure(&a, &b));
        }
    }
}
