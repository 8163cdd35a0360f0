//! Three-street decomposition of a torus plane relative to the slit `s = [0, m)`.
//!
//! Along `s` the streets sit in the order 1, 0, 2 from left to right. Street 1
//! has height `h1 = (u, v)`, street 2 has height `h2 = (w, y)` and the middle
//! street carries `h0 = h1 + h2`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::lattice::LatticeVector;
use crate::scalar::Scalar;
use crate::spec::{FoliationSpec, Plane};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StreetTriple {
    pub plane: Plane,
    pub m: Scalar,
    pub w0: Scalar,
    pub w1: Scalar,
    pub w2: Scalar,
    pub h0: LatticeVector,
    pub h1: LatticeVector,
    pub h2: LatticeVector,
    pub ua_pair: (i64, i64),
    pub by_pair: (i64, i64),
}

/// Street label. The discriminant is the label used throughout: 1, 0 or 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Street {
    S0,
    S1,
    S2,
}

impl Street {
    /// Left-to-right order along the slit.
    pub const ORDER: [Street; 3] = [Street::S1, Street::S0, Street::S2];

    pub fn label(self) -> u8 {
        match self {
            Street::S0 => 0,
            Street::S1 => 1,
            Street::S2 => 2,
        }
    }

    pub fn from_label(k: u8) -> Result<Street> {
        match k {
            0 => Ok(Street::S0),
            1 => Ok(Street::S1),
            2 => Ok(Street::S2),
            _ => Err(Error::Domain(format!("street label must be 0, 1 or 2, got {k}"))),
        }
    }
}

/// The m-dependent basis and its change-of-basis matrix `((u, w), (v, y))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisChange {
    pub a_star: LatticeVector,
    pub b_star: LatticeVector,
    pub matrix: [[i64; 2]; 2],
    pub det: i64,
}

impl BasisChange {
    /// Coordinates `(x, z)` in `(a*, b*)` rewritten in the original `(a, b)` basis.
    pub fn to_original(&self, x: i64, z: i64) -> LatticeVector {
        let m = self.matrix;
        LatticeVector::new(m[0][0] * x + m[0][1] * z, m[1][0] * x + m[1][1] * z)
    }
}

fn to_i64(n: BigInt) -> Result<i64> {
    n.to_i64().ok_or_else(|| Error::Resource("lattice coefficient overflows i64".into()))
}

/// Minimal pairs `((u, v), (w, y))` by continued-fraction descent.
///
/// `A` tracks a class of measure `u a - v b`, `B` one of measure `y b - w a`.
/// The larger of the two is reduced by the smaller until both drop below `m`;
/// each step lands on the cheapest translate that is still admissible.
pub fn minimal_pairs(a: &Scalar, b: &Scalar, m: &Scalar) -> Result<((i64, i64), (i64, i64))> {
    if !a.is_positive() || !b.is_positive() || !m.is_positive() || *m >= a + b {
        return Err(Error::Domain("minimal pairs need a, b, m > 0 and m < a + b".into()));
    }
    let (mut u, mut v, mut w, mut y) = (1i64, 0i64, 0i64, 1i64);
    let (mut mu, mut nu) = (a.clone(), b.clone());
    loop {
        if mu == *m || nu == *m {
            return Err(Error::NonGeneric(format!("a lattice translate has measure exactly m = {m}")));
        }
        if mu < *m && nu < *m {
            break;
        }
        if mu == nu {
            return Err(Error::NonGeneric(format!("two translates share the measure {mu}")));
        }
        if mu > nu {
            let k = batch(&mu, &nu, m)?;
            mu = &mu - nu.times(k);
            u += k * w;
            v += k * y;
        } else {
            let k = batch(&nu, &mu, m)?;
            nu = &nu - mu.times(k);
            w += k * u;
            y += k * v;
        }
    }
    if &mu + &nu == *m {
        return Err(Error::NonGeneric("street 0 has zero width".into()));
    }
    Ok(((u, v), (w, y)))
}

// Number of times `small` can be taken from `big` while `big` stays positive
// and at least until it drops below `m`.
fn batch(big: &Scalar, small: &Scalar, m: &Scalar) -> Result<i64> {
    let k1: BigInt = ((big - m) / small).floor() + 1;
    let k2: BigInt = (big / small).ceil() - 1;
    to_i64(k1.min(k2).max(BigInt::from(1)))
}

// Superset of the indices `v` with `x - m < v c < x`. Floating bounds with a
// margin of one; every candidate is checked exactly by the caller.
fn index_range(x: &Scalar, m: &Scalar, c: &Scalar) -> (BigInt, BigInt) {
    let (xf, mf, cf) = (x.to_f64(), m.to_f64(), c.to_f64());
    let (lo, hi) = ((xf - mf) / cf, xf / cf);
    if lo.is_finite() && hi.is_finite() && hi.abs() < 1e12 {
        (BigInt::from(lo.floor() as i64 - 1), BigInt::from(hi.ceil() as i64 + 1))
    } else {
        (((x - m) / c).floor(), (x / c).ceil())
    }
}

/// Exhaustive search over indices `0..=bound` for the cheapest admissible pairs.
///
/// For each first index the admissible second indices form a short exact range,
/// so the search visits every qualifying pair without scanning the full square.
/// Returns `None` for a side with no qualifying pair in range.
pub fn brute_force_pairs(
    a: &Scalar,
    b: &Scalar,
    m: &Scalar,
    bound: i64,
) -> (Option<(i64, i64)>, Option<(i64, i64)>) {
    // 0 < u a - v b < m, cost u a + v b
    let mut best_a: Option<((i64, i64), Scalar)> = None;
    for u in 1..=bound {
        let ua = a.times(u);
        let (lo, hi) = index_range(&ua, m, b);
        let mut vi = lo.max(BigInt::from(0));
        while vi <= hi {
            let v = vi.to_i64().unwrap();
            vi += 1;
            if v > bound {
                break;
            }
            let val = &ua - b.times(v);
            if val.is_positive() && val < *m {
                let cost = &ua + b.times(v);
                if best_a.as_ref().is_none_or(|(_, c)| cost < *c) {
                    best_a = Some(((u, v), cost));
                }
            }
        }
    }
    // 0 < y b - w a < m, cost w a + y b
    let mut best_b: Option<((i64, i64), Scalar)> = None;
    for y in 1..=bound {
        let yb = b.times(y);
        let (lo, hi) = index_range(&yb, m, a);
        let mut wi = lo.max(BigInt::from(0));
        while wi <= hi {
            let w = wi.to_i64().unwrap();
            wi += 1;
            if w > bound {
                break;
            }
            let val = &yb - a.times(w);
            if val.is_positive() && val < *m {
                let cost = &yb + a.times(w);
                if best_b.as_ref().is_none_or(|(_, c)| cost < *c) {
                    best_b = Some(((w, y), cost));
                }
            }
        }
    }
    (best_a.map(|x| x.0), best_b.map(|x| x.0))
}

/// Street decomposition of one plane of a validated spec.
pub fn street_triple(spec: &FoliationSpec, plane: Plane) -> Result<StreetTriple> {
    spec.validate()?;
    let (a, b) = spec.torus(plane);
    let m = &spec.m;
    let ((u, v), (w, y)) = minimal_pairs(a, b, m)?;
    let h1 = LatticeVector::new(u, v);
    let h2 = LatticeVector::new(w, y);
    let mu = h1.measure(a, b);
    let nu = -h2.measure(a, b);
    let w0 = &mu + &nu - m;
    let w1 = m - &mu;
    let w2 = m - &nu;
    Ok(StreetTriple { plane, m: m.clone(), w0, w1, w2, h0: h1 + h2, h1, h2, ua_pair: (u, v), by_pair: (w, y) })
}

impl StreetTriple {
    pub fn width(&self, s: Street) -> &Scalar {
        match s {
            Street::S0 => &self.w0,
            Street::S1 => &self.w1,
            Street::S2 => &self.w2,
        }
    }

    pub fn height(&self, s: Street) -> LatticeVector {
        match s {
            Street::S0 => self.h0,
            Street::S1 => self.h1,
            Street::S2 => self.h2,
        }
    }

    /// Cut points `0 < 1 < 2 < 3` of the slit: the street boundaries.
    pub fn cut_points(&self) -> [Scalar; 4] {
        [Scalar::zero(), self.w1.clone(), &self.w1 + &self.w0, self.m.clone()]
    }

    /// Where the street starts on the slit.
    pub fn interval(&self, s: Street) -> Interval {
        let [p0, p1, p2, p3] = self.cut_points();
        match s {
            Street::S1 => Interval::new(p0, p1),
            Street::S0 => Interval::new(p1, p2),
            Street::S2 => Interval::new(p2, p3),
        }
    }

    /// The street containing `x`, if `x` lies on the slit.
    pub fn street_at(&self, x: &Scalar) -> Option<Street> {
        Street::ORDER.into_iter().find(|s| self.interval(*s).contains(x))
    }

    /// Translation `x -> x + shift` applied by the first return along the street.
    pub fn return_shift(&self, s: Street) -> Scalar {
        match s {
            Street::S1 => &self.w0 + &self.w2,
            Street::S0 => &self.w2 - &self.w1,
            Street::S2 => -(&self.w0 + &self.w1),
        }
    }

    pub fn mbasis_homology(&self) -> BasisChange {
        let (u, v) = self.ua_pair;
        let (w, y) = self.by_pair;
        BasisChange {
            a_star: LatticeVector::new(u, v),
            b_star: LatticeVector::new(w, y),
            matrix: [[u, w], [v, y]],
            det: u * y - w * v,
        }
    }
}
