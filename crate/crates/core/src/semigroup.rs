//! Words in the five pieces and their carriers on the slit.
//!
//! A word `R = R_{q1} R_{q2} ... R_{qN}` is read right to left in time: its
//! carrier is the set of `x` that visit `tau_{qN}` first, then `tau_{q(N-1)}`,
//! and so on up to `tau_{q1}`. On the carrier, `i^N` is the translation by the
//! shift `r(R)`. Left multiplication by `R_q` intersects the carrier with the
//! pullback `i^{-N}(tau_q)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::Scalar;
use crate::transition::{BrokenIsometry, Exchange};

pub const DEFAULT_MAX_DEPTH: usize = 16;

/// Depth bound for enumeration, overridable through `STREETFLOW_MAX_DEPTH`.
pub fn max_depth() -> usize {
    std::env::var("STREETFLOW_MAX_DEPTH").ok().and_then(|v| v.parse().ok()).filter(|d| *d > 0).unwrap_or(DEFAULT_MAX_DEPTH)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemigroupWord {
    /// Letters `1..=5` in written order; the first one was multiplied last.
    pub letters: Vec<u8>,
    pub carrier: Interval,
    pub shift: Scalar,
}

impl SemigroupWord {
    pub fn empty(m: &Scalar) -> Self {
        SemigroupWord { letters: Vec::new(), carrier: Interval::new(Scalar::zero(), m.clone()), shift: Scalar::zero() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn measure(&self) -> Scalar {
        self.carrier.measure()
    }

    pub fn letters_string(&self) -> String {
        self.letters.iter().map(|q| char::from(b'0' + q)).collect()
    }
}

/// Exponent applied to `tau_q` when multiplying a word of length `N` from the left.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exponent {
    /// `i^{-N}`
    Length,
    /// `i^{-(N-1)}`
    LengthMinusOne,
}

fn check_letter(q: u8) -> Result<usize> {
    if (1..=5).contains(&q) {
        Ok(q as usize - 1)
    } else {
        Err(Error::Domain(format!("letter {q} is not in 1..=5")))
    }
}

/// `R_q R`.
pub fn left_multiply(bi: &BrokenIsometry, q: u8, w: &SemigroupWord) -> Result<SemigroupWord> {
    let k = check_letter(q)?;
    let carrier = bi.tau[k].shift(&-&w.shift).intersect(&w.carrier);
    let mut letters = Vec::with_capacity(w.len() + 1);
    letters.push(q);
    letters.extend_from_slice(&w.letters);
    Ok(SemigroupWord { letters, carrier, shift: &bi.shifts[k] + &w.shift })
}

/// General product `u w`: first follow `w`, then `u`.
pub fn multiply(u: &SemigroupWord, w: &SemigroupWord) -> SemigroupWord {
    let carrier = u.carrier.shift(&-&w.shift).intersect(&w.carrier);
    let mut letters = u.letters.clone();
    letters.extend_from_slice(&w.letters);
    SemigroupWord { letters, carrier, shift: &u.shift + &w.shift }
}

/// The word with the given letters (written order).
pub fn word(bi: &BrokenIsometry, letters: &[u8]) -> Result<SemigroupWord> {
    let mut w = SemigroupWord::empty(&bi.m);
    for &q in letters.iter().rev() {
        w = left_multiply(bi, q, &w)?;
    }
    Ok(w)
}

/// Preimage of a union of intervals under `ex`.
fn pull_back(ex: &Exchange, set: &[Interval]) -> Vec<Interval> {
    let mut out = Vec::new();
    for iv in set {
        for p in &ex.pieces {
            let part = p.image().intersect(iv);
            if !part.is_empty() {
                out.push(part.shift(&-&p.shift));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Carrier of `R_q R` computed by pulling `tau_q` back through the map itself
/// rather than through the shift of `R`. Used to calibrate the exponent.
pub fn carrier_by_preimage(bi: &BrokenIsometry, q: u8, w: &SemigroupWord, exponent: Exponent) -> Result<Vec<Interval>> {
    let k = check_letter(q)?;
    let e = match exponent {
        Exponent::Length => w.len(),
        Exponent::LengthMinusOne => w.len().saturating_sub(1),
    };
    let mut set = vec![bi.tau[k].clone()];
    for _ in 0..e {
        set = pull_back(&bi.exchange, &set);
    }
    Ok(set.iter().map(|iv| iv.intersect(&w.carrier)).filter(|iv| !iv.is_empty()).collect())
}

/// All nonzero words of length `n`, ordered left to right along the slit.
pub fn enumerate_level(bi: &BrokenIsometry, n: usize) -> Result<Vec<SemigroupWord>> {
    enumerate_level_bounded(bi, n, max_depth())
}

pub fn enumerate_level_bounded(bi: &BrokenIsometry, n: usize, bound: usize) -> Result<Vec<SemigroupWord>> {
    if n == 0 {
        return Err(Error::Domain("word length must be at least 1".into()));
    }
    if n > bound {
        return Err(Error::Resource(format!("depth {n} exceeds the bound {bound}")));
    }
    let mut out = Vec::new();
    descend(bi, SemigroupWord::empty(&bi.m), n, &mut out)?;
    Ok(out)
}

// Children of `w` split its carrier in letter order, so depth-first order is
// left-to-right order.
fn descend(bi: &BrokenIsometry, w: SemigroupWord, n: usize, out: &mut Vec<SemigroupWord>) -> Result<()> {
    if w.len() == n {
        out.push(w);
        return Ok(());
    }
    for q in 1..=5u8 {
        let c = left_multiply(bi, q, &w)?;
        if !c.is_zero() {
            descend(bi, c, n, out)?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "measure", rename_all = "snake_case")]
pub enum ClosedCurve {
    /// Closes to a positive transversal curve of the given measure.
    PositiveClosed(Scalar),
    NegativeClosed(Scalar),
}

pub fn closed_curve_verdict(w: &SemigroupWord) -> Result<ClosedCurve> {
    if w.is_zero() {
        return Err(Error::Domain("the zero word closes no curve".into()));
    }
    if w.shift.is_negative() {
        Ok(ClosedCurve::PositiveClosed(-&w.shift))
    } else if w.shift.is_positive() {
        Ok(ClosedCurve::NegativeClosed(w.shift.clone()))
    } else {
        Err(Error::NonGeneric(format!("word {} has zero shift", w.letters_string())))
    }
}

/// Chronological itinerary of `x0`: the piece visited at each of `n` steps.
pub fn code_trajectory(bi: &BrokenIsometry, x0: &Scalar, n: usize) -> Result<Vec<u8>> {
    let mut x = x0.clone();
    let mut out = Vec::with_capacity(n);
    for step in 0..n {
        let q = bi.letter_at(&x).ok_or_else(|| Error::Domain(format!("{x} is not on the slit")))?;
        x = bi.apply(&x).map_err(|e| match e {
            Error::CutPoint { x, .. } => Error::CutPoint { x, step },
            other => other,
        })?;
        out.push(q as u8 + 1);
    }
    Ok(out)
}

/// The word whose carrier holds the orbit point at the start of `window`.
pub fn window_word(bi: &BrokenIsometry, window: &[u8]) -> Result<SemigroupWord> {
    let written: Vec<u8> = window.iter().rev().copied().collect();
    word(bi, &written)
}
