//! Geometric ground truth, computed without any street arithmetic.
//!
//! Each torus is drawn in the plane with the flow pointing straight up. The
//! lattice vector `(p, q)` sits at `(-p|a| + q|b|, p|a| + q|b|)`, so the
//! horizontal coordinate equals minus the transversal measure and the vertical
//! coordinate is the flow cost. The slit is `[0, m) x {0}`; its translates are
//! the copies `[X, X + m) x {Y}` for every lattice point `(X, Y)`.
//!
//! A point of the slit travels upward until it meets a translate. Only
//! translates with `p, q >= 0` can be met because `m < |a| + |b|`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::scalar::Scalar;
use crate::spec::{FoliationSpec, Plane};
use crate::streets::StreetTriple;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanarRealization {
    pub plane: Plane,
    pub a: Scalar,
    pub b: Scalar,
    pub m: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hit {
    pub landing: Scalar,
    pub displacement: LatticeVector,
    pub cost: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Direction {
    Forward,
    Backward,
}

// search stops doubling once the cost bound passes this many multiples of a + b
const MAX_DOUBLINGS: u32 = 40;

impl PlanarRealization {
    pub fn new(spec: &FoliationSpec, plane: Plane) -> Result<Self> {
        spec.validate()?;
        let (a, b) = spec.torus(plane);
        Ok(PlanarRealization { plane, a: a.clone(), b: b.clone(), m: spec.m.clone() })
    }

    /// Horizontal offset of the translate `(p, q)`.
    pub fn offset(&self, v: LatticeVector) -> Scalar {
        self.b.times(v.q) - self.a.times(v.p)
    }

    pub fn cost(&self, v: LatticeVector) -> Scalar {
        v.flow_cost(&self.a, &self.b)
    }

    /// All translates with cost in `(0, bound]` whose horizontal offset lies in `[lo, hi]`.
    fn translates(&self, lo: &Scalar, hi: &Scalar, bound: &Scalar) -> Vec<LatticeVector> {
        let mut out = Vec::new();
        let mut p = 0i64;
        loop {
            let pa = self.a.times(p);
            if pa > *bound {
                break;
            }
            // lo <= q b - p a <= hi  and  q b <= bound - p a
            let qlo = ((lo + &pa) / &self.b).ceil().max(BigInt::from(0));
            let qhi = ((hi + &pa) / &self.b).floor().min(((bound - &pa) / &self.b).floor());
            let mut q = qlo;
            while q <= qhi {
                let qi = q.to_i64().expect("lattice index fits i64");
                if p > 0 || qi > 0 {
                    out.push(LatticeVector::new(p, qi));
                }
                q += 1;
            }
            p += 1;
        }
        out
    }

    fn shoot(&self, x: &Scalar, dir: Direction) -> Result<Hit> {
        if x.is_negative() || *x >= self.m {
            return Err(Error::Domain(format!("{x} is not on the slit [0, {})", self.m)));
        }
        if x.is_zero() {
            return Err(Error::NonGeneric("the slit endpoint 0 has no return".into()));
        }
        let mut bound = &self.a + &self.b;
        for _ in 0..MAX_DOUBLINGS {
            // forward: translate [X, X + m) above x, so X in (x - m, x]
            // backward: the point x + X must be on the slit, so X in [-x, m - x)
            let (lo, hi) = match dir {
                Direction::Forward => (x - &self.m, x.clone()),
                Direction::Backward => (-x, &self.m - x),
            };
            let mut best: Option<(Scalar, LatticeVector)> = None;
            let mut touches = Vec::new();
            for v in self.translates(&lo, &hi, &bound) {
                let off = self.offset(v);
                let c = self.cost(v);
                // the closed window includes the excluded end of the half-open slit
                if off == lo && dir == Direction::Forward || off == hi && dir == Direction::Backward {
                    touches.push(c);
                    continue;
                }
                match &best {
                    Some((bc, _)) if *bc == c => {
                        return Err(Error::NonGeneric(format!("two translates at equal height {c}")));
                    }
                    Some((bc, _)) if *bc < c => {}
                    _ => best = Some((c, v)),
                }
            }
            if let Some((cost, v)) = best {
                if touches.iter().any(|t| *t <= cost) {
                    return Err(Error::NonGeneric(format!("trajectory from {x} meets a slit endpoint")));
                }
                let off = self.offset(v);
                let landing = match dir {
                    Direction::Forward => x - &off,
                    Direction::Backward => x + &off,
                };
                if landing.is_zero() {
                    return Err(Error::NonGeneric(format!("trajectory from {x} meets a slit endpoint")));
                }
                return Ok(Hit { landing, displacement: v, cost });
            }
            bound = bound.times(2);
        }
        Err(Error::Resource("first-return search exceeded its cost bound".into()))
    }

    /// Forward first return of the vertical flow from slit point `x`.
    pub fn first_return(&self, x: &Scalar) -> Result<Hit> {
        self.shoot(x, Direction::Forward)
    }

    /// Backward first return: the slit point whose forward return is `x`.
    pub fn backward_return(&self, x: &Scalar) -> Result<Hit> {
        self.shoot(x, Direction::Backward)
    }

    /// Exact partition of the slit by first-return displacement.
    ///
    /// Translates are visited in increasing cost; each claims the part of the
    /// slit below it not yet claimed. Runs with equal displacement are merged.
    pub fn return_partition(&self) -> Result<Vec<(Scalar, Scalar, LatticeVector)>> {
        let mut bound = &self.a + &self.b;
        for _ in 0..MAX_DOUBLINGS {
            let lo = -&self.m;
            let hi = self.m.clone();
            let mut cands: Vec<(Scalar, LatticeVector)> =
                self.translates(&lo, &hi, &bound).into_iter().map(|v| (self.cost(v), v)).collect();
            cands.sort_by(|x, y| x.0.cmp(&y.0));
            for w in cands.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::NonGeneric(format!("two translates at equal height {}", w[0].0)));
                }
            }
            let mut free = vec![(Scalar::zero(), self.m.clone())];
            let mut claimed: Vec<(Scalar, Scalar, LatticeVector)> = Vec::new();
            for (_, v) in &cands {
                let off = self.offset(*v);
                let end = &off + &self.m;
                let mut next = Vec::new();
                for (l, h) in free {
                    let cl = (&l).max(&off).clone();
                    let ch = (&h).min(&end).clone();
                    if cl < ch {
                        if l < cl {
                            next.push((l.clone(), cl.clone()));
                        }
                        if ch < h {
                            next.push((ch.clone(), h.clone()));
                        }
                        claimed.push((cl, ch, *v));
                    } else {
                        next.push((l, h));
                    }
                }
                free = next;
                if free.is_empty() {
                    break;
                }
            }
            if free.is_empty() {
                claimed.sort_by(|x, y| x.0.cmp(&y.0));
                let mut merged: Vec<(Scalar, Scalar, LatticeVector)> = Vec::new();
                for (l, h, v) in claimed {
                    match merged.last_mut() {
                        Some(last) if last.2 == v && last.1 == l => last.1 = h,
                        _ => merged.push((l, h, v)),
                    }
                }
                return Ok(merged);
            }
            bound = bound.times(2);
        }
        Err(Error::Resource("street search exceeded its cost bound".into()))
    }

    /// Streets read off the geometry.
    pub fn empirical_streets(&self) -> Result<StreetTriple> {
        let parts = self.return_partition()?;
        if parts.len() != 3 {
            return Err(Error::ModelViolation(format!("expected 3 streets, found {}", parts.len())));
        }
        let (left, mid, right) = (&parts[0], &parts[1], &parts[2]);
        let (h1, h0, h2) = (left.2, mid.2, right.2);
        if h1 + h2 != h0 {
            return Err(Error::ModelViolation("middle street height is not the sum of the outer ones".into()));
        }
        Ok(StreetTriple {
            plane: self.plane,
            m: self.m.clone(),
            w0: &mid.1 - &mid.0,
            w1: &left.1 - &left.0,
            w2: &right.1 - &right.0,
            h0,
            h1,
            h2,
            ua_pair: (h1.p, h1.q),
            by_pair: (h2.p, h2.q),
        })
    }
}

/// One step of the glued return: flow across plane 1, then across plane 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositeStep {
    pub first: Hit,
    pub second: Hit,
}

impl CompositeStep {
    pub fn landing(&self) -> &Scalar {
        &self.second.landing
    }
}

/// Both planes of a spec, glued along the slit.
#[derive(Clone, Debug)]
pub struct GluedRealization {
    pub one: PlanarRealization,
    pub two: PlanarRealization,
}

impl GluedRealization {
    pub fn new(spec: &FoliationSpec) -> Result<Self> {
        Ok(GluedRealization { one: PlanarRealization::new(spec, Plane::One)?, two: PlanarRealization::new(spec, Plane::Two)? })
    }

    pub fn step(&self, x: &Scalar) -> Result<CompositeStep> {
        let first = self.one.first_return(x)?;
        let second = self.two.first_return(&first.landing)?;
        Ok(CompositeStep { first, second })
    }

    /// Itinerary of `x0`: the pair of displacements crossed at each step.
    pub fn itinerary(&self, x0: &Scalar, steps: usize) -> Result<Vec<CompositeStep>> {
        let mut x = x0.clone();
        let mut out = Vec::with_capacity(steps);
        for i in 0..steps {
            let s = self.step(&x).map_err(|e| match e {
                Error::NonGeneric(_) => Error::CutPoint { x: x.to_string(), step: i },
                other => other,
            })?;
            x = s.landing().clone();
            out.push(s);
        }
        Ok(out)
    }
}

/// Cutting sequence of the closed straight geodesic of slope `l/k` on the
/// square torus: crossing a vertical side gives `'a'`, a horizontal side `'b'`.
///
/// The line starts at height `1/(2k)` so it never passes a corner.
pub fn cutting_sequence(k: u32, l: u32) -> Result<String> {
    if k == 0 && l == 0 {
        return Err(Error::Domain("zero slope vector".into()));
    }
    let (k, l) = (k as i64, l as i64);
    if num_integer::gcd(k, l) != 1 {
        return Err(Error::Domain(format!("({k}, {l}) is not primitive")));
    }
    // parameter t in (0, 1]: x = k t, y = eps + l t
    let eps = Scalar::ratio(1, 2 * k.max(1));
    let mut events: Vec<(Scalar, char)> = Vec::new();
    for i in 1..=k {
        events.push((Scalar::ratio(i, k), 'a'));
    }
    for j in 1..=l {
        events.push(((Scalar::from_int(j) - &eps) / Scalar::from_int(l), 'b'));
    }
    events.sort_by(|x, y| x.0.cmp(&y.0));
    for w in events.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::ModelViolation("line passes through a corner".into()));
        }
    }
    Ok(events.into_iter().map(|e| e.1).collect())
}

/// The pieces of the slope-`l/k` geodesic inside the unit square, as
/// `(entry, exit)` point pairs, and whether any two of them meet.
pub fn geodesic_pieces(k: u32, l: u32) -> Result<(Vec<((Scalar, Scalar), (Scalar, Scalar))>, bool)> {
    let seq = cutting_sequence(k, l)?;
    let (ki, li) = (k as i64, l as i64);
    let slope_x = Scalar::from_int(ki);
    let slope_y = Scalar::from_int(li);
    let mut pieces = Vec::new();
    let (mut x, mut y) = (Scalar::zero(), Scalar::ratio(1, 2 * ki.max(1)));
    let mut t = Scalar::zero();
    let mut ticks: Vec<Scalar> = Vec::new();
    for i in 1..=ki {
        ticks.push(Scalar::ratio(i, ki));
    }
    for j in 1..=li {
        ticks.push((Scalar::from_int(j) - &y) / Scalar::from_int(li));
    }
    ticks.sort();
    for (tick, c) in ticks.iter().zip(seq.chars()) {
        let dt = tick - &t;
        let ex = &x + &slope_x * &dt;
        let ey = &y + &slope_y * &dt;
        pieces.push(((x.clone(), y.clone()), (ex.clone(), ey.clone())));
        // wrap across the side just crossed
        x = if c == 'a' { Scalar::zero() } else { ex };
        y = if c == 'b' { Scalar::zero() } else { ey };
        t = tick.clone();
    }
    // parallel pieces meet only if they lie on the same line: compare intercepts y - (l/k) x
    let slope = Scalar::ratio(li, ki.max(1));
    let mut intercepts: Vec<Scalar> = pieces.iter().map(|((x0, y0), _)| y0 - &slope * x0).collect();
    intercepts.sort();
    let crossing = intercepts.windows(2).any(|w| w[0] == w[1]);
    Ok((pieces, crossing))
}

/// Role of a street for the time model: which saddle constants govern each end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TimeCase {
    Street0,
    Street1,
    Street2,
}

/// Model of the time a trajectory spends crossing a street, as a function of
/// its position `x` in `(0, w)`.
///
/// `t(x) = -c_near0 ln(x/w) - c_nearw ln(1 - x/w) + t0`. The constants come
/// from the two saddles bounding the street; streets 1 and 2 see each saddle
/// on one side only, which halves the constant. This is a model: only its
/// logarithmic blow-up at both ends is prescribed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimeProfile {
    pub width: f64,
    pub c1: f64,
    pub c2: f64,
    pub case: TimeCase,
    pub t0: f64,
}

impl TimeProfile {
    /// `(constant near 0, constant near w)`.
    pub fn constants(&self) -> (f64, f64) {
        match self.case {
            TimeCase::Street0 => (self.c2, self.c1),
            TimeCase::Street1 => (self.c2 / 2.0, self.c1 / 2.0),
            TimeCase::Street2 => (self.c1 / 2.0, self.c2 / 2.0),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x < self.width) {
            return Err(Error::Domain(format!("x = {x} is outside (0, {})", self.width)));
        }
        let (c0, cw) = self.constants();
        let s = x / self.width;
        Ok(-c0 * s.ln() - cw * (1.0 - s).ln() + self.t0)
    }

    /// Slope of `t` against `ln(1/x)` fitted between `x1` and `x2`.
    pub fn log_slope(&self, x1: f64, x2: f64) -> Result<f64> {
        let (t1, t2) = (self.eval(x1)?, self.eval(x2)?);
        Ok((t1 - t2) / (x2.ln() - x1.ln()))
    }

    /// Same fit at the far end, in the variable `w - x`.
    pub fn log_slope_far(&self, d1: f64, d2: f64) -> Result<f64> {
        let (t1, t2) = (self.eval(self.width - d1)?, self.eval(self.width - d2)?);
        Ok((t1 - t2) / (d2.ln() - d1.ln()))
    }
}
