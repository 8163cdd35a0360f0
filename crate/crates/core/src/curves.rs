//! Simple closed curves on the punctured torus and the positive matrix semigroup.
//!
//! Letters `a'` and `b'` are generators 0 and 1 of the `PRIMED` alphabet; the
//! upper-triangle words use `a`, `b` of the `TORUS` alphabet with `b' = b^-1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homotopy::word::{FreeWord, Letter, PRIMED, TORUS};
use crate::scalar::Scalar;

pub const A: u8 = 0;
pub const B: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CurveClass {
    pub k: u32,
    pub l: u32,
}

impl CurveClass {
    /// Requires `k > l > 0` and `gcd(k, l) = 1`.
    pub fn new(k: u32, l: u32) -> Result<Self> {
        if !(k > l && l > 0) {
            return Err(Error::Domain(format!("need k > l > 0, got ({k}, {l})")));
        }
        if num_integer::gcd(k, l) != 1 {
            return Err(Error::Domain(format!("({k}, {l}) share the divisor {}", num_integer::gcd(k, l))));
        }
        Ok(CurveClass { k, l })
    }

    pub fn segments(&self) -> u32 {
        self.k + self.l
    }
}

/// Which of the three printed groups a segment belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SegmentGroup {
    I,
    II,
    III,
}

/// `t_j = [start, end']`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub j: u32,
    pub start: u32,
    pub end_primed: u32,
    pub group: SegmentGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentChain {
    pub segments: Vec<Segment>,
    /// Segment indices in the order the curve runs through them, from `t_1`.
    pub order: Vec<u32>,
}

pub fn segment(c: CurveClass, j: u32) -> Segment {
    let (k, l) = (c.k, c.l);
    if j <= l {
        Segment { j, start: j, end_primed: k + j, group: SegmentGroup::I }
    } else if j <= k {
        Segment { j, start: j, end_primed: j - l, group: SegmentGroup::II }
    } else {
        Segment { j, start: j, end_primed: j - l, group: SegmentGroup::III }
    }
}

/// Segments chained by identifying each primed end `e'` with the point `e`.
pub fn segment_chain(c: CurveClass) -> Result<SegmentChain> {
    let n = c.segments();
    let segments: Vec<Segment> = (1..=n).map(|j| segment(c, j)).collect();
    let mut order = vec![1];
    let mut j = segments[0].end_primed;
    while j != 1 {
        if order.len() as u32 >= n {
            return Err(Error::ModelViolation("segment chain does not close".into()));
        }
        order.push(j);
        j = segments[j as usize - 1].end_primed;
    }
    if order.len() as u32 != n {
        return Err(Error::ModelViolation(format!("chain closes after {} of {n} segments", order.len())));
    }
    Ok(SegmentChain { segments, order })
}

/// Positive word of the class: `b'` for group I segments, `a'` otherwise,
/// read along the chain. Defined up to cyclic rotation.
pub fn curve_word(c: CurveClass) -> Result<FreeWord> {
    let chain = segment_chain(c)?;
    Ok(FreeWord::new(chain.order.iter().map(|&j| {
        if chain.segments[j as usize - 1].group == SegmentGroup::I {
            Letter::pos(B)
        } else {
            Letter::pos(A)
        }
    })))
}

/// Word for any class `k a' + l b'` with `k > |l|` or one of the trivial classes.
///
/// Negative `l` is handled by reflecting the picture, which turns `b'` into
/// its inverse.
pub fn curve_word_signed(k: i64, l: i64) -> Result<FreeWord> {
    match (k, l) {
        (0, 1) | (0, -1) => return Ok(FreeWord::gen(B).pow(l)),
        (1, 0) | (-1, 0) => return Ok(FreeWord::gen(A).pow(k)),
        (1, 1) | (1, -1) => return Ok(FreeWord::gen(A).mul(&FreeWord::gen(B).pow(l))),
        _ => {}
    }
    if k <= l.abs() || l == 0 {
        return Err(Error::Domain(format!("need k > |l| > 0 or a trivial class, got ({k}, {l})")));
    }
    let w = curve_word(CurveClass::new(k as u32, l.unsigned_abs() as u32)?)?;
    if l > 0 {
        Ok(w)
    } else {
        Ok(FreeWord::new(w.letters().iter().map(|x| if x.gen == B { x.inverse() } else { *x })))
    }
}

/// True if `x` is a cyclic rotation of `y` (as letter sequences).
pub fn is_rotation(x: &FreeWord, y: &FreeWord) -> bool {
    x.len() == y.len() && (0..x.len().max(1)).any(|k| &x.rotate(k) == y)
}

/// Conjugacy of cyclically reduced words, by rotation.
pub fn conjugate_as_cycles(x: &FreeWord, y: &FreeWord) -> bool {
    is_rotation(&cyclic_reduce(x), &cyclic_reduce(y))
}

pub fn cyclic_reduce(w: &FreeWord) -> FreeWord {
    let mut v = w.letters().to_vec();
    while v.len() >= 2 && v[0] == v[v.len() - 1].inverse() {
        v.pop();
        v.remove(0);
    }
    FreeWord::new(v)
}

/// Where a first-form segment of the upper-triangle picture starts and ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EdgePoint {
    /// `y_i`, on the top side (`i <= l`) or the left side (`i > l`).
    Plain(u32),
    /// `y'_i`, the matching point on the opposite side.
    Primed(u32),
}

/// The segment of the first form with its end points.
pub fn triangle_segment(c: CurveClass, j: u32) -> (EdgePoint, EdgePoint) {
    let (k, l) = (c.k, c.l);
    if j <= l {
        (EdgePoint::Plain(l + 1 - j), EdgePoint::Plain(l + j))
    } else if j <= k {
        (EdgePoint::Primed(j), EdgePoint::Plain(j + l))
    } else {
        (EdgePoint::Primed(j), EdgePoint::Primed(k + l + 1 - j))
    }
}

/// Domains visited by the curve: starts at `t_l` (from the corner `y_1`) and
/// stops on reaching the opposite corner `y_{k+l}`.
pub fn triangle_sequence(c: CurveClass) -> Result<Vec<u32>> {
    let (k, l) = (c.k, c.l);
    let mut seq = vec![l];
    let mut j = l;
    loop {
        let (_, end) = triangle_segment(c, j);
        let next = match end {
            EdgePoint::Plain(e) if e == k + l => break,
            // a left-side point continues from its twin on the right side
            EdgePoint::Plain(e) => e,
            // a bottom point continues from its twin on the top side
            EdgePoint::Primed(e) => l + 1 - e,
        };
        if seq.len() as u32 >= k + l {
            return Err(Error::ModelViolation("upper-triangle chain does not terminate".into()));
        }
        seq.push(next);
        j = next;
    }
    Ok(seq)
}

/// Which full sides of the square bound the region above segment `t_j`.
///
/// The segment lies on the line `y = (l/k) x + (k - j)/k`.
pub fn full_cycles_above(c: CurveClass, j: u32) -> (bool, bool) {
    let (k, l) = (c.k as i64, c.l as i64);
    let c0 = Scalar::ratio(k - j as i64, k);
    let c1 = &c0 + Scalar::ratio(l, k);
    let one = Scalar::one();
    let zero = Scalar::zero();
    // top side: line at or below y = 1 across; bottom side: line at or below y = 0
    let full_a = (c0 <= one && c1 <= one) || (c0 <= zero && c1 <= zero);
    // left side: line at or below y = 0 at x = 0; right side: same at x = 1
    let full_b = c0 <= zero || c1 <= zero;
    (full_a, full_b)
}

/// `b^-1 a b a^-1`.
pub fn torus_kappa() -> FreeWord {
    FreeWord::new([Letter::neg(B), Letter::pos(A), Letter::pos(B), Letter::neg(A)])
}

/// Upper-triangle decomposition for marker `r` in `1..=k+l`.
pub fn upper_triangle(c: CurveClass, r: u32) -> Result<FreeWord> {
    if !(1..=c.segments()).contains(&r) {
        return Err(Error::Domain(format!("marker must be in 1..={}, got {r}", c.segments())));
    }
    let mut w = FreeWord::identity();
    for j in triangle_sequence(c)? {
        let (full_a, full_b) = full_cycles_above(c, j);
        let mut piece = if full_a { FreeWord::gen(A) } else { FreeWord::identity() };
        if j >= r {
            piece = piece.mul(&torus_kappa());
        }
        if full_b {
            // the b side contributes b' = b^-1
            piece = piece.mul(&FreeWord::gen(B).inverse());
        }
        w = w.mul(&piece);
    }
    Ok(w)
}

pub fn display_torus(w: &FreeWord) -> String {
    w.display(TORUS)
}

pub fn display_primed(w: &FreeWord) -> String {
    w.compact(PRIMED)
}

/// Nonnegative unimodular matrix with columns `T(a') = (k, l)` and `T(b') = (p, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct UniMatrix {
    pub k: i64,
    pub l: i64,
    pub p: i64,
    pub q: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Gen {
    T1,
    T2,
}

pub const IDENTITY: UniMatrix = UniMatrix { k: 1, l: 0, p: 0, q: 1 };

impl UniMatrix {
    pub fn new(k: i64, l: i64, p: i64, q: i64) -> Result<Self> {
        if k < 0 || l < 0 || p < 0 || q < 0 {
            return Err(Error::Domain("matrix entries must be nonnegative".into()));
        }
        if k * q - l * p != 1 {
            return Err(Error::Domain(format!("determinant is {}, not 1", k * q - l * p)));
        }
        Ok(UniMatrix { k, l, p, q })
    }

    pub fn generator(g: Gen) -> UniMatrix {
        match g {
            Gen::T1 => UniMatrix { k: 1, l: 1, p: 0, q: 1 },
            Gen::T2 => UniMatrix { k: 1, l: 0, p: 1, q: 1 },
        }
    }

    /// Matrix product `self * other` in the column convention.
    pub fn mul(&self, o: &UniMatrix) -> UniMatrix {
        UniMatrix {
            k: self.k * o.k + self.p * o.l,
            l: self.l * o.k + self.q * o.l,
            p: self.k * o.p + self.p * o.q,
            q: self.l * o.p + self.q * o.q,
        }
    }

    pub fn entry_sum(&self) -> i64 {
        self.k + self.l + self.p + self.q
    }
}

/// Unique factorization into `T1`, `T2`, peeling one generator off the left at a time.
pub fn matrix_factor(t: UniMatrix) -> Result<Vec<Gen>> {
    let mut t = UniMatrix::new(t.k, t.l, t.p, t.q)?;
    let mut out = Vec::new();
    while t != IDENTITY {
        if t.l >= t.k && t.q >= t.p {
            out.push(Gen::T1);
            t = UniMatrix { k: t.k, l: t.l - t.k, p: t.p, q: t.q - t.p };
        } else if t.k >= t.l && t.p >= t.q {
            out.push(Gen::T2);
            t = UniMatrix { k: t.k - t.l, l: t.l, p: t.p - t.q, q: t.q };
        } else {
            return Err(Error::Domain("matrix does not factor over T1, T2".into()));
        }
    }
    Ok(out)
}

pub fn product(gens: &[Gen]) -> UniMatrix {
    gens.iter().fold(IDENTITY, |acc, g| acc.mul(&UniMatrix::generator(*g)))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BasisPair {
    pub a: FreeWord,
    pub b: FreeWord,
}

impl BasisPair {
    pub fn identity() -> Self {
        BasisPair { a: FreeWord::gen(A), b: FreeWord::gen(B) }
    }

    /// Substitute `a' -> self.a`, `b' -> self.b` into `w`.
    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        let mut out = FreeWord::identity();
        for l in w.letters() {
            let img = if l.gen == A { &self.a } else { &self.b };
            out = out.mul(&if l.inv { img.inverse() } else { img.clone() });
        }
        out
    }

    /// Substitution `self . other`.
    pub fn compose(&self, other: &BasisPair) -> BasisPair {
        BasisPair { a: self.apply(&other.a), b: self.apply(&other.b) }
    }

    pub fn commutator(&self) -> FreeWord {
        FreeWord::commutator(&self.a, &self.b)
    }

    pub fn matrix(&self) -> (i64, i64, i64, i64) {
        let x = self.a.abelianize(2);
        let y = self.b.abelianize(2);
        (x[0], x[1], y[0], y[1])
    }

    pub fn parse(a: &str, b: &str) -> Result<BasisPair> {
        Ok(BasisPair { a: parse_primed(a)?, b: parse_primed(b)? })
    }

    pub fn display(&self) -> (String, String) {
        (display_primed(&self.a), display_primed(&self.b))
    }
}

/// Parse a compact positive word such as `b'a'b'`.
pub fn parse_primed(s: &str) -> Result<FreeWord> {
    let mut w = FreeWord::identity();
    let mut chars = s.chars().filter(|c| !c.is_whitespace()).peekable();
    while let Some(c) = chars.next() {
        let g = match c {
            'a' => A,
            'b' => B,
            _ => return Err(Error::Parse(format!("unexpected {c:?} in {s:?}"))),
        };
        if chars.next() != Some('\'') {
            return Err(Error::Parse(format!("expected a prime after {c} in {s:?}")));
        }
        w.push(Letter::pos(g));
    }
    Ok(w)
}

pub fn lift_generator(g: Gen) -> BasisPair {
    match g {
        Gen::T1 => BasisPair { a: FreeWord::new([Letter::pos(A), Letter::pos(B)]), b: FreeWord::gen(B) },
        Gen::T2 => BasisPair { a: FreeWord::gen(A), b: FreeWord::new([Letter::pos(B), Letter::pos(A)]) },
    }
}

/// Positive automorphism lifting `t`: the lifted generators composed along the factorization.
pub fn lift(t: UniMatrix) -> Result<BasisPair> {
    let gens = matrix_factor(t)?;
    Ok(gens.iter().fold(BasisPair::identity(), |acc, g| acc.compose(&lift_generator(*g))))
}

fn is_common_power(p: &BasisPair) -> bool {
    p.a.mul(&p.b) == p.b.mul(&p.a)
}

fn check_pair(p: &BasisPair) -> Result<()> {
    if !p.a.is_positive() || !p.b.is_positive() || p.a.is_identity() || p.b.is_identity() {
        return Err(Error::Domain("basis words must be nonempty and positive".into()));
    }
    if is_common_power(p) {
        return Err(Error::Domain("the words are powers of a common word".into()));
    }
    Ok(())
}

/// Move a common first letter of both words to their ends until the first letters differ.
pub fn reduce_pair(p: &BasisPair) -> Result<(BasisPair, usize)> {
    check_pair(p)?;
    let mut cur = p.clone();
    let mut steps = 0;
    let bound = p.a.len() + p.b.len();
    while cur.a.letters()[0] == cur.b.letters()[0] {
        if steps > bound {
            return Err(Error::Resource("reduction did not terminate".into()));
        }
        cur = BasisPair { a: cur.a.rotate(1), b: cur.b.rotate(1) };
        steps += 1;
    }
    Ok((cur, steps))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fiber {
    /// Pairs from the irreducible end onward, each obtained from the previous by one move.
    pub chain: Vec<BasisPair>,
    /// Number of moves, `chain.len() - 1`.
    pub count: usize,
}

/// Starting from the irreducible end, move a common last letter to the front
/// of both words while one exists.
pub fn fiber_of_pair(p: &BasisPair) -> Result<Fiber> {
    let (start, _) = reduce_pair(p)?;
    let mut chain = vec![start.clone()];
    let mut cur = start;
    let bound = p.a.len() + p.b.len();
    loop {
        let (la, lb) = (cur.a.letters()[cur.a.len() - 1], cur.b.letters()[cur.b.len() - 1]);
        if la != lb {
            break;
        }
        if chain.len() > bound {
            return Err(Error::Resource("fiber enumeration did not terminate".into()));
        }
        cur = BasisPair { a: cur.a.rotate(cur.a.len() - 1), b: cur.b.rotate(cur.b.len() - 1) };
        chain.push(cur.clone());
    }
    let count = chain.len() - 1;
    Ok(Fiber { chain, count })
}

/// Positive automorphisms over `t`, enumerated from its lift.
pub fn fiber_count(t: UniMatrix) -> Result<Fiber> {
    if t.entry_sum() < 3 {
        return Err(Error::Domain("fiber needs k + l + p + q >= 3".into()));
    }
    fiber_of_pair(&lift(t)?)
}
