//! The five-piece broken isometry `i = eta21 . eta12` of the slit.
//!
//! `eta12` is the return across plane 1 and `eta21` the return across plane 2.
//! In the coordinates of `eta12`'s image the slit carries four marked points:
//! `3*` and `0*` (where the plane-1 streets land) and `1'`, `2'` (where the
//! plane-2 streets start). Their relative order fixes one of six types.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::Scalar;
use crate::streets::{Street, StreetTriple};

/// A translation on each of finitely many half-open pieces of `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub domain: Interval,
    pub shift: Scalar,
}

impl Piece {
    pub fn image(&self) -> Interval {
        self.domain.shift(&self.shift)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exchange {
    pub m: Scalar,
    pub pieces: Vec<Piece>,
}

impl Exchange {
    /// Checks that domains and images both tile `[0, m)`.
    pub fn new(m: Scalar, pieces: Vec<Piece>) -> Result<Exchange> {
        let ex = Exchange { m, pieces };
        if !tiles(ex.pieces.iter().map(|p| p.domain.clone()).collect(), &ex.m) {
            return Err(Error::ModelViolation("exchange domains do not tile the slit".into()));
        }
        if !tiles(ex.images(), &ex.m) {
            return Err(Error::ModelViolation("exchange images do not tile the slit".into()));
        }
        Ok(ex)
    }

    pub fn identity(m: Scalar) -> Exchange {
        Exchange { pieces: vec![Piece { domain: Interval::new(Scalar::zero(), m.clone()), shift: Scalar::zero() }], m }
    }

    pub fn images(&self) -> Vec<Interval> {
        self.pieces.iter().map(Piece::image).collect()
    }

    /// Index of the piece containing `x`.
    pub fn piece_at(&self, x: &Scalar) -> Option<usize> {
        self.pieces.iter().position(|p| p.domain.contains(x))
    }

    /// Image of `x`. Left ends of pieces are cut points: there the map is undefined.
    pub fn apply(&self, x: &Scalar) -> Result<Scalar> {
        let i = self.piece_at(x).ok_or_else(|| Error::Domain(format!("{x} is not in [0, {})", self.m)))?;
        if self.pieces[i].domain.lo == *x {
            return Err(Error::CutPoint { x: x.to_string(), step: 0 });
        }
        Ok(x + &self.pieces[i].shift)
    }

    /// `then . self`: apply `self` first. Adjacent pieces with one shift are merged.
    pub fn compose(&self, then: &Exchange) -> Exchange {
        let mut out: Vec<Piece> = Vec::new();
        for p in &self.pieces {
            let img = p.image();
            for q in &then.pieces {
                let part = img.intersect(&q.domain);
                if part.is_empty() {
                    continue;
                }
                let back = -&p.shift;
                out.push(Piece { domain: part.shift(&back), shift: &p.shift + &q.shift });
            }
        }
        out.sort_by(|x, y| x.domain.lo.cmp(&y.domain.lo));
        Exchange { m: self.m.clone(), pieces: merge(out) }
    }

    pub fn inverse(&self) -> Exchange {
        let mut out: Vec<Piece> = self.pieces.iter().map(|p| Piece { domain: p.image(), shift: -&p.shift }).collect();
        out.sort_by(|x, y| x.domain.lo.cmp(&y.domain.lo));
        Exchange { m: self.m.clone(), pieces: out }
    }

    pub fn is_identity(&self) -> bool {
        self.pieces.iter().all(|p| p.shift.is_zero())
    }
}

fn merge(pieces: Vec<Piece>) -> Vec<Piece> {
    let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        match out.last_mut() {
            Some(last) if last.shift == p.shift && last.domain.hi == p.domain.lo => last.domain.hi = p.domain.hi,
            _ => out.push(p),
        }
    }
    out
}

fn tiles(mut parts: Vec<Interval>, m: &Scalar) -> bool {
    parts.sort_by(|x, y| x.lo.cmp(&y.lo));
    let mut at = Scalar::zero();
    for p in parts {
        if p.lo != at || p.is_empty() {
            return false;
        }
        at = p.hi;
    }
    at == *m
}

/// Return across one plane: streets 2, 0, 1 land in that order.
pub fn eta(t: &StreetTriple) -> Exchange {
    let pieces = Street::ORDER.iter().map(|s| Piece { domain: t.interval(*s), shift: t.return_shift(*s) }).collect();
    Exchange::new(t.m.clone(), pieces).expect("street returns form an exchange")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TopologicalType {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl TopologicalType {
    pub const ALL: [TopologicalType; 6] =
        [TopologicalType::I, TopologicalType::II, TopologicalType::III, TopologicalType::IV, TopologicalType::V, TopologicalType::VI];

    pub fn row(self) -> &'static TypeRow {
        &TYPE_TABLE[self as usize]
    }
}

impl fmt::Display for TopologicalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = ["I", "II", "III", "IV", "V", "VI"][*self as usize];
        f.write_str(s)
    }
}

/// One row of the type table. Street pairs are `(alpha, beta)` labels.
///
/// `printed_*` keep the reference values as printed; `sigma` and `pairs`
/// are the values the geometry produces. They differ in a few places (see the
/// tests): the reference permutations of III and VI and the pair lists of II,
/// V and VI contain slips.
#[derive(Debug)]
pub struct TypeRow {
    pub ty: TopologicalType,
    /// Regions holding `1'` and `2'`: 0 = `(0, 3*)`, 1 = `(3*, 0*)`, 2 = `(0*, m)`.
    pub regions: (u8, u8),
    pub printed_sigma: &'static str,
    pub sigma: &'static str,
    pub printed_pairs: [(u8, u8); 5],
    pub pairs: [(u8, u8); 5],
    pub phi_excluded: &'static [(u8, u8)],
    pub phi_star_excluded: &'static [(u8, u8)],
}

pub static TYPE_TABLE: [TypeRow; 6] = [
    TypeRow {
        ty: TopologicalType::I,
        regions: (0, 0),
        printed_sigma: "32541",
        sigma: "32541",
        printed_pairs: [(1, 2), (0, 2), (2, 1), (2, 0), (2, 2)],
        pairs: [(1, 2), (0, 2), (2, 1), (2, 0), (2, 2)],
        phi_excluded: &[],
        phi_star_excluded: &[(1, 1), (1, 0), (0, 1), (0, 0)],
    },
    TypeRow {
        ty: TopologicalType::II,
        regions: (0, 1),
        printed_sigma: "24153",
        sigma: "24153",
        printed_pairs: [(1, 2), (0, 1), (0, 2), (2, 1), (2, 0)],
        pairs: [(1, 2), (0, 0), (0, 2), (2, 1), (2, 0)],
        phi_excluded: &[(2, 2)],
        phi_star_excluded: &[(1, 1), (1, 0), (0, 1)],
    },
    TypeRow {
        ty: TopologicalType::III,
        regions: (0, 2),
        printed_sigma: "41523",
        sigma: "41352",
        printed_pairs: [(1, 0), (1, 2), (0, 0), (2, 1), (2, 0)],
        pairs: [(1, 0), (1, 2), (0, 0), (2, 1), (2, 0)],
        phi_excluded: &[(2, 2), (0, 2)],
        phi_star_excluded: &[(1, 1), (0, 1)],
    },
    TypeRow {
        ty: TopologicalType::IV,
        regions: (1, 1),
        printed_sigma: "25314",
        sigma: "25314",
        printed_pairs: [(1, 2), (0, 1), (0, 0), (0, 2), (2, 1)],
        pairs: [(1, 2), (0, 1), (0, 0), (0, 2), (2, 1)],
        phi_excluded: &[(2, 0), (2, 2)],
        phi_star_excluded: &[(1, 1), (1, 0)],
    },
    TypeRow {
        ty: TopologicalType::V,
        regions: (1, 2),
        printed_sigma: "31524",
        sigma: "31524",
        printed_pairs: [(1, 0), (2, 1), (0, 1), (0, 0), (2, 1)],
        pairs: [(1, 0), (1, 2), (0, 1), (0, 0), (2, 1)],
        phi_excluded: &[(2, 2), (2, 0), (0, 2)],
        phi_star_excluded: &[(1, 1)],
    },
    TypeRow {
        ty: TopologicalType::VI,
        regions: (2, 2),
        printed_sigma: "52134",
        sigma: "52143",
        printed_pairs: [(1, 1), (1, 0), (1, 2), (0, 1), (0, 2)],
        pairs: [(1, 1), (1, 0), (1, 2), (0, 1), (2, 1)],
        phi_excluded: &[(2, 0), (2, 2), (0, 0), (0, 2)],
        phi_star_excluded: &[],
    },
];

/// Marked points in the coordinates of `eta12`'s image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkedPoints {
    pub three_star: Scalar,
    pub zero_star: Scalar,
    pub one_prime: Scalar,
    pub two_prime: Scalar,
}

impl MarkedPoints {
    /// Block of street `alpha` of plane 1 after `eta12`.
    pub fn alpha_block(&self, alpha: Street, m: &Scalar) -> Interval {
        match alpha {
            Street::S2 => Interval::new(Scalar::zero(), self.three_star.clone()),
            Street::S0 => Interval::new(self.three_star.clone(), self.zero_star.clone()),
            Street::S1 => Interval::new(self.zero_star.clone(), m.clone()),
        }
    }

    /// Block of street `beta` of plane 2 before `eta21`.
    pub fn beta_block(&self, beta: Street, m: &Scalar) -> Interval {
        match beta {
            Street::S1 => Interval::new(Scalar::zero(), self.one_prime.clone()),
            Street::S0 => Interval::new(self.one_prime.clone(), self.two_prime.clone()),
            Street::S2 => Interval::new(self.two_prime.clone(), m.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrokenIsometry {
    pub ty: TopologicalType,
    pub m: Scalar,
    pub tau: Vec<Interval>,
    pub shifts: Vec<Scalar>,
    /// One-line notation: `sigma[q]` is the rank (1-based) of the image of `tau_q`.
    pub sigma: [u8; 5],
    pub pairs: Vec<(Street, Street)>,
    pub points: MarkedPoints,
    /// `pair_measures[alpha][beta]`, indexed by street label.
    pub pair_measures: [[Scalar; 3]; 3],
    pub eta12: Exchange,
    pub eta21: Exchange,
    pub exchange: Exchange,
}

fn region(x: &Scalar, p: &MarkedPoints) -> u8 {
    if *x < p.three_star {
        0
    } else if *x < p.zero_star {
        1
    } else {
        2
    }
}

pub fn sigma_string(sigma: &[u8]) -> String {
    sigma.iter().map(|d| char::from(b'0' + d)).collect()
}

/// Compose the two plane returns and classify the result.
pub fn build_transition(t1: &StreetTriple, t2: &StreetTriple) -> Result<BrokenIsometry> {
    if t1.m != t2.m {
        return Err(Error::Domain("street triples come from different slits".into()));
    }
    let m = t1.m.clone();
    let points = MarkedPoints {
        three_star: t1.w2.clone(),
        zero_star: &t1.w2 + &t1.w0,
        one_prime: t2.w1.clone(),
        two_prime: &t2.w1 + &t2.w0,
    };
    for p in [&points.one_prime, &points.two_prime] {
        for q in [&points.three_star, &points.zero_star] {
            if p == q {
                return Err(Error::NonGeneric(format!("marked points coincide at {p}")));
            }
        }
    }
    let eta12 = eta(t1);
    let eta21 = eta(t2);
    let exchange = eta12.compose(&eta21);
    if exchange.pieces.len() != 5 {
        return Err(Error::ModelViolation(format!("composite has {} pieces", exchange.pieces.len())));
    }
    let regions = (region(&points.one_prime, &points), region(&points.two_prime, &points));
    let row = TYPE_TABLE
        .iter()
        .find(|r| r.regions == regions)
        .ok_or_else(|| Error::ModelViolation(format!("no type has 1', 2' in regions {regions:?}")))?;

    let mut pairs = Vec::with_capacity(5);
    let mut pair_measures: [[Scalar; 3]; 3] = Default::default();
    for p in &exchange.pieces {
        let alpha = t1.street_at(&p.domain.lo).expect("piece starts on the slit");
        let k = eta12.piece_at(&p.domain.lo).expect("piece starts on the slit");
        let mid = &p.domain.lo + &eta12.pieces[k].shift;
        let beta = t2.street_at(&mid).expect("image lies on the slit");
        pair_measures[alpha.label() as usize][beta.label() as usize] =
            &pair_measures[alpha.label() as usize][beta.label() as usize] + p.domain.measure();
        pairs.push((alpha, beta));
    }

    let mut order: Vec<usize> = (0..5).collect();
    let images = exchange.images();
    order.sort_by(|&i, &j| images[i].lo.cmp(&images[j].lo));
    let mut sigma = [0u8; 5];
    for (rank, &q) in order.iter().enumerate() {
        sigma[q] = rank as u8 + 1;
    }

    let labels: Vec<(u8, u8)> = pairs.iter().map(|(a, b)| (a.label(), b.label())).collect();
    if sigma_string(&sigma) != row.sigma || labels != row.pairs {
        return Err(Error::ModelViolation(format!(
            "type {} detected but sigma {} / pairs {:?} disagree with the table",
            row.ty,
            sigma_string(&sigma),
            labels
        )));
    }

    Ok(BrokenIsometry {
        ty: row.ty,
        m,
        tau: exchange.pieces.iter().map(|p| p.domain.clone()).collect(),
        shifts: exchange.pieces.iter().map(|p| p.shift.clone()).collect(),
        sigma,
        pairs,
        points,
        pair_measures,
        eta12,
        eta21,
        exchange,
    })
}

/// How a reference permutation string is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaReading {
    /// `s[q-1]` is the rank of the image of piece `q`.
    OneLine,
    /// `s` is a single cycle `(s1 s2 ... s5)`: `s1 -> s2 -> ... -> s5 -> s1`.
    Cycle,
}

/// Permutation `q -> rank` encoded by `s` under a reading, 1-based.
pub fn read_sigma(s: &str, reading: SigmaReading) -> Result<[u8; 5]> {
    let digits: Vec<u8> = s.bytes().map(|c| c.wrapping_sub(b'0')).collect();
    let mut seen = digits.clone();
    seen.sort();
    if seen != [1, 2, 3, 4, 5] {
        return Err(Error::Parse(format!("{s:?} is not a permutation of 12345")));
    }
    let mut out = [0u8; 5];
    match reading {
        SigmaReading::OneLine => out.copy_from_slice(&digits),
        SigmaReading::Cycle => {
            for i in 0..5 {
                out[(digits[i] - 1) as usize] = digits[(i + 1) % 5];
            }
        }
    }
    Ok(out)
}

impl BrokenIsometry {
    pub fn apply(&self, x: &Scalar) -> Result<Scalar> {
        self.exchange.apply(x)
    }

    /// Index `q` (0-based) of the piece containing `x`.
    pub fn letter_at(&self, x: &Scalar) -> Option<usize> {
        self.exchange.piece_at(x)
    }

    pub fn images(&self) -> Vec<Interval> {
        self.exchange.images()
    }

    /// Do the images of the pieces, stacked in the order a permutation prescribes,
    /// reproduce the actual images of the map?
    pub fn placement_matches(&self, sigma: &[u8; 5]) -> bool {
        let mut by_rank: Vec<usize> = (0..5).collect();
        by_rank.sort_by_key(|&q| sigma[q]);
        let mut at = Scalar::zero();
        let actual = self.images();
        for q in by_rank {
            let placed = Interval::new(at.clone(), &at + self.tau[q].measure());
            if placed != actual[q] {
                return false;
            }
            at = placed.hi;
        }
        true
    }

    /// Every left end of a piece other than 0, in order.
    pub fn cut_points(&self) -> Vec<Scalar> {
        self.tau.iter().map(|t| t.lo.clone()).collect()
    }

    pub fn row_sums(&self) -> [Scalar; 3] {
        std::array::from_fn(|a| self.pair_measures[a].iter().sum())
    }

    pub fn column_sums(&self) -> [Scalar; 3] {
        std::array::from_fn(|b| self.pair_measures.iter().map(|row| &row[b]).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeVector;
    use crate::spec::{FoliationSpec, Plane};
    use crate::streets::street_triple;

    fn triple(w1: Scalar, w0: Scalar, w2: Scalar, plane: Plane) -> StreetTriple {
        let m = &(&w1 + &w0) + &w2;
        StreetTriple {
            plane,
            m,
            w0,
            w1,
            w2,
            h0: LatticeVector::new(1, 1),
            h1: LatticeVector::new(1, 0),
            h2: LatticeVector::new(0, 1),
            ua_pair: (1, 0),
            by_pair: (0, 1),
        }
    }

    #[test]
    fn eta_block_points() {
        let t = triple(Scalar::ratio(2, 5), Scalar::ratio(3, 10), Scalar::ratio(3, 10), Plane::One);
        let e = eta(&t);
        let landed: Vec<_> = e.images().into_iter().map(|iv| iv.lo).collect();
        assert_eq!(landed, [Scalar::ratio(3, 5), Scalar::ratio(3, 10), Scalar::zero()]);
        assert!(e.compose(&e.inverse()).is_identity());
    }

    #[test]
    fn equal_thirds_reverse_blocks() {
        let third = Scalar::ratio(1, 3);
        let e = eta(&triple(third.clone(), third.clone(), third, Plane::One));
        let shifts: Vec<_> = e.pieces.iter().map(|p| p.shift.clone()).collect();
        assert_eq!(shifts, [Scalar::ratio(2, 3), Scalar::zero(), Scalar::ratio(-2, 3)]);
    }

    // plane-1 widths fix 3*, 0*; plane-2 widths place 1', 2'
    fn by_regions(w1b: (i64, i64), w0b: (i64, i64)) -> BrokenIsometry {
        let eps = Scalar::surd(0, 1, 1, 1000, 2);
        // 3* = 3/10, 0* = 6/10, m = 1
        let t1 = triple(Scalar::ratio(4, 10), Scalar::ratio(3, 10), Scalar::ratio(3, 10), Plane::One);
        let w1 = Scalar::ratio(w1b.0, w1b.1) + &eps;
        let w0 = Scalar::ratio(w0b.0, w0b.1);
        let w2 = Scalar::one() - &w1 - &w0;
        let t2 = triple(w1, w0, w2, Plane::Two);
        build_transition(&t1, &t2).unwrap()
    }

    #[test]
    fn each_ordering_gives_its_type() {
        let cases = [
            ((1, 10), (1, 10), TopologicalType::I),
            ((2, 10), (2, 10), TopologicalType::II),
            ((2, 10), (5, 10), TopologicalType::III),
            ((4, 10), (1, 10), TopologicalType::IV),
            ((4, 10), (3, 10), TopologicalType::V),
            ((7, 10), (1, 10), TopologicalType::VI),
        ];
        for (w1, w0, ty) in cases {
            let bi = by_regions(w1, w0);
            assert_eq!(bi.ty, ty);
            assert_eq!(sigma_string(&bi.sigma), ty.row().sigma);
            let total: Scalar = bi.tau.iter().map(Interval::measure).sum();
            assert_eq!(total, Scalar::one());
        }
    }

    #[test]
    fn type_one_matches_reference_permutation() {
        assert_eq!(sigma_string(&by_regions((1, 10), (1, 10)).sigma), "32541");
    }

    #[test]
    fn reference_permutations_under_both_readings() {
        for ty in TopologicalType::ALL {
            let row = ty.row();
            let bi = by_regions(
                [(1, 10), (2, 10), (2, 10), (4, 10), (4, 10), (7, 10)][ty as usize],
                [(1, 10), (2, 10), (5, 10), (1, 10), (3, 10), (1, 10)][ty as usize],
            );
            let one_line = bi.placement_matches(&read_sigma(row.printed_sigma, SigmaReading::OneLine).unwrap());
            let cycle = bi.placement_matches(&read_sigma(row.printed_sigma, SigmaReading::Cycle).unwrap());
            let expected = !matches!(ty, TopologicalType::III | TopologicalType::VI);
            assert_eq!(one_line, expected, "type {ty}");
            assert!(!cycle || one_line, "type {ty}");
            assert!(bi.placement_matches(&read_sigma(row.sigma, SigmaReading::OneLine).unwrap()));
        }
    }

    #[test]
    fn phi_support_rule_reproduces_exclusion_lists() {
        for ty in TopologicalType::ALL {
            let row = ty.row();
            let bi = by_regions(
                [(1, 10), (2, 10), (2, 10), (4, 10), (4, 10), (7, 10)][ty as usize],
                [(1, 10), (2, 10), (5, 10), (1, 10), (3, 10), (1, 10)][ty as usize],
            );
            let mut phi_ex = Vec::new();
            let mut star_ex = Vec::new();
            for a in Street::ORDER {
                for b in Street::ORDER {
                    let ab = bi.points.alpha_block(a, &bi.m);
                    let bb = bi.points.beta_block(b, &bi.m);
                    if bb.lo >= ab.hi {
                        phi_ex.push((a.label(), b.label()));
                    }
                    if bb.hi <= ab.lo {
                        star_ex.push((a.label(), b.label()));
                    }
                }
            }
            let mut want_phi = row.phi_excluded.to_vec();
            let mut want_star = row.phi_star_excluded.to_vec();
            phi_ex.sort();
            star_ex.sort();
            want_phi.sort();
            want_star.sort();
            assert_eq!(phi_ex, want_phi, "type {ty}");
            assert_eq!(star_ex, want_star, "type {ty}");
        }
    }

    #[test]
    fn pair_measures_sum_to_street_widths() {
        let bi = by_regions((4, 10), (3, 10));
        assert_eq!(bi.row_sums(), [Scalar::ratio(3, 10), Scalar::ratio(4, 10), Scalar::ratio(3, 10)]);
        let nonzero = bi.pair_measures.iter().flatten().filter(|x| !x.is_zero()).count();
        assert_eq!(nonzero, 5);
    }

    #[test]
    fn cut_points_are_rejected() {
        let bi = by_regions((1, 10), (1, 10));
        for c in bi.cut_points() {
            assert!(matches!(bi.apply(&c), Err(Error::CutPoint { .. })));
        }
    }

    #[test]
    fn symmetric_example_is_non_generic() {
        let r2 = Scalar::sqrt(2).unwrap();
        let s = FoliationSpec::new(Scalar::one(), r2.clone(), r2, Scalar::one(), Scalar::ratio(9, 10));
        let t1 = street_triple(&s, Plane::One).unwrap();
        let t2 = street_triple(&s, Plane::Two).unwrap();
        assert!(matches!(build_transition(&t1, &t2), Err(Error::NonGeneric(_))));
    }

    #[test]
    fn perturbed_example_has_a_type() {
        let r2 = Scalar::sqrt(2).unwrap();
        let s = FoliationSpec::new(Scalar::one(), r2.clone(), r2, Scalar::ratio(101, 100), Scalar::ratio(9, 10));
        let t1 = street_triple(&s, Plane::One).unwrap();
        let t2 = street_triple(&s, Plane::Two).unwrap();
        let bi = build_transition(&t1, &t2).unwrap();
        let total: Scalar = bi.tau.iter().map(Interval::measure).sum();
        assert_eq!(total, Scalar::ratio(9, 10));
    }
}
