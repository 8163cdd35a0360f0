//! Homotopy classes of street passes in the genus-2 surface group.
//!
//! Words are written in the m-dependent basis `A1, B1, A2, B2` standing for
//! `a*_1, b*_1, a*_2, b*_2`. The surface relation is
//! `[A1, B1][A2, B2] = 1`.

pub mod word;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroup::SemigroupWord;
use crate::spec::Plane;
use crate::streets::{BasisChange, Street};
use crate::transition::{BrokenIsometry, TopologicalType};

pub use word::{FreeWord, Letter, SURFACE};

pub type GroupWord = FreeWord;

pub const A1: u8 = 0;
pub const B1: u8 = 1;
pub const A2: u8 = 2;
pub const B2: u8 = 3;

/// Integer vector in the basis `([a*_1], [b*_1], [a*_2], [b*_2])`.
pub type HomologyClass4 = [i64; 4];

fn g(x: u8) -> FreeWord {
    FreeWord::gen(x)
}

fn gi(x: u8) -> FreeWord {
    FreeWord::gen(x).inverse()
}

/// `A1 B1 A1^-1 B1^-1`.
pub fn kappa() -> GroupWord {
    FreeWord::commutator(&g(A1), &g(B1))
}

pub fn delta() -> GroupWord {
    kappa().inverse()
}

/// The reference two-street table, in symbolic form with `K` for kappa.
/// Row is the first street label, column the primed one, both in order 1, 0, 2.
pub const PHI_SYMBOLIC: [[&str; 3]; 3] = [
    ["A1 K^-1 A2^-1", "A1 B1 A2^-1", "B1 A2^-1"],
    ["A1 B2^-1 A2^-1", "A1 B1 K B2^-1 A2^-1", "B1 K B2^-1 A2^-1"],
    ["A1 B2^-1", "A1 B1 K B2^-1", "B1 K B2^-1"],
];

fn order_index(s: Street) -> usize {
    match s {
        Street::S1 => 0,
        Street::S0 => 1,
        Street::S2 => 2,
    }
}

/// Expand a symbolic entry, substituting kappa for `K`.
pub fn expand_symbolic(s: &str) -> Result<GroupWord> {
    let mut w = FreeWord::identity();
    for tok in s.split_whitespace() {
        let piece = match tok {
            "K" => kappa(),
            "K^-1" => delta(),
            other => FreeWord::parse(other, SURFACE)?,
        };
        w = w.mul(&piece);
    }
    Ok(w)
}

/// Reference table entry at `(alpha, beta')`.
pub fn phi(alpha: Street, beta: Street) -> GroupWord {
    expand_symbolic(PHI_SYMBOLIC[order_index(alpha)][order_index(beta)]).expect("table entries parse")
}

/// Class of one pass crossing street `alpha` of plane 1 and then street
/// `beta` of plane 2.
///
/// The reference table, read by abelianization, assigns plane-2 classes to
/// its row index and plane-1 classes to its column index, so the pass is
/// looked up transposed.
pub fn pass_class(alpha: Street, beta: Street) -> GroupWord {
    phi(beta, alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Time {
    Positive,
    Negative,
}


/// Homotopy class of a sequence of street pairs, multiplied in written order.
pub fn represent_pairs(pairs: &[(Street, Street)], ty: TopologicalType, time: Time) -> Result<GroupWord> {
    let allowed = &ty.row().pairs;
    let mut w = FreeWord::identity();
    for &(a, b) in pairs {
        if !allowed.contains(&(a.label(), b.label())) {
            return Err(Error::Inconsistent(format!("pair ({}, {}') has zero measure in type {ty}", a.label(), b.label())));
        }
        let c = pass_class(a, b);
        w = w.mul(&match time {
            Time::Positive => c,
            Time::Negative => c.inverse(),
        });
    }
    Ok(w)
}

/// Representation of a nonzero semigroup word in the fundamental group.
pub fn represent(bi: &BrokenIsometry, w: &SemigroupWord, time: Time) -> Result<GroupWord> {
    if w.is_zero() {
        return Err(Error::Domain("the zero word has no representative".into()));
    }
    let pairs: Vec<(Street, Street)> = w.letters.iter().map(|&q| bi.pairs[q as usize - 1]).collect();
    represent_pairs(&pairs, bi.ty, time)
}

pub fn abelianize(w: &GroupWord) -> HomologyClass4 {
    let v = w.abelianize(4);
    [v[0], v[1], v[2], v[3]]
}

/// Street 1 carries `[a*_k]`, street 2 `[b*_k]`, street 0 their sum.
pub fn street_homology(s: Street, plane: Plane, time: Time) -> HomologyClass4 {
    let (x, y) = match s {
        Street::S1 => (1, 0),
        Street::S2 => (0, 1),
        Street::S0 => (1, 1),
    };
    let sign = if time == Time::Negative { -1 } else { 1 };
    match plane {
        Plane::One => [sign * x, sign * y, 0, 0],
        Plane::Two => [0, 0, sign * x, sign * y],
    }
}

/// Street-homology sum of a pass sequence: plane-1 streets forward, plane-2 streets backward.
pub fn pass_homology(pairs: &[(Street, Street)]) -> HomologyClass4 {
    let mut h = [0; 4];
    for &(a, b) in pairs {
        let x = street_homology(a, Plane::One, Time::Positive);
        let y = street_homology(b, Plane::Two, Time::Negative);
        for i in 0..4 {
            h[i] += x[i] + y[i];
        }
    }
    h
}

/// Rewrite an m-basis class in the original `(a_k, b_k)` bases of both tori.
pub fn homology_original_basis(h: HomologyClass4, plane1: &BasisChange, plane2: &BasisChange) -> [i64; 4] {
    let p = plane1.to_original(h[0], h[1]);
    let q = plane2.to_original(h[2], h[3]);
    [p.p, p.q, q.p, q.q]
}

/// Same-plane passes between two streets.
///
/// Plane 1 follows the reference formulas. Plane 2 keeps the reference labels;
/// their abelianizations agree with street homology only after exchanging
/// the labels `1'` and `2'`.
pub fn psi_same_plane(src: Street, dst: Street, plane: Plane) -> Result<GroupWord> {
    use Street::*;
    let w = match (plane, src, dst) {
        (Plane::One, S0, S2) => g(A1),
        (Plane::One, S1, S0) => gi(B1),
        (Plane::One, S1, S2) => gi(B1).mul(&g(A1)),
        (Plane::Two, S0, S1) => g(A2),
        (Plane::Two, S2, S0) => gi(B2),
        (Plane::Two, S2, S1) => gi(B2).mul(&g(A2)),
        _ => {
            return Err(Error::Inconsistent(format!(
                "no pass of nonzero measure from street {} to street {} in plane {plane}",
                src.label(),
                dst.label()
            )))
        }
    };
    Ok(w)
}

fn relator() -> FreeWord {
    kappa().mul(&FreeWord::commutator(&g(A2), &g(B2)))
}

/// Cyclic conjugates of the relator and its inverse.
fn relator_family() -> Vec<Vec<Letter>> {
    let r = relator();
    let ri = r.inverse();
    (0..8).flat_map(|k| [r.rotate(k).letters().to_vec(), ri.rotate(k).letters().to_vec()]).collect()
}

/// Dehn reduction: replace any subword covering more than half a relator
/// conjugate by the inverse of the rest, until none remains.
pub fn dehn_reduce(w: &GroupWord) -> GroupWord {
    let family = relator_family();
    let mut cur = w.clone();
    'outer: loop {
        let ls = cur.letters().to_vec();
        for r in &family {
            // longest prefix of r that occurs in the word, length > 4
            for len in (5..=8).rev() {
                let u = &r[..len];
                if let Some(pos) = ls.windows(len).position(|win| win == u) {
                    let rest = FreeWord::new(r[len..].iter().copied()).inverse();
                    let mut next = FreeWord::new(ls[..pos].iter().copied());
                    next = next.mul(&rest);
                    next = next.mul(&FreeWord::new(ls[pos + len..].iter().copied()));
                    cur = next;
                    continue 'outer;
                }
            }
        }
        return cur;
    }
}

/// Equality in the genus-2 surface group.
pub fn surface_equal(x: &GroupWord, y: &GroupWord) -> bool {
    dehn_reduce(&x.mul(&y.inverse())).is_identity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Street::*;

    fn w(s: &str) -> GroupWord {
        FreeWord::parse(s, SURFACE).unwrap()
    }

    #[test]
    fn kappa_basics() {
        assert_eq!(abelianize(&kappa()), [0; 4]);
        assert!(kappa().mul(&delta()).is_identity());
        assert_eq!(kappa().len(), 4);
    }

    #[test]
    fn reference_entries() {
        assert_eq!(phi(S1, S2), w("B1 A2^-1"));
        assert_eq!(phi(S2, S1), w("A1 B2^-1"));
        assert_eq!(phi(S1, S0), w("A1 B1 A2^-1"));
        assert_eq!(phi(S0, S0), w("A1 B1 A1 B1 A1^-1 B1^-1 B2^-1 A2^-1"));
        assert_eq!(abelianize(&phi(S1, S1)), [1, 0, -1, 0]);
    }

    #[test]
    fn transposed_lookup_matches_street_homology() {
        for a in Street::ORDER {
            for b in Street::ORDER {
                assert_eq!(abelianize(&pass_class(a, b)), pass_homology(&[(a, b)]));
            }
        }
    }

    #[test]
    fn two_letter_representation() {
        let ty = TopologicalType::I;
        // the letters whose pairs are (1, 2') and (2, 1') in type I
        let got = represent_pairs(&[(S2, S1), (S1, S2)], ty, Time::Positive).unwrap();
        assert_eq!(got, phi(S1, S2).mul(&phi(S2, S1)));
        assert_eq!(got, w("B1 A2^-1 A1 B2^-1"));
        let err = represent_pairs(&[(S1, S1)], ty, Time::Positive).unwrap_err();
        assert!(matches!(err, Error::Inconsistent(_)));
    }

    #[test]
    fn street_homology_rules() {
        assert_eq!(street_homology(S0, Plane::One, Time::Positive), [1, 1, 0, 0]);
        assert_eq!(street_homology(S1, Plane::Two, Time::Negative), [0, 0, -1, 0]);
        let h1 = street_homology(S1, Plane::One, Time::Positive);
        let h2 = street_homology(S2, Plane::One, Time::Positive);
        assert_eq!([h1[0] + h2[0], h1[1] + h2[1], 0, 0], street_homology(S0, Plane::One, Time::Positive));
    }

    #[test]
    fn psi_tables() {
        assert_eq!(psi_same_plane(S1, S2, Plane::One).unwrap(), w("B1^-1 A1"));
        assert_eq!(psi_same_plane(S2, S0, Plane::Two).unwrap(), w("B2^-1"));
        assert!(psi_same_plane(S2, S1, Plane::One).is_err());
        // plane 1: abelianization is source class minus target class
        for (s, d) in [(S0, S2), (S1, S0), (S1, S2)] {
            let h = |x| street_homology(x, Plane::One, Time::Positive);
            let want: Vec<i64> = (0..4).map(|i| h(s)[i] - h(d)[i]).collect();
            assert_eq!(abelianize(&psi_same_plane(s, d, Plane::One).unwrap()).to_vec(), want);
        }
        // plane 2 agrees once 1' and 2' trade places
        let swap = |x| match x {
            S1 => S2,
            S2 => S1,
            S0 => S0,
        };
        for (s, d) in [(S0, S1), (S2, S0), (S2, S1)] {
            let h = |x| street_homology(swap(x), Plane::Two, Time::Positive);
            let want: Vec<i64> = (0..4).map(|i| h(s)[i] - h(d)[i]).collect();
            assert_eq!(abelianize(&psi_same_plane(s, d, Plane::Two).unwrap()).to_vec(), want);
        }
    }

    #[test]
    fn surface_equality() {
        assert!(surface_equal(&kappa(), &delta().inverse()));
        assert!(!surface_equal(&w("A1"), &w("B1")));
        let c2 = FreeWord::commutator(&w("A2"), &w("B2"));
        assert!(surface_equal(&kappa().mul(&c2), &FreeWord::identity()));
        // kappa alone is not trivial
        assert!(!surface_equal(&kappa(), &FreeWord::identity()));
        // conjugated relator
        let x = w("B2 A1^-1");
        assert!(surface_equal(&x.mul(&relator()).mul(&x.inverse()), &FreeWord::identity()));
    }
}
