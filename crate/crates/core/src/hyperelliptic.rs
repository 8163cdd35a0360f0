//! Class membership for real hyperelliptic curves `w^2 = prod (z - z_j)` with
//! the form `(u + iv) dz / sqrt(R)`, decided from where the real zeros of `u`
//! and `v` fall relative to the branch points.
//!
//! Segment `s_i = [z_i, z_{i+1}]`, `i = 1..2g+1`. Odd segments are the cycles
//! `c_q` (checked against zeros of `v`), even segments are the `a_j` (checked
//! against zeros of `u`).

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    /// Product of `(z - r)` over the given roots.
    pub fn from_roots(roots: &[BigRational]) -> Self {
        let mut p = Poly::constant(BigRational::one());
        for r in roots {
            p = p.mul(&Poly::new(vec![-r.clone(), BigRational::one()]));
        }
        p
    }

    /// Comma-separated coefficients, constant term first: `"-3/2,1"` is `z - 3/2`.
    pub fn parse(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                let x: Scalar = t.trim().parse()?;
                if !x.is_rational() {
                    return Err(Error::Parse(format!("coefficient {t} is not rational")));
                }
                Ok(x.rational_part().clone())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs))
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(vec![]);
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Remainder of division by a nonzero polynomial.
    pub fn rem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() / &lead;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k + i] -= &f * c;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    fn sign_at(&self, x: &Bound) -> Ordering {
        match x {
            Bound::Finite(v) => self.eval(v).cmp(&BigRational::zero()),
            Bound::PosInf | Bound::NegInf => {
                let Some(d) = self.degree() else { return Ordering::Equal };
                let s = self.coeffs[d].cmp(&BigRational::zero());
                if matches!(x, Bound::NegInf) && d % 2 == 1 {
                    s.reverse()
                } else {
                    s
                }
            }
        }
    }

    fn sturm(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            seq.push(r);
        }
        seq.pop();
        seq
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| Scalar::rational(c.clone()).to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Endpoint of an open interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(BigRational),
    PosInf,
}

fn sign_changes(seq: &[Poly], x: &Bound) -> usize {
    let signs: Vec<Ordering> = seq.iter().map(|p| p.sign_at(x)).filter(|s| *s != Ordering::Equal).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in the open interval `(lo, hi)`.
pub fn root_count(p: &Poly, lo: &Bound, hi: &Bound) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::Domain("the zero polynomial has no finite root count".into()));
    }
    for b in [lo, hi] {
        if let Bound::Finite(x) = b {
            if p.eval(x).is_zero() {
                return Err(Error::Domain(format!("endpoint {} is a root", Scalar::rational(x.clone()))));
            }
        }
    }
    let seq = p.sturm();
    let (a, b) = (sign_changes(&seq, lo), sign_changes(&seq, hi));
    Ok(a.saturating_sub(b))
}

fn real_root_count(p: &Poly) -> usize {
    root_count(p, &Bound::NegInf, &Bound::PosInf).unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealHyperelliptic {
    roots: Vec<BigRational>,
}

impl RealHyperelliptic {
    /// Strictly increasing branch points, an even number and at least four.
    pub fn new(roots: Vec<BigRational>) -> Result<Self> {
        if roots.len() < 4 || roots.len() % 2 == 1 {
            return Err(Error::Domain(format!("need an even number >= 4 of branch points, got {}", roots.len())));
        }
        if roots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("branch points must be strictly increasing".into()));
        }
        Ok(RealHyperelliptic { roots })
    }

    pub fn from_ints(r: &[i64]) -> Result<Self> {
        RealHyperelliptic::new(r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn genus(&self) -> usize {
        self.roots.len() / 2 - 1
    }

    pub fn roots(&self) -> &[BigRational] {
        &self.roots
    }

    /// Open interval between branch points `i` and `j` (1-based); 0 and `2g+3` are the infinities.
    fn window(&self, i: usize, j: usize) -> (Bound, Bound) {
        let b = |k: usize| {
            if k == 0 {
                Bound::NegInf
            } else if k > self.roots.len() {
                Bound::PosInf
            } else {
                Bound::Finite(self.roots[k - 1].clone())
            }
        };
        (b(i), b(j))
    }

    fn zeros_in(&self, p: &Poly, i: usize, j: usize) -> usize {
        if p.is_zero() {
            return 0;
        }
        let (lo, hi) = self.window(i, j);
        root_count(p, &lo, &hi).expect("branch points are not roots")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormSpec {
    pub u: Poly,
    pub v: Poly,
}

impl FormSpec {
    pub fn constant(u: i64, v: i64) -> Self {
        FormSpec { u: Poly::from_ints(&[u]), v: Poly::from_ints(&[v]) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ClassLabel {
    Inconclusive,
    /// Transversal half-basis of `a`-cycles.
    T0,
    /// Half-basis plus two transversal `b`-cycles.
    T2,
    /// Complete transversal canonical basis.
    T,
}

/// Cycle over the segment between two branch points (1-based indices).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub name: String,
    pub from: usize,
    pub to: usize,
}

fn cyc(name: impl Into<String>, from: usize) -> Cycle {
    Cycle { name: name.into(), from, to: from + 1 }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub class: ClassLabel,
    pub genus: usize,
    /// Segments `s_i = [z_i, z_{i+1}]` free of important zeros.
    pub surviving: Vec<usize>,
    pub cycles: Vec<Cycle>,
    pub rule: String,
    pub notes: Vec<String>,
}

fn check_assumptions(c: &RealHyperelliptic, f: &FormSpec) -> Result<()> {
    let g = c.genus();
    if f.u.is_zero() && f.v.is_zero() {
        return Err(Error::Domain("assumption: u and v are both zero".into()));
    }
    for (name, p) in [("u", &f.u), ("v", &f.v)] {
        if p.degree().unwrap_or(0) + 1 > g {
            return Err(Error::Domain(format!("assumption: deg {name} exceeds g - 1 = {}", g - 1)));
        }
        for (k, z) in c.roots.iter().enumerate() {
            if p.eval(z).is_zero() {
                return Err(Error::Domain(format!("assumption: {name}(z_{}) = 0", k + 1)));
            }
        }
    }
    Ok(())
}

/// Segments that contain no important zero.
pub fn surviving_segments(c: &RealHyperelliptic, f: &FormSpec) -> Vec<usize> {
    (1..c.roots.len())
        .filter(|&i| {
            let p = if i % 2 == 1 { &f.v } else { &f.u };
            c.zeros_in(p, i, i + 1) == 0
        })
        .collect()
}

/// `g` pairwise disjoint closed segments among the survivors, if possible.
fn half_basis(surviving: &[usize], g: usize) -> Option<Vec<usize>> {
    let evens: Vec<usize> = (1..=g).map(|j| 2 * j).collect();
    if evens.iter().all(|i| surviving.contains(i)) {
        return Some(evens);
    }
    let mut picked: Vec<usize> = Vec::new();
    for &i in surviving {
        if picked.last().is_none_or(|&p| i > p + 1) {
            picked.push(i);
        }
    }
    (picked.len() >= g).then(|| picked.into_iter().take(g).collect())
}

fn all_in(c: &RealHyperelliptic, p: &Poly, windows: &[(usize, usize)]) -> bool {
    if p.is_zero() {
        return true;
    }
    let inside: usize = windows.iter().map(|&(i, j)| c.zeros_in(p, i, j)).sum();
    inside == real_root_count(p)
}

pub fn classify_class(c: &RealHyperelliptic, f: &FormSpec) -> Result<Verdict> {
    check_assumptions(c, f)?;
    let g = c.genus();
    let surviving = surviving_segments(c, f);
    let mut notes = Vec::new();
    let free = |p: &Poly, segs: &[usize]| segs.iter().all(|&i| c.zeros_in(p, i, i + 1) == 0);

    if g == 1 {
        // u, v are nonzero constants
        return Ok(Verdict {
            class: ClassLabel::T,
            genus: g,
            surviving,
            cycles: vec![cyc("a1", 2), cyc("b1", 1)],
            rule: "constant form in genus one".into(),
            notes,
        });
    }
    if g == 2 && free(&f.v, &[1, 5]) && free(&f.u, &[2, 4]) {
        return Ok(Verdict {
            class: ClassLabel::T,
            genus: g,
            surviving,
            cycles: vec![cyc("a1", 2), cyc("a2", 4), cyc("b1", 1), cyc("b2", 5)],
            rule: "genus two: v free on s1, s5 and u free on s2, s4".into(),
            notes,
        });
    }
    if g == 3 && free(&f.u, &[2, 4, 6]) && free(&f.v, &[1, 7]) {
        return Ok(Verdict {
            class: ClassLabel::T2,
            genus: g,
            surviving,
            cycles: vec![cyc("a1", 2), cyc("a2", 7), cyc("a3", 4), cyc("b1", 1), cyc("b2", 6)],
            rule: "genus three: u free on s2, s4, s6 and v free on s1, s7".into(),
            notes,
        });
    }
    if g > 2 {
        let n = c.roots.len();
        let mut windows = vec![(0, 1)];
        windows.extend((1..g).map(|q| (2 * q + 1, 2 * q + 2)));
        windows.push((n, n + 1));
        let mut u_windows = windows.clone();
        u_windows[0] = (0, 2);
        notes.push("the window list for u follows the pattern of the list for v".into());
        if all_in(c, &f.v, &windows) && all_in(c, &f.u, &u_windows) {
            let mut cycles: Vec<Cycle> = (1..=g).map(|j| cyc(format!("a{j}"), 2 * j)).collect();
            cycles.push(cyc("b1", 1));
            cycles.push(cyc(format!("b{g}"), 2 * g + 1));
            return Ok(Verdict { class: ClassLabel::T2, genus: g, surviving, cycles, rule: "window condition".into(), notes });
        }
    }
    if let Some(segs) = half_basis(&surviving, g) {
        let cycles = segs.iter().enumerate().map(|(j, &i)| cyc(format!("a{}", j + 1), i)).collect();
        return Ok(Verdict {
            class: ClassLabel::T0,
            genus: g,
            surviving,
            cycles,
            rule: format!("{g} disjoint segments survive"),
            notes,
        });
    }
    Ok(Verdict { class: ClassLabel::Inconclusive, genus: g, surviving, cycles: vec![], rule: "too few surviving segments".into(), notes })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerturbationNote {
    pub stable: bool,
    pub reason: String,
}

/// Whether the verdict persists under a small perturbation of `u + iv`.
/// Qualitative only: no perturbation size is computed.
pub fn perturbation_bound_note(c: &RealHyperelliptic, f: &FormSpec) -> PerturbationNote {
    for (name, p) in [("u", &f.u), ("v", &f.v)] {
        for (k, z) in c.roots.iter().enumerate() {
            if !p.is_zero() && p.eval(z).is_zero() {
                return PerturbationNote { stable: false, reason: format!("{name} vanishes at z_{}", k + 1) };
            }
        }
        if p.degree().unwrap_or(0) > 0 {
            let g = gcd(p, &p.derivative());
            if g.degree().unwrap_or(0) > 0 && real_root_count(&g) > 0 {
                return PerturbationNote { stable: false, reason: format!("{name} has a multiple real zero") };
            }
        }
    }
    PerturbationNote { stable: true, reason: "all real zeros are simple and away from the branch points".into() }
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn fin(n: i64, d: i64) -> Bound {
        Bound::Finite(q(n, d))
    }

    #[test]
    fn sturm_small_cases() {
        let p = Poly::from_ints(&[2, -3, 1]);
        assert_eq!(root_count(&p, &fin(3, 2), &fin(3, 1)).unwrap(), 1);
        assert_eq!(root_count(&Poly::from_ints(&[1, 0, 1]), &fin(-10, 1), &fin(10, 1)).unwrap(), 0);
        assert!(root_count(&p, &fin(1, 1), &fin(3, 1)).is_err());
        assert_eq!(root_count(&p, &Bound::NegInf, &Bound::PosInf).unwrap(), 2);
    }

    #[test]
    fn constant_forms() {
        for g in 1..=5 {
            let roots: Vec<i64> = (1..=(2 * g as i64 + 2)).collect();
            let c = RealHyperelliptic::from_ints(&roots).unwrap();
            let v = classify_class(&c, &FormSpec::constant(1, 2)).unwrap();
            let want = if g <= 2 { ClassLabel::T } else { ClassLabel::T2 };
            assert_eq!(v.class, want, "g = {g}");
            assert!(perturbation_bound_note(&c, &FormSpec::constant(1, 2)).stable);
        }
    }

    #[test]
    fn genus_three_cycles() {
        let c = RealHyperelliptic::from_ints(&[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        let v = classify_class(&c, &FormSpec::constant(3, -1)).unwrap();
        let names: Vec<(String, usize)> = v.cycles.iter().map(|c| (c.name.clone(), c.from)).collect();
        assert_eq!(names, [("a1".into(), 2), ("a2".into(), 7), ("a3".into(), 4), ("b1".into(), 1), ("b2".into(), 6)]);
    }

    #[test]
    fn genus_two_linear_u_in_first_a_segment() {
        let c = RealHyperelliptic::from_ints(&[1, 2, 3, 4, 5, 6]).unwrap();
        // u = z - 5/2 vanishes inside s2
        let f = FormSpec { u: Poly::new(vec![q(-5, 2), q(1, 1)]), v: Poly::from_ints(&[1]) };
        let v = classify_class(&c, &f).unwrap();
        assert_eq!(v.class, ClassLabel::T0);
        assert!(!v.surviving.contains(&2));
        assert_eq!(v.cycles.len(), 2);
    }

    #[test]
    fn genus_two_always_has_a_half_basis() {
        let c = RealHyperelliptic::from_ints(&[1, 2, 3, 4, 5, 6]).unwrap();
        for a in 0..14 {
            for b in 0..14 {
                let f = FormSpec {
                    u: Poly::new(vec![-q(2 * a + 1, 4), q(1, 1)]),
                    v: Poly::new(vec![-q(2 * b + 1, 4), q(1, 1)]),
                };
                assert!(classify_class(&c, &f).unwrap().class >= ClassLabel::T0);
            }
        }
    }

    #[test]
    fn assumption_errors() {
        let c = RealHyperelliptic::from_ints(&[1, 2, 3, 4, 5, 6]).unwrap();
        let f = FormSpec { u: Poly::from_ints(&[-3, 1]), v: Poly::from_ints(&[1]) };
        assert!(matches!(classify_class(&c, &f), Err(Error::Domain(_))));
        assert!(!perturbation_bound_note(&c, &f).stable);
        let f = FormSpec { u: Poly::from_ints(&[0, 0, 1]), v: Poly::from_ints(&[1]) };
        assert!(classify_class(&c, &f).is_err());
    }

    #[test]
    fn adding_a_zero_never_upgrades() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let g = rng.gen_range(2..=4usize);
            let roots: Vec<i64> = (1..=(2 * g as i64 + 2)).map(|k| 4 * k).collect();
            let c = RealHyperelliptic::from_ints(&roots).unwrap();
            let base: Vec<i64> = (0..rng.gen_range(0..g)).map(|_| 4 * rng.gen_range(0..=2 * g as i64 + 3) + 2).collect();
            let extra = 4 * rng.gen_range(1..=2 * g as i64 + 1) + 2;
            let poly = |zs: &[i64]| Poly::from_roots(&zs.iter().map(|&z| q(z, 1)).collect::<Vec<_>>());
            let mut with: Vec<i64> = base.clone();
            with.push(extra);
            if with.len() > g - 1 {
                continue;
            }
            let v = Poly::from_ints(&[1]);
            let before = classify_class(&c, &FormSpec { u: poly(&base), v: v.clone() }).unwrap().class;
            let after = classify_class(&c, &FormSpec { u: poly(&with), v }).unwrap().class;
            assert!(after <= before, "{base:?} + {extra}: {before:?} -> {after:?}");
        }
    }
}
