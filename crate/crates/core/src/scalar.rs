//! Exact arithmetic in Q and in real quadratic fields Q(√d).
//!
//! A [`Scalar`] is `p + q√d` with rational `p`, `q`. Rationals carry `q = 0`
//! and may be mixed freely with any quadratic field; two irrational values
//! from different fields cannot be combined.
//!
//! The `std::ops` impls panic on a field mismatch. Use the `try_*` methods
//! where the operands have not been checked to share a field.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    p: BigRational,
    q: BigRational,
    // 1 whenever q == 0
    d: u64,
}

pub fn is_square_free(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= d {
        if d.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { p: BigRational::zero(), q: BigRational::zero(), d: 1 }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::rational(BigRational::from_integer(n))
    }

    /// `n / d` as a rational scalar. Panics if `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::rational(rat(n, d))
    }

    pub fn rational(p: BigRational) -> Self {
        Scalar { p, q: BigRational::zero(), d: 1 }
    }

    /// `p + q√d`. `d` must be square-free and at least 2, unless `q` is zero.
    pub fn quadratic(p: BigRational, q: BigRational, d: u64) -> Result<Self> {
        if q.is_zero() {
            return Ok(Scalar::rational(p));
        }
        if !is_square_free(d) {
            return Err(Error::Domain(format!("{d} is not a square-free integer >= 2")));
        }
        Ok(Scalar { p, q, d })
    }

    /// √d for square-free `d >= 2`.
    pub fn sqrt(d: u64) -> Result<Self> {
        Scalar::quadratic(BigRational::zero(), BigRational::one(), d)
    }

    /// Convenience constructor `(pn/pd) + (qn/qd)√d`. Panics on a bad `d`.
    pub fn surd(pn: i64, pd: i64, qn: i64, qd: i64, d: u64) -> Self {
        Scalar::quadratic(rat(pn, pd), rat(qn, qd), d).expect("valid quadratic field")
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.p
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.q
    }

    /// The square-free radicand, or `None` for a rational value.
    pub fn field(&self) -> Option<u64> {
        if self.q.is_zero() {
            None
        } else {
            Some(self.d)
        }
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    fn common_field(&self, other: &Scalar) -> Result<u64> {
        match (self.field(), other.field()) {
            (Some(a), Some(b)) if a != b => Err(Error::FieldMismatch { left: a, right: b }),
            (Some(a), _) | (None, Some(a)) => Ok(a),
            (None, None) => Ok(1),
        }
    }

    fn build(p: BigRational, q: BigRational, d: u64) -> Scalar {
        if q.is_zero() {
            Scalar::rational(p)
        } else {
            Scalar { p, q, d }
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        let d = self.common_field(other)?;
        Ok(Scalar::build(&self.p + &other.p, &self.q + &other.q, d))
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        let d = self.common_field(other)?;
        Ok(Scalar::build(&self.p - &other.p, &self.q - &other.q, d))
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        let d = self.common_field(other)?;
        let dd = BigRational::from_integer(BigInt::from(d));
        let p = &self.p * &other.p + &self.q * &other.q * dd;
        let q = &self.p * &other.q + &self.q * &other.p;
        Ok(Scalar::build(p, q, d))
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        let inv = other.recip()?;
        self.try_mul(&inv)
    }

    /// Multiplicative inverse; errors on zero.
    pub fn recip(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        if self.q.is_zero() {
            return Ok(Scalar::rational(self.p.recip()));
        }
        // (p - q√d) / (p² - d q²); the norm is nonzero because d is not a square
        let dd = BigRational::from_integer(BigInt::from(self.d));
        let norm = &self.p * &self.p - &self.q * &self.q * dd;
        Ok(Scalar::build(&self.p / &norm, -&self.q / &norm, self.d))
    }

    /// Sign of the value, decided with rational arithmetic only.
    pub fn signum(&self) -> Ordering {
        let sp = self.p.cmp(&BigRational::zero());
        let sq = self.q.cmp(&BigRational::zero());
        if sq == Ordering::Equal {
            return sp;
        }
        if sp == Ordering::Equal || sp == sq {
            return sq;
        }
        // opposite signs: |p| vs |q|√d, compared through squares
        let dd = BigRational::from_integer(BigInt::from(self.d));
        match (&self.p * &self.p).cmp(&(&self.q * &self.q * dd)) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => unreachable!("p² = d q² with square-free d"),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn try_cmp(&self, other: &Scalar) -> Result<Ordering> {
        Ok(self.try_sub(other)?.signum())
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        // rational approximation within 1 of the true value, then exact correction
        let mut n = if self.q.is_zero() {
            self.p.floor().to_integer()
        } else {
            let dd = BigRational::from_integer(BigInt::from(self.d));
            let sq = &self.q * &self.q * dd;
            let (num, den) = (sq.numer().clone(), sq.denom().clone());
            let root = (&num * &den).sqrt();
            let approx = BigRational::new(root, den);
            let surd = if self.q.is_negative() { -approx } else { approx };
            (&self.p + surd).floor().to_integer()
        };
        loop {
            if Scalar::from_bigint(n.clone()) > *self {
                n -= 1;
            } else if Scalar::from_bigint(&n + 1) <= *self {
                n += 1;
            } else {
                return n;
            }
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        if self.q.is_zero() {
            p
        } else {
            p + self.q.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
        }
    }

    /// Scale by an integer.
    pub fn times(&self, k: i64) -> Scalar {
        let k = BigRational::from_integer(BigInt::from(k));
        Scalar::build(&self.p * &k, &self.q * &k, self.d)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", fmt_rat(&self.p));
        }
        let sign = if self.q.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}√{}", fmt_rat(&self.p), sign, fmt_rat(&self.q.abs()), self.d)
    }
}

fn parse_rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else if let Some((i, frac)) = s.split_once('.') {
        let neg = i.trim_start().starts_with('-');
        let int = if i.is_empty() || i == "-" { BigInt::zero() } else { BigInt::from_str(i).map_err(|_| bad())? };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let f = BigInt::from_str(frac).map_err(|_| bad())?;
        let mag = BigRational::new(int.abs() * &scale + f, scale);
        Ok(if neg { -mag } else { mag })
    } else {
        Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?))
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `"n/d"`, `"n"`, a decimal, or `"n/d±r/s√k"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some(root_at) = s.find('√') else {
            return Ok(Scalar::rational(parse_rat(s)?));
        };
        let d: u64 = s[root_at + '√'.len_utf8()..]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad radicand in {s:?}")))?;
        let head = &s[..root_at];
        // split at the last sign that is not the leading one
        let split = head
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        let (p, q) = match split {
            Some(i) => (parse_rat(&head[..i])?, parse_rat(head[i..].trim_start_matches('+'))?),
            None => {
                let coeff = head.trim();
                let q = match coeff {
                    "" | "+" => BigRational::one(),
                    "-" => -BigRational::one(),
                    _ => parse_rat(coeff)?,
                };
                (BigRational::zero(), q)
            }
        };
        Scalar::quadratic(p, q, d)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    /// Panics on a field mismatch.
    fn cmp(&self, other: &Self) -> Ordering {
        self.try_cmp(other).expect("scalar comparison across fields")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                self.$try(rhs).expect("scalar arithmetic across fields")
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::build(-&self.p, -&self.q, self.d)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl<'a> std::iter::Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Greatest common divisor of two machine integers.
pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn compares_one_plus_root_two_with_two() {
        assert_eq!(s("1+1√2").cmp(&Scalar::from_int(2)), Ordering::Greater);
        assert_eq!(Scalar::zero().cmp(&Scalar::zero()), Ordering::Equal);
    }

    #[test]
    fn cancellation_is_exact() {
        let x = s("2-1√2") + s("-1+1√2");
        assert_eq!(x, Scalar::one());
        assert!(x.is_rational());
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let e = Scalar::sqrt(2).unwrap().try_cmp(&Scalar::sqrt(3).unwrap()).unwrap_err();
        assert_eq!(e, Error::FieldMismatch { left: 2, right: 3 });
        // rationals mix with anything
        assert!(Scalar::ratio(1, 2).try_add(&Scalar::sqrt(3).unwrap()).is_ok());
    }

    #[test]
    fn sign_with_opposite_parts() {
        assert!(s("3/2-1√2").is_positive());
        assert!(s("7/5-1√2").is_negative());
        assert!(s("-3/2+1√2").is_negative());
        assert!(s("-7/5+1√2").is_positive());
    }

    #[test]
    fn reciprocal_round_trips() {
        let x = s("3/7-2/5√2");
        assert_eq!(&x * &x.recip().unwrap(), Scalar::one());
        assert!(Scalar::zero().recip().is_err());
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(Scalar::sqrt(2).unwrap().floor(), BigInt::from(1));
        assert_eq!((-Scalar::sqrt(2).unwrap()).floor(), BigInt::from(-2));
        assert_eq!(s("19/10-1√2").floor(), BigInt::from(0));
        assert_eq!(Scalar::from_int(3).floor(), BigInt::from(3));
        assert_eq!(Scalar::sqrt(2).unwrap().ceil(), BigInt::from(2));
        let big = s("1000000/3+12345/7√5");
        let f = big.floor();
        assert!(Scalar::from_bigint(f.clone()) <= big);
        assert!(Scalar::from_bigint(f + 1) > big);
    }

    #[test]
    fn display_parse_round_trip() {
        for text in ["9/10", "-3/4", "0/1", "19/10-1/1√2", "0/1+1/1√2"] {
            assert_eq!(s(text).to_string(), text);
        }
        assert_eq!(s("√2"), Scalar::sqrt(2).unwrap());
        assert_eq!(s("0.9"), Scalar::ratio(9, 10));
        assert!("1+2√4".parse::<Scalar>().is_err());
    }
}
