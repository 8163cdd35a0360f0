//! Freely reduced words in a free group on a small indexed alphabet.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A generator index with an exponent of +1 or -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u8,
    pub inv: bool,
}

impl Letter {
    pub const fn pos(gen: u8) -> Letter {
        Letter { gen, inv: false }
    }

    pub const fn neg(gen: u8) -> Letter {
        Letter { gen, inv: true }
    }

    pub fn inverse(self) -> Letter {
        Letter { gen: self.gen, inv: !self.inv }
    }
}

/// Names for the generators, used for display and parsing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alphabet(pub &'static [&'static str]);

pub const SURFACE: Alphabet = Alphabet(&["A1", "B1", "A2", "B2"]);
pub const PRIMED: Alphabet = Alphabet(&["a'", "b'"]);
pub const TORUS: Alphabet = Alphabet(&["a", "b"]);

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    /// Reduces its input.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = FreeWord::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn gen(g: u8) -> Self {
        FreeWord { letters: vec![Letter::pos(g)] }
    }

    pub fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        for &l in &other.letters {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(FreeWord::identity(), |acc, _| acc.mul(&base))
    }

    pub fn commutator(x: &FreeWord, y: &FreeWord) -> FreeWord {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    /// Exponent sums per generator.
    pub fn abelianize(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0; rank];
        for l in &self.letters {
            v[l.gen as usize] += if l.inv { -1 } else { 1 };
        }
        v
    }

    /// True if no inverse letter occurs.
    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| !l.inv)
    }

    /// Cyclic rotation by `k` letters to the left (no reduction across the seam).
    pub fn rotate(&self, k: usize) -> FreeWord {
        let mut v = self.letters.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        FreeWord { letters: v }
    }

    pub fn display(&self, alphabet: Alphabet) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        self.letters
            .iter()
            .map(|l| {
                let name = alphabet.0[l.gen as usize];
                if l.inv {
                    format!("{name}^-1")
                } else {
                    name.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Compact form without separators, positive words only make sense here: `b'a'b'`.
    pub fn compact(&self, alphabet: Alphabet) -> String {
        self.display(alphabet).replace(' ', "")
    }

    /// Parse whitespace-separated tokens like `A1 B1^-1`; `1` is the identity.
    pub fn parse(s: &str, alphabet: Alphabet) -> Result<FreeWord> {
        let mut w = FreeWord::identity();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, inv) = match tok.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            let g = alphabet
                .0
                .iter()
                .position(|n| *n == name)
                .ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))?;
            w.push(Letter { gen: g as u8, inv });
        }
        Ok(w)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display(SURFACE))
    }
}

impl Serialize for FreeWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_word() -> impl Strategy<Value = FreeWord> {
        prop::collection::vec((0u8..4, any::<bool>()), 0..12)
            .prop_map(|v| FreeWord::new(v.into_iter().map(|(gen, inv)| Letter { gen, inv })))
    }

    #[test]
    fn parse_display_round_trip() {
        let w = FreeWord::parse("A1 B1 A1^-1 B1^-1", SURFACE).unwrap();
        assert_eq!(w.to_string(), "A1 B1 A1^-1 B1^-1");
        assert!(FreeWord::parse("A1 A1^-1", SURFACE).unwrap().is_identity());
        assert!(FreeWord::parse("C3", SURFACE).is_err());
    }

    proptest! {
        #[test]
        fn reduction_is_associative_and_abelianization_is_additive(x in arb_word(), y in arb_word(), z in arb_word()) {
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert!(x.mul(&x.inverse()).is_identity());
            let sum: Vec<i64> = x.abelianize(4).iter().zip(y.abelianize(4)).map(|(a, b)| a + b).collect();
            prop_assert_eq!(x.mul(&y).abelianize(4), sum);
            for w in x.letters().windows(2) {
                prop_assert_ne!(w[0], w[1].inverse());
            }
        }
    }
}
