//! Random generic specs over a real quadratic field, used by tests and the CLI.

use rand::Rng;

use crate::error::Error;
use crate::scalar::Scalar;
use crate::spec::{FoliationSpec, Plane};
use crate::streets::street_triple;
use crate::transition::build_transition;

/// `(i + j√2) / k` with small positive coefficients.
pub fn random_measure<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    random_measure_in(rng, 2)
}

/// `(i + j√d) / k` for square-free `d >= 2`.
pub fn random_measure_in<R: Rng + ?Sized>(rng: &mut R, d: u64) -> Scalar {
    let i = rng.gen_range(0..=20);
    let j = rng.gen_range(1..=12);
    let k = rng.gen_range(1..=12);
    Scalar::surd(i, k, j, k, d)
}

/// A valid spec over Q(√2), not checked for genericity.
pub fn random_spec<R: Rng + ?Sized>(rng: &mut R) -> FoliationSpec {
    random_spec_in(rng, 2)
}

pub fn random_spec_in<R: Rng + ?Sized>(rng: &mut R, d: u64) -> FoliationSpec {
    let mut draw = || random_measure_in(rng, d);
    let (a1, b1, a2, b2) = (draw(), draw(), draw(), draw());
    let cap = (&a1 + &b1).min(&a2 + &b2);
    let t = Scalar::ratio(rng.gen_range(1..20), 20);
    let m = &cap * &t;
    FoliationSpec::new(a1, b1, a2, b2, m)
}

/// A spec over Q(√2) whose streets and transition are all generic.
pub fn random_generic_spec<R: Rng + ?Sized>(rng: &mut R) -> FoliationSpec {
    random_generic_spec_in(rng, 2)
}

/// Generic spec over Q(√d). Irrational data is generic with probability one,
/// so the rejection loop ends quickly.
pub fn random_generic_spec_in<R: Rng + ?Sized>(rng: &mut R, d: u64) -> FoliationSpec {
    loop {
        let s = random_spec_in(rng, d);
        let ok = (|| -> Result<(), Error> {
            let t1 = street_triple(&s, Plane::One)?;
            let t2 = street_triple(&s, Plane::Two)?;
            build_transition(&t1, &t2)?;
            Ok(())
        })();
        if ok.is_ok() {
            return s;
        }
    }
}
