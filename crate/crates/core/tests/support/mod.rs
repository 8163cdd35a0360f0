//! Helpers shared by the integration tests.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use streetflow::Scalar;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random point of `(0, m)` in the field of `m`.
pub fn random_point<R: Rng>(rng: &mut R, m: &Scalar) -> Scalar {
    m * &Scalar::ratio(rng.gen_range(1..10_007), 10_007)
}

/// All complex roots of a real polynomial (coefficients lowest first) by
/// Durand-Kerner iteration in plain `f64` pairs.
pub fn numeric_roots(c: &[f64]) -> Vec<(f64, f64)> {
    let n = c.len() - 1;
    let lead = c[n];
    let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let div = |a: (f64, f64), b: (f64, f64)| {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    let eval = |z: (f64, f64)| {
        c.iter().rev().fold((0.0, 0.0), |acc, &k| {
            let m = mul(acc, z);
            (m.0 + k / lead, m.1)
        })
    };
    let mut z = Vec::with_capacity(n);
    let mut w = (1.0, 0.0);
    for _ in 0..n {
        z.push(w);
        w = mul(w, (0.4, 0.9));
    }
    for _ in 0..2000 {
        for i in 0..n {
            let mut den = (1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den = mul(den, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let step = div(eval(z[i]), den);
            z[i] = (z[i].0 - step.0, z[i].1 - step.1);
        }
    }
    z
}
