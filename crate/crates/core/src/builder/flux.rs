//! Flux bookkeeping for the genus-4 maximal diagrams with a single cycle.
//!
//! From the North pole one sees transitions `A_k -> A_l` for `k` in {1, 3} and
//! `l` in {2, 4}; from the South pole the reverse ones.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const NORTH: [(u8, u8); 4] = [(1, 2), (1, 4), (3, 2), (3, 4)];
pub const SOUTH: [(u8, u8); 4] = [(2, 1), (2, 3), (4, 1), (4, 3)];

/// Pairs whose difference must equal the common asymmetry.
const ASYMMETRY: [((u8, u8), (u8, u8)); 4] = [((1, 2), (2, 1)), ((2, 3), (3, 2)), ((3, 4), (4, 3)), ((4, 1), (1, 4))];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Clockwise,
    CounterClockwise,
    /// Zero flux; the data is not generic.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flux {
    pub m: Scalar,
    pub direction: Direction,
}

pub type Transitions = BTreeMap<(u8, u8), Scalar>;

pub fn flux_check(measures: &Transitions, a: &[Scalar; 4]) -> Result<Flux> {
    let visible: Vec<(u8, u8)> = NORTH.iter().chain(SOUTH.iter()).copied().collect();
    for key in measures.keys() {
        if !visible.contains(key) {
            return Err(Error::Inconsistent(format!("visibility: transition {}->{} is not visible", key.0, key.1)));
        }
    }
    let get = |k: u8, l: u8| {
        measures
            .get(&(k, l))
            .cloned()
            .ok_or_else(|| Error::Inconsistent(format!("visibility: transition {k}->{l} is missing")))
    };
    for (&(k, l), x) in measures {
        if x.is_negative() {
            return Err(Error::Inconsistent(format!("positivity: m{k}{l} < 0")));
        }
    }

    let alt = &(&(&a[0] - &a[1]) + &a[2]) - &a[3];
    if !alt.is_zero() {
        return Err(Error::Inconsistent(format!("alternating sum: A1 - A2 + A3 - A4 = {alt}")));
    }

    for k in 1..=4u8 {
        let targets: Vec<u8> = visible.iter().filter(|p| p.0 == k).map(|p| p.1).collect();
        let sources: Vec<u8> = visible.iter().filter(|p| p.1 == k).map(|p| p.0).collect();
        let mut out = Scalar::zero();
        for l in targets {
            out = &out + &get(k, l)?;
        }
        let mut inflow = Scalar::zero();
        for l in sources {
            inflow = &inflow + &get(l, k)?;
        }
        let ak = &a[k as usize - 1];
        if &out != ak {
            return Err(Error::Inconsistent(format!("conservation: outflow of A{k} is {out}, not {ak}")));
        }
        if &inflow != ak {
            return Err(Error::Inconsistent(format!("conservation: inflow of A{k} is {inflow}, not {ak}")));
        }
    }

    let mut m: Option<Scalar> = None;
    for ((k, l), (l2, k2)) in ASYMMETRY {
        let d = &get(k, l)? - &get(l2, k2)?;
        match &m {
            None => m = Some(d),
            Some(x) if *x != d => {
                return Err(Error::Inconsistent(format!("asymmetry: m{k}{l} - m{l2}{k2} = {d}, expected {x}")));
            }
            _ => {}
        }
    }
    let m = m.expect("four pairs");
    let direction = if m.is_positive() {
        Direction::Clockwise
    } else if m.is_negative() {
        Direction::CounterClockwise
    } else {
        Direction::Degenerate
    };
    Ok(Flux { m, direction })
}

/// Transition measures carrying flux `m` on top of symmetric parts `s`.
pub fn planted(m: &Scalar, s: &[Scalar; 4]) -> (Transitions, [Scalar; 4]) {
    let mut t = Transitions::new();
    for (i, ((k, l), (l2, k2))) in ASYMMETRY.into_iter().enumerate() {
        t.insert((k, l), &s[i] + m);
        t.insert((l2, k2), s[i].clone());
    }
    let a = [
        &(&s[0] + &s[3]) + m,
        &(&s[0] + &s[1]) + m,
        &(&s[1] + &s[2]) + m,
        &(&s[2] + &s[3]) + m,
    ];
    (t, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn ints(x: [i64; 4]) -> [Scalar; 4] {
        x.map(Scalar::from_int)
    }

    #[test]
    fn planted_flux_is_recovered() {
        let (t, a) = planted(&q(1, 7), &ints([1, 2, 3, 4]));
        let f = flux_check(&t, &a).unwrap();
        assert_eq!(f.m, q(1, 7));
        assert_eq!(f.direction, Direction::Clockwise);
        let (t, a) = planted(&q(-1, 3), &ints([1, 2, 3, 4]));
        assert_eq!(flux_check(&t, &a).unwrap().direction, Direction::CounterClockwise);
    }

    #[test]
    fn symmetric_measures_are_degenerate() {
        let (t, a) = planted(&Scalar::zero(), &ints([2, 1, 1, 2]));
        assert_eq!(flux_check(&t, &a).unwrap().direction, Direction::Degenerate);
    }

    #[test]
    fn alternating_sum_is_checked_first() {
        let (t, _) = planted(&q(1, 7), &ints([1, 2, 3, 4]));
        let err = flux_check(&t, &ints([3, 1, 2, 5])).unwrap_err();
        assert!(err.to_string().contains("alternating sum"), "{err}");
    }

    #[test]
    fn broken_conservation_is_named() {
        let (mut t, a) = planted(&q(1, 7), &ints([1, 2, 3, 4]));
        let x = t.get_mut(&(1, 2)).unwrap();
        *x = &*x + &q(1, 100);
        let err = flux_check(&t, &a).unwrap_err();
        assert!(err.to_string().contains("conservation"), "{err}");
    }

    #[test]
    fn conservation_forces_a_common_asymmetry() {
        // shifting flux around the cycle keeps every identity and changes m
        let (mut t, a) = planted(&q(1, 7), &ints([1, 2, 3, 4]));
        let e = q(1, 100);
        for key in [(1, 2), (3, 4), (4, 1), (2, 3)] {
            let x = t.get_mut(&key).unwrap();
            *x = &*x + &e;
        }
        for key in [(1, 4), (3, 2), (2, 1), (4, 3)] {
            let x = t.get_mut(&key).unwrap();
            *x = &*x - &e;
        }
        assert_eq!(flux_check(&t, &a).unwrap().m, &q(1, 7) + &q(2, 100));
    }

    #[test]
    fn invisible_transition_is_rejected() {
        let (mut t, a) = planted(&q(1, 7), &ints([1, 2, 3, 4]));
        t.insert((1, 3), Scalar::one());
        assert!(flux_check(&t, &a).unwrap_err().to_string().contains("visibility"));
    }
}
