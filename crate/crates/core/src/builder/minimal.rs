//! The three families of minimal plane diagrams (no saddles on the sphere).

use serde::Serialize;

use super::{Edge, Event, MorseTree};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum MinimalType {
    /// Segments 1 and 2 both run from the lower center to the upper one.
    A,
    /// Segments 1, 2 start at the lower center, 3, 4 stop at the upper one.
    B,
    /// Segments 1, 2 start at the lower center, 2, 3 stop at the upper one.
    C,
}

impl MinimalType {
    pub const ALL: [MinimalType; 3] = [MinimalType::A, MinimalType::B, MinimalType::C];

    pub fn min_genus(self) -> usize {
        match self {
            MinimalType::A => 2,
            MinimalType::B => 4,
            MinimalType::C => 3,
        }
    }

    pub fn label(self) -> char {
        match self {
            MinimalType::A => 'a',
            MinimalType::B => 'b',
            MinimalType::C => 'c',
        }
    }
}

fn h(n: usize) -> Scalar {
    Scalar::from_int(n as i64)
}

/// Diagram of the given type, padded with free segments up to genus `g`.
pub fn diagram(ty: MinimalType, g: usize) -> Result<MorseTree> {
    if g < ty.min_genus() {
        return Err(Error::Domain(format!("type {} needs g >= {}", ty.label(), ty.min_genus())));
    }
    let mut events = match ty {
        MinimalType::A => vec![],
        MinimalType::B => vec![
            Event::Appear { height: h(1), marker: 3, position: 1 },
            Event::Appear { height: h(2), marker: 4, position: 2 },
            Event::Disappear { height: h(5), marker: 1 },
            Event::Disappear { height: h(6), marker: 2 },
        ],
        MinimalType::C => vec![
            Event::Appear { height: h(1), marker: 3, position: 2 },
            Event::Disappear { height: h(2), marker: 1 },
        ],
    };
    let first_free = ty.min_genus() + 1;
    for j in first_free..=g {
        events.push(Event::Appear { height: h(20 + j), marker: j as u32, position: 1 });
    }
    for j in first_free..=g {
        events.push(Event::Disappear { height: h(40 + j), marker: j as u32 });
    }
    Ok(MorseTree {
        heights: vec![h(0), h(60 + g)],
        edges: vec![Edge { lower: 0, upper: 1, bottom: vec![1, 2], events }],
    })
}

/// Every minimal type available in genus `g`.
pub fn minimal_types(g: usize) -> Result<Vec<(MinimalType, MorseTree)>> {
    if g < 2 {
        return Err(Error::Domain(format!("genus {g} < 2")));
    }
    MinimalType::ALL
        .into_iter()
        .filter(|t| g >= t.min_genus())
        .map(|t| Ok((t, diagram(t, g)?)))
        .collect()
}
