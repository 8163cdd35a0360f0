//! The genus-2 measure data and its JSON form.
//!
//! ```json
//! {"field": {"d": 2}, "a1": ["1/1", "0/1"], "b1": ["0/1", "1/1"],
//!  "a2": ["0/1", "1/1"], "b2": ["1/1", "0/1"], "m": ["9/10", "0/1"]}
//! ```
//!
//! Each value is a pair `[p, q]` meaning `p + q√d`. A single string in
//! `Scalar` display form is accepted too. `field` may be omitted for rational data.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Plane {
    One,
    Two,
}

impl Plane {
    pub fn index(self) -> u8 {
        match self {
            Plane::One => 1,
            Plane::Two => 2,
        }
    }

    pub fn from_index(k: u8) -> Result<Plane> {
        match k {
            1 => Ok(Plane::One),
            2 => Ok(Plane::Two),
            _ => Err(Error::Domain(format!("plane must be 1 or 2, got {k}"))),
        }
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FoliationSpec {
    pub a1: Scalar,
    pub b1: Scalar,
    pub a2: Scalar,
    pub b2: Scalar,
    pub m: Scalar,
}

/// One failed invariant, named for machine consumption.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub name: String,
    pub detail: String,
}

impl FoliationSpec {
    pub fn new(a1: Scalar, b1: Scalar, a2: Scalar, b2: Scalar, m: Scalar) -> Self {
        FoliationSpec { a1, b1, a2, b2, m }
    }

    /// `(|a_k|, |b_k|)` for the given plane.
    pub fn torus(&self, plane: Plane) -> (&Scalar, &Scalar) {
        match plane {
            Plane::One => (&self.a1, &self.b1),
            Plane::Two => (&self.a2, &self.b2),
        }
    }

    fn values(&self) -> [(&'static str, &Scalar); 5] {
        [("a1", &self.a1), ("b1", &self.b1), ("a2", &self.a2), ("b2", &self.b2), ("m", &self.m)]
    }

    /// Common quadratic field of the data, `None` if everything is rational.
    pub fn field(&self) -> Result<Option<u64>> {
        let mut d = None;
        for (_, v) in self.values() {
            match (d, v.field()) {
                (Some(x), Some(y)) if x != y => return Err(Error::FieldMismatch { left: x, right: y }),
                (None, Some(y)) => d = Some(y),
                _ => {}
            }
        }
        Ok(d)
    }

    /// Every violated invariant. Empty means valid.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if let Err(e) = self.field() {
            out.push(Violation { name: "field".into(), detail: e.to_string() });
            return out;
        }
        for (name, v) in self.values() {
            if !v.is_positive() {
                out.push(Violation { name: format!("{name}_positive"), detail: format!("{name} = {v} is not > 0") });
            }
        }
        for plane in [Plane::One, Plane::Two] {
            let (a, b) = self.torus(plane);
            let sum = a + b;
            if self.m >= sum {
                out.push(Violation {
                    name: "m_range".into(),
                    detail: format!("m = {} is not < |a{plane}| + |b{plane}| = {sum}", self.m),
                });
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSpec(v.into_iter().map(|v| v.name).collect()))
        }
    }

    pub fn to_json(&self) -> Value {
        let d = self.field().ok().flatten().unwrap_or(1);
        let pair = |s: &Scalar| {
            let r = |x: &BigRational| format!("{}/{}", x.numer(), x.denom());
            json!([r(s.rational_part()), r(s.surd_part())])
        };
        json!({
            "field": {"d": d},
            "a1": pair(&self.a1),
            "b1": pair(&self.b1),
            "a2": pair(&self.a2),
            "b2": pair(&self.b2),
            "m": pair(&self.m),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let d = match v.get("field") {
            None | Some(Value::Null) => 1,
            Some(f) => f
                .get("d")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse("field.d must be a positive integer".into()))?,
        };
        let get = |name: &str| -> Result<Scalar> {
            let x = v.get(name).ok_or_else(|| Error::Parse(format!("missing {name}")))?;
            scalar_from_json(x, d).map_err(|e| Error::Parse(format!("{name}: {e}")))
        };
        Ok(FoliationSpec { a1: get("a1")?, b1: get("b1")?, a2: get("a2")?, b2: get("b2")?, m: get("m")? })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        FoliationSpec::from_json(&v)
    }
}

fn parse_q(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => {
            let x: Scalar = s.parse()?;
            if !x.is_rational() {
                return Err(Error::Parse(format!("expected a rational, got {s:?}")));
            }
            Ok(x.rational_part().clone())
        }
        Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(BigInt::from(n.as_i64().unwrap()))),
        _ => Err(Error::Parse(format!("expected \"num/den\", got {v}"))),
    }
}

fn scalar_from_json(v: &Value, d: u64) -> Result<Scalar> {
    match v {
        Value::Array(items) if items.len() == 2 => {
            let p = parse_q(&items[0])?;
            let q = parse_q(&items[1])?;
            if !q.is_zero() && d == 1 {
                return Err(Error::Parse("irrational part given for a rational field".into()));
            }
            Scalar::quadratic(p, q, d)
        }
        Value::String(s) => {
            let x: Scalar = s.parse()?;
            match x.field() {
                Some(e) if e != d => Err(Error::FieldMismatch { left: d, right: e }),
                _ => Ok(x),
            }
        }
        Value::Number(_) => Ok(Scalar::rational(parse_q(v)?)),
        _ => Err(Error::Parse(format!("bad scalar {v}"))),
    }
}
