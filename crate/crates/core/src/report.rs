//! Report rendering: rationals as `{"exact": "num/den", "decimal": f64}` in
//! JSON, and as an exact/decimal column pair in CSV.

use serde::Serialize;
use serde_json::{json, Value};

use crate::rational::{self, Rational};

/// JSON rendering of one rational.
pub fn value(r: &Rational) -> Value {
    json!({ "exact": rational::format(r), "decimal": rational::to_f64(r) })
}

/// The two CSV cells for one rational.
pub fn cells(r: &Rational) -> [String; 2] {
    [rational::format(r), decimal(rational::to_f64(r))]
}

/// Shortest round-trip decimal rendering.
pub fn decimal(v: f64) -> String {
    format!("{v}")
}

pub mod exact {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        value(r).serialize(s)
    }
}

pub mod exact_opt {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(value).serialize(s)
    }
}

pub mod exact_opt_vec {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &[Option<Rational>], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|r| r.as_ref().map(value)).collect::<Vec<_>>().serialize(s)
    }
}

/// Outcome of a `verify` run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub theorem: String,
    pub inputs: Value,
    pub computed: Value,
    pub bound: Value,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Verdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }
}
