//! File formats for distributions and functions. Rationals are exact
//! `"num/den"` strings; output is compact and canonical, so parsing and
//! re-serializing a canonical file reproduces it byte for byte.

use std::collections::BTreeMap;

use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::boolfn::{Builtin, BuiltinKind, DenseTable, PartialTable, PlayerFunction, UpwardClosure};
use crate::dist::{Alphabet, Distribution, ExplicitDist, Outcome, ProductDist};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Serialize, Deserialize)]
struct Point {
    x: Vec<u8>,
    w: String,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum DistFile {
    Explicit { alphabet: Vec<String>, n: usize, support: Vec<Point> },
    Product { alphabet: Vec<String>, n: usize, marginals: Vec<Vec<String>> },
}

fn parse_all(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| rational::parse(s)).collect()
}

fn format_all(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational::format).collect()
}

pub fn dist_from_str(s: &str) -> Result<Distribution> {
    Ok(match serde_json::from_str::<DistFile>(s)? {
        DistFile::Explicit { alphabet, n, support } => {
            let support = support
                .into_iter()
                .map(|p| Ok((Outcome(p.x), rational::parse(&p.w)?)))
                .collect::<Result<_>>()?;
            ExplicitDist::new(Alphabet::new(alphabet)?, n, support)?.into()
        }
        DistFile::Product { alphabet, n, marginals } => {
            let marginals = marginals.iter().map(|m| parse_all(m)).collect::<Result<_>>()?;
            ProductDist::new(Alphabet::new(alphabet)?, n, marginals)?.into()
        }
    })
}

pub fn dist_to_string(d: &Distribution) -> String {
    let file = match d {
        Distribution::Explicit(e) => DistFile::Explicit {
            alphabet: e.alphabet().symbols().to_vec(),
            n: e.n(),
            support: e
                .support()
                .iter()
                .map(|(x, w)| Point { x: x.0.clone(), w: rational::format(w) })
                .collect(),
        },
        Distribution::Product(p) => DistFile::Product {
            alphabet: p.alphabet().symbols().to_vec(),
            n: p.n(),
            marginals: p.marginals().iter().map(|m| format_all(m)).collect(),
        },
    };
    serde_json::to_string(&file).expect("distribution serializes")
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Params {
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    player: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
}

/// Table values in outcome order; keys are rendered outcomes.
struct Values(Vec<(String, String)>);

impl Serialize for Values {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum FnOut {
    Table { alphabet: Vec<String>, n: usize, values: Values },
    Builtin { name: &'static str, params: Params },
    Upward { n: usize, generators: Vec<Vec<u8>> },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum FnIn {
    Table { alphabet: Vec<String>, n: usize, values: BTreeMap<String, String> },
    Builtin { name: String, params: Params },
    Upward { n: usize, generators: Vec<Vec<u8>> },
}

/// Parses a function file. A table covering every point of `S^n` becomes a
/// dense table; otherwise it stays partial and evaluating it off the listed
/// points is an error.
pub fn function_from_str(s: &str) -> Result<PlayerFunction> {
    match serde_json::from_str::<FnIn>(s)? {
        FnIn::Table { alphabet, n, values } => {
            let alphabet = Alphabet::new(alphabet)?;
            let mut pt = PartialTable::new(alphabet.clone(), n);
            for (k, v) in &values {
                pt.insert(alphabet.parse_outcome(k)?, rational::parse(v)?)?;
            }
            if alphabet.len().checked_pow(n as u32) == Some(pt.values().len()) {
                let values = pt.values().values().cloned().collect();
                return Ok(DenseTable::new(alphabet, n, values)?.into());
            }
            Ok(pt.into())
        }
        FnIn::Builtin { name, params } => builtin(&name, &params).map(Into::into),
        FnIn::Upward { n, generators } => {
            let gens: Vec<Outcome> = generators.into_iter().map(Outcome).collect();
            Ok(UpwardClosure::new(n, &gens)?.into())
        }
    }
}

fn builtin(name: &str, params: &Params) -> Result<Builtin> {
    let n = params.n;
    let b = match name {
        "majp" => Builtin::majp(n),
        "parity" => Builtin::parity(n),
        "majority" => Builtin::majority(n),
        "dictator" => Builtin::dictator(
            n,
            params.player.ok_or_else(|| Error::Parse("dictator needs params.player".into()))?,
        ),
        "constant" => Builtin::constant(
            n,
            rational::parse(params.value.as_deref().ok_or_else(|| Error::Parse("constant needs params.value".into()))?)?,
        ),
        other => return Err(Error::Parse(format!("unknown builtin {other:?}"))),
    };
    b.validate()?;
    Ok(b)
}

/// Parses a command-line builtin spec such as `majp:9`, `dictator:5:0` or
/// `constant:3:1/2`.
pub fn builtin_from_spec(spec: &str) -> Result<Builtin> {
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or_default();
    let bad = || Error::Parse(format!("bad builtin spec {spec:?}"));
    let n = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let extra = parts.next();
    if parts.next().is_some() {
        return Err(bad());
    }
    let mut params = Params { n, ..Params::default() };
    match name {
        "dictator" => params.player = Some(extra.ok_or_else(bad)?.parse().map_err(|_| bad())?),
        "constant" => params.value = Some(extra.ok_or_else(bad)?.to_string()),
        _ if extra.is_some() => return Err(bad()),
        _ => {}
    }
    builtin(name, &params)
}

pub fn function_to_string(f: &PlayerFunction) -> String {
    let table = |alphabet: &Alphabet, n: usize, entries: Vec<(String, String)>| FnOut::Table {
        alphabet: alphabet.symbols().to_vec(),
        n,
        values: Values(entries),
    };
    let out = match f {
        PlayerFunction::Table(t) => table(
            t.alphabet(),
            t.n(),
            t.values()
                .iter()
                .enumerate()
                .map(|(i, v)| (t.alphabet().render(&t.outcome(i)), rational::format(v)))
                .collect(),
        ),
        PlayerFunction::Partial(p) => table(
            p.alphabet(),
            p.n(),
            p.values().iter().map(|(x, v)| (p.alphabet().render(x), rational::format(v))).collect(),
        ),
        PlayerFunction::Builtin(b) => {
            let mut params = Params { n: b.n, ..Params::default() };
            match &b.kind {
                BuiltinKind::Dictator(i) => params.player = Some(*i),
                BuiltinKind::Constant(c) => params.value = Some(rational::format(c)),
                _ => {}
            }
            FnOut::Builtin { name: b.name(), params }
        }
        PlayerFunction::Upward(u) => {
            FnOut::Upward { n: u.n(), generators: u.generators().into_iter().map(|g| g.0).collect() }
        }
    };
    serde_json::to_string(&out).expect("function serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{hadamard_mu, majp_dist};
    use crate::rational::{int, rat};

    #[test]
    fn explicit_round_trip_is_byte_identical() {
        let d: Distribution = hadamard_mu(2).unwrap().into();
        let s = dist_to_string(&d);
        assert_eq!(
            s,
            r#"{"kind":"explicit","alphabet":["0","1"],"n":3,"support":[{"x":[0,0,0],"w":"1/4"},{"x":[0,1,1],"w":"1/4"},{"x":[1,0,1],"w":"1/4"},{"x":[1,1,0],"w":"1/4"}]}"#
        );
        assert_eq!(dist_to_string(&dist_from_str(&s).unwrap()), s);
    }

    #[test]
    fn product_round_trip() {
        let d: Distribution = majp_dist(2, &rat(1, 2)).unwrap().into();
        let s = dist_to_string(&d);
        assert_eq!(
            s,
            r#"{"kind":"product","alphabet":["0","1","⊥"],"n":2,"marginals":[["1/4","1/4","1/2"],["1/4","1/4","1/2"]]}"#
        );
        assert_eq!(dist_from_str(&s).unwrap(), d);
    }

    #[test]
    fn unsorted_input_is_canonicalized() {
        let s = r#"{"kind":"explicit","alphabet":["0","1"],"n":1,"support":[{"x":[1],"w":"2/4"},{"x":[0],"w":"1/2"}]}"#;
        let want = r#"{"kind":"explicit","alphabet":["0","1"],"n":1,"support":[{"x":[0],"w":"1/2"},{"x":[1],"w":"1/2"}]}"#;
        assert_eq!(dist_to_string(&dist_from_str(s).unwrap()), want);
    }

    #[test]
    fn rejects_decimals_and_bad_sums() {
        let s = r#"{"kind":"explicit","alphabet":["0","1"],"n":1,"support":[{"x":[0],"w":"0.5"},{"x":[1],"w":"1/2"}]}"#;
        assert!(matches!(dist_from_str(s), Err(Error::Parse(_))));
        let s = r#"{"kind":"explicit","alphabet":["0","1"],"n":1,"support":[{"x":[0],"w":"1/2"},{"x":[1],"w":"1/3"}]}"#;
        assert_eq!(dist_from_str(s).unwrap_err().to_string(), "weights sum to 5/6");
    }

    #[test]
    fn function_formats_round_trip() {
        let t: PlayerFunction = DenseTable::from_fn(Alphabet::binary(), 2, |x| rat(x[0] as i64, 2)).unwrap().into();
        let s = function_to_string(&t);
        assert_eq!(s, r#"{"kind":"table","alphabet":["0","1"],"n":2,"values":{"00":"0","01":"0","10":"1/2","11":"1/2"}}"#);
        assert_eq!(function_from_str(&s).unwrap(), t);

        let b: PlayerFunction = Builtin::dictator(5, 0).into();
        let s = function_to_string(&b);
        assert_eq!(s, r#"{"kind":"builtin","name":"dictator","params":{"n":5,"player":0}}"#);
        assert_eq!(function_from_str(&s).unwrap(), b);
        let m = function_from_str(r#"{"kind":"builtin","name":"majp","params":{"n":9}}"#).unwrap();
        assert_eq!(m, Builtin::majp(9).into());

        let u: PlayerFunction = UpwardClosure::new(3, &[Outcome::bits("110"), Outcome::bits("001")]).unwrap().into();
        let s = function_to_string(&u);
        assert_eq!(s, r#"{"kind":"upward","n":3,"generators":[[0,0,1],[1,1,0]]}"#);
        assert_eq!(function_from_str(&s).unwrap(), u);
    }

    #[test]
    fn partial_tables_stay_partial() {
        let s = r#"{"kind":"table","alphabet":["0","1"],"n":2,"values":{"00":"0","11":"1"}}"#;
        let f = function_from_str(s).unwrap();
        assert!(matches!(f, PlayerFunction::Partial(_)));
        assert_eq!(f.evaluate(&[1, 1]).unwrap(), int(1));
        assert!(matches!(f.evaluate(&[0, 1]), Err(Error::Undefined(_))));
        assert_eq!(function_to_string(&f), s);
    }

    #[test]
    fn builtin_specs() {
        assert_eq!(builtin_from_spec("majp:9").unwrap(), Builtin::majp(9));
        assert_eq!(builtin_from_spec("dictator:4:2").unwrap(), Builtin::dictator(4, 2));
        assert_eq!(builtin_from_spec("constant:3:1/2").unwrap(), Builtin::constant(3, rat(1, 2)));
        assert!(builtin_from_spec("dictator:4:9").is_err());
        assert!(builtin_from_spec("parity:3:1").is_err());
        assert!(builtin_from_spec("nope:3").is_err());
    }
}
