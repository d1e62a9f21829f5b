//! Player functions `f : S^n → [-1, 1]` and the monotone counterexample
//! constructions over the Hadamard mixture space.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{Alphabet, Distribution, ExplicitDist, Outcome};
use crate::error::{Error, Result};
use crate::generators::{complement_mu, hadamard_mu, mixture_d};
use crate::rational::{self, int, rat, Rational};

/// Largest arity for which [`monotone_check`] will scan the cube.
pub const MAX_CUBE_N: usize = 24;

/// Full table over `S^n`, indexed in lexicographic order (player 0 most
/// significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseTable {
    alphabet: Alphabet,
    n: usize,
    values: Vec<Rational>,
}

impl DenseTable {
    pub fn new(alphabet: Alphabet, n: usize, values: Vec<Rational>) -> Result<Self> {
        let size = table_size(&alphabet, n)?;
        if values.len() != size {
            return Err(Error::Parameter(format!("table has {} values, expected {size}", values.len())));
        }
        if let Some(v) = values.iter().find(|v| !rational::in_signed_unit_interval(v)) {
            return Err(Error::Range(rational::format(v)));
        }
        Ok(DenseTable { alphabet, n, values })
    }

    /// Tabulates `f` over every outcome in lexicographic order.
    pub fn from_fn(alphabet: Alphabet, n: usize, mut f: impl FnMut(&[u8]) -> Rational) -> Result<Self> {
        let size = table_size(&alphabet, n)?;
        let q = alphabet.len();
        let mut values = Vec::with_capacity(size);
        let mut x = vec![0u8; n];
        for idx in 0..size {
            let mut r = idx;
            for j in (0..n).rev() {
                x[j] = (r % q) as u8;
                r /= q;
            }
            values.push(f(&x));
        }
        Self::new(alphabet, n, values)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn index(&self, x: &[u8]) -> Result<usize> {
        check_point(&self.alphabet, self.n, x)?;
        let q = self.alphabet.len();
        Ok(x.iter().fold(0usize, |acc, &s| acc * q + s as usize))
    }

    pub fn value(&self, x: &[u8]) -> Result<&Rational> {
        Ok(&self.values[self.index(x)?])
    }

    /// Outcome at position `idx` of the table.
    pub fn outcome(&self, mut idx: usize) -> Outcome {
        let q = self.alphabet.len();
        let mut x = vec![0u8; self.n];
        for j in (0..self.n).rev() {
            x[j] = (idx % q) as u8;
            idx /= q;
        }
        Outcome(x)
    }
}

fn table_size(alphabet: &Alphabet, n: usize) -> Result<usize> {
    (0..n)
        .try_fold(1usize, |acc, _| acc.checked_mul(alphabet.len()))
        .filter(|&s| s <= 1 << 26)
        .ok_or_else(|| Error::Parameter(format!("table over {}^{n} outcomes is too large", alphabet.len())))
}

fn check_point(alphabet: &Alphabet, n: usize, x: &[u8]) -> Result<()> {
    if x.len() != n {
        return Err(Error::Arity { expected: n, got: x.len() });
    }
    if let Some(&s) = x.iter().find(|&&s| s as usize >= alphabet.len()) {
        return Err(Error::Symbol { index: s as usize, size: alphabet.len() });
    }
    Ok(())
}

/// A function specified only on some outcomes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTable {
    alphabet: Alphabet,
    n: usize,
    values: BTreeMap<Outcome, Rational>,
}

impl PartialTable {
    pub fn new(alphabet: Alphabet, n: usize) -> Self {
        PartialTable { alphabet, n, values: BTreeMap::new() }
    }

    /// Adds a labelled point. Each outcome may be labelled once.
    pub fn insert(&mut self, x: Outcome, v: Rational) -> Result<()> {
        check_point(&self.alphabet, self.n, &x)?;
        if !rational::in_signed_unit_interval(&v) {
            return Err(Error::Range(rational::format(&v)));
        }
        if self.values.contains_key(&x) {
            return Err(Error::DuplicateOutcome(self.alphabet.render(&x)));
        }
        self.values.insert(x, v);
        Ok(())
    }

    pub fn with(mut self, x: Outcome, v: Rational) -> Result<Self> {
        self.insert(x, v)?;
        Ok(self)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &BTreeMap<Outcome, Rational> {
        &self.values
    }

    pub fn get(&self, x: &[u8]) -> Option<&Rational> {
        self.values.get(&Outcome(x.to_vec()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuiltinKind {
    /// Majority over non-abstaining voters on `{0, 1, ⊥}`; ties and empty
    /// participation give 0.
    Majp,
    Parity,
    /// Strict majority of ones; ties give 0.
    Majority,
    Dictator(usize),
    Constant(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Builtin {
    pub kind: BuiltinKind,
    pub n: usize,
}

impl Builtin {
    pub fn majp(n: usize) -> Self {
        Builtin { kind: BuiltinKind::Majp, n }
    }

    pub fn parity(n: usize) -> Self {
        Builtin { kind: BuiltinKind::Parity, n }
    }

    pub fn majority(n: usize) -> Self {
        Builtin { kind: BuiltinKind::Majority, n }
    }

    pub fn dictator(n: usize, player: usize) -> Self {
        Builtin { kind: BuiltinKind::Dictator(player), n }
    }

    pub fn constant(n: usize, value: Rational) -> Self {
        Builtin { kind: BuiltinKind::Constant(value), n }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            BuiltinKind::Majp => "majp",
            BuiltinKind::Parity => "parity",
            BuiltinKind::Majority => "majority",
            BuiltinKind::Dictator(_) => "dictator",
            BuiltinKind::Constant(_) => "constant",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            BuiltinKind::Dictator(i) if *i >= self.n => Err(Error::Player { index: *i, n: self.n }),
            BuiltinKind::Constant(c) if !rational::in_signed_unit_interval(c) => Err(Error::Range(c.to_string())),
            _ => Ok(()),
        }
    }

    fn evaluate(&self, x: &[u8]) -> Result<Rational> {
        if x.len() != self.n {
            return Err(Error::Arity { expected: self.n, got: x.len() });
        }
        let bits = || {
            if x.iter().any(|&s| s > 1) {
                Err(Error::NotBinary)
            } else {
                Ok(())
            }
        };
        let indicator = |b: bool| if b { Rational::one() } else { Rational::zero() };
        match &self.kind {
            BuiltinKind::Majp => {
                let (mut ones, mut zeros) = (0usize, 0usize);
                for &s in x {
                    match s {
                        0 => zeros += 1,
                        1 => ones += 1,
                        2 => {}
                        _ => return Err(Error::Symbol { index: s as usize, size: 3 }),
                    }
                }
                Ok(indicator(ones > zeros))
            }
            BuiltinKind::Parity => {
                bits()?;
                Ok(indicator(x.iter().filter(|&&b| b == 1).count() % 2 == 1))
            }
            BuiltinKind::Majority => {
                bits()?;
                let ones = x.iter().filter(|&&b| b == 1).count();
                Ok(indicator(2 * ones > x.len()))
            }
            BuiltinKind::Dictator(i) => {
                bits()?;
                let b = x.get(*i).ok_or(Error::Player { index: *i, n: self.n })?;
                Ok(indicator(*b == 1))
            }
            BuiltinKind::Constant(c) => Ok(c.clone()),
        }
    }
}

/// Indicator of the set of binary points dominating at least one
/// generator. Monotone by construction. Supports `n ≤ 64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpwardClosure {
    n: usize,
    generators: Vec<u64>,
}

impl UpwardClosure {
    pub fn new(n: usize, generators: &[Outcome]) -> Result<Self> {
        let masks = generators
            .iter()
            .map(|g| {
                if g.len() != n {
                    return Err(Error::Arity { expected: n, got: g.len() });
                }
                to_mask(g)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_masks(n, masks)
    }

    /// Generators as bit masks, bit `i` holding player `i`.
    pub fn from_masks(n: usize, mut generators: Vec<u64>) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::Parameter(format!("upward closure needs 1 <= n <= 64, got {n}")));
        }
        if n < 64 && generators.iter().any(|&g| g >> n != 0) {
            return Err(Error::Parameter("generator has bits beyond n".into()));
        }
        generators.sort_by_key(|&g| to_outcome(g, n));
        generators.dedup();
        Ok(UpwardClosure { n, generators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn masks(&self) -> &[u64] {
        &self.generators
    }

    pub fn generators(&self) -> Vec<Outcome> {
        self.generators.iter().map(|&g| to_outcome(g, self.n)).collect()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.generators.iter().any(|&g| g & !x == 0)
    }

    /// First generator dominated by `x`, if any.
    pub fn witness(&self, x: u64) -> Option<u64> {
        self.generators.iter().copied().find(|&g| x & g == g)
    }
}

/// Bit mask of a binary outcome, bit `i` holding player `i`.
pub fn to_mask(x: &[u8]) -> Result<u64> {
    if x.len() > 64 {
        return Err(Error::Parameter(format!("{} players do not fit a 64-bit mask", x.len())));
    }
    x.iter().enumerate().try_fold(0u64, |acc, (i, &b)| match b {
        0 => Ok(acc),
        1 => Ok(acc | 1 << i),
        _ => Err(Error::NotBinary),
    })
}

pub fn to_outcome(mask: u64, n: usize) -> Outcome {
    Outcome((0..n).map(|i| ((mask >> i) & 1) as u8).collect())
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlayerFunction {
    Table(DenseTable),
    Partial(PartialTable),
    Builtin(Builtin),
    Upward(UpwardClosure),
}

impl From<DenseTable> for PlayerFunction {
    fn from(t: DenseTable) -> Self {
        PlayerFunction::Table(t)
    }
}

impl From<Builtin> for PlayerFunction {
    fn from(b: Builtin) -> Self {
        PlayerFunction::Builtin(b)
    }
}

impl From<UpwardClosure> for PlayerFunction {
    fn from(u: UpwardClosure) -> Self {
        PlayerFunction::Upward(u)
    }
}

impl From<PartialTable> for PlayerFunction {
    fn from(t: PartialTable) -> Self {
        PlayerFunction::Partial(t)
    }
}

impl PlayerFunction {
    pub fn arity(&self) -> usize {
        match self {
            PlayerFunction::Table(t) => t.n,
            PlayerFunction::Partial(t) => t.n,
            PlayerFunction::Builtin(b) => b.n,
            PlayerFunction::Upward(u) => u.n,
        }
    }

    pub fn evaluate(&self, x: &[u8]) -> Result<Rational> {
        match self {
            PlayerFunction::Table(t) => t.value(x).cloned(),
            PlayerFunction::Partial(t) => {
                check_point(&t.alphabet, t.n, x)?;
                t.get(x).cloned().ok_or_else(|| Error::Undefined(t.alphabet.render(x)))
            }
            PlayerFunction::Builtin(b) => b.evaluate(x),
            PlayerFunction::Upward(u) => {
                if x.len() != u.n {
                    return Err(Error::Arity { expected: u.n, got: x.len() });
                }
                Ok(if u.contains(to_mask(x)?) { Rational::one() } else { Rational::zero() })
            }
        }
    }

    /// Checks arity against a distribution.
    pub fn check_against(&self, d: &Distribution) -> Result<()> {
        if self.arity() != d.n() {
            return Err(Error::Arity { expected: d.n(), got: self.arity() });
        }
        if let PlayerFunction::Table(t) = self {
            if t.alphabet() != d.alphabet() {
                return Err(Error::Mismatch);
            }
        }
        Ok(())
    }

    /// True when every value on `supp(d)` is 0 or 1.
    pub fn is_zero_one_on(&self, d: &Distribution) -> Result<bool> {
        let mut ok = true;
        d.try_for_each(|x, _| {
            let v = self.evaluate(x)?;
            ok &= v.is_zero() || v.is_one();
            Ok::<_, Error>(())
        })?;
        Ok(ok)
    }
}

/// `f(x) > f(x ∨ e_i)`: a failure of monotonicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneWitness {
    pub x: Outcome,
    pub player: usize,
    pub low: Rational,
    pub high: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneCheck {
    pub monotone: bool,
    pub witness: Option<MonotoneWitness>,
}

/// Checks `f(x) ≤ f(x ∨ e_i)` for every binary `x` and player `i`. Points
/// are scanned by bit mask (bit `i` = player `i`) and the first failure is
/// returned.
pub fn monotone_check(f: &PlayerFunction, n: usize) -> Result<MonotoneCheck> {
    if f.arity() != n {
        return Err(Error::Arity { expected: n, got: f.arity() });
    }
    if n > MAX_CUBE_N {
        return Err(Error::Parameter(format!("monotone check limited to n <= {MAX_CUBE_N}")));
    }
    let found = (0..1u64 << n)
        .into_par_iter()
        .map(|x| -> Result<Option<MonotoneWitness>> {
            let fx = f.evaluate(&to_outcome(x, n))?;
            for i in (0..n).filter(|i| x >> i & 1 == 0) {
                let fy = f.evaluate(&to_outcome(x | 1 << i, n))?;
                if fx > fy {
                    return Ok(Some(MonotoneWitness { x: to_outcome(x, n), player: i, low: fx, high: fy }));
                }
            }
            Ok(None)
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        None => Ok(MonotoneCheck { monotone: true, witness: None }),
        Some(Ok(w)) => Ok(MonotoneCheck { monotone: false, witness: w }),
        Some(Err(e)) => Err(e),
    }
}

/// The abstaining-voter majority over `n` players.
pub fn majp_fn(n: usize) -> PlayerFunction {
    Builtin::majp(n).into()
}

/// Upward closure of the 1-labelled points of a 0/1 partial table. Fails
/// with a witness if a 0-labelled point dominates a 1-labelled one.
pub fn monotone_extend(pt: &PartialTable) -> Result<PlayerFunction> {
    if !pt.alphabet().is_binary() {
        return Err(Error::NotBinary);
    }
    let mut ones = Vec::new();
    let mut zeros = Vec::new();
    for (x, v) in pt.values() {
        if v.is_one() {
            ones.push(x);
        } else if v.is_zero() {
            zeros.push(x);
        } else {
            return Err(Error::Parameter(format!("label {v} at {} is not 0 or 1", pt.alphabet().render(x))));
        }
    }
    for z in &zeros {
        let zm = to_mask(z)?;
        for o in &ones {
            let om = to_mask(o)?;
            if zm & om == om {
                return Err(Error::Inconsistent(format!(
                    "{} labelled 0 dominates {} labelled 1",
                    pt.alphabet().render(z),
                    pt.alphabet().render(o)
                )));
            }
        }
    }
    let generators: Vec<Outcome> = ones.into_iter().cloned().collect();
    Ok(UpwardClosure::new(pt.n(), &generators)?.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

/// Named, exactly verified claims about a construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub checks: Vec<Check>,
}

impl Certificate {
    pub fn push(&mut self, name: &str, ok: bool, detail: String) {
        self.checks.push(Check { name: name.into(), ok, detail });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    /// Detail of the first failing check.
    pub fn failure(&self) -> Option<&str> {
        self.checks.iter().find(|c| !c.ok).map(|c| c.detail.as_str())
    }
}

/// A function, the distribution it is analysed under, and its certificate.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub function: PlayerFunction,
    pub dist: ExplicitDist,
    pub certificate: Certificate,
}

fn check_ce_k(k: usize) -> Result<()> {
    // n = 2^k - 1 must fit a 64-bit mask
    if !(3..=6).contains(&k) {
        return Err(Error::Parameter(format!("counterexamples need 3 <= k <= 6, got {k}")));
    }
    Ok(())
}

fn masks_of(d: &ExplicitDist) -> Result<Vec<u64>> {
    d.outcomes().map(|x| to_mask(x)).collect()
}

fn balance_check(cert: &mut Certificate, f: &PlayerFunction, d: &ExplicitDist) -> Result<()> {
    let e = Distribution::Explicit(d.clone()).expectation(f)?;
    cert.push("balanced under D", e == rat(1, 2), format!("E_D[f] = {e}"));
    Ok(())
}

fn finish(function: PlayerFunction, dist: ExplicitDist, certificate: Certificate) -> Result<Counterexample> {
    if !certificate.passed() {
        return Err(Error::Certificate(Box::new(certificate)));
    }
    Ok(Counterexample { function, dist, certificate })
}

/// Balanced monotone `f` with every effect zero under the Hadamard
/// mixture `D`: the upward closure of the complemented support.
pub fn effect_counterexample(k: usize) -> Result<Counterexample> {
    check_ce_k(k)?;
    let mu = hadamard_mu(k)?;
    let bar = complement_mu(&mu)?;
    let d = mixture_d(k)?;
    let n = mu.n();
    let closure = UpwardClosure::from_masks(n, masks_of(&bar)?)?;
    let mut cert = Certificate { checks: Vec::new() };

    let bad = masks_of(&mu)?.into_iter().find_map(|x| closure.witness(x).map(|g| (x, g)));
    cert.push(
        "zero on supp(mu)",
        bad.is_none(),
        match bad {
            None => format!("all {} points map to 0", mu.len()),
            Some((x, g)) => format!("{} dominates generator {}", mu.alphabet().render(&to_outcome(x, n)), mu.alphabet().render(&to_outcome(g, n))),
        },
    );
    let bad = masks_of(&bar)?.into_iter().find(|&x| !closure.contains(x));
    cert.push(
        "one on supp(complement)",
        bad.is_none(),
        match bad {
            None => format!("all {} points map to 1", bar.len()),
            Some(x) => format!("{} maps to 0", bar.alphabet().render(&to_outcome(x, n))),
        },
    );
    let f = PlayerFunction::Upward(closure);
    balance_check(&mut cert, &f, &d)?;
    finish(f, d, cert)
}

/// Balanced monotone `f` that is locally constant on `supp(D)`, so every
/// influence under `D` is zero. Generators are the complemented support
/// points lowered by one coordinate, which puts the Hamming ball of
/// radius 1 around `supp(μ̄)` inside the closure. The certificate compares
/// every support point and Hamming neighbour against every generator and
/// fails (naming the offending pair) when `n` is too small.
pub fn influence_counterexample(k: usize) -> Result<Counterexample> {
    let ce = build_influence_counterexample(k)?;
    finish(ce.function, ce.dist, ce.certificate)
}

/// As [`influence_counterexample`], returning the certificate even when it
/// fails.
pub fn build_influence_counterexample(k: usize) -> Result<Counterexample> {
    check_ce_k(k)?;
    let mu = hadamard_mu(k)?;
    let bar = complement_mu(&mu)?;
    let d = mixture_d(k)?;
    let n = mu.n();
    let full = full_mask(n);
    let mut generators = Vec::new();
    for y in masks_of(&bar)? {
        if y == full {
            continue;
        }
        generators.extend((0..n).filter(|j| y >> j & 1 == 1).map(|j| y & !(1u64 << j)));
    }
    generators.extend((0..n).map(|j| full & !(1u64 << j)));
    let closure = UpwardClosure::from_masks(n, generators)?;
    let render = |m: u64| mu.alphabet().render(&to_outcome(m, n));
    let ball = |x: u64| std::iter::once(x).chain((0..n).map(move |i| x ^ (1u64 << i)));

    let mut cert = Certificate { checks: Vec::new() };
    let mut bad = None;
    'outer: for x in masks_of(&bar)? {
        for v in ball(x) {
            if !closure.contains(v) {
                bad = Some((x, v));
                break 'outer;
            }
        }
    }
    cert.push(
        "one on supp(complement) and its Hamming-1 neighbours",
        bad.is_none(),
        match bad {
            None => format!("{} points map to 1", bar.len() * (n + 1)),
            Some((x, v)) => format!("neighbour {} of {} dominates no generator", render(v), render(x)),
        },
    );
    let mut bad = None;
    'outer2: for x in masks_of(&mu)? {
        for v in ball(x) {
            if let Some(g) = closure.witness(v) {
                bad = Some((x, v, g));
                break 'outer2;
            }
        }
    }
    cert.push(
        "zero on supp(mu) and its Hamming-1 neighbours",
        bad.is_none(),
        match bad {
            None => format!("{} points map to 0", mu.len() * (n + 1)),
            Some((x, v, g)) if v == x => format!("{} dominates generator {}", render(x), render(g)),
            Some((x, v, g)) => format!("neighbour {} of {} dominates generator {}", render(v), render(x), render(g)),
        },
    );
    cert.push("monotone", true, "upward closure".into());
    let f = PlayerFunction::Upward(closure);
    balance_check(&mut cert, &f, &d)?;
    Ok(Counterexample { function: f, dist: d, certificate: cert })
}

/// Convenience: the constant function.
pub fn constant(n: usize, c: i64) -> PlayerFunction {
    Builtin::constant(n, int(c)).into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis;
    use crate::generators::uniform_product;

    #[test]
    fn builtin_evaluation() {
        let maj = PlayerFunction::from(Builtin::majority(3));
        assert_eq!(maj.evaluate(&[1, 0, 1]).unwrap(), int(1));
        let par = PlayerFunction::from(Builtin::parity(3));
        assert_eq!(par.evaluate(&[1, 1, 0]).unwrap(), int(0));
        assert!(matches!(par.evaluate(&[1, 2, 0]), Err(Error::NotBinary)));
        assert!(matches!(par.evaluate(&[1, 1]), Err(Error::Arity { .. })));
    }

    #[test]
    fn majp_votes() {
        let f = majp_fn(3);
        assert_eq!(f.evaluate(&[2, 2, 2]).unwrap(), int(0));
        assert_eq!(f.evaluate(&[1, 2, 2]).unwrap(), int(1));
        assert_eq!(f.evaluate(&[1, 0, 2]).unwrap(), int(0));
        assert_eq!(f.evaluate(&[0, 0, 1]).unwrap(), int(0));
        assert!(f.evaluate(&[3, 0, 1]).is_err());
    }

    #[test]
    fn majp_flipping_a_vote_up_never_hurts() {
        for n in 1..=7 {
            let f = majp_fn(n);
            let grid = Distribution::from(crate::generators::majp_dist(n, &rat(1, 2)).unwrap());
            grid.for_each(|x, _| {
                let v = f.evaluate(x).unwrap();
                for i in (0..n).filter(|&i| x[i] == 0) {
                    let mut y = x.to_vec();
                    y[i] = 1;
                    assert!(f.evaluate(&y).unwrap() >= v);
                }
            });
        }
    }

    #[test]
    fn partial_table_is_undefined_off_domain() {
        let t = PartialTable::new(Alphabet::binary(), 2).with(Outcome::bits("01"), int(1)).unwrap();
        let f = PlayerFunction::from(t.clone());
        assert_eq!(f.evaluate(&[0, 1]).unwrap(), int(1));
        assert!(matches!(f.evaluate(&[1, 1]), Err(Error::Undefined(_))));
        assert!(t.with(Outcome::bits("01"), int(0)).is_err());
    }

    #[test]
    fn dense_table_rejects_out_of_range() {
        assert!(DenseTable::new(Alphabet::binary(), 1, vec![int(0), int(2)]).is_err());
        assert!(DenseTable::new(Alphabet::binary(), 1, vec![int(0)]).is_err());
        let t = DenseTable::from_fn(Alphabet::binary(), 2, |x| int(x[0] as i64)).unwrap();
        assert_eq!(t.values(), &[int(0), int(0), int(1), int(1)]);
        assert_eq!(t.outcome(2), Outcome::bits("10"));
    }

    #[test]
    fn monotone_checks() {
        assert!(monotone_check(&Builtin::majority(3).into(), 3).unwrap().monotone);
        let c = monotone_check(&Builtin::parity(2).into(), 2).unwrap();
        assert!(!c.monotone);
        let w = c.witness.unwrap();
        assert_eq!((w.low.clone(), w.high.clone()), (int(1), int(0)));
        let mut y = w.x.0.clone();
        assert_eq!(y[w.player], 0);
        y[w.player] = 1;
        assert_eq!(PlayerFunction::from(Builtin::parity(2)).evaluate(&y).unwrap(), int(0));
        let u = UpwardClosure::new(4, &[Outcome::bits("0110"), Outcome::bits("1001")]).unwrap();
        assert!(monotone_check(&u.into(), 4).unwrap().monotone);
    }

    #[test]
    fn extend_examples() {
        let pt = PartialTable::new(Alphabet::binary(), 3)
            .with(Outcome::bits("000"), int(0))
            .unwrap()
            .with(Outcome::bits("111"), int(1))
            .unwrap();
        let f = monotone_extend(&pt).unwrap();
        assert_eq!(f.evaluate(&[1, 1, 0]).unwrap(), int(0));
        assert_eq!(f.evaluate(&[1, 1, 1]).unwrap(), int(1));

        let pt = PartialTable::new(Alphabet::binary(), 2)
            .with(Outcome::bits("01"), int(1))
            .unwrap()
            .with(Outcome::bits("10"), int(0))
            .unwrap();
        let f = monotone_extend(&pt).unwrap();
        assert_eq!(f.evaluate(&[1, 1]).unwrap(), int(1));
        assert_eq!(f.evaluate(&[0, 0]).unwrap(), int(0));

        let pt = PartialTable::new(Alphabet::binary(), 2)
            .with(Outcome::bits("01"), int(1))
            .unwrap()
            .with(Outcome::bits("11"), int(0))
            .unwrap();
        assert!(matches!(monotone_extend(&pt), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn effect_counterexample_k3() {
        let ce = effect_counterexample(3).unwrap();
        assert!(ce.certificate.passed());
        let f = &ce.function;
        assert_eq!(f.evaluate(&[0; 7]).unwrap(), int(0));
        assert_eq!(f.evaluate(&[1; 7]).unwrap(), int(1));
        let d = Distribution::from(ce.dist.clone());
        for i in 0..7 {
            assert_eq!(analysis::signed_difference(f, &d, i).unwrap(), int(0));
        }
        assert!(effect_counterexample(2).is_err());
    }

    #[test]
    fn influence_certificate_threshold() {
        // at n = 7 the lowered generators collide with the Hadamard side
        let weak = build_influence_counterexample(3).unwrap();
        assert!(!weak.certificate.passed());
        assert!(weak.certificate.failure().unwrap().contains("dominates generator"));
        assert!(matches!(influence_counterexample(3), Err(Error::Certificate(_))));
        let ce = influence_counterexample(4).unwrap();
        assert!(ce.certificate.passed());
    }

    #[test]
    fn influence_counterexample_is_locally_constant() {
        let ce = influence_counterexample(4).unwrap();
        let n = ce.dist.n();
        for x in ce.dist.outcomes() {
            let v = ce.function.evaluate(x).unwrap();
            for i in 0..n {
                let mut y = x.0.clone();
                y[i] ^= 1;
                assert_eq!(ce.function.evaluate(&y).unwrap(), v);
            }
        }
    }

    #[test]
    fn zero_one_detection() {
        let d = Distribution::from(uniform_product(2).unwrap());
        assert!(PlayerFunction::from(Builtin::parity(2)).is_zero_one_on(&d).unwrap());
        assert!(!PlayerFunction::from(Builtin::constant(2, rat(1, 2))).is_zero_one_on(&d).unwrap());
    }
}
