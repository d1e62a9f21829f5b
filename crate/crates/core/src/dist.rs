//! Finite joint distributions over `S^n` with exact rational weights.
//!
//! Two representations share one query interface: an explicit sorted
//! support list, and a product of per-player marginals that is enumerated
//! lazily. Every query on a [`ProductDist`] agrees exactly with the same
//! query on its explicit expansion.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Deref;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boolfn::PlayerFunction;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Ordered list of distinct symbol labels. Order is part of equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::Alphabet("empty".into()));
        }
        if symbols.len() > u8::MAX as usize + 1 {
            return Err(Error::Alphabet(format!("{} symbols, at most 256 supported", symbols.len())));
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::Alphabet(format!("duplicate symbol {s:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// `{"0", "1"}`.
    pub fn binary() -> Self {
        Alphabet { symbols: vec!["0".into(), "1".into()] }
    }

    /// `{"0", "1", "⊥"}`: a vote for 0, a vote for 1, or abstention.
    pub fn with_abstain() -> Self {
        Alphabet { symbols: vec!["0".into(), "1".into(), "⊥".into()] }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn is_binary(&self) -> bool {
        *self == Self::binary()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn index_of(&self, label: &str) -> Option<u8> {
        self.symbols.iter().position(|s| s == label).map(|i| i as u8)
    }

    /// Renders an outcome as the concatenation of its labels when every
    /// label is a single character, and comma-separated otherwise.
    pub fn render(&self, x: &[u8]) -> String {
        let single = self.symbols.iter().all(|s| s.chars().count() == 1);
        let labels = x.iter().map(|&s| self.symbols[s as usize].as_str());
        if single {
            labels.collect()
        } else {
            labels.collect::<Vec<_>>().join(",")
        }
    }

    /// Inverse of [`Alphabet::render`].
    pub fn parse_outcome(&self, s: &str) -> Result<Outcome> {
        let single = self.symbols.iter().all(|s| s.chars().count() == 1);
        let lookup = |label: &str| {
            self.index_of(label)
                .ok_or_else(|| Error::Parse(format!("unknown symbol {label:?} in {s:?}")))
        };
        let values = if single {
            s.chars().map(|c| lookup(&c.to_string())).collect::<Result<Vec<_>>>()?
        } else if s.is_empty() {
            Vec::new()
        } else {
            s.split(',').map(lookup).collect::<Result<Vec<_>>>()?
        };
        Ok(Outcome(values))
    }
}

/// A point of `S^n`, stored as symbol indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome(pub Vec<u8>);

impl Deref for Outcome {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl From<Vec<u8>> for Outcome {
    fn from(v: Vec<u8>) -> Self {
        Outcome(v)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

impl Outcome {
    /// Parses a string of `0`/`1` digits.
    pub fn bits(s: &str) -> Outcome {
        Outcome(s.bytes().map(|b| b - b'0').collect())
    }
}

fn check_outcome(alphabet: &Alphabet, n: usize, x: &[u8]) -> Result<()> {
    if x.len() != n {
        return Err(Error::Arity { expected: n, got: x.len() });
    }
    if let Some(&s) = x.iter().find(|&&s| s as usize >= alphabet.len()) {
        return Err(Error::Symbol { index: s as usize, size: alphabet.len() });
    }
    Ok(())
}

/// Explicit support list, kept sorted by outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitDist {
    alphabet: Alphabet,
    n: usize,
    support: Vec<(Outcome, Rational)>,
}

impl ExplicitDist {
    pub fn new(alphabet: Alphabet, n: usize, mut support: Vec<(Outcome, Rational)>) -> Result<Self> {
        support.sort_by(|a, b| a.0.cmp(&b.0));
        let d = ExplicitDist { alphabet, n, support };
        d.validate()?;
        Ok(d)
    }

    /// Uniform distribution on the given (distinct) outcomes.
    pub fn uniform(alphabet: Alphabet, n: usize, outcomes: Vec<Outcome>) -> Result<Self> {
        let w = Rational::new(BigInt::one(), BigInt::from(outcomes.len().max(1)));
        Self::new(alphabet, n, outcomes.into_iter().map(|x| (x, w.clone())).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Parameter("arity must be at least 1".into()));
        }
        let mut total = Rational::zero();
        for (i, (x, w)) in self.support.iter().enumerate() {
            check_outcome(&self.alphabet, self.n, x)?;
            if !w.is_positive() {
                return Err(Error::Weight {
                    outcome: self.alphabet.render(x),
                    weight: rational::format(w),
                });
            }
            if i > 0 && self.support[i - 1].0 >= *x {
                return Err(Error::DuplicateOutcome(self.alphabet.render(x)));
            }
            total += w;
        }
        if !total.is_one() {
            return Err(Error::WeightSum(rational::format(&total)));
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[(Outcome, Rational)] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &Outcome> {
        self.support.iter().map(|(x, _)| x)
    }

    /// Weight of `x`, zero off the support.
    pub fn weight(&self, x: &[u8]) -> Rational {
        match self.support.binary_search_by(|(y, _)| y.0.as_slice().cmp(x)) {
            Ok(i) => self.support[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }
}

/// Fully independent players with per-player marginals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductDist {
    alphabet: Alphabet,
    n: usize,
    marginals: Vec<Vec<Rational>>,
}

impl ProductDist {
    pub fn new(alphabet: Alphabet, n: usize, marginals: Vec<Vec<Rational>>) -> Result<Self> {
        let d = ProductDist { alphabet, n, marginals };
        d.validate()?;
        Ok(d)
    }

    /// Every player drawn independently from the same marginal.
    pub fn iid(alphabet: Alphabet, n: usize, marginal: Vec<Rational>) -> Result<Self> {
        Self::new(alphabet, n, vec![marginal; n])
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Parameter("arity must be at least 1".into()));
        }
        if self.marginals.len() != self.n {
            return Err(Error::Arity { expected: self.n, got: self.marginals.len() });
        }
        for (player, m) in self.marginals.iter().enumerate() {
            if m.len() != self.alphabet.len() {
                return Err(Error::Marginal {
                    player,
                    reason: format!("{} entries for {} symbols", m.len(), self.alphabet.len()),
                });
            }
            if let Some(w) = m.iter().find(|w| w.is_negative()) {
                return Err(Error::Marginal { player, reason: format!("negative entry {w}") });
            }
            let total: Rational = m.iter().sum();
            if !total.is_one() {
                return Err(Error::Marginal { player, reason: format!("weights sum to {total}") });
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn marginals(&self) -> &[Vec<Rational>] {
        &self.marginals
    }

    /// Calls `visit` on every positive-weight outcome in lexicographic
    /// order without materializing the grid. Weights are maintained as
    /// prefix products so each step costs about one multiplication.
    fn try_for_each<E>(&self, mut visit: impl FnMut(&[u8], &Rational) -> Result<(), E>) -> Result<(), E> {
        let n = self.n;
        let choices: Vec<Vec<u8>> = self
            .marginals
            .iter()
            .map(|m| (0..m.len() as u8).filter(|&s| m[s as usize].is_positive()).collect())
            .collect();
        let mut pos = vec![0usize; n];
        let mut x: Vec<u8> = choices.iter().map(|c| c[0]).collect();
        let mut prefix = vec![Rational::one(); n + 1];
        let refill = |from: usize, x: &mut [u8], prefix: &mut [Rational], pos: &[usize]| {
            for j in from..n {
                x[j] = choices[j][pos[j]];
                prefix[j + 1] = &prefix[j] * &self.marginals[j][x[j] as usize];
            }
        };
        refill(0, &mut x, &mut prefix, &pos);
        loop {
            visit(&x, &prefix[n])?;
            let mut j = n;
            loop {
                if j == 0 {
                    return Ok(());
                }
                j -= 1;
                pos[j] += 1;
                if pos[j] < choices[j].len() {
                    break;
                }
                pos[j] = 0;
            }
            refill(j, &mut x, &mut prefix, &pos);
        }
    }
}

/// Result of a k-wise independence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KwiseCheck {
    pub independent: bool,
    pub witness: Option<KwiseWitness>,
}

/// A set of players and an assignment on which the joint probability
/// differs from the product of the single-player marginals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KwiseWitness {
    pub players: Vec<usize>,
    pub assignment: Vec<u8>,
    pub joint: Rational,
    pub product: Rational,
}

impl fmt::Display for KwiseWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "players {:?} assignment {:?}: Pr = {} but product of marginals = {}",
            self.players, self.assignment, self.joint, self.product
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distribution {
    Explicit(ExplicitDist),
    Product(ProductDist),
}

impl From<ExplicitDist> for Distribution {
    fn from(d: ExplicitDist) -> Self {
        Distribution::Explicit(d)
    }
}

impl From<ProductDist> for Distribution {
    fn from(d: ProductDist) -> Self {
        Distribution::Product(d)
    }
}

impl Distribution {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Distribution::Explicit(d) => &d.alphabet,
            Distribution::Product(d) => &d.alphabet,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Distribution::Explicit(d) => d.n,
            Distribution::Product(d) => d.n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Distribution::Explicit(d) => d.validate(),
            Distribution::Product(d) => d.validate(),
        }
    }

    pub fn as_explicit(&self) -> Option<&ExplicitDist> {
        match self {
            Distribution::Explicit(d) => Some(d),
            Distribution::Product(_) => None,
        }
    }

    pub fn as_product(&self) -> Option<&ProductDist> {
        match self {
            Distribution::Product(d) => Some(d),
            Distribution::Explicit(_) => None,
        }
    }

    /// Visits every support point with its weight, in lexicographic order.
    pub fn try_for_each<E>(&self, mut visit: impl FnMut(&[u8], &Rational) -> Result<(), E>) -> Result<(), E> {
        match self {
            Distribution::Explicit(d) => d.support.iter().try_for_each(|(x, w)| visit(x, w)),
            Distribution::Product(d) => d.try_for_each(visit),
        }
    }

    pub fn for_each(&self, mut visit: impl FnMut(&[u8], &Rational)) {
        let _ = self.try_for_each::<()>(|x, w| {
            visit(x, w);
            Ok(())
        });
    }

    /// Materializes the support. Already sorted, so no re-validation pass.
    pub fn to_explicit(&self) -> ExplicitDist {
        match self {
            Distribution::Explicit(d) => d.clone(),
            Distribution::Product(d) => {
                let mut support = Vec::new();
                d.try_for_each::<()>(|x, w| {
                    support.push((Outcome(x.to_vec()), w.clone()));
                    Ok(())
                })
                .ok();
                ExplicitDist { alphabet: d.alphabet.clone(), n: d.n, support }
            }
        }
    }

    pub fn support_len(&self) -> usize {
        match self {
            Distribution::Explicit(d) => d.len(),
            Distribution::Product(d) => d
                .marginals
                .iter()
                .map(|m| m.iter().filter(|w| w.is_positive()).count())
                .product(),
        }
    }

    fn check_player(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::Player { index: i, n: self.n() });
        }
        Ok(())
    }

    /// `Pr[X_i = s]` for every symbol `s`.
    pub fn player_marginal(&self, i: usize) -> Result<Vec<Rational>> {
        self.check_player(i)?;
        Ok(match self {
            Distribution::Product(d) => d.marginals[i].clone(),
            Distribution::Explicit(d) => {
                let mut m = vec![Rational::zero(); d.alphabet.len()];
                for (x, w) in &d.support {
                    m[x[i] as usize] += w;
                }
                m
            }
        })
    }

    pub fn player_marginals(&self) -> Vec<Vec<Rational>> {
        match self {
            Distribution::Product(d) => d.marginals.clone(),
            Distribution::Explicit(d) => {
                let mut m = vec![vec![Rational::zero(); d.alphabet.len()]; d.n];
                for (x, w) in &d.support {
                    for (i, &s) in x.iter().enumerate() {
                        m[i][s as usize] += w;
                    }
                }
                m
            }
        }
    }

    /// Law of `X_T` over `S^{|T|}`, players taken in the order given.
    pub fn marginal(&self, players: &[usize]) -> Result<Distribution> {
        if players.is_empty() {
            return Err(Error::Parameter("marginal over an empty player set".into()));
        }
        for (k, &i) in players.iter().enumerate() {
            self.check_player(i)?;
            if players[..k].contains(&i) {
                return Err(Error::Parameter(format!("player {i} listed twice")));
            }
        }
        Ok(match self {
            Distribution::Product(d) => Distribution::Product(ProductDist {
                alphabet: d.alphabet.clone(),
                n: players.len(),
                marginals: players.iter().map(|&i| d.marginals[i].clone()).collect(),
            }),
            Distribution::Explicit(d) => {
                let mut acc: BTreeMap<Vec<u8>, Rational> = BTreeMap::new();
                for (x, w) in &d.support {
                    let key: Vec<u8> = players.iter().map(|&i| x[i]).collect();
                    *acc.entry(key).or_insert_with(Rational::zero) += w;
                }
                Distribution::Explicit(ExplicitDist {
                    alphabet: d.alphabet.clone(),
                    n: players.len(),
                    support: acc.into_iter().map(|(x, w)| (Outcome(x), w)).collect(),
                })
            }
        })
    }

    /// Conditions on `X_i = s` for every `(i, s)` in `assignment`.
    pub fn condition(&self, assignment: &[(usize, u8)]) -> Result<Distribution> {
        for &(i, s) in assignment {
            self.check_player(i)?;
            if s as usize >= self.alphabet().len() {
                return Err(Error::Symbol { index: s as usize, size: self.alphabet().len() });
            }
        }
        let matches = |x: &[u8]| assignment.iter().all(|&(i, s)| x[i] == s);
        match self {
            Distribution::Product(d) => {
                let mut marginals = d.marginals.clone();
                for &(i, s) in assignment {
                    if marginals[i][s as usize].is_zero() {
                        return Err(Error::NullEvent);
                    }
                    for (t, w) in marginals[i].iter_mut().enumerate() {
                        *w = if t == s as usize { Rational::one() } else { Rational::zero() };
                    }
                }
                Ok(Distribution::Product(ProductDist { alphabet: d.alphabet.clone(), n: d.n, marginals }))
            }
            Distribution::Explicit(d) => {
                let kept: Vec<_> = d.support.iter().filter(|(x, _)| matches(x)).cloned().collect();
                let mass: Rational = kept.iter().map(|(_, w)| w).sum();
                if mass.is_zero() {
                    return Err(Error::NullEvent);
                }
                let support = kept.into_iter().map(|(x, w)| (x, w / &mass)).collect();
                Ok(Distribution::Explicit(ExplicitDist { alphabet: d.alphabet.clone(), n: d.n, support }))
            }
        }
    }

    /// Exact `E[f]`.
    pub fn expectation(&self, f: &PlayerFunction) -> Result<Rational> {
        let mut acc = Rational::zero();
        self.try_for_each(|x, w| {
            acc += w * f.evaluate(x)?;
            Ok::<_, Error>(())
        })?;
        Ok(acc)
    }

    /// Checks that every set of at most `k` players is jointly independent.
    /// Sizes are scanned in increasing order, player sets and assignments
    /// lexicographically; the first violation found is returned.
    pub fn check_kwise(&self, k: usize) -> KwiseCheck {
        let d = match self {
            Distribution::Product(_) => return KwiseCheck { independent: true, witness: None },
            Distribution::Explicit(d) => d,
        };
        let single = self.player_marginals();
        let q = d.alphabet.len();
        for size in 2..=k.min(d.n) {
            for players in (0..d.n).combinations(size) {
                let mut joint: HashMap<Vec<u8>, Rational> = HashMap::new();
                for (x, w) in &d.support {
                    let key: Vec<u8> = players.iter().map(|&i| x[i]).collect();
                    *joint.entry(key).or_insert_with(Rational::zero) += w;
                }
                let witness = (0..size)
                    .map(|_| 0..q as u8)
                    .multi_cartesian_product()
                    .find_map(|a| {
                        let product: Rational =
                            players.iter().zip(&a).map(|(&i, &s)| single[i][s as usize].clone()).product();
                        let p = joint.get(&a).cloned().unwrap_or_else(Rational::zero);
                        (p != product).then(|| KwiseWitness {
                            players: players.clone(),
                            assignment: a,
                            joint: p,
                            product,
                        })
                    });
                if witness.is_some() {
                    return KwiseCheck { independent: false, witness };
                }
            }
        }
        KwiseCheck { independent: true, witness: None }
    }

    /// Errors with the witness unless the law is `k`-wise independent.
    pub fn require_kwise(&self, k: usize) -> Result<()> {
        match self.check_kwise(k).witness {
            None => Ok(()),
            Some(witness) => Err(Error::NotIndependent { k, witness: Box::new(witness) }),
        }
    }

    pub fn sampler(&self) -> Sampler {
        match self {
            Distribution::Explicit(d) => Sampler(SamplerKind::Explicit {
                outcomes: d.support.iter().map(|(x, _)| x.clone()).collect(),
                table: Categorical::new(d.support.iter().map(|(_, w)| w)),
            }),
            Distribution::Product(d) => Sampler(SamplerKind::Product(
                d.marginals
                    .iter()
                    .map(|m| {
                        let symbols: Vec<u8> = (0..m.len() as u8).filter(|&s| m[s as usize].is_positive()).collect();
                        let table = Categorical::new(symbols.iter().map(|&s| &m[s as usize]));
                        (symbols, table)
                    })
                    .collect(),
            )),
        }
    }

    /// One exact draw, determined by `(seed, index)`.
    pub fn sample(&self, seed: u64, index: u64) -> Outcome {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        self.sampler().draw(&mut rng)
    }
}

/// Mixture `q·d1 + (1−q)·d2`, zero-weight entries dropped.
pub fn mixture(d1: &Distribution, d2: &Distribution, q: &Rational) -> Result<ExplicitDist> {
    if d1.alphabet() != d2.alphabet() || d1.n() != d2.n() {
        return Err(Error::Mismatch);
    }
    if !rational::in_unit_interval(q) {
        return Err(Error::Parameter(format!("mixture weight {q} outside [0, 1]")));
    }
    let rest = Rational::one() - q;
    let mut acc: BTreeMap<Vec<u8>, Rational> = BTreeMap::new();
    for (d, c) in [(d1, q), (d2, &rest)] {
        if c.is_zero() {
            continue;
        }
        d.for_each(|x, w| *acc.entry(x.to_vec()).or_insert_with(Rational::zero) += w * c);
    }
    let support = acc.into_iter().filter(|(_, w)| w.is_positive()).map(|(x, w)| (Outcome(x), w)).collect();
    Ok(ExplicitDist { alphabet: d1.alphabet().clone(), n: d1.n(), support })
}

/// Exact categorical draw: weights scaled to integers over their common
/// denominator, then a uniform integer below the total.
#[derive(Clone, Debug)]
enum Categorical {
    Small { cumulative: Vec<u64>, total: u64 },
    Big { cumulative: Vec<BigUint>, total: BigUint },
}

impl Categorical {
    fn new<'a>(weights: impl Iterator<Item = &'a Rational> + Clone) -> Self {
        let lcm = weights.clone().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let scaled: Vec<BigUint> = weights
            .map(|w| (w.numer() * (&lcm / w.denom())).to_biguint().expect("weights are non-negative"))
            .collect();
        let mut cumulative = Vec::with_capacity(scaled.len());
        let mut total = BigUint::zero();
        for s in scaled {
            total += s;
            cumulative.push(total.clone());
        }
        match (cumulative.iter().map(|c| c.to_u64()).collect::<Option<Vec<_>>>(), total.to_u64()) {
            (Some(cumulative), Some(total)) => Categorical::Small { cumulative, total },
            _ => Categorical::Big { cumulative, total },
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match self {
            Categorical::Small { cumulative, total } => {
                let r = rng.gen_range(0..*total);
                cumulative.partition_point(|&c| c <= r)
            }
            Categorical::Big { cumulative, total } => {
                let r = rng.gen_biguint_below(total);
                cumulative.partition_point(|c| *c <= r)
            }
        }
    }
}

/// Precomputed draw tables for repeated sampling.
#[derive(Clone, Debug)]
pub struct Sampler(SamplerKind);

#[derive(Clone, Debug)]
enum SamplerKind {
    Explicit { outcomes: Vec<Outcome>, table: Categorical },
    Product(Vec<(Vec<u8>, Categorical)>),
}

impl Sampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Outcome {
        let mut x = Vec::new();
        self.draw_into(rng, &mut x);
        Outcome(x)
    }

    /// Draws into a reusable buffer.
    pub fn draw_into<R: Rng + ?Sized>(&self, rng: &mut R, x: &mut Vec<u8>) {
        x.clear();
        match &self.0 {
            SamplerKind::Explicit { outcomes, table } => x.extend_from_slice(&outcomes[table.draw(rng)]),
            SamplerKind::Product(players) => x.extend(players.iter().map(|(symbols, t)| symbols[t.draw(rng)])),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{Builtin, PlayerFunction};
    use crate::rational::{int, rat};

    fn even_parity3() -> Distribution {
        ExplicitDist::uniform(
            Alphabet::binary(),
            3,
            ["000", "101", "011", "110"].iter().map(|s| Outcome::bits(s)).collect(),
        )
        .unwrap()
        .into()
    }

    fn fair_bits(n: usize) -> Distribution {
        ProductDist::iid(Alphabet::binary(), n, vec![rat(1, 2), rat(1, 2)]).unwrap().into()
    }

    #[test]
    fn alphabet_rejects_duplicates_and_empty() {
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["0", "1", "0"]).is_err());
        assert_ne!(Alphabet::new(["1", "0"]).unwrap(), Alphabet::binary());
    }

    #[test]
    fn validate_accepts_uniform_parity_space() {
        even_parity3().validate().unwrap();
    }

    #[test]
    fn validate_reports_weight_sum() {
        let ws = [rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 3)];
        let support = ["000", "101", "011", "110"].iter().zip(ws).map(|(s, w)| (Outcome::bits(s), w)).collect();
        let err = ExplicitDist::new(Alphabet::binary(), 3, support).unwrap_err();
        assert_eq!(err.to_string(), "weights sum to 13/12");
    }

    #[test]
    fn validate_reports_arity_and_duplicates() {
        let support = vec![(Outcome::bits("00"), rat(1, 2)), (Outcome::bits("111"), rat(1, 2))];
        assert!(matches!(
            ExplicitDist::new(Alphabet::binary(), 3, support),
            Err(Error::Arity { expected: 3, got: 2 })
        ));
        let support = vec![(Outcome::bits("001"), rat(1, 2)), (Outcome::bits("001"), rat(1, 2))];
        assert!(matches!(ExplicitDist::new(Alphabet::binary(), 3, support), Err(Error::DuplicateOutcome(_))));
        let support = vec![(Outcome::bits("002"), int(1))];
        assert!(matches!(ExplicitDist::new(Alphabet::binary(), 3, support), Err(Error::Symbol { .. })));
    }

    #[test]
    fn product_validation() {
        assert!(ProductDist::iid(Alphabet::binary(), 2, vec![rat(1, 2), rat(1, 3)]).is_err());
        assert!(ProductDist::iid(Alphabet::binary(), 2, vec![rat(3, 2), rat(-1, 2)]).is_err());
        assert!(ProductDist::iid(Alphabet::binary(), 2, vec![int(1)]).is_err());
    }

    #[test]
    fn marginal_of_parity_space_is_a_fair_bit() {
        let m = even_parity3().marginal(&[0]).unwrap().to_explicit();
        assert_eq!(m, ExplicitDist::uniform(Alphabet::binary(), 1, vec![Outcome::bits("0"), Outcome::bits("1")]).unwrap());
    }

    #[test]
    fn marginal_over_all_players_is_identity() {
        let d = even_parity3();
        assert_eq!(d.marginal(&[0, 1, 2]).unwrap(), d);
        let p = fair_bits(3);
        assert_eq!(p.marginal(&[0, 1, 2]).unwrap().to_explicit(), p.to_explicit());
    }

    #[test]
    fn marginal_of_product_is_product() {
        let m = fair_bits(3).marginal(&[0, 2]).unwrap();
        assert_eq!(m, fair_bits(2));
        assert!(matches!(fair_bits(3).marginal(&[3]), Err(Error::Player { index: 3, n: 3 })));
    }

    #[test]
    fn condition_on_parity_space() {
        let c = even_parity3().condition(&[(0, 1)]).unwrap().to_explicit();
        let want = ExplicitDist::uniform(Alphabet::binary(), 3, vec![Outcome::bits("101"), Outcome::bits("110")]).unwrap();
        assert_eq!(c, want);
        assert!(matches!(even_parity3().condition(&[(0, 1), (1, 0), (2, 0)]), Err(Error::NullEvent)));
    }

    #[test]
    fn condition_pins_product_marginal() {
        let c = fair_bits(2).condition(&[(0, 0)]).unwrap();
        let want = ProductDist::new(Alphabet::binary(), 2, vec![vec![int(1), int(0)], vec![rat(1, 2), rat(1, 2)]]).unwrap();
        assert_eq!(c, Distribution::Product(want));
    }

    #[test]
    fn mixture_of_mu_and_complement() {
        let mu = even_parity3();
        let bar: Distribution = ExplicitDist::uniform(
            Alphabet::binary(),
            3,
            ["111", "010", "100", "001"].iter().map(|s| Outcome::bits(s)).collect(),
        )
        .unwrap()
        .into();
        let d = mixture(&mu, &bar, &rat(1, 2)).unwrap();
        assert_eq!(d, fair_bits(3).to_explicit());
        assert_eq!(mixture(&mu, &mu, &rat(1, 3)).unwrap(), mu.to_explicit());
        assert_eq!(mixture(&mu, &bar, &int(1)).unwrap(), mu.to_explicit());
        assert!(matches!(mixture(&mu, &fair_bits(2), &rat(1, 2)), Err(Error::Mismatch)));
    }

    #[test]
    fn parity_space_is_pairwise_but_not_threewise() {
        let d = even_parity3();
        assert!(d.check_kwise(2).independent);
        let c = d.check_kwise(3);
        assert!(!c.independent);
        let w = c.witness.unwrap();
        assert_eq!(w.players, vec![0, 1, 2]);
        assert_ne!(w.joint, w.product);
        // the all-ones assignment is also a violation: mass 0 against 1/8
        assert_eq!(d.to_explicit().weight(&[1, 1, 1]), int(0));
        assert!(fair_bits(4).check_kwise(4).independent);
    }

    #[test]
    fn expectations() {
        let maj = PlayerFunction::Builtin(Builtin::majority(3));
        assert_eq!(even_parity3().expectation(&maj).unwrap(), rat(3, 4));
        assert_eq!(even_parity3().expectation(&PlayerFunction::Builtin(Builtin::constant(3, int(1)))).unwrap(), int(1));
        assert_eq!(fair_bits(3).expectation(&PlayerFunction::Builtin(Builtin::parity(3))).unwrap(), rat(1, 2));
    }

    #[test]
    fn product_stream_skips_zero_symbols() {
        let d: Distribution =
            ProductDist::iid(Alphabet::with_abstain(), 3, vec![rat(1, 2), int(0), rat(1, 2)]).unwrap().into();
        assert_eq!(d.support_len(), 8);
        assert_eq!(d.to_explicit().len(), 8);
        assert!(d.to_explicit().validate().is_ok());
    }

    #[test]
    fn sampling_is_deterministic_and_on_support() {
        let d = even_parity3();
        for i in 0..50 {
            let x = d.sample(7, i);
            assert_eq!(x, d.sample(7, i));
            assert!(d.to_explicit().weight(&x).is_positive());
        }
        let p = fair_bits(5);
        let draws: Vec<_> = (0..20).map(|i| p.sample(1, i)).collect();
        assert!(draws.iter().any(|x| x != &draws[0]));
    }

    #[test]
    fn sampling_frequencies_track_weights() {
        let d: Distribution = ExplicitDist::new(
            Alphabet::binary(),
            1,
            vec![(Outcome::bits("0"), rat(1, 5)), (Outcome::bits("1"), rat(4, 5))],
        )
        .unwrap()
        .into();
        let s = d.sampler();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ones = (0..20_000).filter(|_| s.draw(&mut rng)[0] == 1).count();
        assert!((ones as f64 / 20_000.0 - 0.8).abs() < 0.02);
    }
}
