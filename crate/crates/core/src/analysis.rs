//! Effects, influences, pivotal players and sets, and the Fourier transform
//! over minimal-support pairwise-independent spaces.
//!
//! All comparisons against thresholds are strict (`effect > α`,
//! `mass > p`) and exact.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boolfn::PlayerFunction;
use crate::dist::{Distribution, ExplicitDist, Outcome, ProductDist};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `E[f]`, `E[f²]`, and for every player and symbol the mass
/// `Pr[X_i = s]` and the partial sum `E[f · 1{X_i = s}]`, from one pass
/// over the support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionalTable {
    pub expectation: Rational,
    pub second_moment: Rational,
    pub mass: Vec<Vec<Rational>>,
    pub weighted: Vec<Vec<Rational>>,
}

impl ConditionalTable {
    /// `E[f | X_i = s]`, or `None` on a null event.
    pub fn conditional(&self, i: usize, s: usize) -> Option<Rational> {
        let m = &self.mass[i][s];
        (!m.is_zero()).then(|| &self.weighted[i][s] / m)
    }

    pub fn variance(&self) -> Rational {
        &self.second_moment - &self.expectation * &self.expectation
    }

    /// `E[f | X_i = s] − E[f]` for each symbol, `None` where `Pr[X_i = s] = 0`.
    pub fn deviations(&self, i: usize) -> Vec<Option<Rational>> {
        (0..self.mass[i].len()).map(|s| self.conditional(i, s).map(|c| c - &self.expectation)).collect()
    }

    /// `E[f | X_i = 1] − E[f | X_i = 0]`.
    pub fn signed_difference(&self, i: usize) -> Result<Rational> {
        match (self.conditional(i, 1), self.conditional(i, 0)) {
            (Some(one), Some(zero)) => Ok(one - zero),
            _ => Err(Error::NullEvent),
        }
    }
}

pub fn conditional_table(f: &PlayerFunction, d: &Distribution) -> Result<ConditionalTable> {
    f.check_against(d)?;
    let q = d.alphabet().len();
    let n = d.n();
    let mut weighted = vec![vec![Rational::zero(); q]; n];
    let mut expectation = Rational::zero();
    let mut second_moment = Rational::zero();
    d.try_for_each(|x, w| {
        let v = f.evaluate(x)?;
        if v.is_zero() {
            return Ok(());
        }
        let wv = w * &v;
        second_moment += &wv * &v;
        for (i, &s) in x.iter().enumerate() {
            weighted[i][s as usize] += &wv;
        }
        expectation += wv;
        Ok::<_, Error>(())
    })?;
    Ok(ConditionalTable { expectation, second_moment, mass: d.player_marginals(), weighted })
}

fn require_binary(d: &Distribution) -> Result<()> {
    if !d.alphabet().is_binary() {
        return Err(Error::NotBinary);
    }
    Ok(())
}

/// `E[f | X_i = 1] − E[f | X_i = 0]` on any alphabet containing the
/// symbols at indices 0 and 1.
pub fn signed_difference(f: &PlayerFunction, d: &Distribution, i: usize) -> Result<Rational> {
    if i >= d.n() {
        return Err(Error::Player { index: i, n: d.n() });
    }
    if d.alphabet().len() < 2 {
        return Err(Error::NotBinary);
    }
    conditional_table(f, d)?.signed_difference(i)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EffectRow {
    pub player: usize,
    #[serde(with = "crate::report::exact")]
    pub signed: Rational,
    #[serde(with = "crate::report::exact")]
    pub effect: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EffectReport {
    pub rows: Vec<EffectRow>,
}

impl EffectReport {
    pub fn effects(&self) -> impl Iterator<Item = &Rational> {
        self.rows.iter().map(|r| &r.effect)
    }

    /// Players with effect strictly above `alpha`.
    pub fn count_above(&self, alpha: &Rational) -> usize {
        self.effects().filter(|e| *e > alpha).count()
    }

    pub fn sum_of_squares(&self) -> Rational {
        self.effects().map(|e| e * e).sum()
    }
}

/// Effects of every player on a binary alphabet.
pub fn effects(f: &PlayerFunction, d: &Distribution) -> Result<EffectReport> {
    require_binary(d)?;
    let table = conditional_table(f, d)?;
    let rows = (0..d.n())
        .map(|i| {
            let signed = table.signed_difference(i)?;
            Ok(EffectRow { player: i, effect: signed.abs(), signed })
        })
        .collect::<Result<_>>()?;
    Ok(EffectReport { rows })
}

/// `|E[f | X_i = 1] − E[f | X_i = 0]|`.
pub fn effect(f: &PlayerFunction, d: &Distribution, i: usize) -> Result<Rational> {
    require_binary(d)?;
    Ok(signed_difference(f, d, i)?.abs())
}

/// `K(f, X, α)`: players with effect strictly above `alpha`.
pub fn count_effect(f: &PlayerFunction, d: &Distribution, alpha: &Rational) -> Result<usize> {
    Ok(effects(f, d)?.count_above(alpha))
}

/// `Pr_{x∼d}[f(x) ≠ f(x ⊕ e_i)]` for every player.
pub fn influences(f: &PlayerFunction, d: &Distribution) -> Result<Vec<Rational>> {
    require_binary(d)?;
    f.check_against(d)?;
    let n = d.n();
    let mut acc = vec![Rational::zero(); n];
    let mut y = Vec::with_capacity(n);
    d.try_for_each(|x, w| {
        let fx = f.evaluate(x)?;
        y.clear();
        y.extend_from_slice(x);
        for i in 0..n {
            y[i] ^= 1;
            if f.evaluate(&y)? != fx {
                acc[i] += w;
            }
            y[i] ^= 1;
        }
        Ok::<_, Error>(())
    })?;
    Ok(acc)
}

pub fn influence(f: &PlayerFunction, d: &Distribution, i: usize) -> Result<Rational> {
    if i >= d.n() {
        return Err(Error::Player { index: i, n: d.n() });
    }
    Ok(influences(f, d)?.swap_remove(i))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PivotalRow {
    pub player: usize,
    /// `E[f | X_i = s] − E[f]` per symbol; `None` where `Pr[X_i = s] = 0`.
    #[serde(with = "crate::report::exact_opt_vec")]
    pub deviations: Vec<Option<Rational>>,
    /// `Pr[|E[f | X_i] − E[f]| > α]`.
    #[serde(with = "crate::report::exact")]
    pub mass: Rational,
    pub pivotal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PivotalReport {
    #[serde(with = "crate::report::exact")]
    pub expectation: Rational,
    #[serde(with = "crate::report::exact")]
    pub p: Rational,
    #[serde(with = "crate::report::exact")]
    pub alpha: Rational,
    pub rows: Vec<PivotalRow>,
}

impl PivotalReport {
    pub fn count(&self) -> usize {
        self.rows.iter().filter(|r| r.pivotal).count()
    }
}

fn pivotal_row(table: &ConditionalTable, i: usize, p: &Rational, alpha: &Rational) -> PivotalRow {
    let deviations = table.deviations(i);
    let mass: Rational = deviations
        .iter()
        .enumerate()
        .filter(|(_, dev)| dev.as_ref().is_some_and(|v| v.abs() > *alpha))
        .map(|(s, _)| table.mass[i][s].clone())
        .sum();
    let pivotal = mass > *p;
    PivotalRow { player: i, deviations, mass, pivotal }
}

pub fn pivotal_report_from(table: &ConditionalTable, p: &Rational, alpha: &Rational) -> PivotalReport {
    PivotalReport {
        expectation: table.expectation.clone(),
        p: p.clone(),
        alpha: alpha.clone(),
        rows: (0..table.mass.len()).map(|i| pivotal_row(table, i, p, alpha)).collect(),
    }
}

pub fn pivotal_report(f: &PlayerFunction, d: &Distribution, p: &Rational, alpha: &Rational) -> Result<PivotalReport> {
    Ok(pivotal_report_from(&conditional_table(f, d)?, p, alpha))
}

/// Whether player `i` is `(p, α)`-pivotal, with the row behind the verdict.
pub fn pivotal_player(
    f: &PlayerFunction,
    d: &Distribution,
    i: usize,
    p: &Rational,
    alpha: &Rational,
) -> Result<PivotalRow> {
    if i >= d.n() {
        return Err(Error::Player { index: i, n: d.n() });
    }
    Ok(pivotal_row(&conditional_table(f, d)?, i, p, alpha))
}

/// `K(f, X, p, α)`.
pub fn count_pivotal(f: &PlayerFunction, d: &Distribution, p: &Rational, alpha: &Rational) -> Result<usize> {
    Ok(pivotal_report(f, d, p, alpha)?.count())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetPivotality {
    pub players: Vec<usize>,
    /// `Pr[|E[f | X_T] − E[f]| > α]`.
    #[serde(with = "crate::report::exact")]
    pub mass: Rational,
    pub pivotal: bool,
}

/// Whether the coalition `players` is `(p, α)`-pivotal, by enumerating the
/// support of `X_T`.
pub fn pivotal_set(
    f: &PlayerFunction,
    d: &Distribution,
    players: &[usize],
    p: &Rational,
    alpha: &Rational,
) -> Result<SetPivotality> {
    if players.is_empty() {
        return Err(Error::Parameter("pivotal set must be non-empty".into()));
    }
    for (k, &i) in players.iter().enumerate() {
        if i >= d.n() {
            return Err(Error::Player { index: i, n: d.n() });
        }
        if players[..k].contains(&i) {
            return Err(Error::Parameter(format!("player {i} listed twice")));
        }
    }
    f.check_against(d)?;
    let mut groups: HashMap<Vec<u8>, (Rational, Rational)> = HashMap::new();
    let mut expectation = Rational::zero();
    d.try_for_each(|x, w| {
        let v = f.evaluate(x)?;
        let key: Vec<u8> = players.iter().map(|&i| x[i]).collect();
        let entry = groups.entry(key).or_insert_with(|| (Rational::zero(), Rational::zero()));
        entry.0 += w;
        if !v.is_zero() {
            let wv = w * v;
            entry.1 += &wv;
            expectation += wv;
        }
        Ok::<_, Error>(())
    })?;
    let mass: Rational = groups
        .values()
        .filter(|(m, s)| (s / m - &expectation).abs() > *alpha)
        .map(|(m, _)| m.clone())
        .sum();
    let pivotal = mass > *p;
    Ok(SetPivotality { players: players.to_vec(), mass, pivotal })
}

/// Characters and coefficients of `f` over a pairwise-independent space of
/// support `n + 1 = 2^k` with fair marginals. The support is ordered
/// lexicographically and point `z` of that order plays the role of `x^z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierTable {
    pub k: usize,
    pub support: Vec<Outcome>,
    /// `f̂(y)` for `y = 0..=n`; `y ≥ 1` is player `y − 1`.
    pub coefficients: Vec<Rational>,
}

impl FourierTable {
    pub fn n(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `Σ_y f̂(y)²`.
    pub fn parseval_sum(&self) -> Rational {
        self.coefficients.iter().map(|c| c * c).sum()
    }

    /// `χ_y(z)` as ±1.
    pub fn character(&self, y: usize, z: usize) -> i64 {
        character(&self.support, y, z)
    }

    /// Gram matrix of the characters under `<g, h> = 2^{-k} Σ_z g(z) h(z)`,
    /// scaled by `2^k` so entries are integers.
    pub fn gram(&self) -> Vec<Vec<i64>> {
        let m = self.support.len();
        (0..m)
            .map(|y| (0..m).map(|y2| (0..m).map(|z| self.character(y, z) * self.character(y2, z)).sum()).collect())
            .collect()
    }
}

fn character(support: &[Outcome], y: usize, z: usize) -> i64 {
    if y == 0 || support[z][y - 1] == 0 {
        1
    } else {
        -1
    }
}

/// Checks that `mu` is a pairwise-independent space on `{0,1}^n` with
/// fair marginals, uniform weights and support `n + 1 = 2^k`. Returns `k`.
pub fn check_minimal_support(mu: &ExplicitDist) -> Result<usize> {
    let fail = |msg: String| Err(Error::Precondition(msg));
    if !mu.alphabet().is_binary() {
        return fail("alphabet is not binary".into());
    }
    let n = mu.n();
    if !(n + 1).is_power_of_two() {
        return fail(format!("n + 1 = {} is not a power of two", n + 1));
    }
    if mu.len() != n + 1 {
        return fail(format!("support size {} differs from n + 1 = {}", mu.len(), n + 1));
    }
    let w = Rational::new(One::one(), (n as i64 + 1).into());
    if let Some((x, v)) = mu.support().iter().find(|(_, v)| *v != w) {
        return fail(format!("weight {v} at {} is not uniform", mu.alphabet().render(x)));
    }
    let d = Distribution::Explicit(mu.clone());
    let half = Rational::new(One::one(), 2.into());
    for (i, m) in d.player_marginals().iter().enumerate() {
        if m[1] != half {
            return fail(format!("Pr[X_{i} = 1] = {} is not 1/2", m[1]));
        }
    }
    if let Some(w) = d.check_kwise(2).witness {
        return fail(format!("not pairwise independent: {w}"));
    }
    Ok((n + 1).trailing_zeros() as usize)
}

/// `f̂(y) = 2^{-k} Σ_z f(x^z) χ_y(z)`; orthonormality of the characters is
/// verified before returning.
pub fn fourier(f: &PlayerFunction, mu: &ExplicitDist) -> Result<FourierTable> {
    let k = check_minimal_support(mu)?;
    f.check_against(&Distribution::Explicit(mu.clone()))?;
    let support: Vec<Outcome> = mu.outcomes().cloned().collect();
    let m = support.len();
    let values: Vec<Rational> = support.iter().map(|x| f.evaluate(x)).collect::<Result<_>>()?;
    let scale = Rational::new(One::one(), (m as i64).into());
    let coefficients = (0..m)
        .map(|y| {
            let s: Rational = values
                .iter()
                .enumerate()
                .map(|(z, v)| if character(&support, y, z) == 1 { v.clone() } else { -v })
                .sum();
            s * &scale
        })
        .collect();
    let table = FourierTable { k, support, coefficients };
    let gram = table.gram();
    for (y, row) in gram.iter().enumerate() {
        for (y2, &g) in row.iter().enumerate() {
            let want = if y == y2 { m as i64 } else { 0 };
            if g != want {
                return Err(Error::Precondition(format!("characters {y} and {y2} are not orthonormal")));
            }
        }
    }
    Ok(table)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EffectIdentity {
    #[serde(with = "crate::report::exact")]
    pub sum_sq_effects: Rational,
    #[serde(with = "crate::report::exact")]
    pub variance: Rational,
    /// `Σ E_i² / Var[f]`, undefined for constant `f`.
    #[serde(with = "crate::report::exact_opt")]
    pub ratio: Option<Rational>,
}

/// Sum of squared effects against the variance on a minimal-support
/// pairwise-independent space.
pub fn effect_identity(f: &PlayerFunction, mu: &ExplicitDist) -> Result<EffectIdentity> {
    check_minimal_support(mu)?;
    let d = Distribution::Explicit(mu.clone());
    let table = conditional_table(f, &d)?;
    let sum_sq_effects: Rational = (0..d.n())
        .map(|i| table.signed_difference(i).map(|s| &s * &s))
        .sum::<Result<Rational>>()?;
    let variance = table.variance();
    let ratio = (!variance.is_zero()).then(|| &sum_sq_effects / &variance);
    Ok(EffectIdentity { sum_sq_effects, variance, ratio })
}

/// Hoeffding half-width for the mean of `m` samples with values in an
/// interval of length `range`, at confidence `1 − delta`.
pub fn hoeffding_halfwidth(m: usize, range: f64, delta: f64) -> f64 {
    if m == 0 {
        return f64::INFINITY;
    }
    range * ((2.0 / delta).ln() / (2.0 * m as f64)).sqrt()
}

/// Confidence level used for Monte Carlo intervals.
pub const CONFIDENCE_DELTA: f64 = 0.05;

/// Range of a `[-1, 1]`-valued function.
const VALUE_RANGE: f64 = 2.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EffectEstimate {
    /// Difference of conditional sample means, `X_i = 1` minus `X_i = 0`.
    pub estimate: f64,
    /// 95% half-width: each conditional mean gets a Hoeffding interval at
    /// confidence `1 − δ/2`.
    pub halfwidth: f64,
    pub ones: usize,
    pub zeros: usize,
}

/// Monte Carlo estimate of `E[f | X_i = 1] − E[f | X_i = 0]`, deterministic
/// given `seed`.
pub fn estimate_effect(
    f: &PlayerFunction,
    d: &ProductDist,
    i: usize,
    samples: usize,
    seed: u64,
) -> Result<EffectEstimate> {
    if samples == 0 {
        return Err(Error::Parameter("samples must be at least 1".into()));
    }
    if i >= d.n() {
        return Err(Error::Player { index: i, n: d.n() });
    }
    if d.alphabet().len() < 2 {
        return Err(Error::NotBinary);
    }
    let dist = Distribution::Product(d.clone());
    f.check_against(&dist)?;
    let sampler = dist.sampler();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum1, mut sum0, mut ones, mut zeros) = (0.0, 0.0, 0usize, 0usize);
    let mut x = Vec::with_capacity(d.n());
    for _ in 0..samples {
        sampler.draw_into(&mut rng, &mut x);
        match x[i] {
            1 => {
                sum1 += rational::to_f64(&f.evaluate(&x)?);
                ones += 1;
            }
            0 => {
                sum0 += rational::to_f64(&f.evaluate(&x)?);
                zeros += 1;
            }
            _ => {}
        }
    }
    let mean = |s: f64, m: usize| if m == 0 { 0.0 } else { s / m as f64 };
    let delta = CONFIDENCE_DELTA / 2.0;
    Ok(EffectEstimate {
        estimate: mean(sum1, ones) - mean(sum0, zeros),
        halfwidth: hoeffding_halfwidth(ones, VALUE_RANGE, delta) + hoeffding_halfwidth(zeros, VALUE_RANGE, delta),
        ones,
        zeros,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeviationEstimate {
    pub estimate: f64,
    pub halfwidth: f64,
    pub samples: usize,
}

/// Monte Carlo estimates of `E[f | X_i = s] − E[f]` for every player and
/// symbol. Each interval is a 95% Hoeffding interval built from one
/// interval for the conditional mean and one for the overall mean.
pub fn estimate_deviations(
    f: &PlayerFunction,
    d: &ProductDist,
    samples: usize,
    seed: u64,
) -> Result<Vec<Vec<Option<DeviationEstimate>>>> {
    if samples == 0 {
        return Err(Error::Parameter("samples must be at least 1".into()));
    }
    let dist = Distribution::Product(d.clone());
    f.check_against(&dist)?;
    let q = d.alphabet().len();
    let n = d.n();
    let sampler = dist.sampler();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sums = vec![vec![0.0f64; q]; n];
    let mut counts = vec![vec![0usize; q]; n];
    let mut total = 0.0;
    let mut x = Vec::with_capacity(n);
    for _ in 0..samples {
        sampler.draw_into(&mut rng, &mut x);
        let v = rational::to_f64(&f.evaluate(&x)?);
        total += v;
        for (i, &s) in x.iter().enumerate() {
            sums[i][s as usize] += v;
            counts[i][s as usize] += 1;
        }
    }
    let mean = total / samples as f64;
    let delta = CONFIDENCE_DELTA / 2.0;
    let overall = hoeffding_halfwidth(samples, VALUE_RANGE, delta);
    Ok((0..n)
        .map(|i| {
            (0..q)
                .map(|s| {
                    let m = counts[i][s];
                    (m > 0).then(|| DeviationEstimate {
                        estimate: sums[i][s] / m as f64 - mean,
                        halfwidth: hoeffding_halfwidth(m, VALUE_RANGE, delta) + overall,
                        samples: m,
                    })
                })
                .collect()
        })
        .collect())
}
