//! Instance verifiers for the pivotal-player bounds, the reduction to
//! binary effects, the elimination set, the mixture identity and the
//! `Maj_p` tightness table.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{self, conditional_table, pivotal_report_from};
use crate::boolfn::{Builtin, Certificate, DenseTable, PlayerFunction};
use crate::dist::{mixture, Alphabet, Distribution, ExplicitDist, Outcome};
use crate::error::{Error, Result};
use crate::generators::majp_dist;
use crate::rational::{int, Rational};

fn positive(name: &str, r: &Rational) -> Result<()> {
    if !r.is_positive() {
        return Err(Error::Parameter(format!("{name} must be positive, got {r}")));
    }
    Ok(())
}

fn count(c: usize) -> Rational {
    int(c as i64)
}

/// A count against a strict upper bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub count: usize,
    #[serde(with = "crate::report::exact")]
    pub bound: Rational,
    pub ok: bool,
}

impl BoundCheck {
    fn strict(count: usize, bound: Rational) -> Self {
        let ok = self::count(count) < bound;
        BoundCheck { count, bound, ok }
    }
}

/// `8 / (p α²)`.
pub fn thm1_bound(p: &Rational, alpha: &Rational) -> Rational {
    int(8) / (p * alpha * alpha)
}

/// `K(f, X, p, α) < 8/(pα²)` for pairwise-independent `X`.
pub fn verify_thm1(f: &PlayerFunction, d: &Distribution, p: &Rational, alpha: &Rational) -> Result<BoundCheck> {
    positive("p", p)?;
    positive("alpha", alpha)?;
    d.require_kwise(2)?;
    let c = analysis::count_pivotal(f, d, p, alpha)?;
    Ok(BoundCheck::strict(c, thm1_bound(p, alpha)))
}

/// True for independent fair bits, in product or explicit form.
pub fn is_uniform_bits(d: &Distribution) -> bool {
    if !d.alphabet().is_binary() {
        return false;
    }
    let half = Rational::new(1.into(), 2.into());
    match d {
        Distribution::Product(p) => p.marginals().iter().all(|m| m[0] == half && m[1] == half),
        Distribution::Explicit(e) => {
            let n = e.n();
            n < 63
                && e.len() as u64 == 1u64 << n
                && e.support().iter().all(|(_, w)| *w == crate::generators::dyadic(n))
        }
    }
}

/// `K(f, X, α) < 4/α²` for independent fair bits.
pub fn verify_warmup(f: &PlayerFunction, d: &Distribution, alpha: &Rational) -> Result<BoundCheck> {
    positive("alpha", alpha)?;
    if !is_uniform_bits(d) {
        return Err(Error::Precondition("distribution is not independent fair bits".into()));
    }
    let c = analysis::count_effect(f, d, alpha)?;
    Ok(BoundCheck::strict(c, int(4) / (alpha * alpha)))
}

/// `p = min(q, 1 − q)` for a binary pairwise-independent law whose players
/// share `Pr[X_i = 1] = q` with `0 < q < 1`.
pub fn common_bias(d: &Distribution) -> Result<Rational> {
    if !d.alphabet().is_binary() {
        return Err(Error::NotBinary);
    }
    d.require_kwise(2)?;
    let marginals = d.player_marginals();
    let q = marginals[0][1].clone();
    if let Some((i, m)) = marginals.iter().enumerate().find(|(_, m)| m[1] != q) {
        return Err(Error::Marginal { player: i, reason: format!("Pr[X = 1] = {} differs from {q}", m[1]) });
    }
    if q.is_zero() || q.is_one() {
        return Err(Error::Marginal { player: 0, reason: format!("Pr[X = 1] = {q} is degenerate") });
    }
    let rest = Rational::one() - &q;
    Ok(if q < rest { q } else { rest })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumBound {
    #[serde(with = "crate::report::exact")]
    pub sum: Rational,
    /// `2k/p`, compared against `sum²`.
    #[serde(with = "crate::report::exact")]
    pub bound_sq: Rational,
    pub ok: bool,
}

/// `Σ_{i∈T} E_i(f) ≤ √(2|T|/p)`, checked as `sum² ≤ 2|T|/p`.
pub fn verify_sum_bound(f: &PlayerFunction, d: &Distribution, players: &[usize]) -> Result<SumBound> {
    if players.is_empty() {
        return Err(Error::Parameter("player set must be non-empty".into()));
    }
    if let Some(&i) = players.iter().find(|&&i| i >= d.n()) {
        return Err(Error::Player { index: i, n: d.n() });
    }
    if !players.iter().all_unique() {
        return Err(Error::Parameter("player set has repeats".into()));
    }
    let p = common_bias(d)?;
    let report = analysis::effects(f, d)?;
    let sum: Rational = players.iter().map(|&i| report.rows[i].effect.clone()).sum();
    let bound_sq = count(2 * players.len()) / p;
    let ok = &sum * &sum <= bound_sq;
    Ok(SumBound { sum, bound_sq, ok })
}

/// `K(f, X, α) < 2/(pα²)` with `p` the common bias.
pub fn verify_binary_bound(f: &PlayerFunction, d: &Distribution, alpha: &Rational) -> Result<BoundCheck> {
    positive("alpha", alpha)?;
    let p = common_bias(d)?;
    let c = analysis::count_effect(f, d, alpha)?;
    Ok(BoundCheck::strict(c, int(2) / (p * alpha * alpha)))
}

/// How `f` was transformed so that the selected side deviates upward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flip {
    None,
    /// `−f`.
    Negate,
    /// `1 − f`, used when `f` is 0/1-valued on the support.
    Complement,
}

impl Flip {
    fn apply(self, v: Rational) -> Rational {
        match self {
            Flip::None => v,
            Flip::Negate => -v,
            Flip::Complement => Rational::one() - v,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReductionResult {
    /// Selected players, ascending; coordinate `j` of `Y` belongs to
    /// `players[j]`.
    pub players: Vec<usize>,
    pub flip: Flip,
    /// `p_i = Pr[E[f' | X_i] − E[f'] > α]` per selected player.
    pub p_i: Vec<Rational>,
    pub y: ExplicitDist,
    /// `g(y) = E[f' | Y = y]`, and `E[f']` where `Pr[Y = y] = 0`.
    pub g: DenseTable,
    /// `K(f, X, p, α)`.
    pub count_f: usize,
    /// `K(g, Y, α)`.
    pub count_g: usize,
    pub certificate: Certificate,
}

impl ReductionResult {
    pub fn flipped(&self) -> bool {
        self.flip != Flip::None
    }
}

/// Builds binary `Y` and `g` with `Pr[Y_i = 0] = p/2`, every effect of `g`
/// above `α`, and `K(f, X, p, α) ≤ 2 K(g, Y, α)`. The auxiliary coins are
/// summed out exactly.
pub fn reduce(f: &PlayerFunction, d: &Distribution, p: &Rational, alpha: &Rational) -> Result<ReductionResult> {
    positive("p", p)?;
    positive("alpha", alpha)?;
    if *p > Rational::one() {
        return Err(Error::Parameter(format!("p must be at most 1, got {p}")));
    }
    d.require_kwise(2)?;
    let table = conditional_table(f, d)?;
    let count_f = pivotal_report_from(&table, p, alpha).count();
    if count_f == 0 {
        return Err(Error::NoPivotalPlayers);
    }
    let half_p = p / int(2);
    let n = d.n();
    // deviation masses above α and below −α, per player
    let sided: Vec<(Rational, Rational)> = (0..n)
        .map(|i| {
            let mut up = Rational::zero();
            let mut down = Rational::zero();
            for (s, dev) in table.deviations(i).into_iter().enumerate() {
                match dev {
                    Some(v) if v > *alpha => up += &table.mass[i][s],
                    Some(v) if -&v > *alpha => down += &table.mass[i][s],
                    _ => {}
                }
            }
            (up, down)
        })
        .collect();
    let ups: Vec<usize> = (0..n).filter(|&i| sided[i].0 > half_p).collect();
    let downs: Vec<usize> = (0..n).filter(|&i| sided[i].1 > half_p).collect();
    let (players, flip) = if downs.len() > ups.len() {
        let flip = if f.is_zero_one_on(d)? { Flip::Complement } else { Flip::Negate };
        (downs, flip)
    } else {
        (ups, Flip::None)
    };
    let k = players.len();
    if k > 20 {
        return Err(Error::Parameter(format!("{k} selected players exceed the table limit of 20")));
    }

    let up_symbols: Vec<Vec<bool>> = players
        .iter()
        .map(|&i| {
            table
                .deviations(i)
                .into_iter()
                .map(|dev| match (dev, flip) {
                    (Some(v), Flip::None) => v > *alpha,
                    (Some(v), _) => -&v > *alpha,
                    (None, _) => false,
                })
                .collect()
        })
        .collect();
    let p_i: Vec<Rational> = players
        .iter()
        .map(|&i| if flip == Flip::None { sided[i].0.clone() } else { sided[i].1.clone() })
        .collect();
    let zero_prob: Vec<Rational> = p_i.iter().map(|pi| &half_p / pi).collect();

    // Y depends on X only through which selected players deviate upward.
    let mut groups: HashMap<u32, (Rational, Rational)> = HashMap::new();
    let mut expectation = Rational::zero();
    d.try_for_each(|x, w| {
        let v = flip.apply(f.evaluate(x)?);
        let key = players
            .iter()
            .enumerate()
            .filter(|(j, &i)| up_symbols[*j][x[i] as usize])
            .fold(0u32, |acc, (j, _)| acc | 1 << j);
        let e = groups.entry(key).or_insert_with(|| (Rational::zero(), Rational::zero()));
        e.0 += w;
        let wv = w * v;
        e.1 += &wv;
        expectation += wv;
        Ok::<_, Error>(())
    })?;

    // y is a k-bit mask, bit j = Y_j; coordinates outside `key` are 1.
    let mut y_mass: BTreeMap<u32, (Rational, Rational)> = BTreeMap::new();
    for (&key, (mass, fmass)) in &groups {
        let random: Vec<usize> = (0..k).filter(|j| key >> j & 1 == 1).collect();
        let fixed = ((1u32 << k) - 1) & !key;
        for bits in 0..1u32 << random.len() {
            let mut y = fixed;
            let mut pr = Rational::one();
            for (b, &j) in random.iter().enumerate() {
                if bits >> b & 1 == 1 {
                    y |= 1 << j;
                    pr *= Rational::one() - &zero_prob[j];
                } else {
                    pr *= &zero_prob[j];
                }
            }
            if pr.is_zero() {
                continue;
            }
            let e = y_mass.entry(y).or_insert_with(|| (Rational::zero(), Rational::zero()));
            e.0 += &pr * mass;
            e.1 += pr * fmass;
        }
    }
    let to_outcome = |y: u32| Outcome((0..k).map(|j| (y >> j & 1) as u8).collect());
    let support: Vec<(Outcome, Rational)> = y_mass
        .iter()
        .filter(|(_, (m, _))| m.is_positive())
        .map(|(&y, (m, _))| (to_outcome(y), m.clone()))
        .collect();
    let y = ExplicitDist::new(Alphabet::binary(), k, support)?;
    let g = DenseTable::from_fn(Alphabet::binary(), k, |point| {
        let mask = point.iter().enumerate().fold(0u32, |acc, (j, &b)| acc | (b as u32) << j);
        match y_mass.get(&mask) {
            Some((m, fm)) if m.is_positive() => fm / m,
            _ => expectation.clone(),
        }
    })?;

    let ydist = Distribution::Explicit(y.clone());
    let gf = PlayerFunction::Table(g.clone());
    let mut certificate = Certificate { checks: Vec::new() };
    let marginals = ydist.player_marginals();
    let bad = marginals.iter().enumerate().find(|(_, m)| m[0] != half_p);
    certificate.push(
        "Pr[Y_i = 0] = p/2",
        bad.is_none(),
        match bad {
            None => format!("all {k} coordinates have Pr[Y_i = 0] = {half_p}"),
            Some((j, m)) => format!("Pr[Y_{j} = 0] = {} for player {}", m[0], players[j]),
        },
    );
    let effects = analysis::effects(&gf, &ydist)?;
    let count_g = effects.count_above(alpha);
    let weak = effects.rows.iter().find(|r| r.effect <= *alpha);
    certificate.push(
        "every effect of g exceeds alpha",
        weak.is_none(),
        match weak {
            None => format!("{count_g} effects above {alpha}"),
            Some(r) => format!("effect {} of player {} is at most {alpha}", r.effect, players[r.player]),
        },
    );
    certificate.push(
        "K(f, X, p, alpha) <= 2 K(g, Y, alpha)",
        count_f <= 2 * count_g,
        format!("{count_f} <= 2 * {count_g}"),
    );
    let pairwise = ydist.check_kwise(2);
    certificate.push(
        "Y pairwise independent",
        pairwise.independent,
        match &pairwise.witness {
            None => "all pairs independent".into(),
            Some(w) => w.to_string(),
        },
    );
    Ok(ReductionResult { players, flip, p_i, y, g, count_f, count_g, certificate })
}

#[derive(Clone, Debug, Serialize)]
pub struct EliminationResult {
    /// Disjoint pivotal sets in the order they were accepted.
    pub family: Vec<Vec<usize>>,
    /// Their union, ascending.
    pub union: Vec<usize>,
    pub t: usize,
    pub certificate: Certificate,
}

/// Largest `n` accepted by [`elimination_set`].
pub const MAX_ELIMINATION_N: usize = 16;
/// Largest `m` accepted by [`elimination_set`].
pub const MAX_ELIMINATION_M: usize = 3;

/// Support points with their weights and `f` values, for repeated
/// subset scans.
struct Evaluated {
    points: Vec<(Vec<u8>, Rational, Rational)>,
    expectation: Rational,
}

impl Evaluated {
    fn new(f: &PlayerFunction, d: &Distribution) -> Result<Self> {
        f.check_against(d)?;
        let mut points = Vec::with_capacity(d.support_len());
        let mut expectation = Rational::zero();
        d.try_for_each(|x, w| {
            let v = f.evaluate(x)?;
            expectation += w * &v;
            points.push((x.to_vec(), w.clone(), v));
            Ok::<_, Error>(())
        })?;
        Ok(Evaluated { points, expectation })
    }

    fn pivotal(&self, players: &[usize], p: &Rational, alpha: &Rational) -> bool {
        let mut groups: HashMap<Vec<u8>, (Rational, Rational)> = HashMap::new();
        for (x, w, v) in &self.points {
            let e = groups
                .entry(players.iter().map(|&i| x[i]).collect())
                .or_insert_with(|| (Rational::zero(), Rational::zero()));
            e.0 += w;
            if !v.is_zero() {
                e.1 += w * v;
            }
        }
        let mass: Rational = groups
            .values()
            .filter(|(m, s)| (s / m - &self.expectation).abs() > *alpha)
            .map(|(m, _)| m.clone())
            .sum();
        mass > *p
    }
}

/// Greedy maximal family of disjoint `(p, α)`-pivotal sets of size at most
/// `m`, scanning sets by size and then lexicographically. Pivotality is
/// evaluated in parallel and committed in scan order.
pub fn elimination_set(
    f: &PlayerFunction,
    d: &Distribution,
    m: usize,
    p: &Rational,
    alpha: &Rational,
) -> Result<EliminationResult> {
    let n = d.n();
    if m == 0 || m > MAX_ELIMINATION_M {
        return Err(Error::Parameter(format!("m must be in 1..={MAX_ELIMINATION_M}, got {m}")));
    }
    if n > MAX_ELIMINATION_N {
        return Err(Error::Parameter(format!("n must be at most {MAX_ELIMINATION_N}, got {n}")));
    }
    for (name, r) in [("p", p), ("alpha", alpha)] {
        if !r.is_positive() || *r >= Rational::one() {
            return Err(Error::Parameter(format!("{name} must be in (0, 1), got {r}")));
        }
    }
    d.require_kwise(2 * m)?;
    let ev = Evaluated::new(f, d)?;
    let subsets: Vec<Vec<usize>> = (1..=m.min(n)).flat_map(|s| (0..n).combinations(s)).collect();
    let pivotal: Vec<bool> = subsets.par_iter().map(|t| ev.pivotal(t, p, alpha)).collect();

    let mut used = vec![false; n];
    let mut family = Vec::new();
    for (t, &piv) in subsets.iter().zip(&pivotal) {
        if piv && t.iter().all(|&i| !used[i]) {
            t.iter().for_each(|&i| used[i] = true);
            family.push(t.clone());
        }
    }
    let union: Vec<usize> = (0..n).filter(|&i| used[i]).collect();
    let t = family.len();

    let mut certificate = Certificate { checks: Vec::new() };
    let free: Vec<&Vec<usize>> = subsets.iter().filter(|s| s.iter().all(|&i| !used[i])).collect();
    let rescan: Vec<bool> = free
        .par_iter()
        .map(|s| analysis::pivotal_set(f, d, s, p, alpha).map(|r| r.pivotal))
        .collect::<Result<_>>()?;
    let escaped = free.iter().zip(&rescan).find(|(_, &piv)| piv).map(|(s, _)| *s);
    certificate.push(
        "no pivotal set avoids C",
        escaped.is_none(),
        match escaped {
            None => format!("{} sets of size <= {m} avoid C, none pivotal", free.len()),
            Some(s) => format!("set {s:?} avoids C and is pivotal"),
        },
    );
    let members_ok = family.iter().all(|s| s.len() <= m)
        && family.iter().map(Vec::len).sum::<usize>() == union.len()
        && family.iter().map(|s| analysis::pivotal_set(f, d, s, p, alpha).map(|r| r.pivotal)).all(|r| matches!(r, Ok(true)));
    certificate.push(
        "family is disjoint and pivotal",
        members_ok,
        format!("{t} sets, each of size <= {m}"),
    );
    let bound = thm1_bound(p, alpha);
    let c_bound = count(m) * &bound;
    certificate.push(
        "|C| <= 8m/(p alpha^2)",
        count(union.len()) <= c_bound,
        format!("{} <= {c_bound}", union.len()),
    );
    certificate.push("t < 8/(p alpha^2)", count(t) < bound, format!("{t} < {bound}"));
    Ok(EliminationResult { family, union, t, certificate })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexCheck {
    /// Signed difference under the mixture.
    #[serde(with = "crate::report::exact")]
    pub mixed: Rational,
    /// `q·Δ_1 + (1 − q)·Δ_2`.
    #[serde(with = "crate::report::exact")]
    pub combined: Rational,
    pub ok: bool,
}

/// The signed difference of player `i` under `q·d1 + (1−q)·d2` equals the
/// same combination of the signed differences under `d1` and `d2`, given
/// identical marginals.
pub fn convex_decomposition_check(
    f: &PlayerFunction,
    d1: &Distribution,
    d2: &Distribution,
    q: &Rational,
    i: usize,
) -> Result<ConvexCheck> {
    if !d1.alphabet().is_binary() || !d2.alphabet().is_binary() {
        return Err(Error::NotBinary);
    }
    if d1.n() != d2.n() {
        return Err(Error::Mismatch);
    }
    if i >= d1.n() {
        return Err(Error::Player { index: i, n: d1.n() });
    }
    let (m1, m2) = (d1.player_marginals(), d2.player_marginals());
    if let Some(j) = (0..d1.n()).find(|&j| m1[j] != m2[j]) {
        return Err(Error::Marginal {
            player: j,
            reason: format!("Pr[X = 1] is {} in the first law and {} in the second", m1[j][1], m2[j][1]),
        });
    }
    if m1[i][1].is_zero() || m1[i][1].is_one() {
        return Err(Error::Marginal { player: i, reason: format!("Pr[X = 1] = {} is degenerate", m1[i][1]) });
    }
    let mixed = analysis::signed_difference(f, &mixture(d1, d2, q)?.into(), i)?;
    let combined = q * analysis::signed_difference(f, d1, i)?
        + (Rational::one() - q) * analysis::signed_difference(f, d2, i)?;
    let ok = mixed == combined;
    Ok(ConvexCheck { mixed, combined, ok })
}

/// Largest `n` for exact `Maj_p` enumeration.
pub const MAX_EXACT_MAJP_N: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TightnessRow {
    #[serde(with = "crate::report::exact")]
    pub alpha: Rational,
    /// Exact count, or the count implied by the estimated deviations.
    pub count: usize,
    #[serde(with = "crate::report::exact")]
    pub bound: Rational,
    pub exact: bool,
    /// Largest Hoeffding half-width among the estimated deviations.
    pub ci_halfwidth: Option<f64>,
}

/// `E[Maj_p | X_i = s] − E[Maj_p]` for `s ∈ {0, 1, ⊥}`; identical for
/// every player by symmetry.
pub fn majp_deviations(n: usize, p: &Rational) -> Result<Vec<Rational>> {
    if n == 0 || n > MAX_EXACT_MAJP_N {
        return Err(Error::Parameter(format!("exact mode needs 1 <= n <= {MAX_EXACT_MAJP_N}, got {n}")));
    }
    let d: Distribution = majp_dist(n, p)?.into();
    let table = conditional_table(&Builtin::majp(n).into(), &d)?;
    table.deviations(0).into_iter().map(|v| v.ok_or(Error::NullEvent)).collect()
}

/// Half the smallest deviation magnitude at a participating symbol.
pub fn derived_alpha(n: usize, p: &Rational) -> Result<Rational> {
    let dev = majp_deviations(n, p)?;
    let smallest = if dev[0].abs() < dev[1].abs() { dev[0].abs() } else { dev[1].abs() };
    Ok(smallest / int(2))
}

/// For each `α`, the number of `(pivot_p, α)`-pivotal players of `Maj_p`
/// over `n` voters participating with probability `p`, by exact
/// enumeration, with the bound `8/(pivot_p α²)`.
pub fn majp_tightness(n: usize, p: &Rational, pivot_p: &Rational, alphas: &[Rational]) -> Result<Vec<TightnessRow>> {
    if n == 0 || n > MAX_EXACT_MAJP_N {
        return Err(Error::Parameter(format!("exact mode needs 1 <= n <= {MAX_EXACT_MAJP_N}, got {n}")));
    }
    positive("pivot p", pivot_p)?;
    let d: Distribution = majp_dist(n, p)?.into();
    let table = conditional_table(&Builtin::majp(n).into(), &d)?;
    alphas
        .iter()
        .map(|alpha| {
            positive("alpha", alpha)?;
            Ok(TightnessRow {
                alpha: alpha.clone(),
                count: pivotal_report_from(&table, pivot_p, alpha).count(),
                bound: thm1_bound(pivot_p, alpha),
                exact: true,
                ci_halfwidth: None,
            })
        })
        .collect()
}

/// Monte Carlo version of [`majp_tightness`]: a player counts when the
/// marginal mass of symbols whose estimated deviation exceeds `α` is above
/// `pivot_p`.
pub fn majp_tightness_mc(
    n: usize,
    p: &Rational,
    pivot_p: &Rational,
    alphas: &[Rational],
    samples: usize,
    seed: u64,
) -> Result<Vec<TightnessRow>> {
    positive("pivot p", pivot_p)?;
    let d = majp_dist(n, p)?;
    let estimates = analysis::estimate_deviations(&Builtin::majp(n).into(), &d, samples, seed)?;
    let marginals = d.marginals();
    let halfwidth = estimates.iter().flatten().flatten().map(|e| e.halfwidth).fold(0.0, f64::max);
    alphas
        .iter()
        .map(|alpha| {
            positive("alpha", alpha)?;
            let a = crate::rational::to_f64(alpha);
            let count = estimates
                .iter()
                .enumerate()
                .filter(|(i, row)| {
                    let mass: Rational = row
                        .iter()
                        .enumerate()
                        .filter(|(_, e)| e.as_ref().is_some_and(|e| e.estimate.abs() > a))
                        .map(|(s, _)| marginals[*i][s].clone())
                        .sum();
                    mass > *pivot_p
                })
                .count();
            Ok(TightnessRow {
                alpha: alpha.clone(),
                count,
                bound: thm1_bound(pivot_p, alpha),
                exact: false,
                ci_halfwidth: Some(halfwidth),
            })
        })
        .collect()
}
