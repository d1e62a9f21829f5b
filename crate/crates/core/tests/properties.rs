use num_traits::{One, Zero};
use pivotal::analysis::{count_effect, count_pivotal, effect_identity, fourier, signed_difference};
use pivotal::boolfn::{monotone_check, Builtin, DenseTable, PlayerFunction, UpwardClosure};
use pivotal::dist::{mixture, Alphabet, Distribution, ExplicitDist, Outcome, ProductDist};
use pivotal::generators::{complement_mu, hadamard_mu, mixture_d, uniform_product};
use pivotal::json::{dist_from_str, dist_to_string};
use pivotal::rational::{int, rat, Rational};
use pivotal::theorems::convex_decomposition_check;
use proptest::prelude::*;

fn weights_to_marginal(w: &[u32]) -> Vec<Rational> {
    let total: u32 = w.iter().sum();
    w.iter().map(|&x| rat(x as i64, total as i64)).collect()
}

fn product_dist() -> impl Strategy<Value = ProductDist> {
    (1usize..=4, prop::bool::ANY).prop_flat_map(|(n, abstain)| {
        let q = if abstain { 3 } else { 2 };
        prop::collection::vec(
            prop::collection::vec(0u32..4, q).prop_filter("positive total", |w| w.iter().any(|&x| x > 0)),
            n,
        )
        .prop_map(move |ws| {
            let alphabet = if abstain { Alphabet::with_abstain() } else { Alphabet::binary() };
            ProductDist::new(alphabet, n, ws.iter().map(|w| weights_to_marginal(w)).collect()).unwrap()
        })
    })
}

/// Values in `{−1, −1/2, 0, 1/2, 1}`.
fn values(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-2i64..=2).prop_map(|v| rat(v, 2)), len)
}

fn dense(alphabet: Alphabet, n: usize, v: Vec<Rational>) -> PlayerFunction {
    DenseTable::new(alphabet, n, v).unwrap().into()
}

fn unit_rational() -> impl Strategy<Value = Rational> {
    (0i64..=12).prop_map(|a| rat(a, 12))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_matches_its_expansion(d in product_dist(), seed in any::<u64>()) {
        let q = d.alphabet().len();
        let n = d.n();
        let size = q.pow(n as u32);
        let vals: Vec<Rational> = (0..size).map(|i| rat(((seed >> (i % 60)) & 3) as i64 - 1, 2)).collect();
        let f = dense(d.alphabet().clone(), n, vals);
        let lazy = Distribution::Product(d.clone());
        let eager = Distribution::Explicit(lazy.to_explicit());
        prop_assert_eq!(lazy.expectation(&f).unwrap(), eager.expectation(&f).unwrap());
        prop_assert_eq!(lazy.player_marginals(), eager.player_marginals());
        prop_assert!(eager.check_kwise(n).independent);
    }

    #[test]
    fn marginals_have_mass_one(d in product_dist()) {
        let d: Distribution = d.into();
        let explicit: Distribution = d.to_explicit().into();
        for i in 0..d.n() {
            let m: Rational = explicit.player_marginal(i).unwrap().iter().sum();
            prop_assert!(m.is_one());
        }
        let players: Vec<usize> = (0..d.n()).rev().collect();
        let joint = explicit.marginal(&players).unwrap();
        let mut total = Rational::zero();
        joint.for_each(|_, w| total += w);
        prop_assert!(total.is_one());
    }

    #[test]
    fn total_expectation_over_one_player(d in product_dist(), v in values(81), i in 0usize..4) {
        let n = d.n();
        let i = i % n;
        let q = d.alphabet().len();
        let f = dense(d.alphabet().clone(), n, v[..q.pow(n as u32)].to_vec());
        let d: Distribution = Distribution::Product(d).to_explicit().into();
        let whole = d.expectation(&f).unwrap();
        let marginal = d.player_marginal(i).unwrap();
        let mut acc = Rational::zero();
        for (s, m) in marginal.iter().enumerate() {
            if m.is_zero() {
                prop_assert!(d.condition(&[(i, s as u8)]).is_err());
                continue;
            }
            acc += m * d.condition(&[(i, s as u8)]).unwrap().expectation(&f).unwrap();
        }
        prop_assert_eq!(whole, acc);
    }

    #[test]
    fn mixtures_with_matching_products_stay_pairwise(k in 2usize..=3, q in unit_rational()) {
        let mu: Distribution = hadamard_mu(k).unwrap().into();
        let n = mu.n();
        let m = mixture(&mu, &uniform_product(n).unwrap().into(), &q).unwrap();
        let m: Distribution = m.into();
        prop_assert!(m.check_kwise(2).independent);
        prop_assert!(m.player_marginals().iter().all(|x| x[1] == rat(1, 2)));
    }

    #[test]
    fn parseval(k in 2usize..=3, seed in any::<u64>()) {
        let mu = hadamard_mu(k).unwrap();
        let n = mu.n();
        let vals: Vec<Rational> = (0..1usize << n).map(|i| rat(((seed.rotate_left(i as u32 * 7) ^ i as u64) % 5) as i64 - 2, 2)).collect();
        let f = dense(Alphabet::binary(), n, vals);
        let t = fourier(&f, &mu).unwrap();
        let d: Distribution = mu.into();
        let mut second = Rational::zero();
        d.try_for_each(|x, w| { let v = f.evaluate(x)?; second += w * &v * &v; Ok::<_, pivotal::Error>(()) }).unwrap();
        prop_assert_eq!(t.parseval_sum(), second);
        prop_assert_eq!(&t.coefficients[0], &d.expectation(&f).unwrap());
    }

    #[test]
    fn effect_identity_ratio_is_four(k in 2usize..=3, seed in any::<u64>()) {
        let mu = hadamard_mu(k).unwrap();
        let n = mu.n();
        let f = dense(Alphabet::binary(), n, (0..1usize << n).map(|i| int(((seed.rotate_left(i as u32 * 5) ^ (i as u64 * 31)) & 1) as i64)).collect());
        let id = effect_identity(&f, &mu).unwrap();
        match id.ratio {
            Some(r) => prop_assert_eq!(r, int(4)),
            None => prop_assert!(id.variance.is_zero()),
        }
    }

    #[test]
    fn upward_closures_are_monotone(n in 1usize..=8, gens in prop::collection::vec(any::<u64>(), 0..5)) {
        let mask = (1u64 << n) - 1;
        let gens: Vec<Outcome> = gens.iter().map(|g| pivotal::boolfn::to_outcome(g & mask, n)).collect();
        let f: PlayerFunction = UpwardClosure::new(n, &gens).unwrap().into();
        prop_assert!(monotone_check(&f, n).unwrap().monotone);
    }

    #[test]
    fn mixture_signed_difference_is_linear(v in values(8), q in unit_rational(), i in 0usize..3) {
        let f = dense(Alphabet::binary(), 3, v);
        let mu: Distribution = hadamard_mu(2).unwrap().into();
        let bar: Distribution = complement_mu(&hadamard_mu(2).unwrap()).unwrap().into();
        prop_assert!(convex_decomposition_check(&f, &mu, &bar, &q, i).unwrap().ok);
        let fair: Distribution = uniform_product(3).unwrap().into();
        prop_assert!(convex_decomposition_check(&f, &mu, &fair, &q, i).unwrap().ok);
    }

    #[test]
    fn counts_are_monotone_in_p_and_alpha(v in values(8), a in 1i64..8, b in 1i64..8, c in 1i64..8, e in 1i64..8) {
        let f = dense(Alphabet::binary(), 3, v);
        let d: Distribution = mixture_d(2).unwrap().into();
        let (a1, a2) = (rat(a.min(b), 8), rat(a.max(b), 8));
        let (p1, p2) = (rat(c.min(e), 8), rat(c.max(e), 8));
        prop_assert!(count_pivotal(&f, &d, &p1, &a1).unwrap() >= count_pivotal(&f, &d, &p2, &a1).unwrap());
        prop_assert!(count_pivotal(&f, &d, &p1, &a1).unwrap() >= count_pivotal(&f, &d, &p1, &a2).unwrap());
        prop_assert!(count_effect(&f, &d, &a1).unwrap() >= count_effect(&f, &d, &a2).unwrap());
    }

    #[test]
    fn distribution_json_round_trips(d in product_dist()) {
        let d: Distribution = d.into();
        let s = dist_to_string(&d);
        prop_assert_eq!(dist_to_string(&dist_from_str(&s).unwrap()), s);
        let e: Distribution = d.to_explicit().into();
        let s = dist_to_string(&e);
        prop_assert_eq!(dist_from_str(&s).unwrap(), e.clone());
        prop_assert_eq!(dist_to_string(&dist_from_str(&s).unwrap()), s);
    }

    #[test]
    fn samples_land_in_the_support(d in product_dist(), seed in any::<u64>(), index in 0u64..1000) {
        let d: Distribution = d.into();
        let e = d.to_explicit();
        let x = d.sample(seed, index);
        prop_assert!(e.weight(&x) > Rational::zero());
        prop_assert_eq!(x.clone(), d.sample(seed, index));
        let ed: Distribution = e.clone().into();
        prop_assert!(e.weight(&ed.sample(seed, index)) > Rational::zero());
    }
}

#[test]
fn signed_difference_of_dictator_under_biased_bits() {
    let d: Distribution = ProductDist::iid(Alphabet::binary(), 2, vec![rat(2, 3), rat(1, 3)]).unwrap().into();
    assert_eq!(signed_difference(&Builtin::dictator(2, 1).into(), &d, 1).unwrap(), int(1));
    assert_eq!(signed_difference(&Builtin::dictator(2, 1).into(), &d, 0).unwrap(), int(0));
}

#[test]
fn explicit_uniform_requires_distinct_points() {
    let err = ExplicitDist::uniform(Alphabet::binary(), 1, vec![Outcome::bits("1"), Outcome::bits("1")]);
    assert!(err.is_err());
}
