//! Named distributions: the Hadamard pairwise-independent space, its
//! complement, their even mixture, the abstaining-voter product space and
//! fair coins.
//!
//! Player `y ∈ {1, …, n}` (stored at index `y − 1`) is identified with the
//! `k`-bit binary representation of `y`, so player 1 is `(0, …, 0, 1)`.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::dist::{mixture, Alphabet, Distribution, ExplicitDist, Outcome, ProductDist};
use crate::error::{Error, Result};
use crate::rational::{int, rat, Rational};

/// Largest `k` accepted by the Hadamard constructions (`n = 1023`).
pub const MAX_HADAMARD_K: usize = 10;

fn check_k(k: usize) -> Result<()> {
    if k == 0 || k > MAX_HADAMARD_K {
        return Err(Error::Parameter(format!("k must be in 1..={MAX_HADAMARD_K}, got {k}")));
    }
    Ok(())
}

/// The support point `x^z`: coordinate `y` is `<z, y> mod 2`.
pub fn hadamard_point(k: usize, z: usize) -> Outcome {
    let n = (1usize << k) - 1;
    Outcome((1..=n).map(|y| ((z & y).count_ones() & 1) as u8).collect())
}

/// Uniform on the `2^k` strings `x^z`, including the all-zeros string.
pub fn hadamard_mu(k: usize) -> Result<ExplicitDist> {
    check_k(k)?;
    let n = (1usize << k) - 1;
    ExplicitDist::uniform(Alphabet::binary(), n, (0..=n).map(|z| hadamard_point(k, z)).collect())
}

/// Bitwise complement of every support point, weights unchanged.
pub fn complement_mu(mu: &ExplicitDist) -> Result<ExplicitDist> {
    if !mu.alphabet().is_binary() {
        return Err(Error::NotBinary);
    }
    let support = mu
        .support()
        .iter()
        .map(|(x, w)| (Outcome(x.iter().map(|b| 1 - b).collect()), w.clone()))
        .collect();
    ExplicitDist::new(Alphabet::binary(), mu.n(), support)
}

/// `μ/2 + μ̄/2`, supported on `2(n+1)` strings.
pub fn mixture_d(k: usize) -> Result<ExplicitDist> {
    let mu = hadamard_mu(k)?;
    let bar = complement_mu(&mu)?;
    mixture(&mu.into(), &bar.into(), &rat(1, 2))
}

/// Each player independently votes 0 or 1 with probability `p/2` each and
/// abstains (`⊥`) with probability `1 − p`.
pub fn majp_dist(n: usize, p: &Rational) -> Result<ProductDist> {
    if !p.is_positive() || *p >= Rational::one() {
        return Err(Error::Parameter(format!("participation probability must be in (0, 1), got {p}")));
    }
    let half = p / int(2);
    ProductDist::iid(Alphabet::with_abstain(), n, vec![half.clone(), half, Rational::one() - p])
}

/// `n` independent fair bits.
pub fn uniform_product(n: usize) -> Result<ProductDist> {
    ProductDist::iid(Alphabet::binary(), n, vec![rat(1, 2), rat(1, 2)])
}

/// Uniform distribution as an explicit support, for callers that need one.
pub fn uniform_explicit(n: usize) -> Result<ExplicitDist> {
    Ok(Distribution::from(uniform_product(n)?).to_explicit())
}

/// `2^{-k}` as a rational.
pub fn dyadic(k: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn dominates(a: &[u8], b: &[u8]) -> bool {
        a.iter().zip(b).all(|(x, y)| x >= y)
    }

    fn comparable(a: &[u8], b: &[u8]) -> bool {
        dominates(a, b) || dominates(b, a)
    }

    #[test]
    fn hadamard_k2_matches_inner_product_table() {
        let mu = hadamard_mu(2).unwrap();
        let want = ExplicitDist::uniform(
            Alphabet::binary(),
            3,
            ["000", "101", "011", "110"].iter().map(|s| Outcome::bits(s)).collect(),
        )
        .unwrap();
        assert_eq!(mu, want);
        assert!(Distribution::from(mu).check_kwise(2).independent);
    }

    #[test]
    fn hadamard_rejects_k0() {
        assert!(hadamard_mu(0).is_err());
    }

    #[test]
    fn hadamard_weights_and_ones_count() {
        for k in 1..=6 {
            let mu = hadamard_mu(k).unwrap();
            let n = mu.n();
            assert_eq!(mu.len(), 1 << k);
            assert!(mu.support().iter().all(|(_, w)| *w == dyadic(k)));
            for x in mu.outcomes().filter(|x| x.contains(&1)) {
                assert_eq!(x.iter().filter(|&&b| b == 1).count(), n.div_ceil(2));
            }
        }
    }

    #[test]
    fn nonzero_hadamard_points_are_pairwise_incomparable() {
        for k in 1..=5 {
            let mu = hadamard_mu(k).unwrap();
            let pts: Vec<_> = mu.outcomes().filter(|x| x.contains(&1)).collect();
            for (i, a) in pts.iter().enumerate() {
                for b in &pts[i + 1..] {
                    assert!(!comparable(a, b), "k={k}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn only_extremes_are_comparable_in_the_mixture() {
        for k in [3, 4] {
            let d = mixture_d(k).unwrap();
            let n = d.n();
            let extreme = |x: &Outcome| x.iter().all(|&b| b == 0) || x.iter().all(|&b| b == 1);
            let pts: Vec<_> = d.outcomes().collect();
            for (i, a) in pts.iter().enumerate() {
                for b in &pts[i + 1..] {
                    if comparable(a, b) {
                        assert!(extreme(a) || extreme(b), "n={n}: {a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn complement_is_an_involution() {
        let mu = hadamard_mu(2).unwrap();
        let bar = complement_mu(&mu).unwrap();
        let want = ExplicitDist::uniform(
            Alphabet::binary(),
            3,
            ["111", "010", "100", "001"].iter().map(|s| Outcome::bits(s)).collect(),
        )
        .unwrap();
        assert_eq!(bar, want);
        assert_eq!(complement_mu(&bar).unwrap(), mu);
        let bar = Distribution::from(bar);
        assert!(bar.check_kwise(2).independent);
        assert!(bar.player_marginals().iter().all(|m| m == &vec![rat(1, 2), rat(1, 2)]));
        assert!(matches!(
            complement_mu(&Distribution::from(majp_dist(2, &rat(1, 2)).unwrap()).to_explicit()),
            Err(Error::NotBinary)
        ));
    }

    #[test]
    fn mixture_d_is_pairwise_with_fair_marginals() {
        for k in 1..=4 {
            let d = mixture_d(k).unwrap();
            // at k = 1 the space and its complement coincide
            let want = if k == 1 { 2 } else { 2 * (d.n() + 1) };
            assert_eq!(d.len(), want);
            let d = Distribution::from(d);
            assert!(d.check_kwise(2).independent);
            assert!(d.player_marginals().iter().all(|m| m == &vec![rat(1, 2), rat(1, 2)]));
        }
        // k = 2: disjoint supports of size 4 + 4, each point 1/8
        let d = mixture_d(2).unwrap();
        assert_eq!(d.len(), 8);
        assert!(d.support().iter().all(|(_, w)| *w == rat(1, 8)));
    }

    #[test]
    fn majp_marginals() {
        let d = majp_dist(2, &rat(1, 2)).unwrap();
        assert_eq!(d.marginals()[0], vec![rat(1, 4), rat(1, 4), rat(1, 2)]);
        assert!(majp_dist(2, &int(0)).is_err());
        assert!(majp_dist(2, &int(1)).is_err());
        let p = rat(1, 3);
        let n = 4;
        let d = Distribution::from(majp_dist(n, &p).unwrap());
        let all_abstain = d.to_explicit().weight(&[2; 4]);
        let mut want = Rational::one();
        for _ in 0..n {
            want *= Rational::one() - &p;
        }
        assert_eq!(all_abstain, want);
        assert!(d.check_kwise(n).independent);
        assert!(d.to_explicit().weight(&[3, 0, 0, 0]).is_zero());
    }
}
