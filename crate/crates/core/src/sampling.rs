//! Seeded generators for experiment inputs.
//!
//! One master seed per run; trial `i` draws from stream `i` of the same
//! ChaCha key, so trials can run in any order and still reproduce.

use std::collections::BTreeSet;

use num_integer::Integer;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::census::PointCloud;
use crate::gaps::{APUnionSpec, CircularSet, WrapPolicy};
use crate::rational::Rational;
use crate::torus::{TorusPoint, TorusVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// `p/q` in lowest terms with `q` drawn from `[q_min, q_max]` and `0 < p < q`.
pub fn random_fraction<R: Rng>(rng: &mut R, q_min: i64, q_max: i64) -> Rational {
    loop {
        let q = rng.gen_range(q_min.max(2)..=q_max.max(2));
        let p = rng.gen_range(1..q);
        if p.gcd(&q) == 1 {
            return Rational::new(p, q);
        }
    }
}

/// `n` distinct points of `(1/q)ℤ / ℤ`.
pub fn random_torus_set<R: Rng>(rng: &mut R, n: usize, q: u64) -> CircularSet {
    let picks = sample(rng, q as usize, n.min(q as usize));
    CircularSet::new(picks.into_iter().map(|x| TorusPoint::new(Rational::new(x as i64, q as i64))), WrapPolicy::IncludeWrap)
        .expect("distinct grid points")
}

/// `n` distinct points of `((1/q)ℤ / ℤ)^dim`.
pub fn random_cloud<R: Rng>(rng: &mut R, n: usize, dim: usize, q: i64) -> PointCloud {
    let mut seen = BTreeSet::new();
    let cap = (q as f64).powi(dim as i32).min(usize::MAX as f64) as usize;
    while seen.len() < n.min(cap) {
        let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..q)).collect();
        seen.insert(v);
    }
    PointCloud::new(
        seen.into_iter()
            .map(|v| TorusVector::from_rationals(v.into_iter().map(|x| Rational::new(x, q))).expect("dim >= 1"))
            .collect(),
    )
    .expect("distinct by construction")
}

/// `dim` numerators over one denominator `q`, each coprime to `q`.
pub fn random_alphas<R: Rng>(rng: &mut R, dim: usize, q: i64) -> Vec<Rational> {
    (0..dim)
        .map(|_| loop {
            let p = rng.gen_range(1..q);
            if p.gcd(&q) == 1 {
                break Rational::new(p, q);
            }
        })
        .collect()
}

/// Integers spread over the whole `i64` range (duplicates allowed).
pub fn random_i64s<R: Rng>(rng: &mut R, n: usize) -> Vec<i64> {
    (0..n).map(|_| rng.gen()).collect()
}

/// `k` arms `{β_i + nα : 0 ≤ n < N_i}` over denominator `q`; may collide, callers check.
pub fn random_ap_union<R: Rng>(rng: &mut R, k: usize, q: i64, max_len: u64) -> APUnionSpec {
    let alpha = random_fraction(rng, q, q);
    let arms = (0..k)
        .map(|_| (TorusPoint::new(Rational::new(rng.gen_range(0..q), q)), rng.gen_range(1..=max_len)))
        .collect();
    APUnionSpec { alpha, arms }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| trial_rng(7, 3).gen()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let x: u64 = trial_rng(7, 3).gen();
        let y: u64 = trial_rng(7, 4).gen();
        assert_ne!(x, y);
    }

    #[test]
    fn generators_respect_shapes() {
        let mut r = rng(1);
        let f = random_fraction(&mut r, 10, 20);
        assert!(f.is_positive() && f < Rational::one() && *f.denom() <= 20.into());
        assert_eq!(random_torus_set(&mut r, 30, 101).len(), 30);
        let c = random_cloud(&mut r, 50, 3, 11);
        assert_eq!((c.len(), c.dim()), (50, 3));
        assert_eq!(random_alphas(&mut r, 4, 97).len(), 4);
        assert_eq!(random_cloud(&mut r, 100, 1, 5).len(), 5);
    }
}
