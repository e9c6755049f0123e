//! Randomized verification suites. Trial `i` of suite `s` draws from its own
//! stream, so results do not depend on scheduling.

use gaplab_core::census::{nn_census_with, theorem4_extract, NnMethod};
use gaplab_core::extremal::{exact_ap_free, prop1_build, prop1_forced_subset_check, APFreeSet};
use gaplab_core::gaps::{
    arc_counting_diagnostic, theorem1_check, three_gap_check, threek_gap_check, CircularSet,
};
use gaplab_core::generators::verify_generation;
use gaplab_core::kissing::{hexagon, kissing_check, kissing_check_generic};
use gaplab_core::sampling::{random_alphas, random_ap_union, random_cloud, random_fraction, random_torus_set, trial_rng};
use gaplab_core::sumset::{greedy_difference_cover, minimal_difference_cover, sumset, FiniteExactSet};
use gaplab_core::{census::kronecker_census, Error, Rational, TorusVector};
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cli::Suite;
use crate::report::{Outcome, Verdict};

enum Trial {
    Pass,
    /// Input rejected by a precondition (e.g. colliding AP arms); redrawn inputs are not attempted.
    Skip,
    Fail(Value),
}

type TrialFn = fn(&mut ChaCha8Rng) -> Result<Trial, Error>;

#[derive(Serialize)]
struct SuiteSummary {
    suite: &'static str,
    trials: u64,
    passed: u64,
    skipped: u64,
    failed: u64,
}

const SUITES: [(Suite, &str, TrialFn); 12] = [
    (Suite::ThreeGap, "three-gap", three_gap),
    (Suite::ApUnion, "ap-union", ap_union),
    (Suite::DistinctGaps, "distinct-gaps", distinct_gaps),
    (Suite::ArcCount, "arc-count", arc_count),
    (Suite::Sumset, "sumset", sumset_trial),
    (Suite::Cover, "cover", cover),
    (Suite::Generators, "generators", generators),
    (Suite::ForcedSubset, "forced-subset", forced_subset),
    (Suite::Kronecker, "kronecker", kronecker),
    (Suite::Census, "census", census),
    (Suite::Kissing, "kissing", kissing),
    (Suite::Extraction, "extraction", extraction),
];

fn random_subset(rng: &mut ChaCha8Rng, b: &CircularSet, min: usize) -> CircularSet {
    let size = rng.gen_range(min.min(b.len())..=b.len());
    let mut idx = sample(rng, b.len(), size).into_vec();
    idx.sort_unstable();
    b.select(&idx)
}

fn values(set: &CircularSet) -> Vec<&Rational> {
    set.points().iter().map(|p| p.value()).collect()
}

fn three_gap(rng: &mut ChaCha8Rng) -> Result<Trial, Error> {
    let alpha = random_fraction(rng, 2, 2000);
    let q: u64 = alpha.denom().try_into().expect("small denominator");
    let n = rng.gen_range(1..q);
    let rep = three_gap_check(&alpha, n)?;
    Ok(if rep.pass { Trial::Pass } else { Trial::Fail(json!({"alpha": alpha, "n": n, "gaps": rep.distinct, "unmatched": rep.unmatched})) })
}

fn ap_union(rng: &mut ChaCha8Rng) -> Result<Trial, Error> {
    let k = rng.gen_range(1..=5);
    let q = rng.gen_range(50..=2000);
    let spec = random_ap_union(rng, k, q, 40);
    match threek_gap_check(&spec) {
        Ok(rep) if rep.pass => Ok(Trial::Pass),
        Ok(rep) => Ok(Trial::Fail(json!({"spec": spec, "gaps": rep.distinct, "bound": rep.bound}))),
        Err(Error::Collision(_)) => Ok(Trial::Skip),
        Err(e) => Err(e),
    }
}

fn distinct_gaps(rng: &mut ChaCha8Rng) -> Result<Trial, Error> {
    let q = rng.gen_range(50..=500);
    let n = rng.gen_range(2..=40);
    let b = random_torus_set(rng, n, q);
    let a = random_subset(rng, &b, 2);
    let rep = theorem1_check(&a, &b)?;
    Ok(if rep.pass { Trial::Pass } else { Trial::Fail(json!({"a": values(&a), "b": values(&b), "lhs": rep.lhs, "rhs": rep.rhs})) })
}

fn arc_count(rng: &mut ChaCha8Rng) -> Result<Trial, Error> {
    let q = rng.gen_range(50..=400);
    let n = rng.gen_range(3..=30);
    let b = random_torus_set(rng, n, q);
    let a = random_subset(rng, &b, 2);
    let total = sumset(&a.to_exact_set(), &b.to_exact_set())?.len();
    let k = rng.gen_range(1..=total);
    let rep = arc_counting_diagnostic(&a, &b, k)?;
    let ok = rep.lower <= rep.pairs as i64 && rep.pairs <= rep.upper;
    Ok(if ok {
        Trial::Pass
    } else {
        Trial::Fail(json!({"a": values(&a), "b": values(&b), "k": k, "lower": rep.lower, "pairs": rep.pairs, "upper": rep.upper}))
    })
}

fn sumset_trial(rng: &mut ChaCha8Rng) -> Result<Trial, Error> {
    let span = rng.gen_range(10..=10_000i64);
    let xs: Vec<i64> = (0..rng.gen_range(1..=60)).map(|_| rng.gen_range(-span..=span)).collect();
    let ys: Vec<i64> = (0..rng.gen_range(1..=60)).map(|_| rng.gen_range(-span..=span)).collect();
    let (a, b) = (FiniteExactSet::integers(xs.iter().copied()), FiniteExactSet::integers(ys.iter().copied()));
    let got = sumset(&a, &b)?;
    let mut oracle: Vec<i64> = xs.iter().flat_map(|x| ys.iter().map(move |y| x + y)).collect();
    oracle.sort_unstable();
    oracle.dedup();
    let ok = got.to_i64().as_deref() == Some(&oracle[..]) && got.len() + 1 >= a.len() + b.len();
    Ok(if ok { Trial::Pass } else { Trial::Fail(json!({"a": a, "b": b})) })
}

fn cover(rng: &mut ChaCha8Rng) -> Result<Trial, Error> {
    let q = rng.gen_range(20..=300);
    let n = rng.gen_range(1..=12);
    let b = random_torus_set(rng, n, q).to_exact_set();
    let exact = minimal_difference_cover(&b)?;
    let greedy = greedy_difference_cover(&b)?;
    let ok = exact.verify(&b)? && greedy.verify(&b)? && greedy.cover.len() >= exact.cover.len() && exact.cover.is_subset_of(&b);
    Ok(if ok { Trial::Pass } else { Trial::Fail(json!({"b": b, "exact": exact.cover, "greedy": greedy.cover})) })
}

fn generators(rng: &mut ChaCha8Rng) -> Result<Trial, Error> {
    let q = rng.gen_range(20..=300);
    let n = rng.gen_range(2..=30);
    let b = random_torus_set(rng, n, q);
    let c = CircularSet::new(minimal_difference_cover(&b.to_exact_set())?.cover.to_torus_points(), b.wrap())?;
    let rep = verify_generation(&b, &c)?;
    Ok(if rep.pass { Trial::Pass } else { Trial::Fail(json!({"b": values(&b), "c": values(&c), "failures": rep.failures})) })
}

fn forced_subset(rng: &mut ChaCha8Rng) -> Result<Trial, Error> {
    let n = rng.gen_range(4..=30i64);
    let full = exact_ap_free(n)?.elements;
    let k = rng.gen_range(1..=full.len().min(n as usize / 2));
    let mut picked: Vec<i64> = sample(rng, full.len(), k).into_iter().map(|i| full[i]).collect();
    picked.sort_unstable();
    let s = APFreeSet::supplied(n, picked)?;
    let inst = prop1_build(n, &s)?;
    let rep = prop1_forced_subset_check(&inst)?;
    let ok = rep.pass && inst.b.len() as i64 == n && inst.sumset_len as i64 <= 10 * n;
    Ok(if ok { Trial::Pass } else { Trial::Fail(json!({"n": n, "s": s.elements, "b": inst.b})) })
}

fn kronecker(rng: &mut ChaCha8Rng) -> Result<Trial, Error> {
    let d = rng.gen_range(1..=3);
    let n = rng.gen_range(20..=500u64);
    let q = rng.gen_range(n as i64..=5000);
    let alphas = random_alphas(rng, d, q);
    let rep = kronecker_census(&alphas, n)?;
    Ok(if rep.pass { Trial::Pass } else { Trial::Fail(json!({"alphas": alphas, "n": n, "d": rep.d_set})) })
}

fn census(rng: &mut ChaCha8Rng) -> Result<Trial, Error> {
    let d = rng.gen_range(1..=3);
    let n = rng.gen_range(2..=300);
    let q = rng.gen_range(10..=2000);
    let c = random_cloud(rng, n, d, q);
    if c.len() < 2 {
        return Ok(Trial::Skip);
    }
    let g = nn_census_with(&c, NnMethod::Grid)?;
    let b = nn_census_with(&c, NnMethod::Brute)?;
    Ok(if g.records == b.records { Trial::Pass } else { Trial::Fail(json!({"cloud": c.points()})) })
}

fn kissing(rng: &mut ChaCha8Rng) -> Result<Trial, Error> {
    let q = rng.gen_range(6..=300);
    let pts: Vec<TorusVector> = (0..7)
        .map(|_| loop {
            let v = TorusVector::from_rationals([Rational::new(rng.gen_range(0..q), q), Rational::new(rng.gen_range(0..q), q)])
                .expect("dim 2");
            if !v.is_zero() {
                break v;
            }
        })
        .collect();
    let seven = kissing_check(&pts)?;
    let radius = Rational::new(1, rng.gen_range(3..=50));
    let hex = kissing_check_generic(&hexagon(&radius))?;
    Ok(if !seven.pass && hex.pass { Trial::Pass } else { Trial::Fail(json!({"seven": pts, "hexagon_radius": radius})) })
}

fn extraction(rng: &mut ChaCha8Rng) -> Result<Trial, Error> {
    let d = rng.gen_range(1..=2);
    let n = rng.gen_range(4..=40);
    let q = rng.gen_range(20..=200);
    let a = random_cloud(rng, n, d, q);
    let eps = Rational::new(1, rng.gen_range(2..=8));
    let t = theorem4_extract(&a, &a, &eps, &Rational::one())?;
    Ok(if t.pass { Trial::Pass } else { Trial::Fail(json!({"a": a.points(), "epsilon": eps})) })
}

pub fn run(suite: Suite, seed: u64, trials: u64) -> Outcome {
    let mut o = Outcome::default();
    let mut summaries = Vec::new();
    for (index, (id, name, f)) in SUITES.iter().enumerate() {
        if suite != Suite::All && suite != *id {
            continue;
        }
        // each suite gets its own key so adding a suite leaves the others unchanged
        let key = seed.wrapping_add((index as u64 + 1) << 32);
        let results: Vec<(u64, Result<Trial, Error>)> =
            (0..trials).into_par_iter().map(|i| (i, f(&mut trial_rng(key, i)))).collect();
        let mut summary = SuiteSummary { suite: name, trials, passed: 0, skipped: 0, failed: 0 };
        let mut first_failure = None;
        for (i, r) in results {
            match r {
                Ok(Trial::Pass) => summary.passed += 1,
                Ok(Trial::Skip) => summary.skipped += 1,
                Ok(Trial::Fail(w)) => {
                    summary.failed += 1;
                    first_failure.get_or_insert(json!({"trial": i, "input": w}));
                }
                Err(e) => {
                    summary.failed += 1;
                    first_failure.get_or_insert(json!({"trial": i, "error": e.to_string()}));
                }
            }
        }
        o.verdict(
            Verdict::new(*name, summary.failed == 0, summary.failed, "==", 0)
                .or_counterexample(|| first_failure.take().unwrap_or(Value::Null)),
        );
        o.metric(&format!("{name}.passed"), summary.passed);
        o.metric(&format!("{name}.skipped"), summary.skipped);
        summaries.push(summary);
    }
    o.result(summaries);
    o
}
