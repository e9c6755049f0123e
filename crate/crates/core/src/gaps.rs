//! Consecutive-difference spectra of circular sets.
//!
//! Covers the three-gap and 3k-gap verifications for orbits `{nα}`, the
//! distinct-gap upper bound in terms of `|A+B|`, the arc-partition pair
//! counting behind it, the greedy construction of subsets with many distinct
//! gaps, and greedy Sidon extraction.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::sumset::{sumset, FiniteExactSet};
use crate::torus::{circular_sort, TorusPoint};
use crate::{Error, Result};

/// Whether the gap from the last point back around to the first is counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WrapPolicy {
    IncludeWrap,
    ExcludeWrap,
}

/// Finite subset of ℝ/ℤ kept in anticlockwise order from its smallest representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircularSet {
    points: Vec<TorusPoint>,
    labels: Option<Vec<i64>>,
    wrap: WrapPolicy,
}

impl CircularSet {
    pub fn new(points: impl IntoIterator<Item = TorusPoint>, wrap: WrapPolicy) -> Result<Self> {
        Ok(CircularSet { points: circular_sort(points)?, labels: None, wrap })
    }

    /// Points tagged with distinct integer labels (e.g. `n` for the point `{nα}`).
    pub fn labeled(items: impl IntoIterator<Item = (TorusPoint, i64)>, wrap: WrapPolicy) -> Result<Self> {
        let mut items: Vec<(TorusPoint, i64)> = items.into_iter().collect();
        items.sort();
        if let Some(w) = items.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateElement(w[0].0.to_string()));
        }
        let distinct: BTreeSet<i64> = items.iter().map(|x| x.1).collect();
        if distinct.len() != items.len() {
            return Err(Error::DuplicateElement("repeated label".into()));
        }
        let (points, labels) = items.into_iter().unzip();
        Ok(CircularSet { points, labels: Some(labels), wrap })
    }

    pub fn points(&self) -> &[TorusPoint] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[i64]> {
        self.labels.as_deref()
    }

    pub fn wrap(&self) -> WrapPolicy {
        self.wrap
    }

    pub fn with_wrap(mut self, wrap: WrapPolicy) -> Self {
        self.wrap = wrap;
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &TorusPoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn index_of(&self, p: &TorusPoint) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    pub fn to_exact_set(&self) -> FiniteExactSet {
        FiniteExactSet::torus(self.points.iter().cloned())
    }

    /// Subset of `self` at the given sorted positions, keeping labels and wrap policy.
    pub fn select(&self, indices: &[usize]) -> CircularSet {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        CircularSet {
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
            labels: self.labels.as_ref().map(|l| idx.iter().map(|&i| l[i]).collect()),
            wrap: self.wrap,
        }
    }

    fn consecutive_gaps(&self) -> Vec<Rational> {
        let n = self.points.len();
        let mut gaps: Vec<Rational> = self.points.windows(2).map(|w| w[1].value() - w[0].value()).collect();
        if self.wrap == WrapPolicy::IncludeWrap && n >= 1 {
            gaps.push(Rational::one() - self.points[n - 1].value() + self.points[0].value());
        }
        gaps
    }
}

/// Gaps of a circular set, the distinct set `D`, and multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapSpectrum {
    pub gaps: Vec<Rational>,
    pub distinct: BTreeSet<Rational>,
    pub multiplicity: BTreeMap<Rational, usize>,
}

impl GapSpectrum {
    fn from_gaps(gaps: Vec<Rational>) -> Self {
        let mut multiplicity = BTreeMap::new();
        for g in &gaps {
            *multiplicity.entry(g.clone()).or_insert(0) += 1;
        }
        let distinct = multiplicity.keys().cloned().collect();
        GapSpectrum { gaps, distinct, multiplicity }
    }

    pub fn distinct_count(&self) -> usize {
        self.distinct.len()
    }
}

/// Consecutive anticlockwise differences of `a`.
pub fn spectrum(a: &CircularSet) -> Result<GapSpectrum> {
    if a.len() < 2 {
        return Err(Error::TooSmall { needed: 2, got: a.len() });
    }
    Ok(GapSpectrum::from_gaps(a.consecutive_gaps()))
}

/// The orbit `S_α(N) = {nα mod 1 : 1 <= n <= N}`, labeled by `n`.
///
/// `α = p/q` in lowest terms must have `q > N`, which makes the points distinct.
pub fn fractional_orbit(alpha: &Rational, n: u64) -> Result<CircularSet> {
    if n == 0 {
        return Err(Error::OutOfRange("N must be positive".into()));
    }
    let q = alpha.denom().clone();
    if q <= BigInt::from(n) {
        return Err(Error::InsufficientDenominator { q: q.to_string(), n });
    }
    let p = alpha.numer().mod_floor(&q);
    let mut items: Vec<(BigInt, i64)> = match (p.to_u128(), q.to_u128()) {
        (Some(p), Some(q)) if q < (1u128 << 100) => (1..=n)
            .map(|k| (BigInt::from((k as u128 * p) % q), k as i64))
            .collect(),
        _ => (1..=n).map(|k| ((&p * k).mod_floor(&q), k as i64)).collect(),
    };
    items.sort();
    let points = items.iter().map(|(r, _)| TorusPoint::new(Rational::new(r.clone(), q.clone()))).collect();
    let labels = items.into_iter().map(|(_, k)| k).collect();
    Ok(CircularSet { points, labels: Some(labels), wrap: WrapPolicy::IncludeWrap })
}

/// Outcome of the three-gap verification for one orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeGapReport {
    pub alpha: Rational,
    pub n: u64,
    /// Label of the smallest point, `a_1`.
    pub first_label: i64,
    /// Label of the largest point, `a_N`.
    pub last_label: i64,
    /// Pairwise distances among `{a_N α} - 1`, `0` and `{a_1 α}`.
    pub reference: [Rational; 3],
    pub distinct: BTreeSet<Rational>,
    /// Distinct gaps that match none of the reference distances.
    pub unmatched: Vec<Rational>,
    pub pass: bool,
}

/// Checks `|D(S_α(N))| <= 3` (wrap included) and that every gap is a reference distance.
pub fn three_gap_check(alpha: &Rational, n: u64) -> Result<ThreeGapReport> {
    let orbit = fractional_orbit(alpha, n)?;
    let labels = orbit.labels().expect("orbits are labeled");
    let first = orbit.points()[0].value().clone();
    let last = orbit.points()[orbit.len() - 1].value().clone();
    let low = &last - Rational::one();
    // distances between the pairs of {low, 0, first}
    let reference = [-low.clone(), first.clone(), &first - &low];
    let gaps = if orbit.len() == 1 { vec![Rational::one()] } else { orbit.consecutive_gaps() };
    let spec = GapSpectrum::from_gaps(gaps);
    let unmatched: Vec<Rational> = spec.distinct.iter().filter(|g| !reference.contains(g)).cloned().collect();
    let pass = spec.distinct.len() <= 3 && unmatched.is_empty();
    Ok(ThreeGapReport {
        alpha: alpha.clone(),
        n,
        first_label: labels[0],
        last_label: labels[labels.len() - 1],
        reference,
        distinct: spec.distinct,
        unmatched,
        pass,
    })
}

/// Union of `k` arithmetic progressions `β_i + n α`, `1 <= n <= N_i`, on the circle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct APUnionSpec {
    pub alpha: Rational,
    pub arms: Vec<(TorusPoint, u64)>,
}

impl APUnionSpec {
    /// Generates the labeled points; labels encode `(arm, n)` as `arm * 2^32 + n`.
    pub fn points(&self) -> Result<CircularSet> {
        let alpha = TorusPoint::new(self.alpha.clone());
        let mut items = Vec::new();
        for (arm, (beta, count)) in self.arms.iter().enumerate() {
            let mut p = beta.clone();
            for n in 1..=*count {
                p = &p + &alpha;
                items.push((p.clone(), ((arm as i64) << 32) + n as i64));
            }
        }
        items.sort();
        if let Some(w) = items.windows(2).find(|w| w[0].0 == w[1].0) {
            let decode = |l: i64| (l >> 32, l & 0xffff_ffff);
            let (a1, n1) = decode(w[0].1);
            let (a2, n2) = decode(w[1].1);
            return Err(Error::Collision(format!(
                "arm {a1} n={n1} and arm {a2} n={n2} both give {}",
                w[0].0
            )));
        }
        CircularSet::labeled(items, WrapPolicy::IncludeWrap)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeKGapReport {
    pub k: usize,
    pub points: usize,
    pub distinct: BTreeSet<Rational>,
    pub bound: usize,
    pub pass: bool,
}

/// Checks `|D(A)| <= 3k` (wrap included) for a union of `k` progressions.
pub fn threek_gap_check(spec: &APUnionSpec) -> Result<ThreeKGapReport> {
    let set = spec.points()?;
    let k = spec.arms.len();
    let gaps = if set.len() == 1 { vec![Rational::one()] } else { set.consecutive_gaps() };
    let distinct: BTreeSet<Rational> = gaps.into_iter().collect();
    let bound = 3 * k;
    Ok(ThreeKGapReport { k, points: set.len(), pass: distinct.len() <= bound, distinct, bound })
}

fn ensure_subset(a: &CircularSet, b: &CircularSet) -> Result<()> {
    match a.points().iter().find(|p| !b.contains(p)) {
        Some(p) => Err(Error::SubsetViolation(p.to_string())),
        None => Ok(()),
    }
}

/// Outcome of the distinct-gap upper bound `|D(A)| <= √(2|B|)·|A+B|/|B| + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub distinct_gaps: usize,
    pub a_len: usize,
    pub b_len: usize,
    pub sumset_len: usize,
    /// `(|D(A)| - 1)² · |B|`, compared against `rhs`.
    pub lhs: Rational,
    /// `2 · |A+B|²`.
    pub rhs: Rational,
    pub pass: bool,
}

/// Exact test of `(d - 1)² |B|² <= 2 |B| |A+B|²`, trivially true for `d <= 1`.
pub fn distinct_gap_bound_holds(distinct: usize, b_len: usize, sumset_len: usize) -> (Rational, Rational, bool) {
    let d1 = BigInt::from(distinct.saturating_sub(1));
    let lhs = &d1 * &d1 * BigInt::from(b_len);
    let s = BigInt::from(sumset_len);
    let rhs = BigInt::from(2) * &s * &s;
    let pass = distinct <= 1 || lhs <= rhs;
    (Rational::from(lhs), Rational::from(rhs), pass)
}

pub fn theorem1_check(a: &CircularSet, b: &CircularSet) -> Result<Theorem1Report> {
    if b.len() < 2 {
        return Err(Error::TooSmall { needed: 2, got: b.len() });
    }
    ensure_subset(a, b)?;
    let distinct = spectrum(a)?.distinct_count();
    let sumset_len = sumset(&a.to_exact_set(), &b.to_exact_set())?.len();
    let (lhs, rhs, pass) = distinct_gap_bound_holds(distinct, b.len(), sumset_len);
    Ok(Theorem1Report { distinct_gaps: distinct, a_len: a.len(), b_len: b.len(), sumset_len, lhs, rhs, pass })
}

/// Pair-counting diagnostic for the arc-partition argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcCountingReport {
    pub k: usize,
    /// `|A+B| = k·L + r`.
    pub arc_size: usize,
    pub larger_arcs: usize,
    /// `(first, last)` point of each arc, `None` for empty arcs.
    pub arcs: Vec<Option<(TorusPoint, TorusPoint)>>,
    pub arc_sizes: Vec<usize>,
    /// One index `i(d)` per distinct gap `d`: the first `i` with `a_{i+1} - a_i = d`.
    pub selected: Vec<usize>,
    pub pairs: u64,
    /// `|B| (|D(A)| - k)`, possibly negative.
    pub lower: i64,
    /// `Σ C(|I_j|, 2)`.
    pub upper: u64,
    /// `k + |A+B|² / (2k|B|)`.
    pub implied_bound: Rational,
    pub distinct_gaps: usize,
    pub pass: bool,
}

/// Partitions `A+B` into `k` balanced arcs and counts pairs `(i, b)` with
/// `i ∈ J_A`, `b ∈ B` such that `a_i + b` and `a_{i+1} + b` lie in one arc
/// and the anticlockwise path between them stays inside it.
pub fn arc_counting_diagnostic(a: &CircularSet, b: &CircularSet, k: usize) -> Result<ArcCountingReport> {
    if k == 0 {
        return Err(Error::OutOfRange("arc count k must be >= 1".into()));
    }
    ensure_subset(a, b)?;
    let spec = spectrum(a)?;
    let sums = sumset(&a.to_exact_set(), &b.to_exact_set())?;
    let total = sums.len();
    let (arc_size, larger_arcs) = (total / k, total % k);
    let mut arc_of = Vec::with_capacity(total);
    let mut arcs = Vec::with_capacity(k);
    let mut arc_sizes = Vec::with_capacity(k);
    let mut start = 0;
    for j in 0..k {
        let size = arc_size + usize::from(j < larger_arcs);
        arc_sizes.push(size);
        arcs.push((size > 0).then(|| {
            (TorusPoint::new(sums.elements()[start].clone()), TorusPoint::new(sums.elements()[start + size - 1].clone()))
        }));
        arc_of.extend(std::iter::repeat(j).take(size));
        start += size;
    }

    let pts = a.points();
    let m = pts.len();
    let gap_count = spec.gaps.len();
    let mut selected = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, g) in spec.gaps.iter().enumerate() {
        if seen.insert(g.clone()) {
            selected.push(i);
        }
    }
    debug_assert!(gap_count == m || gap_count == m - 1);

    let index_in_sums = |p: &TorusPoint| sums.elements().binary_search(p.value()).expect("a + b lies in A + B");
    let mut pairs = 0u64;
    for bp in b.points() {
        for &i in &selected {
            let u = index_in_sums(&(&pts[i] + bp));
            let v = index_in_sums(&(&pts[(i + 1) % m] + bp));
            if arc_of[u] == arc_of[v] && u < v {
                pairs += 1;
            }
        }
    }
    let distinct = spec.distinct_count();
    let lower = b.len() as i64 * (distinct as i64 - k as i64);
    let upper: u64 = arc_sizes.iter().map(|&s| (s as u64) * (s as u64).saturating_sub(1) / 2).sum();
    let implied_bound = Rational::from(k as u64)
        + Rational::new(BigInt::from(total) * BigInt::from(total), BigInt::from(2 * k * b.len()));
    let pass = lower <= pairs as i64 && pairs <= upper && Rational::from(distinct as u64) <= implied_bound;
    Ok(ArcCountingReport {
        k,
        arc_size,
        larger_arcs,
        arcs,
        arc_sizes,
        selected,
        pairs,
        lower,
        upper,
        implied_bound,
        distinct_gaps: distinct,
        pass,
    })
}

/// The integer `k` with `s/√(2b) <= k < s/√(2b) + 1`, i.e. the least `k` with `2b·k² >= s²`.
pub fn optimal_arc_count(sumset_len: usize, b_len: usize) -> usize {
    let s2 = (sumset_len as u128) * (sumset_len as u128);
    let two_b = 2 * b_len as u128;
    let mut k = ((s2 as f64 / two_b as f64).sqrt() as u128).saturating_sub(1);
    while two_b * k * k < s2 {
        k += 1;
    }
    while k > 0 && two_b * (k - 1) * (k - 1) >= s2 {
        k -= 1;
    }
    k.max(1) as usize
}

/// Greedy subset with pairwise distinct consecutive differences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyResult {
    pub set: CircularSet,
    /// 1-based positions `k_j` in `B` of the chosen points.
    pub positions: Vec<usize>,
}

impl GreedyResult {
    /// Whether `k_j <= C(j, 2) + 1` holds at every step.
    pub fn positions_within_bound(&self) -> bool {
        self.positions
            .iter()
            .enumerate()
            .all(|(idx, &k)| {
                let j = idx + 1;
                k <= j * (j - 1) / 2 + 1
            })
    }
}

/// Scans `B` in order, taking `a_1 = b_1`, `a_2 = b_2`, then each next `b_k` whose
/// difference from the last chosen point differs from all earlier differences.
pub fn greedy_max_distinct(b: &CircularSet) -> Result<GreedyResult> {
    if b.len() < 2 {
        return Err(Error::TooSmall { needed: 2, got: b.len() });
    }
    let pts = b.points();
    let mut chosen = vec![0usize, 1];
    let mut used: BTreeSet<Rational> = BTreeSet::new();
    used.insert(pts[1].value() - pts[0].value());
    let mut last = 1;
    for k in 2..pts.len() {
        let d = pts[k].value() - pts[last].value();
        if !used.contains(&d) {
            used.insert(d);
            chosen.push(k);
            last = k;
        }
    }
    let positions = chosen.iter().map(|&i| i + 1).collect();
    Ok(GreedyResult { set: b.select(&chosen), positions })
}

/// Greedy Sidon extraction: keep `b` when all nonzero differences `x - y` (mod 1)
/// over ordered pairs stay distinct.
pub fn sidon_subset(b: &CircularSet) -> Result<CircularSet> {
    if b.is_empty() {
        return Err(Error::TooSmall { needed: 1, got: 0 });
    }
    let pts = b.points();
    let mut chosen: Vec<usize> = Vec::new();
    let mut diffs: BTreeSet<TorusPoint> = BTreeSet::new();
    for (k, p) in pts.iter().enumerate() {
        let mut fresh = BTreeSet::new();
        let ok = chosen.iter().all(|&i| {
            let fwd = p - &pts[i];
            let back = &pts[i] - p;
            fwd != back && !diffs.contains(&fwd) && !diffs.contains(&back) && fresh.insert(fwd) && fresh.insert(back)
        });
        if ok {
            diffs.extend(fresh);
            chosen.push(k);
        }
    }
    Ok(b.select(&chosen))
}

/// Whether all ordered-pair differences of `set` are distinct modulo 1.
pub fn is_sidon(set: &CircularSet) -> bool {
    let pts = set.points();
    let mut seen = BTreeSet::new();
    for (i, x) in pts.iter().enumerate() {
        for (j, y) in pts.iter().enumerate() {
            if i != j && !seen.insert(x - y) {
                return false;
            }
        }
    }
    true
}

/// Largest `j` with `C(j, 2) + 1 <= n`: the number of points greedy is guaranteed to reach.
pub fn greedy_guaranteed_len(n: usize) -> usize {
    let mut j = 1usize;
    while (j + 1) * j / 2 < n {
        j += 1;
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn tp(p: i64, q: i64) -> TorusPoint {
        TorusPoint::new(r(p, q))
    }

    fn set(xs: &[(i64, i64)], wrap: WrapPolicy) -> CircularSet {
        CircularSet::new(xs.iter().map(|&(p, q)| tp(p, q)), wrap).unwrap()
    }

    #[test]
    fn spectrum_examples() {
        let s = spectrum(&set(&[(1, 4), (1, 2), (5, 8), (7, 8)], WrapPolicy::IncludeWrap)).unwrap();
        assert_eq!(s.gaps, vec![r(1, 4), r(1, 8), r(1, 4), r(3, 8)]);
        assert_eq!(s.distinct, [r(1, 8), r(1, 4), r(3, 8)].into_iter().collect());
        assert_eq!(s.multiplicity[&r(1, 4)], 2);

        let s = spectrum(&set(&[(0, 1), (1, 2)], WrapPolicy::IncludeWrap)).unwrap();
        assert_eq!(s.gaps, vec![r(1, 2), r(1, 2)]);
        assert_eq!(s.distinct_count(), 1);

        let s = spectrum(&set(&[(0, 1), (1, 3), (2, 3)], WrapPolicy::ExcludeWrap)).unwrap();
        assert_eq!(s.gaps, vec![r(1, 3), r(1, 3)]);

        assert!(matches!(spectrum(&set(&[(1, 3)], WrapPolicy::IncludeWrap)), Err(Error::TooSmall { .. })));
    }

    #[test]
    fn orbit_examples() {
        let o = fractional_orbit(&r(5, 8), 4).unwrap();
        assert_eq!(o.points(), &[tp(1, 4), tp(1, 2), tp(5, 8), tp(7, 8)]);
        assert_eq!(o.labels().unwrap(), &[2, 4, 1, 3]);
        let o = fractional_orbit(&r(1, 11), 3).unwrap();
        assert_eq!(o.points(), &[tp(1, 11), tp(2, 11), tp(3, 11)]);
        let o = fractional_orbit(&r(3, 7), 1).unwrap();
        assert_eq!(o.points(), &[tp(3, 7)]);
        assert!(matches!(fractional_orbit(&r(3, 7), 7), Err(Error::InsufficientDenominator { .. })));
        assert!(fractional_orbit(&r(2, 1), 1).is_err());
    }

    #[test]
    fn three_gap_examples() {
        let rep = three_gap_check(&r(5, 8), 4).unwrap();
        assert!(rep.pass);
        assert_eq!((rep.first_label, rep.last_label), (2, 3));
        let refs: BTreeSet<Rational> = rep.reference.iter().cloned().collect();
        assert_eq!(refs, [r(1, 8), r(1, 4), r(3, 8)].into_iter().collect());

        let rep = three_gap_check(&r(3, 7), 1).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.distinct, [Rational::one()].into_iter().collect());
    }

    #[test]
    fn three_gap_matches_brute_force_spectrum() {
        // oracle: gaps of sorted {n p mod q}, computed with plain integers
        for (p, q, n) in [(5i64, 8i64, 4u64), (13, 97, 40), (89, 144, 100), (7, 1000, 999)] {
            let mut xs: Vec<i64> = (1..=n as i64).map(|k| k * p % q).collect();
            xs.sort_unstable();
            let mut gaps: BTreeSet<i64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
            gaps.insert(q - xs[xs.len() - 1] + xs[0]);
            let rep = three_gap_check(&r(p, q), n).unwrap();
            let expect: BTreeSet<Rational> = gaps.into_iter().map(|g| r(g, q)).collect();
            assert_eq!(rep.distinct, expect);
            assert!(rep.pass);
        }
    }

    #[test]
    fn threek_examples() {
        let spec = APUnionSpec { alpha: r(7, 64), arms: vec![(tp(0, 1), 5), (tp(1, 3), 5)] };
        let rep = threek_gap_check(&spec).unwrap();
        assert_eq!(rep.points, 10);
        assert!(rep.pass && rep.distinct.len() <= 6);

        let spec = APUnionSpec { alpha: r(5, 8), arms: vec![(tp(0, 1), 4)] };
        let rep = threek_gap_check(&spec).unwrap();
        assert_eq!(rep.distinct.len(), 3);

        let clash = APUnionSpec { alpha: r(1, 4), arms: vec![(tp(0, 1), 2), (tp(1, 4), 2)] };
        assert!(matches!(threek_gap_check(&clash), Err(Error::Collision(_))));
    }

    #[test]
    fn theorem1_on_orbit_and_pairs() {
        // q must exceed 2N - 2 for the doubled orbit not to wrap onto itself
        let b = fractional_orbit(&r(13, 1009), 60).unwrap();
        let rep = theorem1_check(&b, &b).unwrap();
        assert_eq!(rep.sumset_len, 119);
        assert!(rep.pass);
        let a = b.select(&[3, 17]);
        let rep = theorem1_check(&a, &b).unwrap();
        assert!(rep.distinct_gaps <= 2 && rep.pass);
        let outsider = set(&[(1, 2), (1, 3)], WrapPolicy::IncludeWrap);
        assert!(matches!(theorem1_check(&outsider, &b), Err(Error::SubsetViolation(_))));
    }

    /// Oracle for P: enumerate all (i, b) pairs directly from the definition,
    /// with arcs as explicit sorted point lists.
    fn brute_pairs(a: &CircularSet, b: &CircularSet, k: usize) -> u64 {
        let mut sums: Vec<Rational> = Vec::new();
        for x in a.points() {
            for y in b.points() {
                sums.push((x + y).into_value());
            }
        }
        sums.sort();
        sums.dedup();
        let (l, rem) = (sums.len() / k, sums.len() % k);
        let mut arcs: Vec<Vec<Rational>> = Vec::new();
        let mut it = sums.into_iter();
        for j in 0..k {
            arcs.push(it.by_ref().take(l + usize::from(j < rem)).collect());
        }
        let pts = a.points();
        let m = pts.len();
        let gaps = spectrum(a).unwrap().gaps;
        let mut firsts: Vec<usize> = Vec::new();
        for (i, g) in gaps.iter().enumerate() {
            if !firsts.iter().any(|&f| &gaps[f] == g) {
                firsts.push(i);
            }
        }
        let mut count = 0;
        for y in b.points() {
            for &i in &firsts {
                let u = (&pts[i] + y).into_value();
                let v = (&pts[(i + 1) % m] + y).into_value();
                if arcs.iter().any(|arc| {
                    let pu = arc.iter().position(|x| *x == u);
                    let pv = arc.iter().position(|x| *x == v);
                    matches!((pu, pv), (Some(pu), Some(pv)) if pu < pv)
                }) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn arc_counting_small_example() {
        let a = set(&[(0, 1), (1, 10), (3, 10)], WrapPolicy::IncludeWrap);
        let rep = arc_counting_diagnostic(&a, &a, 2).unwrap();
        assert_eq!(rep.pairs, brute_pairs(&a, &a, 2));
        assert!(rep.pass);
        assert!(rep.lower <= rep.pairs as i64 && rep.pairs <= rep.upper);
    }

    #[test]
    fn arc_counting_with_many_arcs_counts_nothing() {
        let a = set(&[(0, 1), (1, 10), (3, 10)], WrapPolicy::IncludeWrap);
        let total = sumset(&a.to_exact_set(), &a.to_exact_set()).unwrap().len();
        let rep = arc_counting_diagnostic(&a, &a, total + 3).unwrap();
        assert_eq!(rep.pairs, 0);
        assert!(rep.lower <= 0 && rep.pass);
        assert!(rep.arc_sizes.iter().all(|&s| s <= 1));
    }

    #[test]
    fn arc_counting_on_orbit_with_optimal_k() {
        let b = fractional_orbit(&r(31, 211), 50).unwrap();
        let total = sumset(&b.to_exact_set(), &b.to_exact_set()).unwrap().len();
        let k = optimal_arc_count(total, b.len());
        // k is the least integer with k >= |A+B| / sqrt(2|B|)
        assert!(2 * b.len() * k * k >= total * total);
        assert!(2 * b.len() * (k - 1) * (k - 1) < total * total);
        let rep = arc_counting_diagnostic(&b, &b, k).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.pairs, brute_pairs(&b, &b, k));
    }

    #[test]
    fn greedy_on_progression() {
        let b = CircularSet::new((0..100).map(|i| tp(i, 100)), WrapPolicy::IncludeWrap).unwrap();
        let g = greedy_max_distinct(&b).unwrap();
        assert!(g.positions_within_bound());
        // differences 1, 2, 3, ... force the triangular positions
        assert_eq!(g.positions, (1..=14).map(|j| j * (j - 1) / 2 + 1).collect::<Vec<_>>());
        let d = spectrum(&g.set).unwrap().distinct_count();
        assert_eq!(d, 13);
        // on 100 equally spaced points every set of t distinct gap values needs
        // 1 + 2 + ... + t <= 100 units of circle, so 13 is the most possible
        let max_possible = (1..).take_while(|t| t * (t + 1) / 2 <= 100).last().unwrap();
        assert_eq!(max_possible, 13);
    }

    #[test]
    fn greedy_on_two_points() {
        let b = set(&[(1, 5), (3, 5)], WrapPolicy::IncludeWrap);
        let g = greedy_max_distinct(&b).unwrap();
        assert_eq!(g.set.points(), b.points());
    }

    #[test]
    fn greedy_on_large_orbit() {
        let b = fractional_orbit(&r(7919, 1_000_003), 1000).unwrap();
        let g = greedy_max_distinct(&b).unwrap();
        assert!(g.positions_within_bound());
        assert!(g.set.len() >= greedy_guaranteed_len(1000));
        let d = spectrum(&g.set.clone().with_wrap(WrapPolicy::ExcludeWrap)).unwrap();
        assert_eq!(d.distinct_count(), g.set.len() - 1);
    }

    #[test]
    fn sidon_examples() {
        let b = set(&[(0, 1), (1, 10), (2, 10), (3, 10), (4, 10)], WrapPolicy::IncludeWrap);
        let s = sidon_subset(&b).unwrap();
        assert_eq!(s.points(), &[tp(0, 1), tp(1, 10), tp(3, 10)]);
        assert!(is_sidon(&s));
        let one = set(&[(2, 7)], WrapPolicy::IncludeWrap);
        assert_eq!(sidon_subset(&one).unwrap(), one);
    }

    #[test]
    fn sidon_size_on_grid() {
        // n^2 + n + 1 points of a cyclic grid
        for n in [3usize, 5, 7] {
            let size = n * n + n + 1;
            let b = CircularSet::new((0..size as i64).map(|i| tp(i, size as i64)), WrapPolicy::IncludeWrap).unwrap();
            let s = sidon_subset(&b).unwrap();
            assert!(is_sidon(&s));
            let spec = spectrum(&s.clone().with_wrap(WrapPolicy::ExcludeWrap)).unwrap();
            assert_eq!(spec.distinct_count(), s.len() - 1);
            assert!(s.len() * s.len() >= size / 4, "size {} for |B|={size}", s.len());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn orbit_has_at_most_three_gaps(p in 1i64..10_000, extra in 1i64..10_000, n in 1u64..300) {
            let q = n as i64 + extra;
            let alpha = r(p, q);
            prop_assume!(alpha.denom() > &BigInt::from(n));
            let rep = three_gap_check(&alpha, n).unwrap();
            prop_assert!(rep.pass);
            let orbit = fractional_orbit(&alpha, n).unwrap();
            if orbit.len() > 1 {
                let s = spectrum(&orbit).unwrap();
                prop_assert_eq!(s.gaps.iter().sum::<Rational>(), Rational::one());
            }
        }

        #[test]
        fn greedy_differences_are_distinct(xs in proptest::collection::btree_set(0i64..500, 2..80)) {
            let b = CircularSet::new(xs.iter().map(|&x| tp(x, 500)), WrapPolicy::IncludeWrap).unwrap();
            let g = greedy_max_distinct(&b).unwrap();
            prop_assert!(g.positions_within_bound());
            let lin = spectrum(&g.set.clone().with_wrap(WrapPolicy::ExcludeWrap)).unwrap();
            prop_assert_eq!(lin.distinct_count(), lin.gaps.len());
        }

        #[test]
        fn arc_counting_bounds(xs in proptest::collection::btree_set(0i64..200, 3..25), pick in proptest::collection::vec(any::<bool>(), 25), k in 1usize..12) {
            let b = CircularSet::new(xs.iter().map(|&x| tp(x, 200)), WrapPolicy::IncludeWrap).unwrap();
            let idx: Vec<usize> = (0..b.len()).filter(|&i| pick[i] || i < 2).collect();
            let a = b.select(&idx);
            let rep = arc_counting_diagnostic(&a, &b, k).unwrap();
            prop_assert!(rep.pass);
            prop_assert_eq!(rep.pairs, brute_pairs(&a, &b, k));
        }
    }
}
