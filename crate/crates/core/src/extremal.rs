//! Sets without three-term progressions and the constructions built from them.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gaps::{CircularSet, WrapPolicy};
use crate::rational::Rational;
use crate::sumset::{covers_differences, minimal_difference_cover, sumset, FiniteExactSet, EXACT_COVER_LIMIT};
use crate::torus::TorusPoint;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApMethod {
    Exact,
    Behrend,
    Greedy,
    Supplied,
}

/// A subset of `{1, …, n}` with no non-trivial 3-term progression.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct APFreeSet {
    pub elements: Vec<i64>,
    pub n: i64,
    pub method: ApMethod,
}

impl APFreeSet {
    /// Checks range and AP-freeness of caller-provided elements.
    pub fn supplied(n: i64, elements: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut elements: Vec<i64> = elements.into_iter().collect();
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement(w[0].to_string()));
        }
        if let Some(x) = elements.iter().find(|&&x| x < 1 || x > n) {
            return Err(Error::OutOfRange(format!("{x} not in [1, {n}]")));
        }
        if let Some((a, b, c)) = ap_witness(&elements) {
            return Err(Error::InvalidConfiguration(format!("{a}, {b}, {c} is an arithmetic progression")));
        }
        Ok(APFreeSet { elements, n, method: ApMethod::Supplied })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn to_exact_set(&self) -> FiniteExactSet {
        FiniteExactSet::integers(self.elements.iter().copied())
    }
}

/// A progression `a < b < c` with `a + c = 2b`, if one exists.
pub fn ap_witness(s: &[i64]) -> Option<(i64, i64, i64)> {
    let set: HashSet<i64> = s.iter().copied().collect();
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for (i, &a) in sorted.iter().enumerate() {
        for &c in &sorted[i + 1..] {
            let sum = a as i128 + c as i128;
            if sum % 2 == 0 && set.contains(&((sum / 2) as i64)) {
                return Some((a, (sum / 2) as i64, c));
            }
        }
    }
    None
}

pub fn is_ap_free(s: &[i64]) -> bool {
    ap_witness(s).is_none()
}

/// Largest `n` accepted by [`exact_ap_free`].
pub const EXACT_AP_LIMIT: i64 = 40;

/// Depth-first search over `{1, …, m}` from the top, pruned by the sizes
/// already known for shorter intervals.
struct ApSearch<'a> {
    r3: &'a [usize],
    best: usize,
    best_set: u64,
}

impl ApSearch<'_> {
    // `chosen` holds bits for picked elements (bit x-1 for x); `m` is the next candidate.
    fn run(&mut self, m: usize, chosen: u64, size: usize) {
        if size > self.best {
            self.best = size;
            self.best_set = chosen;
        }
        if m == 0 || size + self.r3[m] <= self.best {
            return;
        }
        if !closes_progression(chosen, m) {
            self.run(m - 1, chosen | 1 << (m - 1), size + 1);
        }
        self.run(m - 1, chosen, size);
    }
}

/// Whether adding `x` (smaller than every chosen element) creates `x, y, 2y - x`.
fn closes_progression(chosen: u64, x: usize) -> bool {
    let mut rest = chosen;
    while rest != 0 {
        let y = rest.trailing_zeros() as usize + 1;
        rest &= rest - 1;
        let z = 2 * y - x;
        if z <= 64 && chosen >> (z - 1) & 1 == 1 {
            return true;
        }
    }
    false
}

/// `r₃(m)` for `m = 0..=n`.
pub fn r3_table(n: i64) -> Result<Vec<usize>> {
    if !(0..=EXACT_AP_LIMIT).contains(&n) {
        return Err(Error::OutOfRange(format!("exact r3 needs 0 <= N <= {EXACT_AP_LIMIT}, got {n}")));
    }
    let mut r3 = vec![0usize; n as usize + 1];
    for m in 1..=n as usize {
        // r3 is translation invariant, so r3[j] bounds any j consecutive integers
        let mut search = ApSearch { r3: &r3, best: r3[m - 1], best_set: 0 };
        search.run(m - 1, 1 << (m - 1), 1);
        r3[m] = search.best.max(r3[m - 1]);
    }
    Ok(r3)
}

/// A maximum AP-free subset of `{1, …, n}`.
pub fn exact_ap_free(n: i64) -> Result<APFreeSet> {
    if n < 1 {
        return Err(Error::OutOfRange(format!("N must be >= 1, got {n}")));
    }
    let r3 = r3_table(n)?;
    let mut search = ApSearch { r3: &r3, best: 0, best_set: 0 };
    search.run(n as usize, 0, 0);
    debug_assert_eq!(search.best, r3[n as usize]);
    let elements = (1..=n).filter(|&x| search.best_set >> (x - 1) & 1 == 1).collect();
    Ok(APFreeSet { elements, n, method: ApMethod::Exact })
}

/// Greedy AP-free set: take each integer in turn unless it completes a progression.
pub fn greedy_ap_free(n: i64) -> APFreeSet {
    let mut elements: Vec<i64> = Vec::new();
    let mut member = vec![false; n.max(0) as usize + 1];
    for x in 1..=n {
        let blocked = elements.iter().any(|&y| {
            let a = 2 * y - x;
            a >= 1 && member[a as usize]
        });
        if !blocked {
            elements.push(x);
            member[x as usize] = true;
        }
    }
    APFreeSet { elements, n, method: ApMethod::Greedy }
}

/// Parameters and size of one Behrend candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BehrendParams {
    pub dim: u32,
    pub digits: i64,
    pub base: i64,
    pub radius_sq: i64,
    pub size: usize,
}

/// Digit vectors `x ∈ [0, m)^k` with `1 + Σ x_i base^i ≤ n`, grouped by
/// `Σ (2x_i - (m-1))²`, the squared distance from the centre of the cube.
fn sphere_counts(n: i64, k: u32, m: i64) -> BTreeMap<i64, usize> {
    let base = 2 * m - 1;
    let mut counts = BTreeMap::new();
    let top = base.checked_pow(k - 1).unwrap_or(i64::MAX);
    visit_digits(n - 1, k, m, top, 0, 0, &mut |_, r| *counts.entry(r).or_insert(0) += 1);
    counts
}

/// Walks digit vectors from the most significant digit with `value ≤ limit`.
fn visit_digits(limit: i64, left: u32, m: i64, place: i64, value: i64, radius: i64, f: &mut impl FnMut(i64, i64)) {
    if left == 0 {
        f(value, radius);
        return;
    }
    let base = 2 * m - 1;
    for x in 0..m {
        let v = match place.checked_mul(x).and_then(|p| p.checked_add(value)) {
            Some(v) if v <= limit => v,
            _ => break,
        };
        let c = 2 * x - (m - 1);
        visit_digits(limit, left - 1, m, place / base, v, radius + c * c, f);
    }
}

/// Candidate parameter grid: dimensions `2..=⌈√ln n⌉+2` and a few digit
/// ranges around the largest one whose whole cube fits below `n`.
pub fn behrend_candidates(n: i64) -> Vec<(u32, i64)> {
    let kmax = ((n.max(2) as f64).ln().sqrt().ceil() as u32) + 2;
    let mut out = Vec::new();
    for k in 2..=kmax {
        let fits = |m: i64| {
            let base = 2 * m - 1;
            // largest value is (m-1)(1 + base + … + base^{k-1})
            let mut total: i64 = 0;
            let mut place: i64 = 1;
            for _ in 0..k {
                total = match place.checked_mul(m - 1).and_then(|t| t.checked_add(total)) {
                    Some(t) => t,
                    None => return false,
                };
                place = place.saturating_mul(base);
            }
            total < n
        };
        let mut m_fit = 2;
        while fits(m_fit + 1) {
            m_fit += 1;
        }
        let mut ms = vec![m_fit, m_fit + 1, m_fit + m_fit / 4, m_fit + m_fit / 2, 2 * m_fit];
        ms.sort_unstable();
        ms.dedup();
        out.extend(ms.into_iter().map(|m| (k, m)));
    }
    out
}

/// Best parameters for [`behrend_set`]; ties go to the smaller dimension, then fewer digits.
pub fn behrend_scan(n: i64) -> Option<BehrendParams> {
    if n < 1 {
        return None;
    }
    behrend_candidates(n)
        .into_par_iter()
        .map(|(k, m)| {
            let counts = sphere_counts(n, k, m);
            let (radius_sq, size) = counts
                .iter()
                .fold((0, 0), |(br, bs), (&r, &s)| if s > bs { (r, s) } else { (br, bs) });
            BehrendParams { dim: k, digits: m, base: 2 * m - 1, radius_sq, size }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .max_by(|a, b| a.size.cmp(&b.size).then(b.dim.cmp(&a.dim)).then(b.digits.cmp(&a.digits)))
}

/// Behrend's digit-sphere set in `{1, …, n}`.
///
/// Digits are below `m` in base `2m - 1`, so adding two elements never
/// carries and `a + c = 2b` holds digitwise; on a sphere that forces `a = b = c`.
pub fn behrend_set(n: i64) -> APFreeSet {
    let Some(p) = behrend_scan(n) else {
        return APFreeSet { elements: Vec::new(), n, method: ApMethod::Behrend };
    };
    let mut elements = Vec::with_capacity(p.size);
    let top = p.base.pow(p.dim - 1);
    visit_digits(n - 1, p.dim, p.digits, top, 0, 0, &mut |v, r| {
        if r == p.radius_sq {
            elements.push(v + 1);
        }
    });
    elements.sort_unstable();
    if n >= 1 && elements.is_empty() {
        elements.push(1);
    }
    APFreeSet { elements, n, method: ApMethod::Behrend }
}

/// `B = S ∪ {2N < m ≤ x - 2N} ∪ (x - S)` with `x = 5N - 2|S|`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Prop1Instance {
    pub n: i64,
    pub s: APFreeSet,
    pub x: i64,
    pub b: Vec<i64>,
    pub sumset_len: usize,
    pub sumset_min: i64,
    pub sumset_max: i64,
}

impl Prop1Instance {
    pub fn to_exact_set(&self) -> FiniteExactSet {
        FiniteExactSet::integers(self.b.iter().copied())
    }

    /// `|B| = N`, `B + B ⊆ [1, 2x]` and `|B + B| ≤ 2x ≤ 10N`.
    pub fn invariants_hold(&self) -> bool {
        let x2 = 2 * self.x;
        self.b.len() as i64 == self.n
            && self.sumset_min >= 1
            && self.sumset_max <= x2
            && self.sumset_len as i64 <= x2
            && x2 <= 10 * self.n
    }
}

pub fn prop1_build(n: i64, s: &APFreeSet) -> Result<Prop1Instance> {
    if 2 * s.len() as i64 > n {
        return Err(Error::Undefined(format!("|S| = {} exceeds N/2 = {n}/2", s.len())));
    }
    if let Some(x) = s.elements.iter().find(|&&x| x < 1 || x > n) {
        return Err(Error::SubsetViolation(format!("{x} not in [1, {n}]")));
    }
    if let Some((a, b, c)) = ap_witness(&s.elements) {
        return Err(Error::InvalidConfiguration(format!("S contains the progression {a}, {b}, {c}")));
    }
    let x = 5 * n - 2 * s.len() as i64;
    let mut b: Vec<i64> = s.elements.clone();
    b.extend(2 * n + 1..=x - 2 * n);
    b.extend(s.elements.iter().map(|e| x - e));
    b.sort_unstable();
    let set = FiniteExactSet::integers(b.iter().copied());
    let ss = sumset(&set, &set)?.to_i64().expect("integer sumset");
    Ok(Prop1Instance {
        n,
        s: s.clone(),
        x,
        b,
        sumset_len: ss.len(),
        sumset_min: ss.first().copied().unwrap_or(0),
        sumset_max: ss.last().copied().unwrap_or(0),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcedDifference {
    pub s: i64,
    pub m: i64,
    /// Every `(b₁, b₂)` in `B × B` with `b₁ - b₂ = m`.
    pub representations: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ForcedSubsetReport {
    pub entries: Vec<ForcedDifference>,
    pub all_unique: bool,
    /// `x - S`, contained in every cover when all representations are unique.
    pub forced: Vec<i64>,
    /// Size of a minimum cover, when `|B|` is small enough to solve exactly.
    pub min_cover_len: Option<usize>,
    pub min_cover_contains_forced: Option<bool>,
    pub pass: bool,
}

pub fn prop1_forced_subset_check(inst: &Prop1Instance) -> Result<ForcedSubsetReport> {
    let members: HashSet<i64> = inst.b.iter().copied().collect();
    let entries: Vec<ForcedDifference> = inst
        .s
        .elements
        .iter()
        .map(|&s| {
            let m = inst.x - 2 * s;
            let representations = inst.b.iter().filter(|&&b2| members.contains(&(b2 + m))).map(|&b2| (b2 + m, b2)).collect();
            ForcedDifference { s, m, representations }
        })
        .collect();
    let all_unique = entries
        .iter()
        .all(|e| e.representations == [(inst.x - e.s, e.s)]);
    let forced: Vec<i64> = inst.s.elements.iter().rev().map(|s| inst.x - s).collect();
    let (min_cover_len, min_cover_contains_forced) = if inst.b.len() <= EXACT_COVER_LIMIT {
        let cover = minimal_difference_cover(&inst.to_exact_set())?;
        let contains = forced.iter().all(|&f| cover.cover.contains(&Rational::from(f)));
        (Some(cover.cover.len()), Some(contains))
    } else {
        (None, None)
    };
    let cover_ok = min_cover_len.map_or(true, |c| c >= inst.s.len()) && min_cover_contains_forced.unwrap_or(true);
    Ok(ForcedSubsetReport { entries, all_unique, forced, min_cover_len, min_cover_contains_forced, pass: all_unique && cover_ok })
}

/// `B = {Σ n_j α_j : 0 ≤ n_j < N_j}` and its corner set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeProjection {
    pub alphas: Vec<Rational>,
    pub ns: Vec<u64>,
    pub b: CircularSet,
    /// Corners `Σ δ_j (N_j - 1) α_j`, `δ ∈ {0, 1}^k`.
    pub c: CircularSet,
    pub sumset_len: usize,
    pub doubling: Rational,
    /// `|B + B| ≤ 2^k |B|`; a heuristic, reported rather than enforced.
    pub doubling_within_2k: bool,
    pub corner_bound: u64,
    pub corners_within_bound: bool,
    /// `C - B = B - B`.
    pub covers: bool,
}

pub fn lattice_projection(alphas: &[Rational], ns: &[u64]) -> Result<LatticeProjection> {
    if alphas.len() != ns.len() {
        return Err(Error::DimensionMismatch { expected: alphas.len(), got: ns.len() });
    }
    if alphas.is_empty() || ns.contains(&0) {
        return Err(Error::DegenerateInput("need k >= 1 arms of positive length".into()));
    }
    if alphas.len() > 20 {
        return Err(Error::OutOfRange(format!("k = {} arms is too many corners", alphas.len())));
    }
    let total: u64 = ns.iter().try_fold(1u64, |acc, &n| acc.checked_mul(n)).filter(|&t| t <= 1 << 22).ok_or_else(|| {
        Error::OutOfRange("lattice has more than 2^22 points".into())
    })?;
    let point = |idx: &[u64]| -> Rational {
        idx.iter().zip(alphas).map(|(&n, a)| a * Rational::from(n)).sum()
    };
    let mut seen: std::collections::HashMap<TorusPoint, Vec<u64>> = std::collections::HashMap::new();
    let mut idx = vec![0u64; ns.len()];
    for _ in 0..total {
        let p = TorusPoint::new(point(&idx));
        if let Some(prev) = seen.get(&p) {
            return Err(Error::Collision(format!("n = {prev:?} and n = {idx:?} both give {p}")));
        }
        seen.insert(p, idx.clone());
        for (j, n) in ns.iter().enumerate() {
            idx[j] += 1;
            if idx[j] < *n {
                break;
            }
            idx[j] = 0;
        }
    }
    let b = CircularSet::new(seen.into_keys(), WrapPolicy::IncludeWrap)?;
    let k = alphas.len();
    let corners = (0u64..1 << k).map(|mask| {
        let idx: Vec<u64> = ns.iter().enumerate().map(|(j, n)| if mask >> j & 1 == 1 { n - 1 } else { 0 }).collect();
        TorusPoint::new(point(&idx))
    });
    let c = CircularSet::new(corners.collect::<HashSet<_>>(), WrapPolicy::IncludeWrap)?;
    let bset = b.to_exact_set();
    let sumset_len = sumset(&bset, &bset)?.len();
    let doubling = Rational::new(sumset_len as i64, b.len() as i64);
    let corner_bound = 1u64 << k;
    let covers = covers_differences(&bset, &c.to_exact_set())?.is_ok();
    Ok(LatticeProjection {
        alphas: alphas.to_vec(),
        ns: ns.to_vec(),
        doubling_within_2k: sumset_len as u64 <= corner_bound * b.len() as u64,
        corners_within_bound: c.len() as u64 <= corner_bound,
        b,
        c,
        sumset_len,
        doubling,
        corner_bound,
        covers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::verify_generation;
    use proptest::prelude::*;

    /// Plain exhaustive maximum over all subsets, for small n.
    fn brute_r3(n: i64) -> usize {
        (0u32..1 << n)
            .filter(|mask| {
                let s: Vec<i64> = (1..=n).filter(|x| mask >> (x - 1) & 1 == 1).collect();
                is_ap_free(&s)
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn exact_matches_brute_force() {
        let table = r3_table(18).unwrap();
        for n in 1..=18 {
            assert_eq!(table[n as usize], brute_r3(n), "n = {n}");
            let s = exact_ap_free(n).unwrap();
            assert_eq!(s.len(), table[n as usize]);
            assert!(is_ap_free(&s.elements));
            assert!(s.elements.iter().all(|&x| (1..=n).contains(&x)));
        }
    }

    #[test]
    fn exact_examples() {
        assert_eq!(exact_ap_free(1).unwrap().elements, vec![1]);
        assert_eq!(exact_ap_free(5).unwrap().len(), 4);
        assert_eq!(exact_ap_free(8).unwrap().len(), 4);
        assert!(exact_ap_free(41).is_err());
        assert!(exact_ap_free(0).is_err());
    }

    #[test]
    fn exact_sizes_up_to_limit() {
        let table = r3_table(EXACT_AP_LIMIT).unwrap();
        assert!(table.windows(2).all(|w| w[0] <= w[1] && w[1] <= w[0] + 1));
        // r3(20), r3(30), r3(40), as found by a separate unpruned search
        assert_eq!((table[20], table[30], table[40]), (9, 12, 15));
        let s = exact_ap_free(EXACT_AP_LIMIT).unwrap();
        assert_eq!(s.len(), 15);
        assert!(is_ap_free(&s.elements));
    }

    #[test]
    fn witness_reports_progression() {
        assert_eq!(ap_witness(&[1, 4, 7]), Some((1, 4, 7)));
        assert_eq!(ap_witness(&[1, 2, 4, 5]), None);
        assert!(APFreeSet::supplied(10, [1, 5, 9]).is_err());
        assert!(APFreeSet::supplied(4, [1, 5]).is_err());
    }

    #[test]
    fn greedy_is_base_three() {
        let g = greedy_ap_free(30);
        assert_eq!(g.elements, vec![1, 2, 4, 5, 10, 11, 13, 14, 28, 29]);
    }

    #[test]
    fn behrend_meets_greedy_at_125() {
        let b = behrend_set(125);
        assert!(is_ap_free(&b.elements));
        assert!(b.len() >= greedy_ap_free(125).len(), "{}", b.len());
        assert!(b.elements.iter().all(|&x| (1..=125).contains(&x)));
    }

    #[test]
    fn behrend_small_and_degenerate() {
        for n in [1, 2, 3, 7, 50, 1000] {
            let b = behrend_set(n);
            assert!(!b.is_empty());
            assert!(is_ap_free(&b.elements), "n = {n}");
            assert!(b.elements.iter().all(|&x| (1..=n).contains(&x)));
        }
        assert!(behrend_set(0).is_empty());
    }

    #[test]
    fn prop1_small_example() {
        let s = APFreeSet::supplied(4, [1, 2]).unwrap();
        let inst = prop1_build(4, &s).unwrap();
        assert_eq!(inst.x, 16);
        assert_eq!(inst.b, vec![1, 2, 14, 15]);
        assert!(inst.invariants_hold());
        assert!(inst.sumset_len <= 32);
        let rep = prop1_forced_subset_check(&inst).unwrap();
        assert_eq!(rep.entries[0].representations, vec![(15, 1)]);
        assert_eq!((rep.entries[1].m, rep.entries[1].representations.clone()), (12, vec![(14, 2)]));
        assert!(rep.pass);
    }

    #[test]
    fn prop1_rejects_bad_input() {
        let big = APFreeSet::supplied(5, [1, 2, 4]).unwrap();
        assert!(matches!(prop1_build(5, &big), Err(Error::Undefined(_))));
        let outside = APFreeSet { elements: vec![1, 9], n: 9, method: ApMethod::Supplied };
        assert!(matches!(prop1_build(4, &outside), Err(Error::SubsetViolation(_))));
        let ap = APFreeSet { elements: vec![1, 2, 3], n: 10, method: ApMethod::Supplied };
        assert!(prop1_build(10, &ap).is_err());
    }

    #[test]
    fn prop1_with_exact_sets() {
        for n in [10i64, 16, 20] {
            let mut s = exact_ap_free(n).unwrap();
            s.elements.truncate(n as usize / 2);
            let inst = prop1_build(n, &s).unwrap();
            assert!(inst.invariants_hold());
            let rep = prop1_forced_subset_check(&inst).unwrap();
            assert!(rep.pass, "{rep:?}");
            assert!(rep.min_cover_len.unwrap() >= s.len());
        }
    }

    #[test]
    fn lattice_single_arm_is_progression() {
        let lp = lattice_projection(&[Rational::new(3, 50)], &[10]).unwrap();
        assert_eq!(lp.sumset_len, 19);
        assert!(lp.covers && lp.corners_within_bound && lp.doubling_within_2k);
        assert_eq!(lp.c.len(), 2);
    }

    #[test]
    fn lattice_two_arms() {
        // (5/64, 23/64) collides: 3·23 ≡ 5 (mod 64)
        let err = lattice_projection(&[Rational::new(5, 64), Rational::new(23, 64)], &[4, 4]).unwrap_err();
        assert!(matches!(err, Error::Collision(_)));

        let lp = lattice_projection(&[Rational::new(5, 64), Rational::new(17, 64)], &[4, 4]).unwrap();
        assert_eq!(lp.b.len(), 16);
        assert_eq!(lp.c.len(), 4);
        assert!(lp.covers);
        let v = verify_generation(&lp.b, &lp.c).unwrap();
        assert!(v.pass);
        assert!(v.r_minus.len() <= 4 && v.r_plus.len() <= 4);
    }

    #[test]
    fn lattice_input_errors() {
        assert!(lattice_projection(&[Rational::new(1, 7)], &[2, 2]).is_err());
        assert!(lattice_projection(&[], &[]).is_err());
        assert!(lattice_projection(&[Rational::new(1, 7)], &[0]).is_err());
    }

    proptest! {
        #[test]
        fn behrend_is_ap_free(n in 1i64..3000) {
            let b = behrend_set(n);
            prop_assert!(is_ap_free(&b.elements));
            prop_assert!(b.elements.iter().all(|&x| (1..=n).contains(&x)));
        }

        #[test]
        fn prop1_invariants(n in 2i64..40, take in 0usize..20) {
            let s = greedy_ap_free(n);
            let mut s = s.clone();
            s.elements.truncate(take.min(n as usize / 2));
            let inst = prop1_build(n, &s).unwrap();
            prop_assert!(inst.invariants_hold());
            let members: HashSet<i64> = inst.b.iter().copied().collect();
            for &e in &s.elements {
                let m = inst.x - 2 * e;
                let reps = inst.b.iter().filter(|&&b2| members.contains(&(b2 + m))).count();
                prop_assert_eq!(reps, 1);
            }
        }

        #[test]
        fn lattice_corners_cover(a in 1i64..97, b in 1i64..97, n1 in 1u64..6, n2 in 1u64..6) {
            let alphas = [Rational::new(a, 97), Rational::new(b, 97)];
            if let Ok(lp) = lattice_projection(&alphas, &[n1, n2]) {
                prop_assert!(lp.covers);
                prop_assert!(lp.corners_within_bound);
            }
        }
    }
}
