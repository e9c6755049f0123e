//! Exact sumsets, difference sets and minimal difference covers.
//!
//! Two sumset backends are used, chosen by domain:
//!
//! * **integers** go through a range-bucketed streaming enumerator
//!   ([`SumBlocks`]): all sums falling in a value window are generated from
//!   per-summand cursors, sorted and deduplicated, then the window slides.
//!   Memory stays bounded by one window, so the cardinality of very large
//!   sumsets can be computed without materializing them;
//! * **rationals / torus** are rescaled to a common denominator and merged
//!   as `|A|` sorted shifted copies of `B` with a k-way heap (torus shifts
//!   split into two sorted runs at the wrap point).

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::scaled::{scale_groups, ExactInt, ScaledValues};
use crate::torus::{reduce_mod1, TorusPoint};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Integers,
    Rationals,
    Torus,
}

/// A finite, strictly sorted, duplicate-free set of exact scalars.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteExactSet {
    domain: Domain,
    elements: Vec<Rational>,
}

impl FiniteExactSet {
    /// Builds a set, sorting and merging repeated values. Torus inputs are reduced mod 1.
    pub fn new(domain: Domain, elements: impl IntoIterator<Item = Rational>) -> Result<Self> {
        let mut elements: Vec<Rational> = match domain {
            Domain::Torus => elements.into_iter().map(|x| reduce_mod1(&x).into_value()).collect(),
            _ => elements.into_iter().collect(),
        };
        if domain == Domain::Integers {
            if let Some(x) = elements.iter().find(|x| !x.is_integer()) {
                return Err(Error::DomainMismatch(format!("{x} is not an integer")));
            }
        }
        elements.sort();
        elements.dedup();
        Ok(FiniteExactSet { domain, elements })
    }

    pub fn integers(xs: impl IntoIterator<Item = i64>) -> Self {
        Self::new(Domain::Integers, xs.into_iter().map(Rational::from)).expect("integers are integral")
    }

    pub fn torus(points: impl IntoIterator<Item = TorusPoint>) -> Self {
        Self::new(Domain::Torus, points.into_iter().map(TorusPoint::into_value)).expect("torus points are valid")
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn is_subset_of(&self, other: &FiniteExactSet) -> bool {
        self.domain == other.domain && self.elements.iter().all(|x| other.contains(x))
    }

    /// `{-x : x ∈ self}` in the same domain.
    pub fn negated(&self) -> FiniteExactSet {
        FiniteExactSet::new(self.domain, self.elements.iter().map(|x| -x)).expect("negation keeps the domain")
    }

    pub fn to_torus_points(&self) -> Vec<TorusPoint> {
        self.elements.iter().cloned().map(TorusPoint::new).collect()
    }

    /// Elements as `i64`, when every element is an integer in range.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.elements
            .iter()
            .map(|x| if x.is_integer() { x.numer().to_i64() } else { None })
            .collect()
    }
}

fn check_domains(a: &FiniteExactSet, b: &FiniteExactSet) -> Result<()> {
    if a.domain != b.domain {
        return Err(Error::DomainMismatch(format!("{:?} vs {:?}", a.domain, b.domain)));
    }
    Ok(())
}

/// `A + B`, sorted and deduplicated; torus sums are reduced mod 1.
pub fn sumset(a: &FiniteExactSet, b: &FiniteExactSet) -> Result<FiniteExactSet> {
    check_domains(a, b)?;
    let domain = a.domain;
    if a.is_empty() || b.is_empty() {
        return Ok(FiniteExactSet { domain, elements: Vec::new() });
    }
    let elements = match scale_groups(&[&a.elements, &b.elements], 4) {
        Ok(groups) => {
            let (sa, sb) = (&groups[0], &groups[1]);
            let sums = match domain {
                Domain::Integers => int_sumset(&sa.nums, &sb.nums),
                Domain::Rationals => merge_sums(&sa.nums, &sb.nums, None),
                Domain::Torus => merge_sums(&sa.nums, &sb.nums, Some(&sa.denom)),
            };
            to_rationals(sa, sums)
        }
        Err(groups) => {
            let (sa, sb) = (&groups[0], &groups[1]);
            let modulus = (domain == Domain::Torus).then_some(&sa.denom);
            let sums = merge_sums(&sa.nums, &sb.nums, modulus);
            to_rationals(sa, sums)
        }
    };
    Ok(FiniteExactSet { domain, elements })
}

fn to_rationals<T: ExactInt>(scale: &ScaledValues<T>, nums: Vec<T>) -> Vec<Rational> {
    nums.iter().map(|x| scale.to_rational(x)).collect()
}

/// `A - B`; torus differences are canonicalized to `[0, 1)`.
pub fn difference_set(a: &FiniteExactSet, b: &FiniteExactSet) -> Result<FiniteExactSet> {
    check_domains(a, b)?;
    sumset(a, &b.negated())
}

/// `|A + B|`. Integer sumsets are counted by streaming, without materializing them.
pub fn sumset_len(a: &FiniteExactSet, b: &FiniteExactSet) -> Result<u64> {
    check_domains(a, b)?;
    if a.domain == Domain::Integers {
        if let Ok(groups) = scale_groups(&[&a.elements, &b.elements], 4) {
            return Ok(int_sumset_count(&groups[0].nums, &groups[1].nums));
        }
    }
    Ok(sumset(a, b)?.len() as u64)
}

/// Doubling ratio `|B+B| / |B|` as an exact rational.
pub fn doubling_ratio(b: &FiniteExactSet) -> Result<Rational> {
    if b.is_empty() {
        return Err(Error::TooSmall { needed: 1, got: 0 });
    }
    let ss = sumset_len(b, b)?;
    Ok(Rational::new(BigInt::from(ss), BigInt::from(b.len())))
}

/// k-way merge of the shifted copies `a_i + B`, optionally reduced modulo `modulus`.
fn merge_sums<T: ExactInt>(a: &[T], b: &[T], modulus: Option<&T>) -> Vec<T> {
    // a run is (shift, start, end): values b[j] + shift for j in start..end
    let mut runs: Vec<(T, usize, usize)> = Vec::with_capacity(a.len() * 2);
    let mut a_sorted = a.to_vec();
    a_sorted.sort();
    let mut b_sorted = b.to_vec();
    b_sorted.sort();
    let b = &b_sorted;
    for x in &a_sorted {
        match modulus {
            None => runs.push((x.clone(), 0, b.len())),
            Some(m) => {
                let split = b.partition_point(|y| x.clone() + y.clone() < *m);
                if split < b.len() {
                    runs.push((x.clone() - m.clone(), split, b.len()));
                }
                if split > 0 {
                    runs.push((x.clone(), 0, split));
                }
            }
        }
    }
    let mut heap: BinaryHeap<Reverse<(T, usize)>> = runs
        .iter()
        .enumerate()
        .map(|(r, (shift, start, _))| Reverse((b[*start].clone() + shift.clone(), r)))
        .collect();
    let mut pos: Vec<usize> = runs.iter().map(|r| r.1).collect();
    let mut out: Vec<T> = Vec::new();
    while let Some(Reverse((v, r))) = heap.pop() {
        if out.last() != Some(&v) {
            out.push(v);
        }
        pos[r] += 1;
        let (shift, _, end) = &runs[r];
        if pos[r] < *end {
            heap.push(Reverse((b[pos[r]].clone() + shift.clone(), r)));
        }
    }
    out
}

/// Target number of sums per window of the streaming integer engine.
const WINDOW_TARGET: usize = 1 << 20;
/// Hard cap on one window before it is narrowed.
const WINDOW_CAP: usize = 1 << 23;

/// Streaming enumerator of the integer sumset `A + B` in increasing windows.
///
/// Every call to [`SumBlocks::next_block`] yields the distinct sums lying in
/// the next value window `[base, base + width)`, as sorted `u64` offsets from
/// `base`. Inputs must be sorted, duplicate-free and small enough that sums
/// fit in `i128`.
pub struct SumBlocks<'a> {
    a: &'a [i128],
    b: &'a [i128],
    cursor: Vec<usize>,
    first: usize,
    base: i128,
    end: i128,
    width: i128,
    buf: Vec<u64>,
    /// Sums enumerated (before deduplication) by the latest block.
    pub last_pairs: u64,
}

impl<'a> SumBlocks<'a> {
    /// Enumerates the sums in `[from, to)`.
    pub fn new(a: &'a [i128], b: &'a [i128], from: i128, to: i128) -> Self {
        let cursor = a.iter().map(|&x| b.partition_point(|&y| x + y < from)).collect();
        let pairs = (a.len() as f64) * (b.len() as f64);
        let span = (to - from).max(1) as f64;
        let windows = (pairs / WINDOW_TARGET as f64).max(1.0);
        let width = ((span / windows).ceil() as i128).clamp(1, i64::MAX as i128);
        SumBlocks { a, b, cursor, first: 0, base: from, end: to, width, buf: Vec::new(), last_pairs: 0 }
    }

    pub fn next_block(&mut self) -> Option<(i128, &[u64])> {
        let (a, b) = (self.a, self.b);
        if self.base >= self.end || a.is_empty() || b.is_empty() {
            return None;
        }
        let b_last = b[b.len() - 1];
        while self.first < a.len() && (self.cursor[self.first] == b.len() || a[self.first] + b_last < self.base) {
            self.first += 1;
        }
        if self.first == a.len() {
            self.base = self.end;
            return None;
        }
        let base = self.base;
        let mut width = self.width.min(self.end - base);
        self.buf.clear();
        let mut i = self.first;
        loop {
            let limit = base + width;
            while i < a.len() && a[i] + b[0] < limit && (self.buf.len() <= WINDOW_CAP || width == 1) {
                let x = a[i];
                let mut j = self.cursor[i];
                while j < b.len() && x + b[j] < limit {
                    self.buf.push((x + b[j] - base) as u64);
                    j += 1;
                }
                self.cursor[i] = j;
                i += 1;
            }
            if self.buf.len() <= WINDOW_CAP || width == 1 {
                break;
            }
            // too dense: halve the window and give back what lies beyond it
            width = (width / 2).max(1);
            let cut = width as u64;
            self.buf.retain(|&o| o < cut);
            let limit = base + width;
            for k in self.first..i {
                let x = a[k];
                let mut j = self.cursor[k];
                while j > 0 && x + b[j - 1] >= limit {
                    j -= 1;
                }
                self.cursor[k] = j;
            }
            i = self.first;
            while i < a.len() && a[i] + b[0] < limit {
                i += 1;
            }
        }
        self.base = base + width;
        // steer the next window towards the target density
        let got = self.buf.len().max(1) as f64;
        let scaled = (width as f64) * (WINDOW_TARGET as f64) / got;
        self.width = (scaled.min(4.0 * width as f64) as i128).clamp(1, i64::MAX as i128);
        self.last_pairs = self.buf.len() as u64;
        self.buf.sort_unstable();
        self.buf.dedup();
        Some((base, &self.buf))
    }
}

fn value_chunks(a: &[i128], b: &[i128]) -> Vec<(i128, i128)> {
    let lo = a[0] + b[0];
    let hi = a[a.len() - 1] + b[b.len() - 1] + 1;
    let parts = (rayon::current_num_threads() * 4).max(1) as i128;
    let step = ((hi - lo) / parts).max(1);
    let mut out = Vec::new();
    let mut s = lo;
    while s < hi {
        let e = if hi - s <= step { hi } else { s + step };
        out.push((s, e));
        s = e;
    }
    out
}

fn sorted_dedup(xs: &[i128]) -> Vec<i128> {
    let mut v = xs.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Materialized integer sumset (sorted, deduplicated).
pub fn int_sumset(a: &[i128], b: &[i128]) -> Vec<i128> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (a, b) = (sorted_dedup(a), sorted_dedup(b));
    value_chunks(&a, &b)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut out = Vec::new();
            let mut blocks = SumBlocks::new(&a, &b, lo, hi);
            while let Some((base, offs)) = blocks.next_block() {
                out.extend(offs.iter().map(|&o| base + o as i128));
            }
            out
        })
        .collect::<Vec<_>>()
        .concat()
}

/// `|A + B|` for integer sets without storing the sumset.
pub fn int_sumset_count(a: &[i128], b: &[i128]) -> u64 {
    match int_sumset_count_within(a, b, None) {
        Ok(n) => n,
        Err(_) => unreachable!("no deadline"),
    }
}

/// How far a deadline-limited count got before giving up.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialCount {
    /// Pairs `(a, b)` whose sums had been enumerated.
    pub pairs_done: u64,
    pub pairs_total: u64,
    pub elapsed_secs: f64,
}

/// [`int_sumset_count`] that stops once `deadline` has passed.
pub fn int_sumset_count_within(a: &[i128], b: &[i128], deadline: Option<Instant>) -> std::result::Result<u64, PartialCount> {
    if a.is_empty() || b.is_empty() {
        return Ok(0);
    }
    let start = Instant::now();
    let (a, b) = (sorted_dedup(a), sorted_dedup(b));
    let done = AtomicU64::new(0);
    let timed_out = AtomicBool::new(false);
    let n: u64 = value_chunks(&a, &b)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut n = 0u64;
            let mut blocks = SumBlocks::new(&a, &b, lo, hi);
            while let Some((_, offs)) = blocks.next_block() {
                n += offs.len() as u64;
                done.fetch_add(blocks.last_pairs, Ordering::Relaxed);
                if deadline.is_some_and(|d| Instant::now() >= d) || timed_out.load(Ordering::Relaxed) {
                    timed_out.store(true, Ordering::Relaxed);
                    break;
                }
            }
            n
        })
        .sum();
    if timed_out.load(Ordering::Relaxed) {
        return Err(PartialCount {
            pairs_done: done.load(Ordering::Relaxed),
            pairs_total: a.len() as u64 * b.len() as u64,
            elapsed_secs: start.elapsed().as_secs_f64(),
        });
    }
    Ok(n)
}

/// Witness that a difference `d` is realized as `c - b` with `c ∈ C`, `b ∈ B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverWitness {
    pub difference: Rational,
    pub c: Rational,
    pub b: Rational,
}

/// A subset `C ⊆ B` with `C - B = B - B`, with one witness per difference.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverResult {
    pub cover: FiniteExactSet,
    /// `true` when found by exhaustive branch-and-bound (hence minimum size).
    pub exact: bool,
    pub certificate: Vec<CoverWitness>,
}

impl CoverResult {
    /// Re-checks every witness against `B` and `C` and that every `d ∈ B - B` has one.
    pub fn verify(&self, b: &FiniteExactSet) -> Result<bool> {
        let diffs = difference_set(b, b)?;
        let torus = b.domain() == Domain::Torus;
        let mut seen = 0usize;
        for w in &self.certificate {
            let mut d = &w.c - &w.b;
            if torus {
                d = reduce_mod1(&d).into_value();
            }
            if d != w.difference || !self.cover.contains(&w.c) || !b.contains(&w.b) || !diffs.contains(&d) {
                return Ok(false);
            }
            seen += 1;
        }
        Ok(seen == diffs.len() && self.cover.is_subset_of(b))
    }
}

/// Largest |B| solved by exhaustive branch-and-bound.
pub const EXACT_COVER_LIMIT: usize = 24;

/// Coverage structure: which difference each `c ∈ B` reaches.
struct CoverInstance {
    universe: Vec<Rational>,
    // covers[c] = bitset over the universe
    covers: Vec<Vec<u64>>,
    // witness b index for (c, universe element)
    witness: HashMap<(usize, usize), usize>,
    // candidates[e] = all c covering e
    candidates: Vec<Vec<usize>>,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

fn popcount_and(x: &[u64], y: &[u64]) -> u32 {
    x.iter().zip(y).map(|(a, b)| (a & b).count_ones()).sum()
}

impl CoverInstance {
    fn build(b: &FiniteExactSet) -> Result<Self> {
        let elems = b.elements();
        let torus = b.domain() == Domain::Torus;
        let universe = difference_set(b, b)?.elements().to_vec();
        let index: HashMap<&Rational, usize> = universe.iter().enumerate().map(|(i, d)| (d, i)).collect();
        let w = words(universe.len());
        let mut covers = vec![vec![0u64; w]; elems.len()];
        let mut witness = HashMap::new();
        let mut candidates = vec![Vec::new(); universe.len()];
        for (ci, c) in elems.iter().enumerate() {
            for (bi, x) in elems.iter().enumerate() {
                let mut d = c - x;
                if torus {
                    d = reduce_mod1(&d).into_value();
                }
                let e = index[&d];
                if covers[ci][e / 64] >> (e % 64) & 1 == 0 {
                    covers[ci][e / 64] |= 1 << (e % 64);
                    witness.insert((ci, e), bi);
                    candidates[e].push(ci);
                }
            }
        }
        Ok(CoverInstance { universe, covers, witness, candidates })
    }

    fn full(&self) -> Vec<u64> {
        let n = self.universe.len();
        let mut v = vec![u64::MAX; words(n)];
        if n % 64 != 0 {
            *v.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
        }
        v
    }

    fn greedy(&self) -> Vec<usize> {
        let mut uncovered = self.full();
        let mut chosen = Vec::new();
        while uncovered.iter().any(|&x| x != 0) {
            let (best, _) = self
                .covers
                .iter()
                .enumerate()
                .map(|(c, cov)| (c, popcount_and(cov, &uncovered)))
                .max_by_key(|&(c, n)| (n, Reverse(c)))
                .expect("nonempty B");
            for (u, c) in uncovered.iter_mut().zip(&self.covers[best]) {
                *u &= !c;
            }
            chosen.push(best);
        }
        chosen.sort_unstable();
        chosen
    }

    fn branch(&self, uncovered: &[u64], chosen: &mut Vec<usize>, best: &mut Vec<usize>) {
        let remaining: u32 = uncovered.iter().map(|x| x.count_ones()).sum();
        if remaining == 0 {
            if chosen.len() < best.len() {
                *best = chosen.clone();
            }
            return;
        }
        let max_gain = self
            .covers
            .iter()
            .map(|c| popcount_and(c, uncovered))
            .max()
            .unwrap_or(0);
        if max_gain == 0 {
            return;
        }
        let lower = remaining.div_ceil(max_gain) as usize;
        if chosen.len() + lower >= best.len() {
            return;
        }
        // branch on the uncovered difference with the fewest covering candidates
        let mut pick = None;
        for (wi, &word) in uncovered.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let e = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let k = self.candidates[e].len();
                if pick.is_none_or(|(_, pk)| k < pk) {
                    pick = Some((e, k));
                }
            }
        }
        let (e, _) = pick.expect("remaining > 0");
        let mut options = self.candidates[e].clone();
        options.sort_by_key(|&c| (Reverse(popcount_and(&self.covers[c], uncovered)), c));
        for c in options {
            let next: Vec<u64> = uncovered.iter().zip(&self.covers[c]).map(|(u, x)| u & !x).collect();
            chosen.push(c);
            self.branch(&next, chosen, best);
            chosen.pop();
        }
    }

    fn exact(&self) -> Vec<usize> {
        let mut best = self.greedy();
        let mut chosen = Vec::new();
        self.branch(&self.full(), &mut chosen, &mut best);
        best.sort_unstable();
        best
    }
}

/// Smallest `C ⊆ B` with `C - B = B - B`.
///
/// Exact branch-and-bound for `|B| <= EXACT_COVER_LIMIT`; a greedy set cover
/// (flagged `exact = false`) beyond that.
pub fn minimal_difference_cover(b: &FiniteExactSet) -> Result<CoverResult> {
    if b.is_empty() {
        return Err(Error::TooSmall { needed: 1, got: 0 });
    }
    let inst = CoverInstance::build(b)?;
    let exact = b.len() <= EXACT_COVER_LIMIT;
    let chosen = if exact { inst.exact() } else { inst.greedy() };
    Ok(cover_result(b, &inst, &chosen, exact))
}

/// Greedy cover regardless of size (used to compare against the exact one).
pub fn greedy_difference_cover(b: &FiniteExactSet) -> Result<CoverResult> {
    if b.is_empty() {
        return Err(Error::TooSmall { needed: 1, got: 0 });
    }
    let inst = CoverInstance::build(b)?;
    let chosen = inst.greedy();
    Ok(cover_result(b, &inst, &chosen, false))
}

fn cover_result(b: &FiniteExactSet, inst: &CoverInstance, chosen: &[usize], exact: bool) -> CoverResult {
    let elems = b.elements();
    let cover = FiniteExactSet::new(b.domain(), chosen.iter().map(|&c| elems[c].clone())).expect("subset of B");
    let certificate = inst
        .universe
        .iter()
        .enumerate()
        .map(|(e, d)| {
            let c = *chosen
                .iter()
                .find(|&&c| inst.witness.contains_key(&(c, e)))
                .expect("chosen sets cover the universe");
            CoverWitness { difference: d.clone(), c: elems[c].clone(), b: elems[inst.witness[&(c, e)]].clone() }
        })
        .collect();
    CoverResult { cover, exact, certificate }
}

/// Whether `C - B = B - B`; on failure returns one missing difference.
pub fn covers_differences(b: &FiniteExactSet, c: &FiniteExactSet) -> Result<std::result::Result<(), Rational>> {
    let full = difference_set(b, b)?;
    let partial = difference_set(c, b)?;
    Ok(match full.elements().iter().find(|d| !partial.contains(d)) {
        Some(d) => Err(d.clone()),
        None => Ok(()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(xs: &[i64]) -> FiniteExactSet {
        FiniteExactSet::integers(xs.iter().copied())
    }

    fn torus(xs: &[(i64, i64)]) -> FiniteExactSet {
        FiniteExactSet::torus(xs.iter().map(|&(p, q)| TorusPoint::new(Rational::new(p, q))))
    }

    fn brute_sumset(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut v: Vec<i64> = a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    #[test]
    fn small_integer_sumset() {
        let s = ints(&[0, 1, 3]);
        assert_eq!(sumset(&s, &s).unwrap(), ints(&[0, 1, 2, 3, 4, 6]));
        assert_eq!(sumset(&s, &ints(&[0])).unwrap(), s);
        assert_eq!(difference_set(&s, &s).unwrap(), ints(&[-3, -2, -1, 0, 1, 2, 3]));
    }

    #[test]
    fn torus_difference_set() {
        let b = torus(&[(0, 1), (1, 10), (3, 10)]);
        let expect = torus(&[(0, 1), (1, 10), (2, 10), (3, 10), (7, 10), (8, 10), (9, 10)]);
        assert_eq!(difference_set(&b, &b).unwrap(), expect);
    }

    #[test]
    fn domain_mismatch_is_rejected() {
        let err = sumset(&ints(&[1]), &torus(&[(1, 2)])).unwrap_err();
        assert!(matches!(err, Error::DomainMismatch(_)));
        assert!(FiniteExactSet::new(Domain::Integers, [Rational::new(1, 2)]).is_err());
    }

    #[test]
    fn orbit_sumset_has_2n_minus_1_elements() {
        // {n·7/97 : 1 <= n <= 30} doubled gives {n·7/97 : 2 <= n <= 60}
        let s = FiniteExactSet::torus((1..=30).map(|n| TorusPoint::new(Rational::new(7 * n, 97))));
        assert_eq!(sumset(&s, &s).unwrap().len(), 59);
    }

    #[test]
    fn streaming_windows_match_brute_force() {
        // spread values so that windows are narrowed and rolled back
        let a: Vec<i64> = (0..300).map(|i| i * i * 7 - 5000).collect();
        let b: Vec<i64> = (0..250).map(|i| (i * 13) % 1009 + i * 3).collect();
        let brute = brute_sumset(&a, &b);
        let a128: Vec<i128> = a.iter().map(|&x| x as i128).collect();
        let b128: Vec<i128> = b.iter().map(|&x| x as i128).collect();
        let got = int_sumset(&a128, &b128);
        assert_eq!(got, brute.iter().map(|&x| x as i128).collect::<Vec<_>>());
        assert_eq!(int_sumset_count(&a128, &b128), brute.len() as u64);
    }

    #[test]
    fn extreme_range_values() {
        let a = vec![i64::MIN as i128, -1, 0, i64::MAX as i128];
        let b = vec![i64::MIN as i128, 5, i64::MAX as i128];
        let mut brute: Vec<i128> = a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect();
        brute.sort_unstable();
        brute.dedup();
        assert_eq!(int_sumset(&a, &b), brute);
    }

    #[test]
    fn cover_of_interval_has_two_ends() {
        let b = ints(&[0, 1, 2, 3]);
        let c = minimal_difference_cover(&b).unwrap();
        assert!(c.exact);
        assert_eq!(c.cover.len(), 2);
        assert!(c.verify(&b).unwrap());
        // exhaustive check that no single element covers B - B
        for x in 0..4 {
            assert!(covers_differences(&b, &ints(&[x])).unwrap().is_err());
        }
    }

    #[test]
    fn singleton_cover() {
        let b = ints(&[5]);
        let c = minimal_difference_cover(&b).unwrap();
        assert_eq!(c.cover, b);
        assert!(c.verify(&b).unwrap());
    }

    /// Exhaustive minimum over all subsets of B.
    fn brute_min_cover(b: &FiniteExactSet) -> usize {
        let n = b.len();
        (1u32..(1 << n))
            .filter(|mask| {
                let c = FiniteExactSet::new(
                    b.domain(),
                    (0..n).filter(|i| mask >> i & 1 == 1).map(|i| b.elements()[i].clone()),
                )
                .unwrap();
                covers_differences(b, &c).unwrap().is_ok()
            })
            .map(|mask| mask.count_ones() as usize)
            .min()
            .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn integer_sumset_matches_brute(a in proptest::collection::btree_set(-500i64..500, 1..40),
                                        b in proptest::collection::btree_set(-500i64..500, 1..40)) {
            let (a, b): (Vec<i64>, Vec<i64>) = (a.into_iter().collect(), b.into_iter().collect());
            let s = sumset(&ints(&a), &ints(&b)).unwrap();
            prop_assert_eq!(&s, &ints(&brute_sumset(&a, &b)));
            prop_assert_eq!(&s, &sumset(&ints(&b), &ints(&a)).unwrap());
            prop_assert!(s.len() >= a.len() + b.len() - 1);
            prop_assert_eq!(sumset_len(&ints(&a), &ints(&b)).unwrap(), s.len() as u64);
        }

        #[test]
        fn torus_sumset_matches_brute(a in proptest::collection::btree_set(0i64..60, 1..15),
                                      b in proptest::collection::btree_set(0i64..45, 1..15)) {
            let ta = FiniteExactSet::torus(a.iter().map(|&x| TorusPoint::new(Rational::new(x, 60))));
            let tb = FiniteExactSet::torus(b.iter().map(|&x| TorusPoint::new(Rational::new(x, 45))));
            let brute = FiniteExactSet::torus(a.iter().flat_map(|&x| b.iter().map(move |&y| {
                TorusPoint::new(Rational::new(x, 60) + Rational::new(y, 45))
            })));
            prop_assert_eq!(sumset(&ta, &tb).unwrap(), brute);
        }

        #[test]
        fn difference_set_is_symmetric(b in proptest::collection::btree_set(-100i64..100, 1..20)) {
            let b = ints(&b.into_iter().collect::<Vec<_>>());
            let d = difference_set(&b, &b).unwrap();
            prop_assert!(d.contains(&Rational::zero()));
            prop_assert_eq!(d.negated(), d);
        }

        #[test]
        fn covers_are_valid_and_exact_is_minimum(b in proptest::collection::btree_set(0i64..40, 1..9), torus_mode in any::<bool>()) {
            let b = if torus_mode {
                FiniteExactSet::torus(b.iter().map(|&x| TorusPoint::new(Rational::new(x, 40))))
            } else {
                ints(&b.into_iter().collect::<Vec<_>>())
            };
            let exact = minimal_difference_cover(&b).unwrap();
            let greedy = greedy_difference_cover(&b).unwrap();
            prop_assert!(exact.verify(&b).unwrap());
            prop_assert!(greedy.verify(&b).unwrap());
            prop_assert!(greedy.cover.len() >= exact.cover.len());
            prop_assert_eq!(exact.cover.len(), brute_min_cover(&b));
        }
    }
}
