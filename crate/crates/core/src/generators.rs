//! Neighbour-gap generators of difference sets.
//!
//! Given `C ⊆ B` with `C - B = B - B`, every difference of `B`, read as an
//! anticlockwise arc length in `[0, 1)`, is an ℕ₀-combination of the gaps
//! `c - b_c⁻` from each `c ∈ C` back to its predecessor in `B`, and also of
//! the clockwise gaps `b_c⁺ - c` to its successor. [`decompose`] produces
//! that combination constructively by repeatedly splitting an arc `b → c`
//! at the points of `B` it contains; [`verify_generation`] checks every
//! difference both ways and confirms each one against an independent
//! unbounded-knapsack reachability table.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::gaps::CircularSet;
use crate::rational::Rational;
use crate::scaled::{scale_groups, ExactInt, ScaledValues};
use crate::sumset::{covers_differences, difference_set};
use crate::torus::TorusPoint;
use crate::{Error, Result};

/// Which neighbour gaps generate: predecessor gaps (`R⁻`) or successor gaps (`R⁺`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    Plus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Neighbours {
    pub c: TorusPoint,
    pub smaller: TorusPoint,
    pub larger: TorusPoint,
}

/// `R⁻`, `R⁺` and the neighbour map of a difference cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorReport {
    pub cover: Vec<TorusPoint>,
    /// Anticlockwise arc lengths `c - b_c⁻`, sorted and deduplicated.
    pub r_minus: Vec<Rational>,
    /// Clockwise arc lengths `b_c⁺ - c`, sorted and deduplicated.
    pub r_plus: Vec<Rational>,
    pub neighbours: Vec<Neighbours>,
}

fn check_premise(b: &CircularSet, c: &CircularSet) -> Result<()> {
    if b.len() < 2 {
        return Err(Error::TooSmall { needed: 2, got: b.len() });
    }
    if let Some(p) = c.points().iter().find(|p| !b.contains(p)) {
        return Err(Error::SubsetViolation(p.to_string()));
    }
    if let Err(missing) = covers_differences(&b.to_exact_set(), &c.to_exact_set())? {
        return Err(Error::PremiseViolation(missing.to_string()));
    }
    Ok(())
}

/// Predecessor and successor of each `c ∈ C` in `B`, with the resulting gap sets.
pub fn neighbour_gaps(b: &CircularSet, c: &CircularSet) -> Result<GeneratorReport> {
    check_premise(b, c)?;
    let pts = b.points();
    let n = pts.len();
    let mut neighbours = Vec::with_capacity(c.len());
    let mut r_minus = Vec::new();
    let mut r_plus = Vec::new();
    for cp in c.points() {
        let i = b.index_of(cp).expect("C ⊆ B");
        let smaller = pts[(i + n - 1) % n].clone();
        let larger = pts[(i + 1) % n].clone();
        r_minus.push(smaller.arc_to(cp));
        r_plus.push(cp.arc_to(&larger));
        neighbours.push(Neighbours { c: cp.clone(), smaller, larger });
    }
    r_minus.sort();
    r_minus.dedup();
    r_plus.sort();
    r_plus.dedup();
    Ok(GeneratorReport { cover: c.points().to_vec(), r_minus, r_plus, neighbours })
}

/// One arc `from → to` in the subdivision tree; leaves are generator gaps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcNode {
    pub length: Rational,
    pub from: TorusPoint,
    pub to: TorusPoint,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub children: Vec<ArcNode>,
}

impl ArcNode {
    fn depth(&self) -> usize {
        1 + self.children.iter().map(ArcNode::depth).max().unwrap_or(0)
    }

    fn leaves(&self, out: &mut Vec<Rational>) {
        if self.children.is_empty() {
            out.push(self.length.clone());
        } else {
            for ch in &self.children {
                ch.leaves(out);
            }
        }
    }
}

/// A target difference written as a sum of generator gaps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCertificate {
    pub target: Rational,
    pub side: Side,
    /// Leaf gaps, in arc order.
    pub parts: Vec<Rational>,
    pub depth: usize,
    pub trace: Option<ArcNode>,
}

impl DecompositionCertificate {
    /// Exact re-check: the parts sum to the target and each is a generator.
    pub fn verify(&self, report: &GeneratorReport) -> bool {
        let gens = match self.side {
            Side::Minus => &report.r_minus,
            Side::Plus => &report.r_plus,
        };
        self.parts.iter().sum::<Rational>() == self.target && self.parts.iter().all(|p| gens.binary_search(p).is_ok())
    }
}

/// Integer engine over the common denominator of `B`.
struct Subdivider<T> {
    denom: T,
    pts: Vec<T>,
    index: HashMap<T, usize>,
    /// arc length -> (index of b, index of c) with the smallest c, per side
    witness: [HashMap<T, (usize, usize)>; 2],
}

/// Memoized result of decomposing one arc length.
#[derive(Clone)]
struct Summary<T> {
    parts: BTreeMap<T, u64>,
    depth: usize,
}

fn side_slot(side: Side) -> usize {
    match side {
        Side::Minus => 0,
        Side::Plus => 1,
    }
}

impl<T: ExactInt> Subdivider<T> {
    fn new(b: &ScaledValues<T>, c: &ScaledValues<T>) -> Self {
        let denom = b.denom.clone();
        let pts = b.nums.clone();
        let index: HashMap<T, usize> = pts.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let mut witness = [HashMap::new(), HashMap::new()];
        for cv in &c.nums {
            let ci = index[cv];
            for (bi, bv) in pts.iter().enumerate() {
                // anticlockwise b -> c has length c - b; clockwise b -> c has length b - c
                let minus = (cv.clone() - bv.clone()).mod_floor(&denom);
                let plus = (bv.clone() - cv.clone()).mod_floor(&denom);
                witness[0].entry(minus).or_insert((bi, ci));
                witness[1].entry(plus).or_insert((bi, ci));
            }
        }
        Subdivider { denom, pts, index, witness }
    }

    /// Indices of the B-points on the arc from `bi` to `ci` (both included).
    fn arc(&self, side: Side, bi: usize, ci: usize) -> Vec<usize> {
        let n = self.pts.len();
        let mut out = vec![bi];
        let mut i = bi;
        while i != ci {
            i = match side {
                Side::Minus => (i + 1) % n,
                Side::Plus => (i + n - 1) % n,
            };
            out.push(i);
        }
        out
    }

    fn step(&self, side: Side, from: usize, to: usize) -> T {
        let (x, y) = (&self.pts[from], &self.pts[to]);
        match side {
            Side::Minus => (y.clone() - x.clone()).mod_floor(&self.denom),
            Side::Plus => (x.clone() - y.clone()).mod_floor(&self.denom),
        }
    }

    fn summarize(&self, side: Side, length: &T, memo: &mut HashMap<T, Summary<T>>) -> Result<Summary<T>> {
        if length.is_zero() {
            return Ok(Summary { parts: BTreeMap::new(), depth: 0 });
        }
        if let Some(s) = memo.get(length) {
            return Ok(s.clone());
        }
        let &(bi, ci) = self.witness[side_slot(side)]
            .get(length)
            .ok_or_else(|| Error::PremiseViolation(format!("{length:?}/{:?}", self.denom)))?;
        let arc = self.arc(side, bi, ci);
        let summary = if arc.len() == 2 {
            Summary { parts: BTreeMap::from([(length.clone(), 1)]), depth: 1 }
        } else {
            let mut parts = BTreeMap::new();
            let mut depth = 0;
            for w in arc.windows(2) {
                let sub = self.summarize(side, &self.step(side, w[0], w[1]), memo)?;
                for (k, v) in sub.parts {
                    *parts.entry(k).or_insert(0) += v;
                }
                depth = depth.max(sub.depth);
            }
            Summary { parts, depth: depth + 1 }
        };
        memo.insert(length.clone(), summary.clone());
        Ok(summary)
    }

    fn trace(&self, side: Side, length: &T, to_rational: &impl Fn(&T) -> Rational) -> Result<ArcNode> {
        let &(bi, ci) = self.witness[side_slot(side)]
            .get(length)
            .ok_or_else(|| Error::PremiseViolation(to_rational(length).to_string()))?;
        let arc = self.arc(side, bi, ci);
        let children = if arc.len() == 2 {
            Vec::new()
        } else {
            arc.windows(2)
                .map(|w| self.trace(side, &self.step(side, w[0], w[1]), to_rational))
                .collect::<Result<_>>()?
        };
        Ok(ArcNode {
            length: to_rational(length),
            from: TorusPoint::new(to_rational(&self.pts[bi])),
            to: TorusPoint::new(to_rational(&self.pts[ci])),
            children,
        })
    }

    fn contains_point(&self, x: &T) -> bool {
        self.index.contains_key(x)
    }
}

/// Writes `target ∈ B - B` (an arc length in `[0, 1)`) as a sum of `R⁻` or `R⁺` elements.
pub fn decompose(target: &Rational, b: &CircularSet, c: &CircularSet, side: Side) -> Result<DecompositionCertificate> {
    check_premise(b, c)?;
    let target = TorusPoint::new(target.clone()).into_value();
    if !difference_set(&b.to_exact_set(), &b.to_exact_set())?.contains(&target) {
        return Err(Error::NotAMember(target.to_string()));
    }
    if target.is_zero() {
        return Ok(DecompositionCertificate { target, side, parts: Vec::new(), depth: 0, trace: None });
    }
    let bv: Vec<Rational> = b.points().iter().map(|p| p.value().clone()).collect();
    let cv: Vec<Rational> = c.points().iter().map(|p| p.value().clone()).collect();
    let tv = [target.clone()];
    let node = match scale_groups(&[&bv, &cv, &tv], 2) {
        Ok(g) => {
            let sub = Subdivider::new(&g[0], &g[1]);
            debug_assert!(g[1].nums.iter().all(|x| sub.contains_point(x)));
            sub.trace(side, &g[2].nums[0], &|x| g[0].to_rational(x))?
        }
        Err(g) => {
            let sub = Subdivider::new(&g[0], &g[1]);
            sub.trace(side, &g[2].nums[0], &|x| g[0].to_rational(x))?
        }
    };
    let mut parts = Vec::new();
    node.leaves(&mut parts);
    Ok(DecompositionCertificate { target, side, parts, depth: node.depth(), trace: Some(node) })
}

/// Reachability of `{Σ n_i r_i < 1 : n_i ∈ ℕ₀}` on the lattice `g·ℤ`, `g = gcd(r_i)`.
#[derive(Clone, Debug)]
pub struct SemigroupTable {
    denom: BigInt,
    step: BigInt,
    reach: Vec<bool>,
}

/// Largest lattice the knapsack oracle will allocate.
pub const ORACLE_LIMIT: usize = 1 << 27;

impl SemigroupTable {
    /// Builds the table for generators with a common denominator `denom`.
    pub fn new(gens: &[Rational]) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| !g.is_positive() || *g >= &Rational::one()) {
            return Err(Error::OutOfRange(format!("generator {g} not in (0, 1)")));
        }
        let denom = crate::rational::common_denominator(gens);
        let nums: Vec<BigInt> = gens.iter().map(|g| crate::rational::scale_to(g, &denom)).collect();
        let step = nums.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let step = if step.is_zero() { denom.clone() } else { step };
        let size = (&denom / &step)
            .to_usize()
            .filter(|&s| s <= ORACLE_LIMIT)
            .ok_or_else(|| Error::OutOfRange(format!("oracle lattice 1/{denom} too fine")))?;
        let units: Vec<usize> = nums.iter().map(|x| (x / &step).to_usize().unwrap()).collect();
        let mut reach = vec![false; size];
        reach[0] = true;
        for &u in &units {
            for s in u..size {
                if reach[s - u] {
                    reach[s] = true;
                }
            }
        }
        Ok(SemigroupTable { denom, step, reach })
    }

    /// Whether `x ∈ [0, 1)` is an ℕ₀-combination of the generators.
    pub fn contains(&self, x: &Rational) -> bool {
        if x.is_negative() || x >= &Rational::one() {
            return false;
        }
        let scaled = x * Rational::from(self.denom.clone());
        if !scaled.is_integer() {
            return false;
        }
        let (q, r) = scaled.numer().div_rem(&self.step);
        r.is_zero() && q.to_usize().is_some_and(|i| self.reach[i])
    }

    /// Members in `[0, 1)`, in increasing order.
    pub fn members(&self) -> Vec<Rational> {
        self.reach
            .iter()
            .enumerate()
            .filter(|(_, &ok)| ok)
            .map(|(i, _)| Rational::new(&self.step * BigInt::from(i), self.denom.clone()))
            .collect()
    }
}

/// Outcome of checking every difference against both generator sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub b_len: usize,
    pub c_len: usize,
    pub differences: usize,
    pub r_minus: Vec<Rational>,
    pub r_plus: Vec<Rational>,
    pub decomposed_minus: usize,
    pub decomposed_plus: usize,
    pub oracle_minus: usize,
    pub oracle_plus: usize,
    /// Targets where a decomposition failed or disagreed with the oracle.
    pub failures: Vec<Rational>,
    /// `R⁻ ⊂ ⟨R⁺⟩` and `R⁺ ⊂ ⟨R⁻⟩`.
    pub cross_generation: bool,
    /// `⟨R⁻⟩ ∩ [0,1) = ⟨R⁺⟩ ∩ [0,1)` as computed by the oracle.
    pub semigroups_agree: bool,
    pub max_depth: usize,
    pub max_parts: u64,
    /// `max_depth ≤ |B|`.
    pub depth_within_bound: bool,
    pub pass: bool,
}

pub fn verify_generation(b: &CircularSet, c: &CircularSet) -> Result<GenerationReport> {
    let report = neighbour_gaps(b, c)?;
    let diffs = difference_set(&b.to_exact_set(), &b.to_exact_set())?;
    let bv: Vec<Rational> = b.points().iter().map(|p| p.value().clone()).collect();
    let cv: Vec<Rational> = c.points().iter().map(|p| p.value().clone()).collect();
    let targets = diffs.elements();
    let outcomes = match scale_groups(&[&bv, &cv, targets], 2) {
        Ok(g) => run_targets(&g),
        Err(g) => run_targets(&g),
    };
    let minus_table = SemigroupTable::new(&report.r_minus)?;
    let plus_table = SemigroupTable::new(&report.r_plus)?;

    let mut failures = Vec::new();
    let (mut dm, mut dp, mut om, mut op) = (0, 0, 0, 0);
    let mut max_depth = 0;
    let mut max_parts = 0;
    for (t, outcome) in targets.iter().zip(outcomes) {
        let in_minus = minus_table.contains(t);
        let in_plus = plus_table.contains(t);
        om += usize::from(in_minus);
        op += usize::from(in_plus);
        let mut ok = in_minus && in_plus;
        for (slot, side) in [(&outcome.0, Side::Minus), (&outcome.1, Side::Plus)] {
            match slot {
                Some((sum_ok, parts_ok, depth, count)) if *sum_ok && *parts_ok => {
                    match side {
                        Side::Minus => dm += 1,
                        Side::Plus => dp += 1,
                    }
                    max_depth = max_depth.max(*depth);
                    max_parts = max_parts.max(*count);
                }
                _ => ok = false,
            }
        }
        if !ok {
            failures.push(t.clone());
        }
    }
    let gens_ok = |gens: &[Rational], table: &SemigroupTable| gens.iter().all(|g| table.contains(g));
    let cross_generation = gens_ok(&report.r_minus, &plus_table) && gens_ok(&report.r_plus, &minus_table);
    let semigroups_agree = minus_table.members() == plus_table.members();
    let depth_within_bound = max_depth <= b.len();
    let pass = failures.is_empty() && cross_generation && semigroups_agree && depth_within_bound;
    Ok(GenerationReport {
        b_len: b.len(),
        c_len: c.len(),
        differences: targets.len(),
        r_minus: report.r_minus,
        r_plus: report.r_plus,
        decomposed_minus: dm,
        decomposed_plus: dp,
        oracle_minus: om,
        oracle_plus: op,
        failures,
        cross_generation,
        semigroups_agree,
        max_depth,
        max_parts,
        depth_within_bound,
        pass,
    })
}

// Targets share sub-arcs heavily, so they run sequentially against one memo
// instead of in parallel with none.

/// Per side: (parts sum to target, parts are generators, depth, part count).
type SideOutcome = Option<(bool, bool, usize, u64)>;

fn run_targets<T: ExactInt>(g: &[ScaledValues<T>]) -> Vec<(SideOutcome, SideOutcome)> {
    let sub = Subdivider::new(&g[0], &g[1]);
    let n = sub.pts.len();
    // generator gaps in scaled units, per side
    let mut gens: [Vec<T>; 2] = [Vec::new(), Vec::new()];
    for cv in &g[1].nums {
        let i = sub.index[cv];
        gens[0].push(sub.step(Side::Minus, (i + n - 1) % n, i));
        gens[1].push(sub.step(Side::Plus, (i + 1) % n, i));
    }
    let mut memos: [HashMap<T, Summary<T>>; 2] = [HashMap::new(), HashMap::new()];
    g[2].nums
        .iter()
        .map(|t| {
            let mut run = |side: Side| -> SideOutcome {
                let slot = side_slot(side);
                let s = sub.summarize(side, t, &mut memos[slot]).ok()?;
                let total = s.parts.iter().fold(T::zero(), |acc, (k, v)| acc + k.clone() * T::from_big(&BigInt::from(*v)).unwrap());
                let parts_ok = s.parts.keys().all(|k| gens[slot].contains(k));
                Some((total == *t, parts_ok, s.depth, s.parts.values().sum()))
            };
            (run(Side::Minus), run(Side::Plus))
        })
        .collect()
}
