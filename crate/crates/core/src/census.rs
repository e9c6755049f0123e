//! Nearest neighbours on (ℝ/ℤ)^d and the census of vectors `N_a - a`.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::scaled::{AnyCloud, ExactInt, ScaledCloud};
use crate::torus::{TorusPoint, TorusVector};
use crate::{with_cloud, Error, Result};

/// Distinct points of (ℝ/ℤ)^d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCloud {
    points: Vec<TorusVector>,
    dim: usize,
}

impl PointCloud {
    pub fn new(points: Vec<TorusVector>) -> Result<Self> {
        let dim = points.first().map_or(0, TorusVector::dim);
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
        }
        let mut seen = HashSet::with_capacity(points.len());
        if let Some(p) = points.iter().find(|p| !seen.insert(*p)) {
            return Err(Error::DuplicateElement(p.to_string()));
        }
        Ok(PointCloud { points, dim })
    }

    /// One-dimensional cloud from rationals taken mod 1.
    pub fn from_reals(xs: impl IntoIterator<Item = Rational>) -> Result<Self> {
        Self::new(xs.into_iter().map(|x| TorusVector::new(vec![TorusPoint::new(x)])).collect::<Result<_>>()?)
    }

    pub fn points(&self) -> &[TorusVector] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn negated(&self) -> PointCloud {
        PointCloud { points: self.points.iter().map(TorusVector::neg).collect(), dim: self.dim }
    }

    fn scaled(&self) -> AnyCloud {
        AnyCloud::from_vectors(&self.points)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NNRecord {
    pub index: usize,
    pub a: TorusVector,
    pub nearest_index: usize,
    pub nearest: TorusVector,
    /// `N_a - a` with coordinates in `[-1/2, 1/2)`.
    pub diff: Vec<Rational>,
    pub dist_sq: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NnMethod {
    Brute,
    Grid,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CensusReport {
    pub records: Vec<NNRecord>,
    /// Distinct `N_a - a`, sorted.
    pub census: Vec<Vec<Rational>>,
}

impl CensusReport {
    pub fn size(&self) -> usize {
        self.census.len()
    }

    /// Distinct `N_a - a` over the records whose index is in `subset`.
    pub fn census_of(&self, subset: &[usize]) -> usize {
        let keep: HashSet<usize> = subset.iter().copied().collect();
        self.records
            .iter()
            .filter(|r| keep.contains(&r.index))
            .map(|r| &r.diff)
            .collect::<HashSet<_>>()
            .len()
    }
}

/// Nearest neighbour of every point: `(index, signed diff, squared distance)`.
///
/// Among equally near points the one with lexicographically smallest
/// signed difference wins.
pub fn nearest_scaled<T: ExactInt>(c: &ScaledCloud<T>, method: NnMethod) -> Vec<(usize, Vec<T>, T)> {
    match method {
        NnMethod::Brute => (0..c.len()).into_par_iter().map(|i| brute_query(c, i)).collect(),
        NnMethod::Grid => {
            let grid = Grid::build(c);
            (0..c.len()).into_par_iter().map(|i| grid.query(c, i)).collect()
        }
    }
}

type Candidate<T> = (T, Vec<T>, usize);

fn consider<T: ExactInt>(c: &ScaledCloud<T>, i: usize, j: usize, best: &mut Option<Candidate<T>>) {
    if i == j {
        return;
    }
    let diff = c.diff(c.point(i), c.point(j));
    let d = ScaledCloud::norm_sq(&diff);
    let better = match best {
        None => true,
        Some((bd, bdiff, _)) => d < *bd || (d == *bd && diff < *bdiff),
    };
    if better {
        *best = Some((d, diff, j));
    }
}

fn brute_query<T: ExactInt>(c: &ScaledCloud<T>, i: usize) -> (usize, Vec<T>, T) {
    let mut best = None;
    for j in 0..c.len() {
        consider(c, i, j, &mut best);
    }
    let (d, diff, j) = best.expect("cloud has at least two points");
    (j, diff, d)
}

/// Uniform bucketing: `g` cells per axis, cell of `x` is `⌊x g / denom⌋`.
struct Grid {
    g: usize,
    cells: Vec<Vec<usize>>,
    cell_of: Vec<Vec<usize>>,
}

impl Grid {
    fn build<T: ExactInt>(c: &ScaledCloud<T>) -> Grid {
        let d = c.dim;
        let n = c.len();
        let mut g = (n as f64).powf(1.0 / d as f64).floor().max(1.0) as usize;
        while g > 1 && g.checked_pow(d as u32).map_or(true, |cells| cells > 1 << 22) {
            g -= 1;
        }
        let gt = T::from_big(&BigInt::from(g)).expect("small");
        let cell_of: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                c.point(i)
                    .iter()
                    .map(|x| (x.clone() * gt.clone()).div_floor(&c.denom).to_big().to_usize().unwrap())
                    .collect()
            })
            .collect();
        let mut cells = vec![Vec::new(); g.pow(d as u32)];
        for (i, cell) in cell_of.iter().enumerate() {
            cells[Self::flat(g, cell)].push(i);
        }
        Grid { g, cells, cell_of }
    }

    fn flat(g: usize, cell: &[usize]) -> usize {
        cell.iter().fold(0, |acc, &x| acc * g + x)
    }

    fn query<T: ExactInt>(&self, c: &ScaledCloud<T>, i: usize) -> (usize, Vec<T>, T) {
        let d = c.dim;
        let g = self.g as i64;
        let home = &self.cell_of[i];
        let mut best = None;
        let mut r: i64 = 0;
        loop {
            if 2 * r + 1 >= g {
                // the rings now wrap onto themselves: finish with a full scan
                return brute_query(c, i);
            }
            // every offset with Chebyshev norm exactly r
            let mut offset = vec![-r; d];
            loop {
                if offset.iter().any(|o| o.abs() == r) {
                    let cell: Vec<usize> =
                        home.iter().zip(&offset).map(|(&h, &o)| (h as i64 + o).rem_euclid(g) as usize).collect();
                    for &j in &self.cells[Self::flat(self.g, &cell)] {
                        consider(c, i, j, &mut best);
                    }
                }
                let mut k = 0;
                while k < d {
                    offset[k] += 1;
                    if offset[k] <= r {
                        break;
                    }
                    offset[k] = -r;
                    k += 1;
                }
                if k == d {
                    break;
                }
            }
            // unvisited points differ by more than r cell widths in some coordinate
            if let Some((bd, _, _)) = &best {
                let gt = T::from_big(&BigInt::from(self.g)).unwrap();
                let rt = T::from_big(&BigInt::from(r)).unwrap();
                let reach = rt * c.denom.clone();
                if bd.clone() * gt.clone() * gt <= reach.clone() * reach {
                    let (bd, diff, j) = best.unwrap();
                    return (j, diff, bd);
                }
            }
            r += 1;
        }
    }
}

fn to_records<T: ExactInt>(cloud: &PointCloud, c: &ScaledCloud<T>, raw: Vec<(usize, Vec<T>, T)>) -> CensusReport {
    let records: Vec<NNRecord> = raw
        .into_iter()
        .enumerate()
        .map(|(i, (j, diff, d))| NNRecord {
            index: i,
            a: cloud.points[i].clone(),
            nearest_index: j,
            nearest: cloud.points[j].clone(),
            diff: c.signed_to_rationals(&diff),
            dist_sq: c.sq_to_rational(&d),
        })
        .collect();
    let census: BTreeSet<Vec<Rational>> = records.iter().map(|r| r.diff.clone()).collect();
    CensusReport { records, census: census.into_iter().collect() }
}

pub fn nn_census_with(cloud: &PointCloud, method: NnMethod) -> Result<CensusReport> {
    if cloud.len() < 2 {
        return Err(Error::TooSmall { needed: 2, got: cloud.len() });
    }
    Ok(with_cloud!(cloud.scaled(), c => {
        let raw = nearest_scaled(&c, method);
        to_records(cloud, &c, raw)
    }))
}

/// Nearest neighbours by exhaustive search.
pub fn nn_census(cloud: &PointCloud) -> Result<CensusReport> {
    nn_census_with(cloud, NnMethod::Brute)
}

/// Theorem-3 style experiment on `w_n = nα`, `1 ≤ n ≤ N`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KroneckerReport {
    pub alphas: Vec<Rational>,
    pub n: u64,
    pub dim: usize,
    /// `j(i)` for `i = 1..=N`.
    pub partners: Vec<u64>,
    /// `D = {±(w_i - w_{j(i)})}` as signed vectors.
    pub d_set: Vec<Vec<Rational>>,
    /// Indices `k_1, k_2, …` of `w_k` by increasing norm (ties by `k`), up to the cut.
    pub order_prefix: Vec<u64>,
    /// Position of the first `k` with `2k ≤ N` in that order (1-based).
    pub ell: usize,
    /// `ell` extended through every later `k` of the same norm as `k_ell`.
    pub ell_with_ties: usize,
    /// `D ⊆ {±w_{k_1}, …, ±w_{k_ell}}`.
    pub contained: bool,
    /// Containment in the tie-extended prefix.
    pub contained_with_ties: bool,
    /// `|D| / (4/3)^d`.
    pub ratio: f64,
    pub pass: bool,
}

pub fn kronecker_census(alphas: &[Rational], n: u64) -> Result<KroneckerReport> {
    if alphas.is_empty() {
        return Err(Error::DegenerateInput("need at least one coordinate".into()));
    }
    if n < 2 {
        return Err(Error::TooSmall { needed: 2, got: n as usize });
    }
    let q = alphas.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
    if q < BigInt::from(n) {
        return Err(Error::Collision(format!("w_n repeats with period {q} <= N = {n}")));
    }
    let w1 = TorusVector::from_rationals(alphas.iter().cloned())?;
    let report = with_cloud!(AnyCloud::from_vectors([&w1]), c => kronecker_scaled(&c, n));
    let (partners, d_set, order_prefix, ell, ell_with_ties, contained, contained_with_ties) = report;
    let d = alphas.len();
    let ratio = d_set.len() as f64 / (4.0f64 / 3.0).powi(d as i32);
    let pass = contained_with_ties && d_set.len() <= 2 * ell_with_ties;
    Ok(KroneckerReport {
        alphas: alphas.to_vec(),
        n,
        dim: d,
        partners,
        d_set,
        order_prefix,
        ell,
        ell_with_ties,
        contained,
        contained_with_ties,
        ratio,
        pass,
    })
}

type KroneckerParts = (Vec<u64>, Vec<Vec<Rational>>, Vec<u64>, usize, usize, bool, bool);

fn kronecker_scaled<T: ExactInt>(c: &ScaledCloud<T>, n: u64) -> KroneckerParts {
    let alpha = c.point(0).to_vec();
    let w = |k: u64| -> Vec<T> {
        let kt = T::from_big(&BigInt::from(k)).unwrap();
        alpha.iter().map(|a| c.signed(a.clone() * kt.clone())).collect()
    };
    let norms: Vec<T> = (0..n).map(|k| if k == 0 { T::zero() } else { ScaledCloud::norm_sq(&w(k)) }).collect();
    let mut order: Vec<u64> = (1..n).collect();
    order.sort_by(|&a, &b| norms[a as usize].cmp(&norms[b as usize]).then(a.cmp(&b)));

    let partners: Vec<u64> = (1..=n)
        .into_par_iter()
        .map(|i| {
            let legal = |k: u64| k <= (n - i).max(i - 1);
            let first = order.iter().position(|&k| legal(k)).expect("k = 1 is always legal");
            let target = &norms[order[first] as usize];
            let mut j_best = u64::MAX;
            for &k in order[first..].iter().take_while(|&&k| norms[k as usize] == *target) {
                if k < i {
                    j_best = j_best.min(i - k);
                }
                if i + k <= n {
                    j_best = j_best.min(i + k);
                }
            }
            j_best
        })
        .collect();

    let mut d_set: BTreeSet<Vec<T>> = BTreeSet::new();
    let mut used_k: HashSet<u64> = HashSet::new();
    for (i, &j) in (1..=n).zip(&partners) {
        let v = w(i.abs_diff(j));
        let neg: Vec<T> = v.iter().map(|x| c.signed(-x.clone())).collect();
        used_k.insert(i.abs_diff(j));
        d_set.insert(v);
        d_set.insert(neg);
    }

    let ell = order.iter().position(|&k| 2 * k <= n).expect("k = 1 qualifies") + 1;
    let cut = &norms[order[ell - 1] as usize];
    let ell_with_ties = ell + order[ell..].iter().take_while(|&&k| norms[k as usize] == *cut).count();
    let contained = used_k.iter().all(|k| order[..ell].contains(k));
    let contained_with_ties = used_k.iter().all(|k| order[..ell_with_ties].contains(k));
    let d_rat = d_set.iter().map(|v| c.signed_to_rationals(v)).collect();
    (partners, d_rat, order[..ell_with_ties].to_vec(), ell, ell_with_ties, contained, contained_with_ties)
}

/// Number of closed balls `B_a(‖N_a - a‖)` containing `z`.
pub fn ball_depth(z: &TorusVector, cloud: &PointCloud) -> Result<usize> {
    Ok(ball_depths(std::slice::from_ref(z), cloud)?[0])
}

/// [`ball_depth`] for many points at once.
pub fn ball_depths(zs: &[TorusVector], cloud: &PointCloud) -> Result<Vec<usize>> {
    if cloud.len() < 2 {
        return Err(Error::TooSmall { needed: 2, got: cloud.len() });
    }
    if let Some(z) = zs.iter().find(|z| z.dim() != cloud.dim) {
        return Err(Error::DimensionMismatch { expected: cloud.dim, got: z.dim() });
    }
    let all: Vec<TorusVector> = cloud.points.iter().chain(zs).cloned().collect();
    Ok(with_cloud!(AnyCloud::from_vectors(&all), c => {
        let m = cloud.len();
        let a_only = ScaledCloud { denom: c.denom.clone(), dim: c.dim, coords: c.coords[..m * c.dim].to_vec() };
        let radii: Vec<_> = nearest_scaled(&a_only, NnMethod::Brute).into_iter().map(|(_, _, d)| d).collect();
        (0..zs.len())
            .into_par_iter()
            .map(|zi| {
                let z = c.point(m + zi);
                (0..m).filter(|&a| c.dist_sq(z, c.point(a)) <= radii[a]).count()
            })
            .collect()
    }))
}

/// `depth · (3/4)^d`, the constant a depth would imply.
pub fn implied_kappa(depth: usize, dim: usize) -> Rational {
    let three = BigInt::from(3).pow(dim as u32);
    let four = BigInt::from(4).pow(dim as u32);
    Rational::new(BigInt::from(depth) * three, four)
}

/// All sums `a + b`, distinct and sorted.
pub fn cloud_sumset(a: &PointCloud, b: &PointCloud) -> Result<PointCloud> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, got: b.dim });
    }
    let sums: BTreeSet<TorusVector> = a.points.iter().flat_map(|x| b.points.iter().map(move |y| x.add(y))).collect();
    PointCloud::new(sums.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionRound {
    pub center: TorusVector,
    /// `|A_c \ R_k|`.
    pub gain: usize,
    /// `|R_{k+1}|`.
    pub covered: usize,
    pub theta: Rational,
    /// Distinct `N_a - a` over `a ∈ A_c`.
    pub distinct_diffs: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Theorem4Trace {
    pub epsilon: Rational,
    pub kappa: Rational,
    pub dim: usize,
    pub a_len: usize,
    pub b_len: usize,
    pub sumset_len: usize,
    /// `(2κ/ε)(4/3)^d |A+B|/|A|`.
    pub threshold: Rational,
    pub l: u64,
    /// `|Υ_b|` for each `b` in order.
    pub upsilon_sizes: Vec<usize>,
    /// Every `|Υ_b| < (ε/2)|A|`.
    pub upsilon_bound_holds: bool,
    /// Deepest point among `z = c - b`, `c ∈ A+B`, `b ∈ B`.
    pub max_ball_depth: usize,
    pub kappa_hat: Rational,
    pub rounds: Vec<ExtractionRound>,
    /// Indices into `A` of the extracted subset `A'`.
    pub a_prime: Vec<usize>,
    /// Distinct `N_a - a` over `a ∈ A'`, nearest neighbours taken in the whole of `A`.
    pub census_a_prime: usize,
    pub census_a: usize,
    /// `n = rounds + 1`.
    pub n: usize,
    pub size_ok: bool,
    pub census_ok: bool,
    pub theta_monotone: bool,
    /// Every round's `A_c` yields at most `l` distinct vectors.
    pub per_round_ok: bool,
    pub pass: bool,
}

/// The greedy extraction of a large subset with few nearest-neighbour vectors.
pub fn theorem4_extract(a: &PointCloud, b: &PointCloud, epsilon: &Rational, kappa: &Rational) -> Result<Theorem4Trace> {
    if !epsilon.is_positive() || epsilon >= &Rational::one() {
        return Err(Error::OutOfRange(format!("epsilon = {epsilon} not in (0, 1)")));
    }
    if !kappa.is_positive() {
        return Err(Error::OutOfRange(format!("kappa = {kappa} must be positive")));
    }
    if a.len() < 2 || b.is_empty() {
        return Err(Error::TooSmall { needed: 2, got: a.len().min(b.len()) });
    }
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, got: b.dim });
    }
    let s = cloud_sumset(a, b)?;
    let d = a.dim;
    let four_thirds = Rational::new(BigInt::from(4).pow(d as u32), BigInt::from(3).pow(d as u32));
    let threshold = Rational::from(2i64) * kappa / epsilon * four_thirds
        * Rational::new(s.len() as i64, a.len() as i64);
    let l = 1 + threshold.floor().to_u64().ok_or_else(|| Error::OutOfRange("l overflows".into()))?;

    let census = nn_census(a)?;
    let all: Vec<TorusVector> = a.points.iter().chain(&b.points).chain(&s.points).cloned().collect();
    let (na, nb) = (a.len(), b.len());
    let (upsilon, max_depth) = with_cloud!(AnyCloud::from_vectors(&all), c => {
        let radii: Vec<_> = census
            .records
            .iter()
            .map(|r| {
                let diff = c.diff(c.point(r.index), c.point(r.nearest_index));
                ScaledCloud::norm_sq(&diff)
            })
            .collect();
        upsilon_sets(&c, na, nb, &radii, &threshold)
    });

    let b_index: HashMap<&TorusVector, usize> = b.points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    // A_c for every c, sorted by c
    let a_c: Vec<Vec<usize>> = s
        .points
        .par_iter()
        .map(|cv| {
            (0..na)
                .filter(|&ai| {
                    let bv = cv.sub(&a.points[ai]);
                    b_index.get(&bv).is_some_and(|&bi| !upsilon[bi].contains(&ai))
                })
                .collect()
        })
        .collect();

    let mut covered = vec![false; na];
    let mut count = 0usize;
    let mut theta = Rational::one();
    let mut rounds = Vec::new();
    let mut theta_monotone = true;
    while &theta >= epsilon {
        let (best_c, gain) = a_c
            .iter()
            .enumerate()
            .map(|(ci, members)| (ci, members.iter().filter(|&&x| !covered[x]).count()))
            .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if gain == 0 {
            break;
        }
        for &x in &a_c[best_c] {
            if !covered[x] {
                covered[x] = true;
                count += 1;
            }
        }
        let next = Rational::one() - Rational::new(count as i64, na as i64);
        theta_monotone &= next <= theta;
        theta = next;
        rounds.push(ExtractionRound {
            center: s.points[best_c].clone(),
            gain,
            covered: count,
            theta: theta.clone(),
            distinct_diffs: census.census_of(&a_c[best_c]),
        });
    }
    let a_prime: Vec<usize> = (0..na).filter(|&i| covered[i]).collect();
    let census_a_prime = census.census_of(&a_prime);
    let n = rounds.len() + 1;
    let half_eps_a = epsilon * Rational::new(na as i64, 2);
    let upsilon_sizes: Vec<usize> = upsilon.iter().map(HashSet::len).collect();
    let upsilon_bound_holds = upsilon_sizes.iter().all(|&u| Rational::from(u as u64) < half_eps_a);
    let size_ok = Rational::from(a_prime.len() as u64) >= (Rational::one() - epsilon) * Rational::from(na as u64);
    let census_ok = (census_a_prime as u64) <= n as u64 * l;
    let per_round_ok = rounds.iter().all(|r| r.distinct_diffs as u64 <= l);
    Ok(Theorem4Trace {
        epsilon: epsilon.clone(),
        kappa: kappa.clone(),
        dim: d,
        a_len: na,
        b_len: nb,
        sumset_len: s.len(),
        threshold,
        l,
        upsilon_sizes,
        upsilon_bound_holds,
        max_ball_depth: max_depth,
        kappa_hat: implied_kappa(max_depth, d),
        rounds,
        a_prime,
        census_a_prime,
        census_a: census.size(),
        n,
        size_ok,
        census_ok,
        theta_monotone,
        per_round_ok,
        pass: size_ok && census_ok && theta_monotone && per_round_ok,
    })
}

/// `Υ_b` for each `b`, and the largest ball depth seen at any `c - b`.
///
/// Layout of `c`: `A` (`na` points), then `B` (`nb`), then `A + B`.
fn upsilon_sets<T: ExactInt>(
    c: &ScaledCloud<T>,
    na: usize,
    nb: usize,
    radii: &[T],
    threshold: &Rational,
) -> (Vec<HashSet<usize>>, usize) {
    let ns = c.len() - na - nb;
    let sum_pts: Vec<&[T]> = (0..ns).map(|i| c.point(na + nb + i)).collect();
    (0..nb)
        .into_par_iter()
        .map(|bi| {
            let b = c.point(na + bi);
            // per a: how many c ∈ A+B lie in the ball around a + b
            let mut depth_at = vec![0usize; ns];
            let mut ups = HashSet::new();
            for ai in 0..na {
                let centre = c.add_points(c.point(ai), b);
                let mut inside = 0usize;
                for (si, sp) in sum_pts.iter().enumerate() {
                    if c.dist_sq(&centre, sp) <= radii[ai] {
                        inside += 1;
                        depth_at[si] += 1;
                    }
                }
                if Rational::from(inside as u64) > *threshold {
                    ups.insert(ai);
                }
            }
            (ups, depth_at.into_iter().max().unwrap_or(0))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((Vec::with_capacity(nb), 0), |(mut sets, m), (u, dmax)| {
            sets.push(u);
            (sets, m.max(dmax))
        })
}

/// `{1, 4, …, m², m²+1, …, 2m²-m}` scaled by `1/(4m²)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Section5Report {
    pub m: u64,
    pub integers: Vec<i64>,
    pub a_len: usize,
    pub sumset_len: usize,
    pub census: usize,
    pub epsilon: Rational,
    /// `m - εm²`, a floor on the census of any `A'` with `|A'| > (1-ε)|A|`.
    pub subset_census_floor: Rational,
    /// `(4/3)(|A+A|/|A|)² · 2m log 2m`.
    pub upper_side: f64,
    pub pass: bool,
}

pub fn section5_integers(m: u64) -> Result<Vec<i64>> {
    if m < 2 {
        return Err(Error::TooSmall { needed: 2, got: m as usize });
    }
    let m = m as i64;
    let mut xs: Vec<i64> = (1..=m).map(|j| j * j).collect();
    xs.extend(m * m + 1..=2 * m * m - m);
    Ok(xs)
}

pub fn section5_cloud(m: u64) -> Result<PointCloud> {
    let scale = 4 * (m as i64) * (m as i64);
    PointCloud::from_reals(section5_integers(m)?.into_iter().map(|x| Rational::new(x, scale)))
}

pub fn section5_example(m: u64) -> Result<Section5Report> {
    let integers = section5_integers(m)?;
    let cloud = section5_cloud(m)?;
    let sumset_len = cloud_sumset(&cloud, &cloud)?.len();
    let census = nn_census(&cloud)?.size();
    let mm = (m * m) as i64;
    let epsilon = Rational::new(1, 2 * m as i64);
    let subset_census_floor = Rational::from(m) - &epsilon * Rational::from(mm);
    let ratio = sumset_len as f64 / integers.len() as f64;
    let two_m = 2.0 * m as f64;
    let upper_side = 4.0 / 3.0 * ratio * ratio * two_m * two_m.ln();
    let pass = integers.len() as i64 == mm
        && (sumset_len as i64) < 4 * mm
        && census as u64 >= m
        && subset_census_floor >= Rational::new(m as i64, 2);
    Ok(Section5Report {
        m,
        a_len: integers.len(),
        integers,
        sumset_len,
        census,
        epsilon,
        subset_census_floor,
        upper_side,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn cloud(points: &[&[(i64, i64)]]) -> PointCloud {
        PointCloud::new(
            points
                .iter()
                .map(|p| TorusVector::from_rationals(p.iter().map(|&(a, b)| r(a, b))).unwrap())
                .collect(),
        )
        .unwrap()
    }

    /// Rational-only reference: squared norms and lexicographic tie-break straight from the definition.
    fn oracle(cloud: &PointCloud) -> Vec<(usize, Vec<Rational>)> {
        let pts = cloud.points();
        (0..pts.len())
            .map(|i| {
                (0..pts.len())
                    .filter(|&j| j != i)
                    .map(|j| {
                        let diff = pts[j].sub(&pts[i]);
                        (diff.norm_sq(), diff.signed(), j)
                    })
                    .min()
                    .map(|(_, s, j)| (j, s))
                    .unwrap()
            })
            .collect()
    }

    fn oracle_ties(cloud: &PointCloud) -> bool {
        let pts = cloud.points();
        (0..pts.len()).any(|i| {
            let mut ds: Vec<Rational> = (0..pts.len()).filter(|&j| j != i).map(|j| pts[j].sub(&pts[i]).norm_sq()).collect();
            ds.sort();
            ds.len() > 1 && ds[0] == ds[1]
        })
    }

    #[test]
    fn census_one_dimensional_example() {
        let c = PointCloud::from_reals([r(0, 1), r(1, 10), r(2, 10), r(1, 2)]).unwrap();
        let rep = nn_census(&c).unwrap();
        assert_eq!(rep.census, vec![vec![r(-3, 10)], vec![r(-1, 10)], vec![r(1, 10)]]);
        // 1/10 is equidistant from 0 and 2/10: the negative difference wins
        assert_eq!(rep.records[1].diff, vec![r(-1, 10)]);
    }

    #[test]
    fn two_point_cloud() {
        let c = PointCloud::from_reals([r(0, 1), r(1, 2)]).unwrap();
        let rep = nn_census(&c).unwrap();
        assert_eq!(rep.size(), 1);
        assert_eq!(rep.census[0], vec![r(-1, 2)]);
        assert!(nn_census(&PointCloud::from_reals([r(0, 1)]).unwrap()).is_err());
        assert!(PointCloud::from_reals([r(0, 1), r(1, 1)]).is_err());
    }

    #[test]
    fn grid_matches_brute_on_fixed_clouds() {
        let c = cloud(&[&[(0, 1), (0, 1)], &[(1, 7), (3, 7)], &[(6, 7), (1, 2)], &[(1, 3), (2, 3)], &[(5, 9), (1, 9)]]);
        assert_eq!(nn_census_with(&c, NnMethod::Grid).unwrap().records, nn_census(&c).unwrap().records);
    }

    #[test]
    fn kronecker_hand_example() {
        let rep = kronecker_census(&[r(5, 8)], 4).unwrap();
        assert_eq!(rep.ell, 2);
        assert_eq!(rep.order_prefix[..2], [3, 2]);
        assert_eq!(rep.d_set.len(), 4);
        assert!(rep.contained && rep.pass);
        let two = kronecker_census(&[r(1, 3)], 2).unwrap();
        assert_eq!(two.d_set.len(), 2);
        assert!(matches!(kronecker_census(&[r(1, 3)], 4), Err(Error::Collision(_))));
    }

    /// j(i) by direct minimisation over every j.
    fn brute_partners(alphas: &[Rational], n: u64) -> Vec<u64> {
        let w = |k: u64| TorusVector::from_rationals(alphas.iter().map(|a| a * Rational::from(k))).unwrap();
        (1..=n)
            .map(|i| {
                (1..=n)
                    .filter(|&j| j != i)
                    .min_by_key(|&j| (w(i).sub(&w(j)).norm_sq(), j))
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn kronecker_partners_match_brute_force() {
        for (alphas, n) in [
            (vec![r(13, 101)], 60u64),
            (vec![r(3, 20)], 20),
            (vec![r(2, 17), r(5, 17)], 17),
            (vec![r(7, 31), r(11, 37), r(1, 5)], 50),
        ] {
            let rep = kronecker_census(&alphas, n).unwrap();
            assert_eq!(rep.partners, brute_partners(&alphas, n), "{alphas:?}");
            assert!(rep.pass);
        }
    }

    #[test]
    fn ball_depth_examples() {
        let c = PointCloud::from_reals([r(0, 1), r(1, 2)]).unwrap();
        for z in [r(0, 1), r(1, 3), r(3, 4)] {
            assert_eq!(ball_depth(&TorusVector::from_rationals([z]).unwrap(), &c).unwrap(), 2);
        }
        let tight = PointCloud::from_reals([r(0, 1), r(1, 100), r(50, 100), r(51, 100)]).unwrap();
        let far = TorusVector::from_rationals([r(1, 4)]).unwrap();
        assert_eq!(ball_depth(&far, &tight).unwrap(), 0);
        assert_eq!(implied_kappa(4, 1), r(3, 1));
    }

    #[test]
    fn section5_small_cases() {
        let rep = section5_example(3).unwrap();
        assert_eq!(rep.integers, vec![1, 4, 9, 10, 11, 12, 13, 14, 15]);
        assert_eq!(rep.a_len, 9);
        assert!(rep.sumset_len <= 29);
        assert!(rep.census >= 3);
        assert!(rep.pass);
        let five = section5_example(5).unwrap();
        assert!(five.pass && five.sumset_len < 100 && five.census >= 5);
        assert!(section5_example(1).is_err());
    }

    #[test]
    fn extraction_on_section5() {
        let a = section5_cloud(5).unwrap();
        let t = theorem4_extract(&a, &a, &r(1, 10), &Rational::one()).unwrap();
        assert!(t.size_ok && t.census_ok && t.theta_monotone, "{t:?}");
        assert!(t.a_prime.len() * 10 >= 9 * a.len());
        assert!(t.census_a >= 5);
        assert!(theorem4_extract(&a, &a, &r(3, 2), &Rational::one()).is_err());
    }

    #[test]
    fn extraction_threshold_and_l() {
        let a = PointCloud::from_reals((0..6).map(|i| r(i, 6))).unwrap();
        let b = PointCloud::from_reals([r(0, 1)]).unwrap();
        let t = theorem4_extract(&a, &b, &r(1, 2), &Rational::one()).unwrap();
        // (2/(1/2))·(4/3)·6/6 = 16/3
        assert_eq!(t.threshold, r(16, 3));
        assert_eq!(t.l, 6);
        // one point per round until θ = 1/3 < ε
        assert_eq!(t.a_prime.len(), 4);
        assert_eq!(t.rounds.len(), 4);
        assert!(t.pass);
    }

    fn arb_cloud(dim: usize, q: i64) -> impl Strategy<Value = PointCloud> {
        proptest::collection::btree_set(proptest::collection::vec(0..q, dim), 2..40).prop_map(move |pts| {
            PointCloud::new(
                pts.into_iter()
                    .map(|p| TorusVector::from_rationals(p.into_iter().map(|x| r(x, q))).unwrap())
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn brute_matches_oracle(c in (1usize..4).prop_flat_map(|d| arb_cloud(d, 24))) {
            let rep = nn_census(&c).unwrap();
            for (rec, (j, s)) in rep.records.iter().zip(oracle(&c)) {
                prop_assert_eq!(rec.nearest_index, j);
                prop_assert_eq!(&rec.diff, &s);
            }
        }

        #[test]
        fn grid_matches_brute(c in (1usize..4).prop_flat_map(|d| arb_cloud(d, 97))) {
            prop_assert_eq!(nn_census_with(&c, NnMethod::Grid).unwrap().records, nn_census(&c).unwrap().records);
        }

        #[test]
        fn census_negation(c in arb_cloud(2, 30)) {
            let pos = nn_census(&c).unwrap();
            let neg = nn_census(&c.negated()).unwrap();
            let d1: Vec<_> = pos.records.iter().map(|r| r.dist_sq.clone()).collect();
            let d2: Vec<_> = neg.records.iter().map(|r| r.dist_sq.clone()).collect();
            prop_assert_eq!(d1, d2);
            // without ties the choice of N_a is forced and the census flips sign
            let tied = oracle_ties(&c);
            if !tied {
                let flipped: BTreeSet<Vec<Rational>> = pos
                    .census
                    .iter()
                    .map(|v| TorusVector::from_rationals(v.iter().cloned()).unwrap().neg().signed())
                    .collect();
                prop_assert_eq!(flipped.into_iter().collect::<Vec<_>>(), neg.census);
            }
        }

        #[test]
        fn kronecker_structure(a in 1i64..499, b in 1i64..499, n in 2u64..120) {
            let rep = kronecker_census(&[r(a, 499), r(b, 499)], n).unwrap();
            prop_assert!(rep.contained_with_ties);
            prop_assert!(rep.d_set.len() <= 2 * rep.ell_with_ties);
        }
    }
}
