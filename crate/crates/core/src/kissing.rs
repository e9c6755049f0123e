//! Kissing-type configurations on the torus.
//!
//! A configuration `z_1, …, z_k` is valid when `‖z_i - z_j‖ ≥ max(‖z_i‖, ‖z_j‖)`
//! for all `i ≠ j`. The check is generic over an exact ordered field so
//! that configurations needing `√3` (the regular hexagon) can be verified
//! exactly alongside rational ones.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::torus::TorusVector;
use crate::{Error, Result};

/// Exact ordered field with a floor, enough to reduce mod 1 and compare norms.
pub trait Scalar:
    Clone + Ord + fmt::Display + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_rational(r: Rational) -> Self;
    fn floor(&self) -> BigInt;

    fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    /// Representative of `self mod 1` in `[-1/2, 1/2)`.
    fn signed_mod1(&self) -> Self {
        let shifted = self.clone() + Self::from_rational(Rational::new(1, 2));
        self.clone() - Self::from_rational(Rational::from(shifted.floor()))
    }
}

impl Scalar for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn floor(&self) -> BigInt {
        Rational::floor(self)
    }
}

/// `a + b√3` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QSqrt3 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt3 {
    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt3 { a, b }
    }

    fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sa == sb || sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // opposite signs: the larger of a² and 3b² decides
        let a2 = &self.a * &self.a;
        let b2 = Rational::from(3i64) * &self.b * &self.b;
        if a2 > b2 {
            sa
        } else {
            sb
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * 3f64.sqrt()
    }
}

impl Ord for QSqrt3 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }
}

impl PartialOrd for QSqrt3 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for QSqrt3 {
    type Output = QSqrt3;
    fn add(self, o: QSqrt3) -> QSqrt3 {
        QSqrt3 { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for QSqrt3 {
    type Output = QSqrt3;
    fn sub(self, o: QSqrt3) -> QSqrt3 {
        QSqrt3 { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Mul for QSqrt3 {
    type Output = QSqrt3;
    fn mul(self, o: QSqrt3) -> QSqrt3 {
        QSqrt3 {
            a: &self.a * &o.a + Rational::from(3i64) * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl Neg for QSqrt3 {
    type Output = QSqrt3;
    fn neg(self) -> QSqrt3 {
        QSqrt3 { a: -self.a, b: -self.b }
    }
}

impl fmt::Display for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√3", self.a, self.b)
    }
}

impl Scalar for QSqrt3 {
    fn from_rational(r: Rational) -> Self {
        QSqrt3 { a: r, b: Rational::zero() }
    }

    fn floor(&self) -> BigInt {
        let int = |n: &BigInt| QSqrt3::from_rational(Rational::from(n.clone()));
        let mut f = BigInt::from(self.to_f64().floor() as i64);
        while &int(&f) > self {
            f -= 1;
        }
        while int(&(&f + 1)) <= *self {
            f += 1;
        }
        f
    }
}

fn norm_sq<S: Scalar>(v: &[S]) -> S {
    v.iter().fold(S::zero(), |acc, x| {
        let s = x.signed_mod1();
        acc + s.clone() * s
    })
}

fn diff<S: Scalar>(u: &[S], v: &[S]) -> Vec<S> {
    u.iter().zip(v).map(|(a, b)| a.clone() - b.clone()).collect()
}

fn dot<S: Scalar>(u: &[S], v: &[S]) -> S {
    u.iter().zip(v).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairViolation {
    pub i: usize,
    pub j: usize,
    /// `‖z_i - z_j‖²`.
    pub lhs: String,
    /// `max(‖z_i‖², ‖z_j‖²)`, or for the angular test `|z̃_i|²|z̃_j|²` against `4⟨z̃_i, z̃_j⟩²`.
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KissingReport {
    pub dim: usize,
    pub k: usize,
    pub pairwise_ok: bool,
    pub pairwise_violation: Option<PairViolation>,
    /// Radial lines of the nearest representatives at least `π/3` apart (only for `d ≤ 2`).
    pub angular_ok: Option<bool>,
    pub angular_violation: Option<PairViolation>,
    /// `k ≤ 2` for `d = 1`, `k ≤ 6` for `d = 2`.
    pub within_planar_bound: Option<bool>,
    pub pass: bool,
}

/// Checks a configuration given by coordinates in any exact field.
pub fn kissing_check_generic<S: Scalar>(zs: &[Vec<S>]) -> Result<KissingReport> {
    let dim = zs.first().map_or(0, Vec::len);
    if let Some(z) = zs.iter().find(|z| z.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: z.len() });
    }
    let reps: Vec<Vec<S>> = zs.iter().map(|z| z.iter().map(Scalar::signed_mod1).collect()).collect();
    let norms: Vec<S> = zs.iter().map(|z| norm_sq(z)).collect();
    if let Some(i) = norms.iter().position(|n| *n == S::zero()) {
        return Err(Error::InvalidConfiguration(format!("z_{i} is the zero vector")));
    }
    let mut pairwise_violation = None;
    let mut angular_violation = None;
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            let lhs = norm_sq(&diff(&zs[i], &zs[j]));
            let rhs = norms[i].clone().max(norms[j].clone());
            if pairwise_violation.is_none() && lhs < rhs {
                pairwise_violation = Some(PairViolation { i, j, lhs: lhs.to_string(), rhs: rhs.to_string() });
            }
            if dim <= 2 && angular_violation.is_none() {
                // angle below π/3 ⟺ ⟨u,v⟩ > 0 and 4⟨u,v⟩² > |u|²|v|²
                let ip = dot(&reps[i], &reps[j]);
                let four = S::from_rational(Rational::from(4i64));
                let prod = norms[i].clone() * norms[j].clone();
                let lhs = four * ip.clone() * ip.clone();
                if ip > S::zero() && lhs > prod {
                    angular_violation = Some(PairViolation { i, j, lhs: lhs.to_string(), rhs: prod.to_string() });
                }
            }
        }
    }
    let k = zs.len();
    let pairwise_ok = pairwise_violation.is_none();
    let (angular_ok, within_planar_bound) = match dim {
        1 => (Some(angular_violation.is_none()), Some(k <= 2)),
        2 => (Some(angular_violation.is_none()), Some(k <= 6)),
        _ => (None, None),
    };
    Ok(KissingReport {
        dim,
        k,
        pairwise_ok,
        pairwise_violation,
        angular_ok,
        angular_violation,
        within_planar_bound,
        pass: pairwise_ok,
    })
}

pub fn kissing_check(zs: &[TorusVector]) -> Result<KissingReport> {
    let coords: Vec<Vec<Rational>> = zs.iter().map(|z| z.coords().iter().map(|c| c.value().clone()).collect()).collect();
    kissing_check_generic(&coords)
}

/// The six points `r·(cos πj/3, sin πj/3)`.
pub fn hexagon(radius: &Rational) -> Vec<Vec<QSqrt3>> {
    let half = Rational::new(1, 2);
    let q = |a: Rational, b: Rational| QSqrt3::new(radius * a, radius * b);
    let zero = Rational::zero;
    let one = Rational::one;
    vec![
        vec![q(one(), zero()), q(zero(), zero())],
        vec![q(half.clone(), zero()), q(zero(), half.clone())],
        vec![q(-half.clone(), zero()), q(zero(), half.clone())],
        vec![q(-one(), zero()), q(zero(), zero())],
        vec![q(-half.clone(), zero()), q(zero(), -half.clone())],
        vec![q(half.clone(), zero()), q(zero(), -half)],
    ]
}

/// Largest valid configuration among the nonzero points of `(1/q)ℤ^d mod 1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridSearch {
    pub dim: usize,
    pub q: i64,
    pub vertices: usize,
    pub max_k: usize,
    pub witness: Vec<TorusVector>,
}

pub fn max_configuration_on_grid(dim: usize, q: i64) -> Result<GridSearch> {
    if dim == 0 || q < 2 || (q as f64).powi(dim as i32) > 4096.0 {
        return Err(Error::OutOfRange(format!("grid (1/{q})^{dim} outside the exhaustive range")));
    }
    // integer coordinates in [-q/2, q/2), squared norms in units of 1/q²
    let lo = -(q / 2);
    let mut pts: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..dim {
        pts = pts.into_iter().flat_map(|p| (lo..lo + q).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    pts.retain(|p| p.iter().any(|&x| x != 0));
    let signed = |x: i64| {
        let r = x.rem_euclid(q);
        if 2 * r >= q {
            r - q
        } else {
            r
        }
    };
    let nsq = |p: &[i64]| p.iter().map(|&x| signed(x) * signed(x)).sum::<i64>();
    let n = pts.len();
    let words = n.div_ceil(64);
    let mut adj = vec![vec![0u64; words]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d: Vec<i64> = pts[i].iter().zip(&pts[j]).map(|(a, b)| a - b).collect();
            if nsq(&d) >= nsq(&pts[i]).max(nsq(&pts[j])) {
                adj[i][j / 64] |= 1 << (j % 64);
                adj[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    let mut best = Vec::new();
    let all: Vec<u64> = (0..words)
        .map(|w| if (w + 1) * 64 <= n { u64::MAX } else { (1u64 << (n - w * 64)) - 1 })
        .collect();
    max_clique(&adj, &mut Vec::new(), all, &mut best);
    let witness = best
        .iter()
        .map(|&i| TorusVector::from_rationals(pts[i].iter().map(|&x| Rational::new(x, q))))
        .collect::<Result<_>>()?;
    Ok(GridSearch { dim, q, vertices: n, max_k: best.len(), witness })
}

fn max_clique(adj: &[Vec<u64>], current: &mut Vec<usize>, cand: Vec<u64>, best: &mut Vec<usize>) {
    let count: usize = cand.iter().map(|w| w.count_ones() as usize).sum();
    if count == 0 {
        if current.len() > best.len() {
            *best = current.clone();
        }
        return;
    }
    if current.len() + count <= best.len() {
        return;
    }
    let mut cand = cand;
    while let Some(v) = first_bit(&cand) {
        let left: usize = cand.iter().map(|w| w.count_ones() as usize).sum();
        if current.len() + left <= best.len() {
            return;
        }
        cand[v / 64] &= !(1 << (v % 64));
        let next: Vec<u64> = cand.iter().zip(&adj[v]).map(|(a, b)| a & b).collect();
        current.push(v);
        max_clique(adj, current, next, best);
        current.pop();
    }
    if current.len() > best.len() {
        *best = current.clone();
    }
}

fn first_bit(words: &[u64]) -> Option<usize> {
    words.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}
