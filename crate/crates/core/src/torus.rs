//! Exact points and vectors on the circle ℝ/ℤ and the torus (ℝ/ℤ)^d.
//!
//! Points are stored by their canonical representative in `[0, 1)`. Signed
//! differences, when needed for norms and censuses, use `[-1/2, 1/2)`.
//! Distances in dimension `d > 1` are only ever compared squared, which
//! keeps every comparison inside ℚ.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::{Error, Result};

/// A point of ℝ/ℤ, held as its representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorusPoint(Rational);

impl TorusPoint {
    pub fn new(x: Rational) -> Self {
        reduce_mod1(&x)
    }

    pub fn zero() -> Self {
        TorusPoint(Rational::zero())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_value(self) -> Rational {
        self.0
    }

    /// Distance to the nearest integer, in `[0, 1/2]`.
    pub fn norm(&self) -> Rational {
        torus_norm(self)
    }

    /// Representative in `[-1/2, 1/2)`.
    pub fn signed(&self) -> Rational {
        let half = Rational::new(1, 2);
        if self.0 >= half {
            &self.0 - Rational::one()
        } else {
            self.0.clone()
        }
    }

    /// Anticlockwise arc length from `self` to `other`, in `[0, 1)`.
    pub fn arc_to(&self, other: &TorusPoint) -> Rational {
        (other.clone() - self.clone()).0
    }
}

impl fmt::Debug for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for TorusPoint {
    type Output = TorusPoint;
    fn add(self, rhs: TorusPoint) -> TorusPoint {
        reduce_mod1(&(self.0 + rhs.0))
    }
}

impl<'a> Add<&'a TorusPoint> for &'a TorusPoint {
    type Output = TorusPoint;
    fn add(self, rhs: &TorusPoint) -> TorusPoint {
        reduce_mod1(&(&self.0 + &rhs.0))
    }
}

impl Sub for TorusPoint {
    type Output = TorusPoint;
    fn sub(self, rhs: TorusPoint) -> TorusPoint {
        reduce_mod1(&(self.0 - rhs.0))
    }
}

impl<'a> Sub<&'a TorusPoint> for &'a TorusPoint {
    type Output = TorusPoint;
    fn sub(self, rhs: &TorusPoint) -> TorusPoint {
        reduce_mod1(&(&self.0 - &rhs.0))
    }
}

impl Neg for TorusPoint {
    type Output = TorusPoint;
    fn neg(self) -> TorusPoint {
        reduce_mod1(&-self.0)
    }
}

impl From<Rational> for TorusPoint {
    fn from(x: Rational) -> Self {
        reduce_mod1(&x)
    }
}

/// A point of (ℝ/ℤ)^d.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorusVector {
    coords: Vec<TorusPoint>,
}

impl TorusVector {
    pub fn new(coords: Vec<TorusPoint>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DegenerateInput("torus vector needs dimension >= 1".into()));
        }
        Ok(TorusVector { coords })
    }

    pub fn from_rationals(xs: impl IntoIterator<Item = Rational>) -> Result<Self> {
        Self::new(xs.into_iter().map(TorusPoint::new).collect())
    }

    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1);
        TorusVector { coords: vec![TorusPoint::zero(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[TorusPoint] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.value().is_zero())
    }

    /// Coordinates in `[-1/2, 1/2)^d`: the representative closest to the origin.
    pub fn signed(&self) -> Vec<Rational> {
        self.coords.iter().map(TorusPoint::signed).collect()
    }

    pub fn norm_sq(&self) -> Rational {
        torus_norm_sq_d(self)
    }

    fn zip_with(&self, other: &TorusVector, f: impl Fn(&TorusPoint, &TorusPoint) -> TorusPoint) -> TorusVector {
        assert_eq!(self.dim(), other.dim(), "torus vectors of different dimension");
        TorusVector {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &TorusVector) -> TorusVector {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &TorusVector) -> TorusVector {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> TorusVector {
        TorusVector { coords: self.coords.iter().map(|c| -c.clone()).collect() }
    }
}

impl fmt::Debug for TorusVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coords).finish()
    }
}

impl fmt::Display for TorusVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The unique representative of `x` in `[0, 1)`.
pub fn reduce_mod1(x: &Rational) -> TorusPoint {
    TorusPoint(x.fract_mod1())
}

/// `min_n |t - n|`.
pub fn torus_norm(t: &TorusPoint) -> Rational {
    let complement = Rational::one() - &t.0;
    if complement < t.0 {
        complement
    } else {
        t.0.clone()
    }
}

/// Squared Euclidean torus norm `Σ ‖t_i‖²`.
pub fn torus_norm_sq_d(t: &TorusVector) -> Rational {
    t.coords
        .iter()
        .map(|c| {
            let n = torus_norm(c);
            &n * &n
        })
        .sum()
}

/// Anticlockwise order of distinct points, anchored at the smallest representative.
pub fn circular_sort(points: impl IntoIterator<Item = TorusPoint>) -> Result<Vec<TorusPoint>> {
    let mut pts: Vec<TorusPoint> = points.into_iter().collect();
    pts.sort();
    if let Some(w) = pts.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateElement(w[0].to_string()));
    }
    Ok(pts)
}

/// Affine 2-isomorphic image of a finite set of reals inside `[0, 1/4]`.
///
/// Maps `x ↦ (x - min) / (4 (max - min))`; the image keeps the equality
/// pattern of all differences and never wraps around the circle.
pub fn embed_reals(xs: &[Rational]) -> Result<Vec<TorusPoint>> {
    if xs.len() < 2 {
        return Err(Error::DegenerateInput(format!("need at least 2 reals, got {}", xs.len())));
    }
    let mut sorted = xs.to_vec();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateElement(w[0].to_string()));
    }
    let lo = sorted[0].clone();
    let span = sorted[sorted.len() - 1].clone() - &lo;
    let scale = Rational::from_integer(4) * span;
    Ok(xs.iter().map(|x| TorusPoint((x - &lo) / &scale)).collect())
}
