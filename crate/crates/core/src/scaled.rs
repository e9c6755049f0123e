//! Common-denominator integer views of exact data.
//!
//! Hot loops (sumsets, nearest-neighbour scans) never touch `Rational`
//! directly: inputs are rescaled to integer numerators over one shared
//! denominator. When everything fits comfortably in `i128` that width is
//! used, otherwise the same generic code runs on `BigInt`.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::rational::{common_denominator, scale_to, Rational};
use crate::torus::{TorusPoint, TorusVector};

/// Integer type usable by the exact engines.
pub trait ExactInt: Clone + Ord + Hash + Debug + Send + Sync + Integer + Signed + 'static {
    fn from_big(x: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl ExactInt for i128 {
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ExactInt for BigInt {
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Denominators below this bound let squared norms of up to 256 coordinates fit in `i128`.
pub const I128_DENOM_LIMIT: i128 = 1 << 60;

/// Points of (ℝ/ℤ)^d as integer coordinates in `[0, denom)`, stored row-major.
#[derive(Clone, Debug)]
pub struct ScaledCloud<T> {
    pub denom: T,
    pub dim: usize,
    pub coords: Vec<T>,
}

impl<T: ExactInt> ScaledCloud<T> {
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Canonical signed coordinate of `x mod denom` in `[-denom/2, denom/2)`.
    pub fn signed(&self, x: T) -> T {
        let v = x.mod_floor(&self.denom);
        let two = T::one() + T::one();
        if v.clone() * two >= self.denom {
            v - self.denom.clone()
        } else {
            v
        }
    }

    /// Signed difference `to - from`, coordinate-wise.
    pub fn diff(&self, from: &[T], to: &[T]) -> Vec<T> {
        from.iter()
            .zip(to)
            .map(|(a, b)| self.signed(b.clone() - a.clone()))
            .collect()
    }

    /// Squared torus distance between two scaled points, in units of `1/denom²`.
    pub fn dist_sq(&self, a: &[T], b: &[T]) -> T {
        let mut acc = T::zero();
        for (x, y) in a.iter().zip(b) {
            let v = self.signed(y.clone() - x.clone());
            acc = acc + v.clone() * v;
        }
        acc
    }

    pub fn norm_sq(v: &[T]) -> T {
        v.iter().fold(T::zero(), |acc, x| acc + x.clone() * x.clone())
    }

    /// Sum of two points reduced into `[0, denom)`.
    pub fn add_points(&self, a: &[T], b: &[T]) -> Vec<T> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x.clone() + y.clone()).mod_floor(&self.denom))
            .collect()
    }

    pub fn to_rational(&self, x: &T) -> Rational {
        Rational::new(x.to_big(), self.denom.to_big())
    }

    pub fn to_torus_vector(&self, coords: &[T]) -> TorusVector {
        TorusVector::new(
            coords
                .iter()
                .map(|c| TorusPoint::new(self.to_rational(c)))
                .collect(),
        )
        .expect("scaled clouds have dimension >= 1")
    }

    /// Squared norm in lowest terms.
    pub fn sq_to_rational(&self, x: &T) -> Rational {
        let d = self.denom.to_big();
        Rational::new(x.to_big(), &d * &d)
    }

    pub fn signed_to_rationals(&self, v: &[T]) -> Vec<Rational> {
        v.iter().map(|x| self.to_rational(x)).collect()
    }
}

/// Runtime choice of integer width for a cloud.
#[derive(Clone, Debug)]
pub enum AnyCloud {
    Small(ScaledCloud<i128>),
    Big(ScaledCloud<BigInt>),
}

impl AnyCloud {
    /// Rescales vectors of a common dimension to one denominator.
    pub fn from_vectors<'a>(points: impl IntoIterator<Item = &'a TorusVector> + Clone) -> AnyCloud {
        let dim = points.clone().into_iter().next().map_or(1, TorusVector::dim);
        let denom = common_denominator(
            points
                .clone()
                .into_iter()
                .flat_map(|p| p.coords().iter().map(TorusPoint::value)),
        );
        let big: Vec<BigInt> = points
            .into_iter()
            .flat_map(|p| p.coords().iter().map(|c| scale_to(c.value(), &denom)).collect::<Vec<_>>())
            .collect();
        let small_ok = dim <= 256 && denom.to_i128().is_some_and(|q| q < I128_DENOM_LIMIT);
        if small_ok {
            AnyCloud::Small(ScaledCloud {
                denom: denom.to_i128().unwrap(),
                dim,
                coords: big.iter().map(|x| x.to_i128().unwrap()).collect(),
            })
        } else {
            AnyCloud::Big(ScaledCloud { denom, dim, coords: big })
        }
    }
}

/// Dispatches a generic body over both widths of [`AnyCloud`].
#[macro_export]
#[doc(hidden)]
macro_rules! with_cloud {
    ($any:expr, $c:ident => $body:expr) => {
        match $any {
            $crate::scaled::AnyCloud::Small($c) => $body,
            $crate::scaled::AnyCloud::Big($c) => $body,
        }
    };
}

/// Numerators of 1-D values over a shared denominator.
#[derive(Clone, Debug)]
pub struct ScaledValues<T> {
    pub denom: T,
    pub nums: Vec<T>,
}

impl<T: ExactInt> ScaledValues<T> {
    pub fn to_rational(&self, x: &T) -> Rational {
        Rational::new(x.to_big(), self.denom.to_big())
    }
}

/// Rescales several groups of values to one shared denominator.
///
/// `headroom_bits` is how many bits of the `i128` range the caller needs
/// above the largest numerator (sums, products) before falling back to `BigInt`.
pub fn scale_groups(groups: &[&[Rational]], headroom_bits: u32) -> Result<Vec<ScaledValues<i128>>, Vec<ScaledValues<BigInt>>> {
    let denom = common_denominator(groups.iter().flat_map(|g| g.iter()));
    let big: Vec<Vec<BigInt>> = groups
        .iter()
        .map(|g| g.iter().map(|r| scale_to(r, &denom)).collect())
        .collect();
    let limit = BigInt::from(1u8) << (126 - headroom_bits.min(120));
    let fits = denom < limit && big.iter().flatten().all(|x| x.abs() < limit);
    if fits {
        let d = denom.to_i128().unwrap();
        Ok(big
            .into_iter()
            .map(|g| ScaledValues { denom: d, nums: g.iter().map(|x| x.to_i128().unwrap()).collect() })
            .collect())
    } else {
        Err(big
            .into_iter()
            .map(|g| ScaledValues { denom: denom.clone(), nums: g })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cloud_round_trip() {
        let pts = vec![
            TorusVector::from_rationals([Rational::new(1, 4), Rational::new(1, 6)]).unwrap(),
            TorusVector::from_rationals([Rational::new(5, 6), Rational::new(0, 1)]).unwrap(),
        ];
        let AnyCloud::Small(c) = AnyCloud::from_vectors(&pts) else { panic!("expected i128 cloud") };
        assert_eq!(c.denom, 12);
        assert_eq!(c.point(0), &[3, 2]);
        assert_eq!(c.to_torus_vector(c.point(1)), pts[1]);
        // (1/4 - 5/6, 1/6) -> (5/12, 1/6); signed keeps both as they are below 1/2
        assert_eq!(c.diff(c.point(1), c.point(0)), vec![5, 2]);
        assert_eq!(c.signed(6), -6);
    }

    #[test]
    fn huge_denominators_use_bigint() {
        let q = BigInt::from(1u8) << 70;
        let pts = vec![TorusVector::from_rationals([Rational::new(1, q)]).unwrap()];
        assert!(matches!(AnyCloud::from_vectors(&pts), AnyCloud::Big(_)));
    }
}
