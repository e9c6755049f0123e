//! Exact-arithmetic toolkit for gaps between fractional parts.
//!
//! Everything is computed over ℚ: points of ℝ/ℤ and (ℝ/ℤ)^d are rationals
//! reduced into `[0, 1)`, norms are compared squared, and no floating point
//! enters a verdict.

pub mod census;
pub mod error;
pub mod extremal;
pub mod gaps;
pub mod kissing;
pub mod generators;
pub mod rational;
pub mod sampling;
pub mod scaled;
pub mod sumset;
pub mod torus;

pub use error::{Error, Result};
pub use rational::Rational;
pub use torus::{TorusPoint, TorusVector};
