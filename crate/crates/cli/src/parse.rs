//! Value parsers for command-line lists.
//!
//! Scalars are `p/q`, integers or decimal literals, converted exactly.
//! Lists are comma-separated; point clouds separate vectors with `;`.

use std::fmt;
use std::str::FromStr;

use gaplab_core::Rational;
use serde::{Serialize, Serializer};

pub fn rational(s: &str) -> Result<Rational, String> {
    Rational::from_str(s).map_err(|e| e.to_string())
}

fn split(s: &str, sep: char) -> impl Iterator<Item = &str> {
    s.split(sep).map(str::trim).filter(|t| !t.is_empty())
}

/// Comma-separated rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatList(pub Vec<Rational>);

impl FromStr for RatList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        split(s, ',').map(rational).collect::<Result<_, _>>().map(RatList)
    }
}

/// Comma-separated integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntList(pub Vec<i64>);

impl FromStr for IntList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        split(s, ',')
            .map(|t| t.parse::<i64>().map_err(|_| format!("not an integer: {t:?}")))
            .collect::<Result<_, _>>()
            .map(IntList)
    }
}

/// Vectors separated by `;`, coordinates by `,`: `0,1/4;1/2,1/3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VecList(pub Vec<Vec<Rational>>);

impl FromStr for VecList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let rows: Vec<Vec<Rational>> = split(s, ';').map(|row| RatList::from_str(row).map(|r| r.0)).collect::<Result<_, _>>()?;
        if let Some(first) = rows.first() {
            if let Some(bad) = rows.iter().find(|r| r.len() != first.len()) {
                return Err(format!("vectors of mixed dimension ({} and {})", first.len(), bad.len()));
            }
        }
        Ok(VecList(rows))
    }
}

impl fmt::Display for RatList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Rational::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for RatList {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl Serialize for IntList {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl Serialize for VecList {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_convert_exactly() {
        assert_eq!(rational("0.625").unwrap(), Rational::new(5, 8));
        assert_eq!(rational(" 3/12 ").unwrap(), Rational::new(1, 4));
        assert!(rational("1/0").is_err());
        assert!(rational("x").is_err());
    }

    #[test]
    fn lists() {
        let r: RatList = "0, 1/10,0.3".parse().unwrap();
        assert_eq!(r.0, vec![Rational::zero(), Rational::new(1, 10), Rational::new(3, 10)]);
        let i: IntList = "1,2,-7".parse().unwrap();
        assert_eq!(i.0, vec![1, 2, -7]);
        assert!("1,a".parse::<IntList>().is_err());
        let v: VecList = "0,1/4; 1/2,1/3".parse().unwrap();
        assert_eq!(v.0.len(), 2);
        assert!("0,1;1".parse::<VecList>().is_err());
    }
}
