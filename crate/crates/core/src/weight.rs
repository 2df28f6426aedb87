//! Exact multi-criteria edge weights.
//!
//! A [`WeightVector`] holds `d >= 1` arbitrary-precision rationals. Vectors are
//! ordered lexicographically: any difference in criterion `i` dominates every
//! difference in criteria `j > i`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used for every weight component.
pub type Rational = BigRational;

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(components: Vec<Rational>) -> Self {
        assert!(!components.is_empty(), "weight vector needs at least one criterion");
        WeightVector(components)
    }

    pub fn zero(dim: usize) -> Self {
        WeightVector::new(vec![Rational::zero(); dim])
    }

    pub fn from_ints(values: &[i64]) -> Self {
        WeightVector::new(values.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect())
    }

    pub fn scalar(value: Rational) -> Self {
        WeightVector(vec![value])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Rational] {
        &self.0
    }

    /// True when every component is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|c| c.is_positive())
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        WeightVector(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Ok(WeightVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }
}

fn check_dims(a: &WeightVector, b: &WeightVector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(())
}

/// Lexicographic comparison of two weight vectors of equal dimension.
pub fn compare_lengths(a: &WeightVector, b: &WeightVector) -> Result<Ordering> {
    check_dims(a, b)?;
    Ok(a.0.cmp(&b.0))
}

impl<'a> Add<&'a WeightVector> for &'a WeightVector {
    type Output = WeightVector;

    /// Panics on dimension mismatch; graphs guarantee a uniform dimension.
    fn add(self, rhs: &'a WeightVector) -> WeightVector {
        self.checked_add(rhs).expect("weight dimensions agree within a graph")
    }
}

impl<'a> Sub<&'a WeightVector> for &'a WeightVector {
    type Output = WeightVector;

    fn sub(self, rhs: &'a WeightVector) -> WeightVector {
        assert_eq!(self.dim(), rhs.dim(), "weight dimensions agree within a graph");
        WeightVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// Parses an integer or `num/den` token with `den > 0`.
pub fn parse_rational(token: &str) -> std::result::Result<Rational, String> {
    let parse_int = |s: &str| BigInt::from_str(s).map_err(|_| format!("malformed number `{token}`"));
    match token.split_once('/') {
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if !den.is_positive() {
                return Err(format!("denominator must be positive in `{token}`"));
            }
            Ok(Rational::new(num, den))
        }
        None => Ok(Rational::from_integer(parse_int(token)?)),
    }
}

/// Canonical textual form: integers print bare, fractions as reduced `num/den`.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "({})", parts.join(", "))
        }
    }
}
