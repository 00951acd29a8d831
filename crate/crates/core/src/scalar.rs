//! Scalar abstraction for masses, weights and distances.
//!
//! Everything that does arithmetic on measures is generic over [`Scalar`].
//! The library is meant to be used with an exact field such as
//! [`crate::Rational`] (arbitrary precision) or `Ratio<i64>`/`Ratio<i128>`;
//! floating point types satisfy the bound too, but every verdict in this crate
//! is an exact equality test and will be meaningless under rounding.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, Zero};

/// Numeric field used for masses.
pub trait Scalar:
    Num + Signed + FromPrimitive + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    /// `num / den` as a scalar. Panics if `den == 0`.
    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i64(num).expect("representable numerator")
            / Self::from_i64(den).expect("representable denominator")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("representable count")
    }

    /// `2^{-k}`.
    fn dyadic(k: u32) -> Self {
        let two = Self::one() + Self::one();
        let mut out = Self::one();
        for _ in 0..k {
            out = out / two.clone();
        }
        out
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }
}

impl<T> Scalar for T where
    T: Num + Signed + FromPrimitive + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
}

/// Sum of an iterator of scalars.
pub fn sum<S: Scalar, I: IntoIterator<Item = S>>(items: I) -> S {
    items.into_iter().fold(S::zero(), |acc, x| acc + x)
}

/// Formats a rational as `"num/den"` in lowest terms, always with a denominator.
pub fn format_ratio<T>(r: &Ratio<T>) -> String
where
    T: Clone + num_integer::Integer + Display,
{
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` or a plain integer into a reduced rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Lossy decimal rendering, for human-facing columns only.
pub fn approx_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
