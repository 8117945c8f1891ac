//! Exact arithmetic in Q/Z, the value group of local Brauer invariants.
//!
//! Every local invariant of a central simple algebra is a rational number
//! taken modulo 1, and every identity the rest of this crate relies on
//! (reciprocity sums, restriction scaling, index computations) is an exact
//! statement about such values. This module therefore implements Q/Z on
//! integer fractions with no floating point anywhere: a value is stored as
//! `num/den` with `0 <= num < den` and `gcd(num, den) = 1`, so equality is
//! structural and each value has exactly one representation. Zero is `0/1`.
//!
//! Denominators in practice divide the degree of an algebra, which this
//! crate caps at [`MAX_DEGREE`]; intermediate products are computed in
//! `u128`, which cannot overflow for any pair of canonical `u64` fractions.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Neg};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest algebra degree the crate accepts; keeps every denominator small
/// enough that bounded integer arithmetic is exact.
pub const MAX_DEGREE: u32 = 64;

/// Errors from constructing a [`InvariantValue`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    /// The denominator of a fraction was zero.
    #[error("zero denominator in invariant value")]
    ZeroDenominator,
}

/// An element of Q/Z in canonical form: `num/den` with `0 <= num < den`
/// and `gcd(num, den) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFraction", into = "RawFraction")]
pub struct InvariantValue {
    num: u64,
    den: u64,
}

/// Wire form of an invariant value; re-canonicalized on deserialization.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawFraction {
    num: u64,
    den: u64,
}

impl From<InvariantValue> for RawFraction {
    fn from(v: InvariantValue) -> Self {
        RawFraction { num: v.num, den: v.den }
    }
}

impl TryFrom<RawFraction> for InvariantValue {
    type Error = InvariantError;

    fn try_from(raw: RawFraction) -> Result<Self, InvariantError> {
        if raw.den == 0 {
            return Err(InvariantError::ZeroDenominator);
        }
        Ok(InvariantValue::reduced(raw.num as u128, raw.den as u128))
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

impl InvariantValue {
    /// The zero class, stored as 0/1.
    pub const ZERO: InvariantValue = InvariantValue { num: 0, den: 1 };

    /// One half, the nontrivial invariant of a real place.
    pub const HALF: InvariantValue = InvariantValue { num: 1, den: 2 };

    /// Builds `num/den` reduced modulo 1. The numerator may be negative;
    /// `new(-1, 3)` is 2/3. Fails only on a zero denominator.
    pub fn new(num: i64, den: u64) -> Result<Self, InvariantError> {
        if den == 0 {
            return Err(InvariantError::ZeroDenominator);
        }
        let d = den as i128;
        let n = (num as i128).rem_euclid(d);
        Ok(Self::reduced(n as u128, d as u128))
    }

    /// Internal constructor: reduces `num/den` (already both non-negative,
    /// den > 0) modulo 1 and by the gcd. Inputs are u128 so callers can pass
    /// unreduced products of canonical u64 fractions.
    fn reduced(num: u128, den: u128) -> Self {
        debug_assert!(den > 0);
        let n = num % den;
        if n == 0 {
            return Self::ZERO;
        }
        let g = {
            let (mut a, mut b) = (n, den);
            while b != 0 {
                let t = a % b;
                a = b;
                b = t;
            }
            a
        };
        InvariantValue { num: (n / g) as u64, den: (den / g) as u64 }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Order of the value in the group Q/Z. The canonical form makes this
    /// the denominator; the zero class has order 1.
    pub fn order(&self) -> u64 {
        self.den
    }

    /// True when the order divides `d`, i.e. the value can occur as a local
    /// invariant of a degree-`d` algebra.
    pub fn order_divides(&self, d: u32) -> bool {
        d != 0 && u64::from(d) % self.den == 0
    }

    /// `n * self` in Q/Z. This is the restriction scaling: a local extension
    /// of degree `n` multiplies the base invariant by `n`.
    pub fn scale(&self, n: u64) -> Self {
        Self::reduced(n as u128 * self.num as u128, self.den as u128)
    }
}

impl Add for InvariantValue {
    type Output = InvariantValue;

    fn add(self, rhs: Self) -> Self {
        let den = self.den as u128 * rhs.den as u128;
        let num = self.num as u128 * rhs.den as u128 + rhs.num as u128 * self.den as u128;
        Self::reduced(num, den)
    }
}

impl Neg for InvariantValue {
    type Output = InvariantValue;

    fn neg(self) -> Self {
        if self.num == 0 {
            self
        } else {
            // den - num is already coprime to den, so the form is canonical.
            InvariantValue { num: self.den - self.num, den: self.den }
        }
    }
}

impl Sum for InvariantValue {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

/// Whether the sum of the given values is integral, i.e. zero in Q/Z.
/// This is the reciprocity condition on a full set of local invariants.
pub fn sum_is_integral<I>(values: I) -> bool
where
    I: IntoIterator<Item = InvariantValue>,
{
    values.into_iter().sum::<InvariantValue>().is_zero()
}

// Values are ordered as rationals in [0, 1), which gives reports and set
// iterations a stable, human-sensible order.
impl Ord for InvariantValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for InvariantValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for InvariantValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}
