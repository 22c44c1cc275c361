//! Scalar arithmetic abstraction: exact rationals for the correctness
//! suites, binary64 for the numeric estimate suites.
//!
//! Norm exponents live in an associated type so the exact mode is
//! restricted to integer exponents (keeping every weight λ^p rational)
//! while the float mode allows arbitrary real exponents.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{Signed, ToPrimitive};
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Domain of norm exponents p in the weighted norms |·|_p.
pub trait NormExp:
    Copy
    + PartialOrd
    + Debug
    + Display
    + Neg<Output = Self>
    + Add<Output = Self>
    + From<i8>
    + Send
    + Sync
    + 'static
{
    fn max_with(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl NormExp for i64 {}
impl NormExp for f64 {}

/// Coefficient scalar of all tensors and matrices.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    type Exp: NormExp;

    /// True when arithmetic is exact (identities are checked with equality,
    /// residuals must be literally zero).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_int(n: i64) -> Self;
    fn ratio(num: i64, den: i64) -> Self;
    /// base^e for a strictly positive base.
    fn pow_exp(&self, e: Self::Exp) -> Self;
    /// Exact conversion of a scalar into a norm exponent, if representable.
    fn to_exp(&self) -> Option<Self::Exp>;
    /// Complex conjugation hook (identity on real scalars).
    fn conj(&self) -> Self;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;

    fn factorial(n: usize) -> Self {
        let mut acc: i64 = 1;
        for k in 2..=n as i64 {
            acc *= k;
        }
        Self::from_int(acc)
    }

    /// n·(n−1)···(m+1) = n!/m! for n ≥ m.
    fn falling_ratio(n: usize, m: usize) -> Self {
        let mut acc: i64 = 1;
        for k in (m + 1)..=n {
            acc *= k as i64;
        }
        Self::from_int(acc)
    }

    fn binomial(n: usize, k: usize) -> Self {
        if k > n {
            return Self::zero();
        }
        let mut num: i64 = 1;
        let mut den: i64 = 1;
        for i in 0..k.min(n - k) {
            num *= (n - i) as i64;
            den *= (i + 1) as i64;
        }
        Self::from_int(num / den)
    }
}

impl Scalar for BigRational {
    type Exp = i64;
    const EXACT: bool = true;

    fn zero() -> Self {
        num::Zero::zero()
    }
    fn one() -> Self {
        num::One::one()
    }
    fn is_zero(&self) -> bool {
        num::Zero::is_zero(self)
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn pow_exp(&self, e: i64) -> Self {
        if e == 0 {
            return Scalar::one();
        }
        let mag = e.unsigned_abs() as u32;
        let n = self.numer().pow(mag);
        let d = self.denom().pow(mag);
        if e > 0 {
            BigRational::new(n, d)
        } else {
            BigRational::new(d, n)
        }
    }
    fn to_exp(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    type Exp = f64;
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn pow_exp(&self, e: f64) -> Self {
        self.powf(e)
    }
    fn to_exp(&self) -> Option<f64> {
        Some(*self)
    }
    fn conj(&self) -> Self {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}
