//! Coefficient abstraction: exact rationals by default, `f64` for benchmarking.
//!
//! Every identity check runs over [`Rat`]. The floating implementation exists
//! so the same operator machinery can be timed on cheap arithmetic; it never
//! decides a verification outcome.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational coefficient, the default scalar everywhere.
pub type Rat = BigRational;

/// Construct an exact rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Construct an exact rational from an integer.
pub fn int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Coefficient ring for multivectors and weighted functions.
///
/// `is_zero` is exact for rationals and tolerance-based for floats, which is
/// why floating mode is benchmarking-only.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Division; only called with nonzero divisor.
    fn div(&self, other: &Self) -> Self;
    fn from_rational(q: &Rat) -> Self;
    fn from_int(n: i64) -> Self;
}

impl Coeff for Rat {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn from_rational(q: &Rat) -> Self {
        q.clone()
    }
    fn from_int(n: i64) -> Self {
        int(n)
    }
}

/// Tolerance for treating a float as zero in benchmarking mode.
pub const FLOAT_ZERO_EPS: f64 = 1e-9;

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        self.abs() < FLOAT_ZERO_EPS
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn from_rational(q: &Rat) -> Self {
        q.to_f64().unwrap_or_else(|| {
            let n = q.numer().to_f64().unwrap_or(f64::NAN);
            let d = q.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
}

/// Sign-aware rendering helper: `3`, `-1/2`.
pub fn rat_to_string(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `-3`, `5/2` style rationals.
pub fn rat_from_str(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if Zero::is_zero(&d) {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(n))
        }
    }
}

/// True if the rational is negative (used by renderers).
pub fn rat_is_negative(q: &Rat) -> bool {
    q.is_negative()
}
