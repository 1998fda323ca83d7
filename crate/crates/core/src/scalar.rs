//! Exact rational scalars.
//!
//! Every length, density, value and cut point in the crate is a reduced
//! `p/q` over arbitrary-precision integers. Formatting is `p/q`, or just `p`
//! when the denominator is one, and parsing accepts the same two forms.

use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(value: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(value))
}

/// `numer / denom`; panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> Scalar {
    Scalar::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn from_usize(value: usize) -> Scalar {
    Scalar::from_integer(BigInt::from(value))
}

pub fn parse(text: &str) -> Result<Scalar> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::input("empty rational literal"));
    }
    Scalar::from_str(trimmed).map_err(|_| Error::input(alloc::format!("bad rational literal {text:?}")))
}

pub fn is_negative(value: &Scalar) -> bool {
    value.is_negative()
}

pub fn min(a: Scalar, b: Scalar) -> Scalar {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max(a: Scalar, b: Scalar) -> Scalar {
    if a >= b {
        a
    } else {
        b
    }
}
