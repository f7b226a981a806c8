//! Exact scalar fields the engine is generic over.
//!
//! Every quantity that is not a plain integer (invariant form values,
//! geometric weights, Casimir constants, pairing coefficients) is computed in
//! a type implementing [`Scalar`]. Only exact fields are admitted: equality of
//! excluded weights is an exact integer condition and must never be decided
//! up to a tolerance.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, ToPrimitive};

/// An exact field of characteristic zero.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Neg<Output = Self> + Send + Sync
{
    fn from_int(value: i64) -> Self;

    /// `Some(v)` when the value is an integer that fits in an `i64`.
    fn as_integer(&self) -> Option<i64>;

    fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_int(numer) / Self::from_int(denom)
    }
}

impl Scalar for Ratio<i64> {
    fn from_int(value: i64) -> Self {
        Ratio::from_integer(value)
    }

    fn as_integer(&self) -> Option<i64> {
        self.is_integer().then(|| self.to_integer())
    }
}

impl Scalar for Ratio<i128> {
    fn from_int(value: i64) -> Self {
        Ratio::from_integer(i128::from(value))
    }

    fn as_integer(&self) -> Option<i64> {
        if self.is_integer() {
            i64::try_from(self.to_integer()).ok()
        } else {
            None
        }
    }
}

impl Scalar for Ratio<BigInt> {
    fn from_int(value: i64) -> Self {
        Ratio::from_integer(BigInt::from_i64(value).expect("i64 always fits"))
    }

    fn as_integer(&self) -> Option<i64> {
        if self.is_integer() {
            self.to_integer().to_i64()
        } else {
            None
        }
    }
}
