//! Exact integer scalars.
//!
//! Everything in this crate is computed in exact integer arithmetic. The
//! [`Scalar`] trait collects the bounds needed by the root-lattice and
//! linear-algebra code so the same routines run over `i32`, `i64`, `i128`
//! or arbitrary-precision [`num_bigint::BigInt`]. Machine integers fail with
//! [`Error::Overflow`] instead of wrapping.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact, signed integer type usable as a root coefficient or matrix entry.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + Eq
    + Ord
    + Hash
    + Zero
    + One
    + Signed
    + Integer
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + Display
        + Eq
        + Ord
        + Hash
        + Zero
        + One
        + Signed
        + Integer
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

#[inline]
pub(crate) fn add<T: Scalar>(a: &T, b: &T) -> Result<T> {
    a.checked_add(b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn sub<T: Scalar>(a: &T, b: &T) -> Result<T> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn mul<T: Scalar>(a: &T, b: &T) -> Result<T> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn from_i64<T: Scalar>(v: i64) -> Result<T> {
    T::from_i64(v).ok_or(Error::Overflow)
}

/// `a * b + c * d`, checked.
#[inline]
pub(crate) fn mul_add2<T: Scalar>(a: &T, b: &T, c: &T, d: &T) -> Result<T> {
    add(&mul(a, b)?, &mul(c, d)?)
}
