use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Rational-integer scalar underlying Gaussian integers and rationals.
///
/// The library instantiates it with `BigInt` (see the crate-root aliases);
/// any signed integer type that can represent the intermediate values works.
pub trait Scalar:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + Hash
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Parse a run of decimal digits into the scalar.
pub(crate) fn from_decimal<T: Scalar>(digits: &str) -> Option<T> {
    T::from_str_radix(digits, 10).ok()
}

#[inline]
pub(crate) fn two<T: Scalar>() -> T {
    T::one() + T::one()
}
