//! Denominator height `H(α) = N(α) / gcd(re α, im α)`, with `H(0) = 0`.
//!
//! For `α ≠ 0`, `ω/α` is a point of `(1/H(α))·ℤ[i]`, which is what makes `H`
//! the natural height for Gaussian rationals.

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed};

use crate::error::{Error, Result};
use crate::primes::{classify, PrimeClass};
use crate::scalar::Scalar;
use crate::zi::GaussInt;
use crate::GaussInteger;

/// `H(α)`; invariant under multiplication by units.
pub fn height<T: Scalar>(alpha: &GaussInt<T>) -> T {
    if alpha.is_zero() {
        return T::zero();
    }
    alpha.norm() / alpha.re.gcd(&alpha.im)
}

/// `H(γ)` for a Gaussian prime: `|γ|`, `2`, or `N(γ)` by type.
pub fn height_of_prime(gamma: &GaussInteger) -> Result<BigInt> {
    Ok(match classify(gamma)? {
        PrimeClass::TypeI => gamma.re.abs() + gamma.im.abs(),
        PrimeClass::TypeII => BigInt::from(2),
        PrimeClass::TypeIII => gamma.norm(),
    })
}

/// `H(γⁿ)` for a prime `γ`, from the closed form rather than the expansion.
pub fn height_prime_power(gamma: &GaussInteger, n: u64) -> Result<BigInt> {
    let class = classify(gamma)?;
    let n32 = u32::try_from(n).map_err(|_| Error::domain("exponent too large"))?;
    Ok(match class {
        PrimeClass::TypeI => (gamma.re.abs() + gamma.im.abs()).pow(n32),
        PrimeClass::TypeII => BigInt::from(2).pow(n32 - n32 / 2),
        PrimeClass::TypeIII => gamma.norm().pow(n32),
    })
}

/// `H(αⁿ·γᵐ)` where `γ` is the conjugate associate of the Type III prime `α`:
/// equals `H(α)^max(m, n)`.
pub fn height_conjugate_pair(alpha: &GaussInteger, n: u64, m: u64) -> Result<BigInt> {
    if classify(alpha)? != PrimeClass::TypeIII {
        return Err(Error::domain(format!("{alpha} is not a Type III prime")));
    }
    let e = u32::try_from(n.max(m)).map_err(|_| Error::domain("exponent too large"))?;
    Ok(if e == 0 { BigInt::one() } else { alpha.norm().pow(e) })
}
