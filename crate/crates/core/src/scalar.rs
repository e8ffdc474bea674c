//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point type the clustering machinery is generic over.
///
/// Implemented for `f32` and `f64`. Powers, logarithms and square roots are
/// needed throughout, so exact rationals are not a fit.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal. Every `f64` is representable (possibly
    /// rounded) in the implementing types, so this never fails.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Raw bit pattern widened to 64 bits; used for fingerprints.
    fn bits(self) -> u64;
}

impl Scalar for f32 {
    fn bits(self) -> u64 {
        u64::from(self.to_bits())
    }
}

impl Scalar for f64 {
    fn bits(self) -> u64 {
        self.to_bits()
    }
}

/// `2^e` as a scalar, exact for the exponent ranges used by ring and band indices.
#[inline]
pub(crate) fn pow2<T: Scalar>(e: i32) -> T {
    T::lit(2.0).powi(e)
}

/// Largest integer `j` with `base * 2^j <= value` (both positive, finite).
///
/// The starting guess comes from `log2`, then the comparison is repeated on
/// exactly scaled powers of two so the result honours the half-open interval
/// `[base * 2^j, base * 2^(j+1))` bit for bit.
pub(crate) fn floor_log2_ratio<T: Scalar>(value: T, base: T) -> i32 {
    debug_assert!(value > T::zero() && base > T::zero());
    let guess = (value / base).log2().floor();
    let mut j = guess.to_i32().unwrap_or(0);
    while base * pow2::<T>(j) > value {
        j -= 1;
    }
    while base * pow2::<T>(j + 1) <= value {
        j += 1;
    }
    j
}

/// FNV-1a, used for stable fingerprints of solutions and point sets.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Fnv(u64);

impl Default for Fnv {
    fn default() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }
}

impl Fnv {
    pub(crate) fn write_u64(&mut self, x: u64) {
        for byte in x.to_le_bytes() {
            self.0 ^= u64::from(byte);
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }

    pub(crate) fn finish(self) -> u64 {
        self.0
    }
}
