//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};

/// Real scalar type the algebra is generic over.
///
/// The tolerance hooks are tied to the precision of the type: `f64` uses the
/// documented defaults (`1e-12` for coefficient pruning, `1e-10` for
/// representation identities), `f32` uses values scaled to its epsilon.
pub trait Real:
    Float + FloatConst + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute threshold below which a coefficient is treated as zero.
    fn tau_zero() -> Self;
    /// Tolerance for numerically evaluated identities (homomorphism checks, states).
    fn tau_num() -> Self;
    /// Slack allowed on the smallest eigenvalue in positivity tests.
    fn tau_psd() -> Self;

    /// Lossy conversion from `f64`; every supported type can hold any finite f64 approximately.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("f64 literal must convert")
    }

    #[inline]
    fn from_usize(n: usize) -> Self {
        <Self as num_traits::NumCast>::from(n).expect("usize must convert")
    }

    #[inline]
    fn from_i64(n: i64) -> Self {
        <Self as num_traits::NumCast>::from(n).expect("i64 must convert")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn tau_zero() -> Self {
        1e-12
    }
    fn tau_num() -> Self {
        1e-10
    }
    fn tau_psd() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn tau_zero() -> Self {
        1e-5
    }
    fn tau_num() -> Self {
        1e-4
    }
    fn tau_psd() -> Self {
        1e-3
    }
}

/// `e^{2πi·turns}`.
#[inline]
pub fn unit<T: Real>(turns: T) -> Complex<T> {
    let ang = T::TAU() * turns;
    Complex::new(ang.cos(), ang.sin())
}

/// Integer power of a complex number, negative exponents allowed.
pub fn cpow<T: Real>(z: Complex<T>, n: i64) -> Complex<T> {
    if n >= 0 {
        z.powu(n as u32)
    } else {
        z.inv().powu((-n) as u32)
    }
}

#[inline]
pub fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

#[inline]
pub fn creal<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}
