//! Scalar abstraction shared by the generic numerical kernels.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + FromStr
    + Default
    + Send
    + Sync
    + 'static
{
    /// Natural-log tolerance used by the one-dimensional optimizers.
    fn search_tolerance() -> Self;
}

impl Real for f32 {
    fn search_tolerance() -> Self {
        f32::EPSILON * 64.0
    }
}

impl Real for f64 {
    fn search_tolerance() -> Self {
        1e-12
    }
}

/// Lossless-enough conversion of an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}

/// ln(n!) by direct summation; exact enough for the counts used here.
pub fn ln_factorial<T: Real>(n: usize) -> T {
    (2..=n).map(|i| from_usize::<T>(i).ln()).sum()
}

/// Random variates needed by the samplers, implemented for `f32` and `f64`.
pub trait RandomScalar: Real {
    fn standard_normal<R: rand::Rng + ?Sized>(rng: &mut R) -> Self;
    /// Uniform on the half-open interval (0, 1].
    fn open_closed01<R: rand::Rng + ?Sized>(rng: &mut R) -> Self;
    /// Poisson variate with the given mean; a non-positive mean yields 0.
    fn poisson<R: rand::Rng + ?Sized>(mean: Self, rng: &mut R) -> u64;
}

macro_rules! impl_random_scalar {
    ($t:ty) => {
        impl RandomScalar for $t {
            fn standard_normal<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
                rand_distr::Distribution::sample(&rand_distr::StandardNormal, rng)
            }

            fn open_closed01<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
                rand_distr::Distribution::sample(&rand_distr::OpenClosed01, rng)
            }

            fn poisson<R: rand::Rng + ?Sized>(mean: Self, rng: &mut R) -> u64 {
                if !(mean > 0.0) {
                    return 0;
                }
                let dist = rand_distr::Poisson::new(mean).expect("finite Poisson mean");
                let draw: $t = rand_distr::Distribution::sample(&dist, rng);
                draw as u64
            }
        }
    };
}

impl_random_scalar!(f32);
impl_random_scalar!(f64);
