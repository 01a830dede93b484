//! The floating-point abstraction shared by the numeric kernels.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// A real scalar type the kernels, quadrature and Chebyshev code are generic over.
///
/// Implemented for `f32` and `f64`. Constants are introduced through [`Real::lit`],
/// which rounds an `f64` literal into the target precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// √π
    #[inline]
    fn sqrt_pi() -> Self {
        Self::PI().sqrt()
    }
}

impl Real for f32 {}
impl Real for f64 {}
