//! Floating point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the geometry and measure code is generic over.
///
/// Implemented for `f32` and `f64`. Constants are produced with [`Scalar::lit`],
/// which goes through `f64` and is therefore exact for every literal used here.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute tolerance used by geometric predicates at this precision.
    const GEOM_EPS: f64;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("every f64 converts to a float scalar")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count converts to a float scalar")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("float scalar converts to f64")
    }
}

impl Scalar for f32 {
    const GEOM_EPS: f64 = 1e-5;
}

impl Scalar for f64 {
    const GEOM_EPS: f64 = 1e-12;
}
