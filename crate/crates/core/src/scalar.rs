//! Scalar abstraction for the core math.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the objective and indicator math is generic over.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum<Self> + Display + Debug + FromStr + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Lossy conversion from `f64`, used where values originate from an `f64`
/// random stream or from configuration.
pub fn real<S: Real>(x: f64) -> S {
    S::from_f64(x).expect("f64 conversion")
}

/// Widening conversion to `f64` for bookkeeping math (p-values, densities).
pub fn to_f64<S: Real>(x: S) -> f64 {
    x.to_f64().expect("conversion to f64")
}
