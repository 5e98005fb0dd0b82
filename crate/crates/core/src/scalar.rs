//! Floating point abstraction used by the dimensionless solvers.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the reduced-unit math is written against: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Relative tolerance a polished root must reach.
    const ROOT_TOL: f64;
    /// Bracket width at which bisection hands over to Newton.
    const BISECT_TOL: f64;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const ROOT_TOL: f64 = 1e-12;
    const BISECT_TOL: f64 = 1e-6;
}

impl Scalar for f32 {
    const ROOT_TOL: f64 = 2e-6;
    const BISECT_TOL: f64 = 1e-4;
}
