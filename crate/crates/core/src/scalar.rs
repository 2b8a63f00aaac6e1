//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar (`f32` or `f64`).
///
/// Default tolerances are per type: what separates a true degeneracy from a
/// near miss in `f64` is far below the rounding floor of `f32`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Sum + Send + Sync + 'static
{
    /// Absolute tolerance on `|λ_m - λ_n|` for calling two ring levels degenerate.
    const TOL_DEGENERATE: f64;
    /// Tolerance on `1 - |μ|` for calling a survival-operator eigenvalue unit-modulus.
    const TOL_UNIT: f64;
    /// Residual tolerance used when certifying dark states.
    const TOL_DARK: f64;
    /// Absolute tolerance when matching a period against a phase-matching solution.
    const TOL_TAU_MATCH: f64;

    /// Converts an `f64` literal; every literal used by the crate is representable.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).expect("usize representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Real for f32 {
    const TOL_DEGENERATE: f64 = 1e-4;
    const TOL_UNIT: f64 = 1e-4;
    const TOL_DARK: f64 = 1e-4;
    const TOL_TAU_MATCH: f64 = 1e-4;
}

impl Real for f64 {
    const TOL_DEGENERATE: f64 = 1e-9;
    const TOL_UNIT: f64 = 1e-9;
    const TOL_DARK: f64 = 1e-10;
    const TOL_TAU_MATCH: f64 = 1e-9;
}
