//! Floating point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar type the matrix and curvature code is generic over.
///
/// Implemented for `f32` and `f64`. The two tolerance hooks carry the
/// precision ladder used throughout: structural checks (skewness, Gram
/// residuals, SVD orthogonality) and derived equalities (normalization
/// preconditions, basis invariance).
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Sum
    + 'static
{
    /// Absolute tolerance for structural checks on unit-scale data.
    fn structural_tol() -> Self;

    /// Tolerance for equalities that hold only after a chain of floating
    /// point operations.
    fn derived_tol() -> Self;

    /// Converts an `f64` literal. Every `f64` is representable (possibly
    /// rounded) in both implementors.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal fits the scalar type")
    }

    /// Lossy conversion back to `f64`, used by reporting code.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn structural_tol() -> Self {
        1e-12
    }

    fn derived_tol() -> Self {
        1e-10
    }
}

impl Scalar for f32 {
    fn structural_tol() -> Self {
        1e-5
    }

    fn derived_tol() -> Self {
        1e-4
    }
}
