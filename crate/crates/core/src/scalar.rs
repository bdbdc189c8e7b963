//! The floating-point scalar every operator in this crate is generic over.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point: `f32` or `f64`.
///
/// Besides the usual `num-traits` bounds this carries the default numerical
/// policy (difference-quotient cutoffs, series tolerances) appropriate for the
/// precision of the type, so that `Default` configurations are meaningful for
/// both widths.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Threshold on `|q t^n - t|` below which the raw quotient is abandoned.
    fn default_degenerate_gap() -> Self;
    /// Central-difference step, relative to `max(1, |t|)`.
    fn default_fd_step_scale() -> Self;
    /// Relative tolerance for series truncation.
    fn default_series_rel_tol() -> Self;
    /// Absolute tolerance for series truncation.
    fn default_series_abs_tol() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::of(0.5)
    }
}

impl Scalar for f64 {
    fn default_degenerate_gap() -> Self {
        1e-9
    }
    fn default_fd_step_scale() -> Self {
        1e-6
    }
    fn default_series_rel_tol() -> Self {
        1e-12
    }
    fn default_series_abs_tol() -> Self {
        1e-300
    }
}

impl Scalar for f32 {
    fn default_degenerate_gap() -> Self {
        // sqrt(eps); 1e-9 would sit below 10 eps for single precision
        f32::EPSILON.sqrt()
    }
    fn default_fd_step_scale() -> Self {
        f32::EPSILON.cbrt()
    }
    fn default_series_rel_tol() -> Self {
        1e-6
    }
    fn default_series_abs_tol() -> Self {
        1e-37
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_respect_epsilon_floor() {
        assert!(f64::default_degenerate_gap() >= 10.0 * f64::EPSILON);
        assert!(f32::default_degenerate_gap() >= 10.0 * f32::EPSILON);
        assert_eq!(f64::of(0.25), 0.25);
        assert_eq!(f32::two(), 2.0);
    }
}
