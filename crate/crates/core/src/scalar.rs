//! Scalar abstraction shared by every geometric routine in the crate.
//!
//! All geometry is written against [`Scalar`] so the same code runs in
//! `f64` (the default, see the aliases at the crate root) and `f32`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar usable for coordinates and lengths.
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Absolute tolerance for geometric predicates, in world units.
    fn geom_tol() -> Self;

    /// Converts an `f64` literal into this scalar type.
    fn lit(v: f64) -> Self;

    fn to_f64_lossy(self) -> f64;
}

impl Scalar for f64 {
    #[inline]
    fn geom_tol() -> Self {
        1e-9
    }

    #[inline]
    fn lit(v: f64) -> Self {
        v
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

// f32 cannot resolve 1e-9 at unit scale; its tolerance sits a few ulps above
// the machine epsilon at coordinates of order 10.
impl Scalar for f32 {
    #[inline]
    fn geom_tol() -> Self {
        1e-5
    }

    #[inline]
    fn lit(v: f64) -> Self {
        v as f32
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

/// `ceil(len / step)` as a count, at least 1.
pub(crate) fn interval_count<T: Scalar>(len: T, step: T) -> usize {
    let n = (len / step).ceil().to_usize().unwrap_or(1);
    n.max(1)
}
