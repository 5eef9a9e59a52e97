use core::fmt::Debug;
use core::ops::{AddAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the numerical layer is generic over.
///
/// `f32` and `f64` both satisfy the bound. The one extension method converts
/// `f64` literals without the `FromPrimitive` unwrap noise at call sites; the
/// conversion rounds to the nearest representable value, which is exactly the
/// accuracy the narrower type can express anyway.
pub trait Real: Float + FromPrimitive + AddAssign + SubAssign + MulAssign + Debug {
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal converts into every IEEE float type")
    }
}

impl<T> Real for T where T: Float + FromPrimitive + AddAssign + SubAssign + MulAssign + Debug {}
