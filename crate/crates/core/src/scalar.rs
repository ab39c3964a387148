//! Numeric traits the pipelines are written against.
//!
//! Counting and summing code only needs [`Scalar`], which exact types such as
//! `num_rational::Ratio<i64>` satisfy. Anything that takes a square root, a
//! logarithm or evaluates a special function needs [`Real`].

use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, Num};

/// Field-like scalar: exact rationals and floats both qualify.
pub trait Scalar: Num + Copy + PartialOrd + FromPrimitive + Debug + Sum {
    /// Lossless conversion of a count.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Conversion of a literal constant (e.g. an alignment score of -0.5).
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("constant representable in scalar type")
    }
}

impl<T> Scalar for T where T: Num + Copy + PartialOrd + FromPrimitive + Debug + Sum {}

/// Floating-point scalar (`f32` or `f64`).
pub trait Real: Scalar + Float {}

impl<T> Real for T where T: Scalar + Float {}

/// Mean of a slice, `None` when empty.
pub fn mean<T: Scalar>(xs: &[T]) -> Option<T> {
    if xs.is_empty() {
        return None;
    }
    Some(xs.iter().copied().sum::<T>() / T::of_usize(xs.len()))
}

/// Population variance (divide by N), `None` when empty.
pub fn population_variance<T: Scalar>(xs: &[T]) -> Option<T> {
    let m = mean(xs)?;
    let ss: T = xs.iter().map(|&x| (x - m) * (x - m)).sum();
    Some(ss / T::of_usize(xs.len()))
}

/// Sample variance (divide by N-1), `None` for fewer than two values.
pub fn sample_variance<T: Scalar>(xs: &[T]) -> Option<T> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs)?;
    let ss: T = xs.iter().map(|&x| (x - m) * (x - m)).sum();
    Some(ss / T::of_usize(xs.len() - 1))
}
