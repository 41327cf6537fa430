//! Scalar abstraction for the matrix layer.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_traits::Num;

/// Field element usable for exact linear algebra.
///
/// The bound is `Num` (ring operations plus exact division) together with
/// negation and cloning; division must be exact for every nonzero divisor,
/// since row reduction divides by pivots and a lossy scalar would corrupt
/// every rank decision downstream. `num_rational::BigRational` is the
/// instantiation used throughout the crate (see [`crate::Rational`]).
pub trait Scalar: Num + Neg<Output = Self> + Clone + Debug + Display {}

impl<T> Scalar for T where T: Num + Neg<Output = Self> + Clone + Debug + Display {}
