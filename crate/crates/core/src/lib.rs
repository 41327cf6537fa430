//! Exact-arithmetic toolkit for the completion problem of block
//! upper-triangular matrices over the rationals.
//!
//! Given the diagonal blocks of a block upper-triangular matrix, the
//! completion problem asks whether the remaining blocks can be chosen so
//! that the whole matrix becomes invertible. This crate decides the
//! question for 3×3 block matrices, constructs an explicit completion
//! together with the full subspace trace behind it, certifies the result
//! with an exact inverse, and checks the necessary conditions for the
//! general n×n case. A small symbolic engine handles the same dimension
//! arithmetic when countably infinite dimensions are allowed.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating point anywhere. Rank decisions are exact, all operations are
//! deterministic, and every value is immutable once built.

pub mod complete3;
pub mod extdim;
pub mod gen;
pub mod harte;
pub mod json;
pub mod matrix;
pub mod nblock;
pub mod scalar;
pub mod subspace;

/// Arbitrary-precision rational scalar: the field every matrix lives over.
pub type Rational = num_rational::BigRational;

/// Dense rational matrix, the crate-wide workhorse.
pub type Mat = matrix::Matrix<Rational>;

/// Linear subspace of ℚ^d in canonical form.
pub type Space = subspace::Subspace<Rational>;

pub use matrix::{block_assemble, block_diag, MatError, Matrix, Rref};
pub use scalar::Scalar;
pub use subspace::{iso, Subspace, SubspaceError};
