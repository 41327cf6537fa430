//! Canonical subspace algebra: equality, complements, quotient dimensions,
//! and construction of left-invertible embeddings and isomorphisms between
//! subspaces.
//!
//! A subspace is identified by the reduced row echelon form of its spanning
//! set (transposed), so two spanning sets of the same space always produce
//! identical representations and equality is structural. Complements are
//! linear, not orthogonal: the whole toolkit works without inner products.

use thiserror::Error;

use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubspaceError {
    #[error("source dimension {source_dim} exceeds target dimension {target_dim}")]
    TooBig { source_dim: usize, target_dim: usize },
    #[error("dimension mismatch: source has dimension {source_dim}, target {target_dim}")]
    DimMismatch { source_dim: usize, target_dim: usize },
}

/// Linear subspace of the ambient coordinate space `S^d`.
///
/// `basis` columns are the canonical basis vectors (the transposed rows of
/// `canonical_rows`); `canonical_rows` is the RREF identifier used for
/// equality.
#[derive(Clone)]
pub struct Subspace<S> {
    ambient: usize,
    basis: Matrix<S>,
    canonical_rows: Matrix<S>,
}

impl<S: Scalar> Subspace<S> {
    /// Subspace spanned by the columns of `spanning` (which may be linearly
    /// dependent). Canonicalizes immediately.
    pub fn span(ambient: usize, spanning: &Matrix<S>) -> Self {
        assert_eq!(
            spanning.rows(),
            ambient,
            "spanning vectors must live in the ambient space"
        );
        let r = spanning.transpose().rref();
        let canonical_rows = r.reduced.submatrix(0..r.rank, 0..ambient);
        Subspace {
            ambient,
            basis: canonical_rows.transpose(),
            canonical_rows,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace::span(ambient, &Matrix::zero(ambient, 0))
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::span(ambient, &Matrix::identity(ambient))
    }

    /// Null space of `m`, inside the domain of `m`.
    pub fn kernel_of(m: &Matrix<S>) -> Self {
        Subspace::span(m.cols(), &m.kernel_basis())
    }

    /// Column space of `m`, inside the codomain of `m`.
    pub fn image_of(m: &Matrix<S>) -> Self {
        Subspace::span(m.rows(), &m.image_basis())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Dimension of the ambient space modulo this subspace.
    pub fn codim(&self) -> usize {
        self.ambient - self.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Canonical basis, one column per basis vector (ambient × dim).
    pub fn basis(&self) -> &Matrix<S> {
        &self.basis
    }

    /// RREF identifier (dim × ambient).
    pub fn canonical_rows(&self) -> &Matrix<S> {
        &self.canonical_rows
    }

    /// Pivot column of each canonical row (the leading-one positions).
    fn pivot_cols(&self) -> Vec<usize> {
        (0..self.canonical_rows.rows())
            .map(|r| {
                (0..self.ambient)
                    .find(|&c| !self.canonical_rows[(r, c)].is_zero())
                    .expect("canonical rows are nonzero")
            })
            .collect()
    }

    /// Deterministic linear complement: the span of the standard basis
    /// vectors at the non-pivot coordinates of the canonical rows. Direct by
    /// construction: joint basis always has full ambient rank.
    pub fn complement(&self) -> Self {
        let pivots = self.pivot_cols();
        let free: Vec<usize> = (0..self.ambient).filter(|c| !pivots.contains(c)).collect();
        let mut units = Matrix::zero(self.ambient, free.len());
        for (k, &c) in free.iter().enumerate() {
            units[(c, k)] = num_traits::One::one();
        }
        Subspace::span(self.ambient, &units)
    }

    /// Smallest subspace containing both operands.
    pub fn join(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        Subspace::span(self.ambient, &Matrix::hstack(&[&self.basis, &other.basis]))
    }

    /// Membership check by rank augmentation: true iff every column of
    /// `vectors` lies in the subspace.
    pub fn contains(&self, vectors: &Matrix<S>) -> bool {
        assert_eq!(vectors.rows(), self.ambient);
        Matrix::hstack(&[&self.basis, vectors]).rank() == self.dim()
    }

    /// Left-invertible map from an abstract `source_dim`-dimensional space
    /// into this subspace: the matrix whose columns are the first
    /// `source_dim` canonical basis columns (ambient × source_dim).
    pub fn embed(&self, source_dim: usize) -> Result<Matrix<S>, SubspaceError> {
        if source_dim > self.dim() {
            return Err(SubspaceError::TooBig {
                source_dim,
                target_dim: self.dim(),
            });
        }
        Ok(self.basis.submatrix(0..self.ambient, 0..source_dim))
    }

    /// Subspace spanned by the canonical basis columns in `range`. A subset
    /// of RREF rows is still RREF, so the result is canonical as given.
    pub fn basis_cols(&self, range: std::ops::Range<usize>) -> Self {
        Subspace::span(self.ambient, &self.basis.submatrix(0..self.ambient, range))
    }
}

impl<S: Scalar> PartialEq for Subspace<S> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.canonical_rows == other.canonical_rows
    }
}

impl<S: Scalar + Eq> Eq for Subspace<S> {}

impl<S: Scalar> std::fmt::Debug for Subspace<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Subspace(dim {} of ambient {}) rows {:?}",
            self.dim(),
            self.ambient,
            self.canonical_rows
        )
    }
}

/// Isomorphism between equidimensional subspaces, sending the i-th canonical
/// basis vector of `source` to the i-th canonical basis vector of `target`.
/// Returned in source coordinates: target-ambient × dim(source).
pub fn iso<S: Scalar>(
    source: &Subspace<S>,
    target: &Subspace<S>,
) -> Result<Matrix<S>, SubspaceError> {
    if source.dim() != target.dim() {
        return Err(SubspaceError::DimMismatch {
            source_dim: source.dim(),
            target_dim: target.dim(),
        });
    }
    Ok(target.basis().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Mat, Space};

    #[test]
    fn complement_of_full_space_is_zero() {
        let s = Space::full(2);
        let c = s.complement();
        assert_eq!(c, Space::zero(2));
    }

    #[test]
    fn complement_of_axis() {
        let s = Space::span(2, &Mat::from_ints(&[&[1], &[0]]));
        let c = s.complement();
        assert_eq!(c, Space::span(2, &Mat::from_ints(&[&[0], &[1]])));
    }

    #[test]
    fn complement_of_diagonal_line_uses_non_pivot_axis() {
        // Pivot of span{(1,1)} is coordinate 0, so the complement is the
        // remaining axis; the joint basis has full rank 2.
        let s = Space::span(2, &Mat::from_ints(&[&[1], &[1]]));
        let c = s.complement();
        assert_eq!(c, Space::span(2, &Mat::from_ints(&[&[0], &[1]])));
        assert_eq!(s.join(&c).dim(), 2);
    }

    #[test]
    fn codim_examples() {
        assert_eq!(Space::zero(2).codim(), 2);
        assert_eq!(Space::full(2).codim(), 0);
        let s = Space::span(3, &Mat::from_ints(&[&[1, 0], &[0, 1], &[0, 1]]));
        assert_eq!(s.codim(), 1);
    }

    #[test]
    fn embed_empty_source() {
        let target = Space::full(3);
        let j = target.embed(0).unwrap();
        assert_eq!((j.rows(), j.cols()), (3, 0));
    }

    #[test]
    fn embed_into_axis_is_forced() {
        let target = Space::span(2, &Mat::from_ints(&[&[0], &[1]]));
        assert_eq!(target.embed(1).unwrap(), Mat::from_ints(&[&[0], &[1]]));
    }

    #[test]
    fn embed_takes_first_canonical_columns() {
        let target = Space::full(2);
        let j = target.embed(1).unwrap();
        assert_eq!(j, Mat::from_ints(&[&[1], &[0]]));
        assert_eq!(j.rank(), 1);
    }

    #[test]
    fn embed_rejects_oversized_source() {
        let target = Space::zero(2);
        assert_eq!(
            target.embed(1),
            Err(SubspaceError::TooBig { source_dim: 1, target_dim: 0 })
        );
    }

    #[test]
    fn iso_between_zero_subspaces_is_empty_map() {
        let j = iso(&Space::zero(2), &Space::zero(2)).unwrap();
        assert_eq!((j.rows(), j.cols()), (2, 0));
    }

    #[test]
    fn iso_between_axes() {
        let source = Space::span(2, &Mat::from_ints(&[&[1], &[0]]));
        let target = Space::span(2, &Mat::from_ints(&[&[0], &[1]]));
        let j = iso(&source, &target).unwrap();
        // Source coordinate 1 (the vector (1,0)) is sent to (0,1).
        assert_eq!(j, Mat::from_ints(&[&[0], &[1]]));
        assert_eq!(Space::image_of(&j), target);
    }

    #[test]
    fn iso_on_same_subspace_fixes_basis() {
        let s = Space::span(2, &Mat::from_ints(&[&[1], &[2]]));
        assert_eq!(iso(&s, &s).unwrap(), *s.basis());
    }

    #[test]
    fn iso_rejects_dimension_mismatch() {
        assert_eq!(
            iso(&Space::full(2), &Space::zero(2)),
            Err(SubspaceError::DimMismatch { source_dim: 2, target_dim: 0 })
        );
    }

    #[test]
    fn equality_ignores_spanning_set() {
        let a = Space::span(2, &Mat::from_ints(&[&[1, 3], &[1, 1]]));
        let b = Space::span(2, &Mat::from_ints(&[&[2, 0], &[0, 4]]));
        assert_eq!(a, b);
    }
}
