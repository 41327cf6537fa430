//! Dense rectangular matrices with exact row reduction, rank, kernel and
//! image bases, inversion, and block assembly.
//!
//! Entries are stored row-major. Matrices with zero rows or zero columns
//! are first class: dimension-0 spaces occur all over the completion
//! machinery (empty kernels, trivial complements) and every operation here
//! must handle them without special-casing by the caller.

use std::fmt;
use std::ops::{Index, IndexMut, Range};

use num_traits::Zero;
use thiserror::Error;

use crate::scalar::Scalar;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular: rank {rank} < {size}")]
    Singular { rank: usize, size: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// Dense `rows × cols` matrix over the scalar `S`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
}

/// Result of reduced row echelon form: the unique RREF of the input, the
/// pivot column indices in increasing order, and the rank.
#[derive(Clone, PartialEq, Eq)]
pub struct Rref<S> {
    pub reduced: Matrix<S>,
    pub pivot_cols: Vec<usize>,
    pub rank: usize,
}

impl<S: Scalar> fmt::Debug for Rref<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rref")
            .field("reduced", &self.reduced)
            .field("pivot_cols", &self.pivot_cols)
            .field("rank", &self.rank)
            .finish()
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn new(rows: usize, cols: usize, entries: Vec<S>) -> Self {
        assert_eq!(
            entries.len(),
            rows * cols,
            "entry vector length must equal rows*cols"
        );
        Matrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix::new(rows, cols, vec![S::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Matrix::new(rows, cols, entries)
    }

    /// Builds a matrix from row vectors. An empty slice gives the 0×0 matrix.
    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        for row in rows {
            assert_eq!(row.len(), cols, "all rows must have equal length");
        }
        Matrix::new(
            rows.len(),
            cols,
            rows.iter().flat_map(|r| r.iter().cloned()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() + other[(r, c)].clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() - other[(r, c)].clone()
        })
    }

    pub fn neg(&self) -> Self {
        Matrix::from_fn(self.rows, self.cols, |r, c| -self[(r, c)].clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "inner dimensions must agree ({}x{} * {}x{})",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out: Matrix<S> = Matrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let term = a.clone() * rhs[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + term;
                }
            }
        }
        out
    }

    /// Copies the rectangle `[row_range) × [col_range)` out of the matrix.
    pub fn submatrix(&self, row_range: Range<usize>, col_range: Range<usize>) -> Self {
        assert!(row_range.end <= self.rows && col_range.end <= self.cols);
        Matrix::from_fn(row_range.len(), col_range.len(), |r, c| {
            self[(row_range.start + r, col_range.start + c)].clone()
        })
    }

    /// Overwrites the rectangle starting at `(r0, c0)` with `block`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)].clone();
            }
        }
    }

    /// Concatenates matrices with equal row counts side by side.
    pub fn hstack(parts: &[&Self]) -> Self {
        let rows = parts.first().map_or(0, |m| m.rows);
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zero(rows, cols);
        let mut at = 0;
        for part in parts {
            assert_eq!(part.rows, rows, "hstack parts must have equal row counts");
            out.set_block(0, at, part);
            at += part.cols;
        }
        out
    }

    /// Reduced row echelon form with pivot bookkeeping. Exact and unique:
    /// identical inputs give bit-identical outputs.
    pub fn rref(&self) -> Rref<S> {
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(src) = (pivot_row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(pivot_row, src);
            let pivot = m[(pivot_row, col)].clone();
            for c in col..m.cols {
                m[(pivot_row, c)] = m[(pivot_row, c)].clone() / pivot.clone();
            }
            for r in 0..m.rows {
                if r == pivot_row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    let delta = factor.clone() * m[(pivot_row, c)].clone();
                    m[(r, c)] = m[(r, c)].clone() - delta;
                }
            }
            pivot_cols.push(col);
            pivot_row += 1;
        }
        let rank = pivot_cols.len();
        Rref { reduced: m, pivot_cols, rank }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// True for square matrices of full rank (the empty 0×0 matrix counts).
    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Basis of the null space, one basis vector per column. Column count is
    /// `cols − rank`, and `self · kernel_basis(self) = 0` exactly.
    ///
    /// Uses the standard RREF back-substitution basis: each free column gets
    /// the unit value, pivot coordinates are filled in pivot-column order.
    pub fn kernel_basis(&self) -> Self {
        let Rref { reduced, pivot_cols, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols)
            .filter(|c| !pivot_cols.contains(c))
            .collect();
        let mut basis = Matrix::zero(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis[(fc, k)] = S::one();
            for (pr, &pc) in pivot_cols.iter().enumerate() {
                basis[(pc, k)] = -reduced[(pr, fc)].clone();
            }
        }
        basis
    }

    /// Canonical basis of the column space, one basis vector per column.
    /// Column count equals the rank. The basis is the reduced echelon basis
    /// of the column space, so equal column spaces give equal results.
    pub fn image_basis(&self) -> Self {
        let r = self.transpose().rref();
        r.reduced.submatrix(0..r.rank, 0..self.rows).transpose()
    }

    /// Exact inverse via Gauss–Jordan elimination on the augmented matrix.
    pub fn inverse(&self) -> Result<Self, MatError> {
        if self.rows != self.cols {
            return Err(MatError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let aug = Matrix::hstack(&[self, &Matrix::identity(n)]);
        let r = aug.rref();
        let rank = r.pivot_cols.iter().filter(|&&c| c < n).count();
        if rank < n {
            return Err(MatError::Singular { rank, size: n });
        }
        Ok(r.reduced.submatrix(0..n, n..2 * n))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl Matrix<Rational> {
    /// Test- and generator-friendly constructor from integer rows.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_fn(rows.len(), cols, |r, c| Rational::from_integer(rows[r][c].into()))
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (r, c): (usize, usize)) -> &S {
        debug_assert!(r < self.rows && c < self.cols);
        &self.entries[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.entries[r * self.cols + c]
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Assembles a block matrix from a 2D grid of blocks. Block `(i, j)` must be
/// `row_dims[i] × col_dims[j]`; the result is `Σrow_dims × Σcol_dims` and
/// reading any block back yields the input exactly.
pub fn block_assemble<S: Scalar>(
    blocks: &[Vec<Matrix<S>>],
    row_dims: &[usize],
    col_dims: &[usize],
) -> Result<Matrix<S>, MatError> {
    if blocks.len() != row_dims.len() {
        return Err(MatError::ShapeMismatch(format!(
            "grid has {} block rows, expected {}",
            blocks.len(),
            row_dims.len()
        )));
    }
    let total_rows = row_dims.iter().sum();
    let total_cols = col_dims.iter().sum();
    let mut out = Matrix::zero(total_rows, total_cols);
    let mut r0 = 0;
    for (i, block_row) in blocks.iter().enumerate() {
        if block_row.len() != col_dims.len() {
            return Err(MatError::ShapeMismatch(format!(
                "block row {i} has {} blocks, expected {}",
                block_row.len(),
                col_dims.len()
            )));
        }
        let mut c0 = 0;
        for (j, block) in block_row.iter().enumerate() {
            if block.rows() != row_dims[i] || block.cols() != col_dims[j] {
                return Err(MatError::ShapeMismatch(format!(
                    "block ({i},{j}) is {}x{}, slot expects {}x{}",
                    block.rows(),
                    block.cols(),
                    row_dims[i],
                    col_dims[j]
                )));
            }
            out.set_block(r0, c0, block);
            c0 += col_dims[j];
        }
        r0 += row_dims[i];
    }
    Ok(out)
}

/// Block-diagonal assembly of square or rectangular blocks.
pub fn block_diag<S: Scalar>(blocks: &[&Matrix<S>]) -> Matrix<S> {
    let total_rows = blocks.iter().map(|b| b.rows()).sum();
    let total_cols = blocks.iter().map(|b| b.cols()).sum();
    let mut out = Matrix::zero(total_rows, total_cols);
    let (mut r0, mut c0) = (0, 0);
    for block in blocks {
        out.set_block(r0, c0, block);
        r0 += block.rows();
        c0 += block.cols();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Mat;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rref_empty_matrix() {
        let r = Mat::zero(0, 0).rref();
        assert_eq!(r.reduced, Mat::zero(0, 0));
        assert!(r.pivot_cols.is_empty());
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn rref_identity() {
        let r = Mat::identity(3).rref();
        assert_eq!(r.reduced, Mat::identity(3));
        assert_eq!(r.pivot_cols, vec![0, 1, 2]);
        assert_eq!(r.rank, 3);
    }

    #[test]
    fn rref_rank_deficient() {
        // Hand row-reduction of [[1,2],[2,4]]; rank cross-checked by the
        // vanishing 2x2 determinant 1*4 - 2*2 = 0.
        let m = Mat::from_ints(&[&[1, 2], &[2, 4]]);
        let det = m[(0, 0)].clone() * m[(1, 1)].clone() - m[(0, 1)].clone() * m[(1, 0)].clone();
        assert!(det.is_zero());
        let r = m.rref();
        assert_eq!(r.reduced, Mat::from_ints(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.pivot_cols, vec![0]);
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn kernel_of_injective_map_is_empty() {
        let k = Mat::identity(2).kernel_basis();
        assert_eq!((k.rows(), k.cols()), (2, 0));
    }

    #[test]
    fn kernel_single_equation() {
        // One equation in two unknowns: x = 0, free y.
        let k = Mat::from_ints(&[&[1, 0]]).kernel_basis();
        assert_eq!(k, Mat::from_ints(&[&[0], &[1]]));
    }

    #[test]
    fn kernel_rank_one_square() {
        let m = Mat::from_ints(&[&[1, 0], &[0, 0]]);
        let k = m.kernel_basis();
        assert_eq!(k, Mat::from_ints(&[&[0], &[1]]));
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn image_of_zero_map_is_empty() {
        let b = Mat::zero(2, 2).image_basis();
        assert_eq!((b.rows(), b.cols()), (2, 0));
    }

    #[test]
    fn image_of_identity_is_standard_basis() {
        assert_eq!(Mat::identity(2).image_basis(), Mat::identity(2));
    }

    #[test]
    fn image_of_column() {
        let b = Mat::from_ints(&[&[1], &[0]]).image_basis();
        assert_eq!(b, Mat::from_ints(&[&[1], &[0]]));
    }

    #[test]
    fn inverse_identity() {
        assert_eq!(Mat::identity(4).inverse().unwrap(), Mat::identity(4));
    }

    #[test]
    fn inverse_diagonal() {
        let m = Mat::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) => rat(2, 1),
            (1, 1) => rat(1, 3),
            _ => rat(0, 1),
        });
        let expected = Mat::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) => rat(1, 2),
            (1, 1) => rat(3, 1),
            _ => rat(0, 1),
        });
        assert_eq!(m.inverse().unwrap(), expected);
    }

    #[test]
    fn inverse_errors() {
        assert_eq!(
            Mat::zero(2, 3).inverse(),
            Err(MatError::NotSquare { rows: 2, cols: 3 })
        );
        assert_eq!(
            Mat::from_ints(&[&[1, 2], &[2, 4]]).inverse(),
            Err(MatError::Singular { rank: 1, size: 2 })
        );
    }

    #[test]
    fn inverse_of_empty_matrix() {
        assert_eq!(Mat::zero(0, 0).inverse().unwrap(), Mat::zero(0, 0));
    }

    #[test]
    fn block_assemble_single_block() {
        let m = Mat::from_ints(&[&[1, 2], &[3, 4]]);
        let out = block_assemble(&[vec![m.clone()]], &[2], &[2]).unwrap();
        assert_eq!(out, m);
    }

    #[test]
    fn block_assemble_diagonal() {
        let a = Mat::from_ints(&[&[1]]);
        let b = Mat::from_ints(&[&[2, 0], &[0, 3]]);
        let out = block_diag(&[&a, &b]);
        assert_eq!(out, Mat::from_ints(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]));
    }

    #[test]
    fn block_assemble_rejects_bad_shapes() {
        let err = block_assemble(
            &[vec![Mat::zero(1, 2), Mat::zero(2, 2)]],
            &[1],
            &[2, 2],
        )
        .unwrap_err();
        assert!(matches!(err, MatError::ShapeMismatch(_)));
    }

    #[test]
    fn zero_dimension_shapes_multiply() {
        let a = Mat::zero(3, 0);
        let b = Mat::zero(0, 2);
        assert_eq!(a.mul(&b), Mat::zero(3, 2));
        assert_eq!(Mat::zero(0, 4).kernel_basis(), Mat::identity(4));
    }
}
