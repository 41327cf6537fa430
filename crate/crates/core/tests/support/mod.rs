//! Test-only oracles, kept independent of the library's linear algebra.
//!
//! The determinant is computed by cofactor expansion (no row reduction);
//! the exhaustive completion search runs over the field with two elements
//! on a self-contained bitmask representation. Neither shares code with
//! the implementation paths they check.

#![allow(dead_code)]

use blocktri::{Mat, Rational};
use num_traits::{One, Zero};

/// Exact determinant by cofactor expansion along the first row.
/// The empty 0×0 matrix has determinant one.
pub fn det(m: &Mat) -> Rational {
    assert!(m.is_square(), "determinant needs a square matrix");
    let n = m.rows();
    if n == 0 {
        return Rational::one();
    }
    if n == 1 {
        return m[(0, 0)].clone();
    }
    let mut total = Rational::zero();
    for col in 0..n {
        if m[(0, col)].is_zero() {
            continue;
        }
        let minor = Mat::from_fn(n - 1, n - 1, |r, c| {
            let cc = if c < col { c } else { c + 1 };
            m[(r + 1, cc)].clone()
        });
        let term = m[(0, col)].clone() * det(&minor);
        if col % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Matrix over the field with two elements. Each row is a bitmask; column
/// `c` is bit `c`. Capacity 32 columns, far beyond the sweep sizes.
#[derive(Clone)]
pub struct Gf2Mat {
    pub rows: usize,
    pub cols: usize,
    bits: Vec<u32>,
}

impl Gf2Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(cols <= 32);
        Gf2Mat { rows, cols, bits: vec![0; rows] }
    }

    pub fn set(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.bits[r] |= 1 << c;
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.bits.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let mask = 1u32 << col;
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] & mask != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            for r in 0..rows.len() {
                if r != rank && rows[r] & mask != 0 {
                    rows[r] ^= rows[rank];
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// Block layout of a 3-block completion problem over GF(2) with rank-
/// template diagonals: A has `rank_a` leading ones, and so on. The bits of
/// `combo` fill D, then E, then F row-major.
fn assemble_gf2_3(
    dims: [usize; 6],
    ranks: [usize; 3],
    combo: u64,
) -> Gf2Mat {
    let [dx, dxp, dy, dyp, dz, dzp] = dims;
    let [ra, rb, rc] = ranks;
    let rows = dxp + dyp + dzp;
    let cols = dx + dy + dz;
    let mut m = Gf2Mat::zero(rows, cols);
    for i in 0..ra {
        m.set(i, i);
    }
    for i in 0..rb {
        m.set(dxp + i, dx + i);
    }
    for i in 0..rc {
        m.set(dxp + dyp + i, dx + dy + i);
    }
    let mut bit = 0;
    let mut take = |m: &mut Gf2Mat, r0: usize, c0: usize, h: usize, w: usize| {
        for r in 0..h {
            for c in 0..w {
                if combo >> bit & 1 == 1 {
                    m.set(r0 + r, c0 + c);
                }
                bit += 1;
            }
        }
    };
    take(&mut m, 0, dx, dxp, dy); // D
    take(&mut m, 0, dx + dy, dxp, dz); // E
    take(&mut m, dxp, dx + dy, dyp, dz); // F
    m
}

/// Exhaustive completion search over GF(2) for a 3-block instance with
/// rank-template diagonals: true iff some choice of D, E, F with entries in
/// {0, 1} makes the assembled matrix invertible. A non-square assembly is
/// never invertible, whatever the completion.
pub fn gf2_completion_exists_3(dims: [usize; 6], ranks: [usize; 3]) -> bool {
    let [dx, dxp, dy, dyp, dz, dzp] = dims;
    if dx + dy + dz != dxp + dyp + dzp {
        return false;
    }
    let free_bits = dxp * dy + dxp * dz + dyp * dz;
    assert!(free_bits <= 24, "sweep sized for desk-scale instances");
    (0..1u64 << free_bits).any(|combo| assemble_gf2_3(dims, ranks, combo).is_invertible())
}

/// Exhaustive completion search over GF(2) for an n-block instance with
/// rank-template diagonals.
pub fn gf2_completion_exists_n(
    domain_dims: &[usize],
    codomain_dims: &[usize],
    ranks: &[usize],
) -> bool {
    let n = domain_dims.len();
    assert!(n >= 2 && codomain_dims.len() == n && ranks.len() == n);
    let total_dom: usize = domain_dims.iter().sum();
    let total_cod: usize = codomain_dims.iter().sum();
    if total_dom != total_cod {
        return false;
    }
    let col_off: Vec<usize> = domain_dims
        .iter()
        .scan(0, |a, d| {
            let at = *a;
            *a += d;
            Some(at)
        })
        .collect();
    let row_off: Vec<usize> = codomain_dims
        .iter()
        .scan(0, |a, d| {
            let at = *a;
            *a += d;
            Some(at)
        })
        .collect();
    let mut slots = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for r in 0..codomain_dims[i] {
                for c in 0..domain_dims[j] {
                    slots.push((row_off[i] + r, col_off[j] + c));
                }
            }
        }
    }
    assert!(slots.len() <= 24, "sweep sized for desk-scale instances");
    (0..1u64 << slots.len()).any(|combo| {
        let mut m = Gf2Mat::zero(total_cod, total_dom);
        for k in 0..n {
            for d in 0..ranks[k] {
                m.set(row_off[k] + d, col_off[k] + d);
            }
        }
        for (bit, &(r, c)) in slots.iter().enumerate() {
            if combo >> bit & 1 == 1 {
                m.set(r, c);
            }
        }
        m.is_invertible()
    })
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn det_matches_small_cases() {
        assert_eq!(det(&Mat::zero(0, 0)), Rational::one());
        assert_eq!(det(&Mat::identity(3)), Rational::one());
        assert!(det(&Mat::from_ints(&[&[1, 2], &[2, 4]])).is_zero());
        assert_eq!(
            det(&Mat::from_ints(&[&[0, 1], &[1, 0]])),
            -Rational::one()
        );
    }

    #[test]
    fn gf2_rank_basics() {
        let mut m = Gf2Mat::zero(2, 2);
        m.set(0, 0);
        m.set(1, 0);
        assert_eq!(m.rank(), 1);
        m.set(1, 1);
        assert!(m.is_invertible());
    }
}
