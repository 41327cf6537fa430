//! The n×n machinery: assemble partial block upper-triangular matrices,
//! check the necessary conditions for an invertible completion, reduce an
//! invertible completion to kernel/cokernel coordinates, and extract the
//! residual block matrix whose invertibility those coordinates force.
//!
//! For n = 3 the necessary conditions agree exactly with the feasibility
//! check of [`crate::complete3`], where they are also sufficient. For
//! n > 3 they are necessary only; [`search_completion_n`] is an
//! exploratory randomized search and a `None` result proves nothing.

use std::collections::BTreeMap;
use std::ops::Range;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::matrix::{block_assemble, block_diag, MatError};
use crate::{Mat, Rational, Space};

/// Diagonal data of an n×n completion problem: one block per position,
/// block i mapping its own domain space to its own codomain space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceN {
    diagonals: Vec<Mat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NblockError {
    #[error("an n-block instance needs at least 2 diagonal blocks, got {0}")]
    TooFewBlocks(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("assembled matrix is not invertible: {reason}")]
    NotInvertible { reason: String, kernel_witness: Mat },
}

impl InstanceN {
    pub fn new(diagonals: Vec<Mat>) -> Result<Self, NblockError> {
        if diagonals.len() < 2 {
            return Err(NblockError::TooFewBlocks(diagonals.len()));
        }
        Ok(InstanceN { diagonals })
    }

    pub fn n(&self) -> usize {
        self.diagonals.len()
    }

    pub fn diagonals(&self) -> &[Mat] {
        &self.diagonals
    }

    pub fn domain_dims(&self) -> Vec<usize> {
        self.diagonals.iter().map(Mat::cols).collect()
    }

    pub fn codomain_dims(&self) -> Vec<usize> {
        self.diagonals.iter().map(Mat::rows).collect()
    }
}

/// The strictly-upper blocks, keyed by 0-based (i, j) with i < j. Missing
/// blocks are zero. The JSON encoding uses 1-based "i,j" keys.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CompletionN {
    blocks: BTreeMap<(usize, usize), Mat>,
}

impl CompletionN {
    pub fn zero() -> Self {
        CompletionN::default()
    }

    pub fn from_blocks(
        blocks: impl IntoIterator<Item = ((usize, usize), Mat)>,
    ) -> Result<Self, NblockError> {
        let mut map = BTreeMap::new();
        for ((i, j), block) in blocks {
            if i >= j {
                return Err(NblockError::ShapeMismatch(format!(
                    "block ({i},{j}) is not strictly upper triangular"
                )));
            }
            map.insert((i, j), block);
        }
        Ok(CompletionN { blocks: map })
    }

    pub fn block(&self, i: usize, j: usize) -> Option<&Mat> {
        self.blocks.get(&(i, j))
    }

    pub fn blocks(&self) -> &BTreeMap<(usize, usize), Mat> {
        &self.blocks
    }
}

/// Assembles the block upper-triangular matrix with the instance diagonals
/// and the completion's strictly-upper blocks.
pub fn assemble_n(inst: &InstanceN, comp: &CompletionN) -> Result<Mat, NblockError> {
    let n = inst.n();
    let row_dims = inst.codomain_dims();
    let col_dims = inst.domain_dims();
    for (&(i, j), block) in comp.blocks() {
        if j >= n {
            return Err(NblockError::ShapeMismatch(format!(
                "completion block ({i},{j}) is out of range for n = {n}"
            )));
        }
        if block.rows() != row_dims[i] || block.cols() != col_dims[j] {
            return Err(NblockError::ShapeMismatch(format!(
                "completion block ({i},{j}) is {}x{}, instance expects {}x{}",
                block.rows(),
                block.cols(),
                row_dims[i],
                col_dims[j]
            )));
        }
    }
    let grid: Vec<Vec<Mat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        inst.diagonals[i].clone()
                    } else if i < j {
                        comp.block(i, j)
                            .cloned()
                            .unwrap_or_else(|| Mat::zero(row_dims[i], col_dims[j]))
                    } else {
                        Mat::zero(row_dims[i], col_dims[j])
                    }
                })
                .collect()
        })
        .collect();
    block_assemble(&grid, &row_dims, &col_dims).map_err(|e| match e {
        MatError::ShapeMismatch(msg) => NblockError::ShapeMismatch(msg),
        other => NblockError::ShapeMismatch(other.to_string()),
    })
}

/// Necessary conditions for an invertible completion, with the kernel and
/// cokernel dimensions of every diagonal block. For n = 3 the combined flag
/// agrees with [`crate::complete3::check_conditions`]; for n > 3 the
/// conditions are necessary but not known to be sufficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecessaryReport {
    /// dim N(D_i) for every block.
    pub alpha: Vec<usize>,
    /// codim R(D_i) for every block.
    pub beta: Vec<usize>,
    pub d1_left_invertible: bool,
    pub dn_right_invertible: bool,
    /// dim N(D_2) ≤ codim R(D_1).
    pub b1: bool,
    /// codim R(D_{n-1}) ≤ dim N(D_n).
    pub b2: bool,
    /// Σ_{i≥2} dim N(D_i) = Σ_{i≤n-1} codim R(D_i).
    pub c_sum: bool,
    pub all_hold: bool,
}

pub fn check_necessary_n(inst: &InstanceN) -> NecessaryReport {
    let n = inst.n();
    let ranks: Vec<usize> = inst.diagonals.iter().map(Mat::rank).collect();
    let alpha: Vec<usize> = (0..n).map(|i| inst.diagonals[i].cols() - ranks[i]).collect();
    let beta: Vec<usize> = (0..n).map(|i| inst.diagonals[i].rows() - ranks[i]).collect();
    let d1_left_invertible = alpha[0] == 0;
    let dn_right_invertible = beta[n - 1] == 0;
    let b1 = alpha[1] <= beta[0];
    let b2 = beta[n - 2] <= alpha[n - 1];
    let c_sum = alpha[1..].iter().sum::<usize>() == beta[..n - 1].iter().sum::<usize>();
    let all_hold = d1_left_invertible && dn_right_invertible && b1 && b2 && c_sum;
    NecessaryReport {
        alpha,
        beta,
        d1_left_invertible,
        dn_right_invertible,
        b1,
        b2,
        c_sum,
        all_hold,
    }
}

/// Output of [`reduce`]: invertible coordinate changes U (codomain side)
/// and V (domain side) with `U · T · V = reduced`, where `reduced` isolates
/// an invertible pivot block per diagonal position and leaves residual
/// blocks only in kernel-to-cokernel coordinates. `extracted_b` collects
/// those residual blocks: rows are the concatenated cokernel coordinates of
/// D_1 … D_{n−1}, columns the concatenated kernel coordinates of
/// D_2 … D_n, and the matrix is upper block-triangular.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionArtifacts {
    #[serde(rename = "U")]
    pub u: Mat,
    #[serde(rename = "V")]
    pub v: Mat,
    pub reduced: Mat,
    #[serde(rename = "extracted_B")]
    pub extracted_b: Mat,
    pub kernel_dims: Vec<usize>,
    pub cokernel_dims: Vec<usize>,
}

/// True iff the extracted residual matrix is square and of full rank. The
/// 0×0 matrix is invertible (all kernels and cokernels trivial).
pub fn extracted_invertible(art: &ReductionArtifacts) -> bool {
    art.extracted_b.is_invertible()
}

struct FineBlocks {
    /// Row ranges of R(D_i) coordinates (whole codomain block for i = n−1).
    ran_rows: Vec<Range<usize>>,
    /// Row ranges of cokernel coordinates, i = 0..n−1.
    cok_rows: Vec<Range<usize>>,
    /// Column ranges of kernel-complement coordinates (whole domain block
    /// for j = 0).
    w_cols: Vec<Range<usize>>,
    /// Column ranges of kernel coordinates, j = 1..n.
    ker_cols: Vec<Range<usize>>,
}

impl FineBlocks {
    fn all_rows(&self) -> Vec<Range<usize>> {
        let mut rows: Vec<Range<usize>> = Vec::new();
        for i in 0..self.ran_rows.len() {
            rows.push(self.ran_rows[i].clone());
            if i < self.cok_rows.len() {
                rows.push(self.cok_rows[i].clone());
            }
        }
        rows.retain(|r| !r.is_empty());
        rows
    }

    fn all_cols(&self) -> Vec<Range<usize>> {
        let mut cols: Vec<Range<usize>> = Vec::new();
        for j in 0..self.w_cols.len() {
            cols.push(self.w_cols[j].clone());
            if j >= 1 {
                cols.push(self.ker_cols[j - 1].clone());
            }
        }
        cols.retain(|c| !c.is_empty());
        cols
    }
}

/// Reduces an invertible completion to the coordinates that split every
/// domain into kernel-complement ⊕ kernel and every codomain into
/// range ⊕ cokernel-complement, then eliminates around the invertible
/// pivot blocks in increasing block order.
///
/// Fails with a kernel witness when the assembled matrix is not invertible.
pub fn reduce(inst: &InstanceN, comp: &CompletionN) -> Result<ReductionArtifacts, NblockError> {
    let t = assemble_n(inst, comp)?;
    if !t.is_square() || t.rank() < t.rows() {
        let kernel = t.kernel_basis();
        let witness = if kernel.cols() > 0 {
            kernel.submatrix(0..kernel.rows(), 0..1)
        } else {
            Mat::zero(t.cols(), 0)
        };
        return Err(NblockError::NotInvertible {
            reason: format!("{}x{} with rank {}", t.rows(), t.cols(), t.rank()),
            kernel_witness: witness,
        });
    }

    let n = inst.n();
    let domain_dims = inst.domain_dims();
    let codomain_dims = inst.codomain_dims();

    // Per-block decompositions: domain j splits as complement ⊕ kernel,
    // codomain i as range ⊕ complement. Block 0 keeps its whole domain and
    // block n−1 its whole codomain, mirroring the shape of the reduction.
    let mut v_blocks: Vec<Mat> = Vec::with_capacity(n);
    let mut u_inv_blocks: Vec<Mat> = Vec::with_capacity(n);
    let mut kernel_dims = Vec::with_capacity(n - 1);
    let mut cokernel_dims = Vec::with_capacity(n - 1);
    for (j, d) in inst.diagonals.iter().enumerate() {
        if j == 0 {
            v_blocks.push(Mat::identity(domain_dims[0]));
        } else {
            let kernel = Space::kernel_of(d);
            let complement = kernel.complement();
            kernel_dims.push(kernel.dim());
            v_blocks.push(Mat::hstack(&[complement.basis(), kernel.basis()]));
        }
    }
    for (i, d) in inst.diagonals.iter().enumerate() {
        if i == n - 1 {
            u_inv_blocks.push(Mat::identity(codomain_dims[n - 1]));
        } else {
            let range = Space::image_of(d);
            let complement = range.complement();
            cokernel_dims.push(complement.dim());
            u_inv_blocks.push(Mat::hstack(&[range.basis(), complement.basis()]));
        }
    }

    let v0 = block_diag(&v_blocks.iter().collect::<Vec<_>>());
    let u0_blocks: Vec<Mat> = u_inv_blocks
        .iter()
        .map(|p| p.inverse().expect("range ⊕ complement is a direct decomposition"))
        .collect();
    let u0 = block_diag(&u0_blocks.iter().collect::<Vec<_>>());

    // Fine coordinate ranges.
    let ranks: Vec<usize> = inst.diagonals.iter().map(Mat::rank).collect();
    let mut ran_rows = Vec::with_capacity(n);
    let mut cok_rows = Vec::with_capacity(n - 1);
    let mut offset = 0;
    for i in 0..n {
        if i == n - 1 {
            ran_rows.push(offset..offset + codomain_dims[i]);
            offset += codomain_dims[i];
        } else {
            ran_rows.push(offset..offset + ranks[i]);
            cok_rows.push(offset + ranks[i]..offset + codomain_dims[i]);
            offset += codomain_dims[i];
        }
    }
    let mut w_cols = Vec::with_capacity(n);
    let mut ker_cols = Vec::with_capacity(n - 1);
    offset = 0;
    for j in 0..n {
        if j == 0 {
            w_cols.push(offset..offset + domain_dims[0]);
            offset += domain_dims[0];
        } else {
            let w = domain_dims[j] - kernel_dims[j - 1];
            w_cols.push(offset..offset + w);
            ker_cols.push(offset + w..offset + domain_dims[j]);
            offset += domain_dims[j];
        }
    }
    let fine = FineBlocks { ran_rows, cok_rows, w_cols, ker_cols };

    let mut m = u0.mul(&t).mul(&v0);
    let mut u = u0;
    let mut v = v0;

    // Invertibility forces the first block injective and the last
    // surjective, so every pivot block is square invertible.
    for s in 0..n {
        let pr = fine.ran_rows[s].clone();
        let pc = fine.w_cols[s].clone();
        assert_eq!(pr.len(), pc.len(), "pivot block {s} must be square");
        if pr.is_empty() {
            continue;
        }
        let pivot = m.submatrix(pr.clone(), pc.clone());
        let pivot_inv = pivot
            .inverse()
            .expect("pivot blocks of an invertible completion are invertible");

        // Clear the pivot row: column operations on every other col block.
        for jc in fine.all_cols() {
            if jc == pc {
                continue;
            }
            let target = m.submatrix(pr.clone(), jc.clone());
            if target.is_zero() {
                continue;
            }
            let coef = pivot_inv.mul(&target);
            let m_update = m.submatrix(0..m.rows(), pc.clone()).mul(&coef);
            let m_new = m.submatrix(0..m.rows(), jc.clone()).sub(&m_update);
            m.set_block(0, jc.start, &m_new);
            let v_update = v.submatrix(0..v.rows(), pc.clone()).mul(&coef);
            let v_new = v.submatrix(0..v.rows(), jc.clone()).sub(&v_update);
            v.set_block(0, jc.start, &v_new);
        }
        // Clear the pivot column: row operations on every other row block.
        for ir in fine.all_rows() {
            if ir == pr {
                continue;
            }
            let target = m.submatrix(ir.clone(), pc.clone());
            if target.is_zero() {
                continue;
            }
            let coef = target.mul(&pivot_inv);
            let m_update = coef.mul(&m.submatrix(pr.clone(), 0..m.cols()));
            let m_new = m.submatrix(ir.clone(), 0..m.cols()).sub(&m_update);
            m.set_block(ir.start, 0, &m_new);
            let u_update = coef.mul(&u.submatrix(pr.clone(), 0..u.cols()));
            let u_new = u.submatrix(ir.clone(), 0..u.cols()).sub(&u_update);
            u.set_block(ir.start, 0, &u_new);
        }
    }

    assert_eq!(u.mul(&t).mul(&v), m, "accumulated operations must reproduce the reduction");

    // Assemble the residual matrix in kernel/cokernel coordinates and check
    // its promised upper block-triangular shape.
    let total_cok: usize = cokernel_dims.iter().sum();
    let total_ker: usize = kernel_dims.iter().sum();
    let mut extracted = Mat::zero(total_cok, total_ker);
    let mut row_at = 0;
    for (i, &cok_dim) in cokernel_dims.iter().enumerate() {
        let mut col_at = 0;
        for (j, &ker_dim) in kernel_dims.iter().enumerate() {
            let block = m.submatrix(fine.cok_rows[i].clone(), fine.ker_cols[j].clone());
            if j < i {
                assert!(
                    block.is_zero(),
                    "residual blocks below the diagonal must vanish"
                );
            }
            extracted.set_block(row_at, col_at, &block);
            col_at += ker_dim;
        }
        row_at += cok_dim;
    }

    Ok(ReductionArtifacts {
        u,
        v,
        reduced: m,
        extracted_b: extracted,
        kernel_dims,
        cokernel_dims,
    })
}

/// Randomized search for an invertible completion. Trial 0 is always the
/// zero completion; later trials draw every strictly-upper entry uniformly
/// from `[-entry_bound, entry_bound]` with a per-trial ChaCha8 stream, so
/// the outcome is a pure function of `(seed, trials, entry_bound)` and
/// trials can be evaluated in any order. Returns the first success in
/// trial-index order; `None` proves nothing.
pub fn search_completion_n(
    inst: &InstanceN,
    seed: u64,
    trials: usize,
    entry_bound: i64,
) -> Option<(usize, CompletionN)> {
    let domain_dims = inst.domain_dims();
    let codomain_dims = inst.codomain_dims();
    let n = inst.n();
    for trial in 0..trials {
        let comp = if trial == 0 {
            CompletionN::zero()
        } else {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut blocks = BTreeMap::new();
            for (i, &rows) in codomain_dims.iter().enumerate() {
                for (j, &cols) in domain_dims.iter().enumerate().skip(i + 1) {
                    let block = Mat::from_fn(rows, cols, |_, _| {
                        Rational::from_integer(rng.random_range(-entry_bound..=entry_bound).into())
                    });
                    blocks.insert((i, j), block);
                }
            }
            CompletionN { blocks }
        };
        let t = assemble_n(inst, &comp).expect("generated blocks have matching shapes");
        if t.is_invertible() {
            return Some((trial, comp));
        }
    }
    None
}

// JSON encodings: InstanceN as {"n": n, "diagonals": [...]}, CompletionN as
// {"blocks": {"i,j": <Mat>, ...}} with 1-based indices.

impl Serialize for InstanceN {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            n: usize,
            diagonals: &'a [Mat],
        }
        Raw { n: self.n(), diagonals: &self.diagonals }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for InstanceN {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            diagonals: Vec<Mat>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.n != raw.diagonals.len() {
            return Err(D::Error::custom(format!(
                "field n is {} but {} diagonals were given",
                raw.n,
                raw.diagonals.len()
            )));
        }
        InstanceN::new(raw.diagonals).map_err(D::Error::custom)
    }
}

impl Serialize for CompletionN {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            blocks: BTreeMap<String, &'a Mat>,
        }
        let blocks = self
            .blocks
            .iter()
            .map(|(&(i, j), m)| (format!("{},{}", i + 1, j + 1), m))
            .collect();
        Raw { blocks }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CompletionN {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            blocks: BTreeMap<String, Mat>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut blocks = BTreeMap::new();
        for (key, m) in raw.blocks {
            let (i, j) = parse_block_key(&key).map_err(D::Error::custom)?;
            blocks.insert((i, j), m);
        }
        Ok(CompletionN { blocks })
    }
}

fn parse_block_key(key: &str) -> Result<(usize, usize), String> {
    let (left, right) = key
        .split_once(',')
        .ok_or_else(|| format!("block key {key:?} is not of the form \"i,j\""))?;
    let i: usize = left
        .trim()
        .parse()
        .map_err(|_| format!("block key {key:?} has a non-numeric row index"))?;
    let j: usize = right
        .trim()
        .parse()
        .map_err(|_| format!("block key {key:?} has a non-numeric column index"))?;
    if i == 0 || j == 0 {
        return Err(format!("block key {key:?} must use 1-based indices"));
    }
    if i >= j {
        return Err(format!(
            "block key {key:?} must be strictly upper triangular (i < j)"
        ));
    }
    Ok((i - 1, j - 1))
}
