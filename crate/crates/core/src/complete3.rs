//! Decide, construct, and certify invertible completions of 3×3 block
//! upper-triangular matrices with prescribed diagonal.
//!
//! An instance fixes the diagonal blocks A, B, C; a completion supplies the
//! strictly-upper blocks D, E, F of
//!
//! ```text
//!     | A  D  E |
//! M = | 0  B  F |
//!     | 0  0  C |
//! ```
//!
//! Each diagonal block maps its own domain space to its own codomain space,
//! and the two may have different dimensions. This rectangular setup is
//! deliberate: with square blocks, injective implies invertible and the
//! completion question collapses to "are A, B, C all invertible". Letting
//! domains and codomains differ is what makes left-invertible-but-not-
//! invertible diagonals — and hence a non-trivial completion problem —
//! realizable at finite scale. All feasibility conditions read verbatim in
//! this setting, with cokernels taken in the codomains.
//!
//! Feasibility is decided by exact rank arithmetic; for finite-dimensional
//! spaces the conditions are equivalent to the existence of an invertible
//! completion. The constructive path produces D, E, F from a deterministic
//! chain of complements and embeddings, recorded in a [`ConstructionTrace`],
//! and the result is certified by an exact inverse.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{block_assemble, block_diag, MatError};
use crate::subspace::iso;
use crate::{Mat, Space};

/// Diagonal data of a 3×3 completion problem.
///
/// `a` maps the X domain to the X codomain, `b` the Y domain to the Y
/// codomain, `c` the Z domain to the Z codomain. All six dimensions are
/// read off the matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance3 {
    #[serde(rename = "A")]
    pub a: Mat,
    #[serde(rename = "B")]
    pub b: Mat,
    #[serde(rename = "C")]
    pub c: Mat,
}

impl Instance3 {
    pub fn new(a: Mat, b: Mat, c: Mat) -> Self {
        Instance3 { a, b, c }
    }

    pub fn dim_x(&self) -> usize {
        self.a.cols()
    }

    pub fn dim_x_cod(&self) -> usize {
        self.a.rows()
    }

    pub fn dim_y(&self) -> usize {
        self.b.cols()
    }

    pub fn dim_y_cod(&self) -> usize {
        self.b.rows()
    }

    pub fn dim_z(&self) -> usize {
        self.c.cols()
    }

    pub fn dim_z_cod(&self) -> usize {
        self.c.rows()
    }

    /// Total domain dimension (column count of the assembled matrix).
    pub fn domain_dim(&self) -> usize {
        self.dim_x() + self.dim_y() + self.dim_z()
    }

    /// Total codomain dimension (row count of the assembled matrix).
    pub fn codomain_dim(&self) -> usize {
        self.dim_x_cod() + self.dim_y_cod() + self.dim_z_cod()
    }
}

/// The strictly-upper blocks of a completion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Completion3 {
    #[serde(rename = "D")]
    pub d: Mat,
    #[serde(rename = "E")]
    pub e: Mat,
    #[serde(rename = "F")]
    pub f: Mat,
}

impl Completion3 {
    pub fn zero(inst: &Instance3) -> Self {
        Completion3 {
            d: Mat::zero(inst.dim_x_cod(), inst.dim_y()),
            e: Mat::zero(inst.dim_x_cod(), inst.dim_z()),
            f: Mat::zero(inst.dim_y_cod(), inst.dim_z()),
        }
    }
}

/// Names the feasibility conditions in the fixed order they are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    /// A injective and C surjective.
    A,
    /// dim N(B) ≤ codim R(A).
    B1,
    /// codim R(B) ≤ dim N(C).
    B2,
    /// dim N(B) + dim N(C) = codim R(A) + codim R(B).
    C,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::A => write!(f, "a"),
            Condition::B1 => write!(f, "b1"),
            Condition::B2 => write!(f, "b2"),
            Condition::C => write!(f, "c"),
        }
    }
}

/// Exact feasibility verdict with all the dimension data behind it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub a_left_invertible: bool,
    pub c_right_invertible: bool,
    /// dim N(B)
    pub alpha_b: usize,
    /// dim N(C)
    pub alpha_c: usize,
    /// codim R(A)
    pub beta_a: usize,
    /// codim R(B)
    pub beta_b: usize,
    pub b1: bool,
    pub b2: bool,
    pub c_iso: bool,
    pub feasible: bool,
}

impl FeasibilityReport {
    /// First failing condition in the fixed order a, b1, b2, c.
    pub fn first_failure(&self) -> Option<Condition> {
        if !(self.a_left_invertible && self.c_right_invertible) {
            Some(Condition::A)
        } else if !self.b1 {
            Some(Condition::B1)
        } else if !self.b2 {
            Some(Condition::B2)
        } else if !self.c_iso {
            Some(Condition::C)
        } else {
            None
        }
    }
}

/// Every intermediate subspace and map of the completion construction.
///
/// The four complements split the spaces the construction routes through:
/// `x1` complements R(A) in the X codomain, `y1` complements R(B) in the Y
/// codomain, `y2` complements N(B) in the Y domain, `z1` complements N(C)
/// in the Z domain. `j1` embeds N(B) into `x1`, `j2` embeds `y1` into N(C),
/// and `j` is the bridge isomorphism between the leftover pieces
/// `rj2_prime` and `rj1_prime`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub x1: Space,
    pub y1: Space,
    pub y2: Space,
    pub z1: Space,
    pub nb: Space,
    pub nc: Space,
    pub j1: Mat,
    pub j2: Mat,
    pub rj1: Space,
    pub rj1_prime: Space,
    pub rj2: Space,
    pub rj2_prime: Space,
    pub j: Mat,
}

/// An invertibility certificate: the matrix together with its exact inverse.
/// Both products are verified on construction and on deserialization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCertificate")]
pub struct Certificate {
    #[serde(rename = "M")]
    m: Mat,
    #[serde(rename = "M_inverse")]
    m_inverse: Mat,
}

#[derive(Deserialize)]
struct RawCertificate {
    #[serde(rename = "M")]
    m: Mat,
    #[serde(rename = "M_inverse")]
    m_inverse: Mat,
}

impl TryFrom<RawCertificate> for Certificate {
    type Error = String;

    fn try_from(raw: RawCertificate) -> Result<Self, String> {
        Certificate::new(raw.m, raw.m_inverse).map_err(|e| e.to_string())
    }
}

impl Certificate {
    pub fn new(m: Mat, m_inverse: Mat) -> Result<Self, MatError> {
        let n = m.rows();
        if !m.is_square() || m_inverse.rows() != n || m_inverse.cols() != n {
            return Err(MatError::ShapeMismatch(format!(
                "certificate needs square matrices of equal size, got {}x{} and {}x{}",
                m.rows(),
                m.cols(),
                m_inverse.rows(),
                m_inverse.cols()
            )));
        }
        let id = Mat::identity(n);
        if m.mul(&m_inverse) != id || m_inverse.mul(&m) != id {
            return Err(MatError::ShapeMismatch(
                "claimed inverse fails the two-sided product check".into(),
            ));
        }
        Ok(Certificate { m, m_inverse })
    }

    pub fn matrix(&self) -> &Mat {
        &self.m
    }

    pub fn inverse(&self) -> &Mat {
        &self.m_inverse
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompleteError {
    #[error("instance is infeasible: condition {0} fails")]
    Infeasible(Condition),
    #[error(transparent)]
    Shape(#[from] MatError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular: rank {rank}, nonzero kernel vector attached")]
    Singular { rank: usize, kernel_witness: Mat },
}

/// Exact feasibility check. In finite dimensions the `feasible` flag is
/// equivalent to the existence of an invertible completion: every operator
/// is Fredholm, so the necessary conditions are also sufficient.
pub fn check_conditions(inst: &Instance3) -> FeasibilityReport {
    let rank_a = inst.a.rank();
    let rank_b = inst.b.rank();
    let rank_c = inst.c.rank();
    let alpha_b = inst.dim_y() - rank_b;
    let alpha_c = inst.dim_z() - rank_c;
    let beta_a = inst.dim_x_cod() - rank_a;
    let beta_b = inst.dim_y_cod() - rank_b;
    let a_left_invertible = rank_a == inst.dim_x();
    let c_right_invertible = rank_c == inst.dim_z_cod();
    let b1 = alpha_b <= beta_a;
    let b2 = beta_b <= alpha_c;
    let c_iso = alpha_b + alpha_c == beta_a + beta_b;
    let feasible = a_left_invertible && c_right_invertible && b1 && b2 && c_iso;
    FeasibilityReport {
        a_left_invertible,
        c_right_invertible,
        alpha_b,
        alpha_c,
        beta_a,
        beta_b,
        b1,
        b2,
        c_iso,
        feasible,
    }
}

/// Constructs an invertible completion for a feasible instance, together
/// with the full trace of complements, embeddings and the bridge
/// isomorphism it is assembled from.
///
/// The completion acts as follows: D vanishes on `y2` and agrees with `j1`
/// on N(B); F vanishes on `z1 ⊕ rj2_prime` and inverts `j2` on `rj2`; E
/// vanishes on `z1 ⊕ rj2` and agrees with `j` on `rj2_prime`. All
/// complements and embeddings use the canonical deterministic rules of the
/// subspace module, so equal inputs give bit-identical completions.
pub fn construct_completion(
    inst: &Instance3,
) -> Result<(Completion3, ConstructionTrace), CompleteError> {
    let report = check_conditions(inst);
    if let Some(condition) = report.first_failure() {
        return Err(CompleteError::Infeasible(condition));
    }

    let range_a = Space::image_of(&inst.a);
    let x1 = range_a.complement();
    let range_b = Space::image_of(&inst.b);
    let y1 = range_b.complement();
    let nb = Space::kernel_of(&inst.b);
    let y2 = nb.complement();
    let nc = Space::kernel_of(&inst.c);
    let z1 = nc.complement();

    // J1 : N(B) → x1 and J2 : y1 → N(C), both left invertible; the leftover
    // pieces of x1 and N(C) are matched by the bridge isomorphism J.
    let j1 = x1.embed(report.alpha_b).expect("b1 guarantees the embedding");
    let rj1 = x1.basis_cols(0..report.alpha_b);
    let rj1_prime = x1.basis_cols(report.alpha_b..x1.dim());
    let j2 = nc.embed(report.beta_b).expect("b2 guarantees the embedding");
    let rj2 = nc.basis_cols(0..report.beta_b);
    let rj2_prime = nc.basis_cols(report.beta_b..nc.dim());
    let j = iso(&rj2_prime, &rj1_prime).expect("condition c matches the leftover dimensions");

    // D reads off N(B)-coordinates of the Y domain and pushes them through J1.
    let y_change = Mat::hstack(&[y2.basis(), nb.basis()]);
    let y_coords = y_change.inverse().expect("Y = y2 ⊕ N(B) is direct");
    let nb_coords = y_coords.submatrix(y2.dim()..inst.dim_y(), 0..inst.dim_y());
    let d = j1.mul(&nb_coords);

    // The Z domain splits as z1 ⊕ rj2_prime ⊕ rj2; E and F each act on one
    // summand and kill the other two.
    let z_change = Mat::hstack(&[z1.basis(), rj2_prime.basis(), rj2.basis()]);
    let z_coords = z_change.inverse().expect("Z = z1 ⊕ N(C) is direct");
    let split_a = z1.dim();
    let split_b = split_a + rj2_prime.dim();
    let rj2_prime_coords = z_coords.submatrix(split_a..split_b, 0..inst.dim_z());
    let rj2_coords = z_coords.submatrix(split_b..inst.dim_z(), 0..inst.dim_z());
    let e = j.mul(&rj2_prime_coords);
    let f = y1.basis().mul(&rj2_coords);

    let trace = ConstructionTrace {
        x1,
        y1,
        y2,
        z1,
        nb,
        nc,
        j1,
        j2,
        rj1,
        rj1_prime,
        rj2,
        rj2_prime,
        j,
    };
    Ok((Completion3 { d, e, f }, trace))
}

fn completion_shapes_match(inst: &Instance3, comp: &Completion3) -> Result<(), MatError> {
    let want = [
        (comp.d.rows(), comp.d.cols(), inst.dim_x_cod(), inst.dim_y(), "D"),
        (comp.e.rows(), comp.e.cols(), inst.dim_x_cod(), inst.dim_z(), "E"),
        (comp.f.rows(), comp.f.cols(), inst.dim_y_cod(), inst.dim_z(), "F"),
    ];
    for (rows, cols, want_rows, want_cols, name) in want {
        if rows != want_rows || cols != want_cols {
            return Err(MatError::ShapeMismatch(format!(
                "{name} is {rows}x{cols}, instance expects {want_rows}x{want_cols}"
            )));
        }
    }
    Ok(())
}

/// Assembles the full block matrix (A D E; 0 B F; 0 0 C).
pub fn assemble(inst: &Instance3, comp: &Completion3) -> Result<Mat, MatError> {
    completion_shapes_match(inst, comp)?;
    block_assemble(
        &[
            vec![inst.a.clone(), comp.d.clone(), comp.e.clone()],
            vec![
                Mat::zero(inst.dim_y_cod(), inst.dim_x()),
                inst.b.clone(),
                comp.f.clone(),
            ],
            vec![
                Mat::zero(inst.dim_z_cod(), inst.dim_x()),
                Mat::zero(inst.dim_z_cod(), inst.dim_y()),
                inst.c.clone(),
            ],
        ],
        &[inst.dim_x_cod(), inst.dim_y_cod(), inst.dim_z_cod()],
        &[inst.dim_x(), inst.dim_y(), inst.dim_z()],
    )
}

/// Certifies invertibility with an exact inverse, or fails with an exact
/// nonzero kernel vector as counterexample witness.
pub fn certify(m: &Mat) -> Result<Certificate, CertifyError> {
    if !m.is_square() {
        return Err(CertifyError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    match m.inverse() {
        Ok(inv) => Ok(Certificate::new(m.clone(), inv).expect("computed inverse passes")),
        Err(MatError::Singular { rank, .. }) => {
            let kernel = m.kernel_basis();
            let witness = kernel.submatrix(0..kernel.rows(), 0..1);
            Err(CertifyError::Singular { rank, kernel_witness: witness })
        }
        Err(_) => unreachable!("square matrix inversion fails only on rank deficiency"),
    }
}

/// The five-factor decomposition of the assembled matrix:
///
/// ```text
/// M = diag(I,I,C) · (I 0 E; 0 I F; 0 0 I) · diag(I,B,I)
///       · (I D 0; 0 I 0; 0 0 I) · diag(A,I,I)
/// ```
///
/// returned leftmost factor first. The exact product of the five factors
/// equals `assemble(inst, comp)`, and the second and fourth factors are
/// invertible for every completion (they are unit block-triangular).
pub fn factorize(inst: &Instance3, comp: &Completion3) -> Result<[Mat; 5], MatError> {
    completion_shapes_match(inst, comp)?;
    let (_dx, dxc) = (inst.dim_x(), inst.dim_x_cod());
    let (dy, dyc) = (inst.dim_y(), inst.dim_y_cod());
    let dz = inst.dim_z();

    let f1 = block_diag(&[&Mat::identity(dxc), &Mat::identity(dyc), &inst.c]);
    let f2 = block_assemble(
        &[
            vec![Mat::identity(dxc), Mat::zero(dxc, dyc), comp.e.clone()],
            vec![Mat::zero(dyc, dxc), Mat::identity(dyc), comp.f.clone()],
            vec![Mat::zero(dz, dxc), Mat::zero(dz, dyc), Mat::identity(dz)],
        ],
        &[dxc, dyc, dz],
        &[dxc, dyc, dz],
    )?;
    let f3 = block_diag(&[&Mat::identity(dxc), &inst.b, &Mat::identity(dz)]);
    let f4 = block_assemble(
        &[
            vec![Mat::identity(dxc), comp.d.clone(), Mat::zero(dxc, dz)],
            vec![Mat::zero(dy, dxc), Mat::identity(dy), Mat::zero(dy, dz)],
            vec![Mat::zero(dz, dxc), Mat::zero(dz, dy), Mat::identity(dz)],
        ],
        &[dxc, dy, dz],
        &[dxc, dy, dz],
    )?;
    let f5 = block_diag(&[&inst.a, &Mat::identity(dy), &Mat::identity(dz)]);
    Ok([f1, f2, f3, f4, f5])
}

/// Invertibility flags of the three diagonal blocks and the assembled
/// matrix, plus the linkage verdict: whenever any three of the four are
/// invertible, so is the fourth. `implication_holds` is therefore true
/// exactly when the number of invertible operators is not three.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeOfFourReport {
    pub a_invertible: bool,
    pub b_invertible: bool,
    pub c_invertible: bool,
    pub m_invertible: bool,
    pub implication_holds: bool,
}

/// Checks the invertibility linkage between A, B, C and the assembled M for
/// the given completion.
pub fn three_of_four_check(
    inst: &Instance3,
    comp: &Completion3,
) -> Result<ThreeOfFourReport, MatError> {
    let m = assemble(inst, comp)?;
    let flags = [
        inst.a.is_invertible(),
        inst.b.is_invertible(),
        inst.c.is_invertible(),
        m.is_invertible(),
    ];
    let invertible_count = flags.iter().filter(|&&f| f).count();
    Ok(ThreeOfFourReport {
        a_invertible: flags[0],
        b_invertible: flags[1],
        c_invertible: flags[2],
        m_invertible: flags[3],
        implication_holds: invertible_count != 3,
    })
}
