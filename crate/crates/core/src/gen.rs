//! Seeded random instance generation.
//!
//! Everything here is a pure function of its seed: the PRNG is ChaCha8
//! (`rand_chacha`), whose output stream is fixed across platforms, so
//! generated fixtures are portable and repeat runs are byte-identical.
//!
//! Invertible matrices are built as products of unit lower- and
//! upper-triangular matrices with small integer entries, which guarantees
//! exact invertibility without rejection sampling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complete3::{check_conditions, Condition, Instance3};
use crate::nblock::{CompletionN, InstanceN};
use crate::{Mat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("bounds admit no instance of the requested kind: {0}")]
    UnsatisfiableBounds(String),
}

fn int(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    Rational::from_integer(rng.random_range(-bound..=bound).into())
}

/// Uniform random matrix with integer entries in `[-bound, bound]`.
pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> Mat {
    Mat::from_fn(rows, cols, |_, _| int(rng, bound))
}

/// Invertible matrix as a product of three unit-triangular factors
/// (lower · upper · lower) with integer entries in `[-bound, bound]`.
/// Determinant 1 by construction.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Mat {
    let mut lower = Mat::identity(n);
    let mut upper = Mat::identity(n);
    let mut lower2 = Mat::identity(n);
    for r in 0..n {
        for c in 0..r {
            lower[(r, c)] = int(rng, bound);
            lower2[(r, c)] = int(rng, bound);
        }
        for c in r + 1..n {
            upper[(r, c)] = int(rng, bound);
        }
    }
    lower.mul(&upper).mul(&lower2)
}

/// The canonical rank-`rank` rectangular template: ones on the leading
/// diagonal positions, zero elsewhere.
pub fn rank_template(rows: usize, cols: usize, rank: usize) -> Mat {
    assert!(rank <= rows.min(cols));
    let mut m = Mat::zero(rows, cols);
    for i in 0..rank {
        m[(i, i)] = num_traits::One::one();
    }
    m
}

/// Random matrix of exactly the requested rank: invertible factors wrapped
/// around the rank template.
pub fn matrix_with_rank(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
    rank: usize,
    bound: i64,
) -> Mat {
    let left = random_invertible(rng, rows, bound);
    let right = random_invertible(rng, cols, bound);
    left.mul(&rank_template(rows, cols, rank)).mul(&right)
}

/// Seeded feasible 3-block instance with every space dimension at most
/// `max_dim`. Dimensions are chosen so that all feasibility conditions hold
/// by construction (the kernel/cokernel surplus is shared between the two
/// sides), then the three diagonal blocks are realized with those exact
/// ranks.
pub fn feasible3(seed: u64, max_dim: usize, bound: i64) -> Instance3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let surplus = rng.random_range(0..=max_dim);
    let alpha_b = rng.random_range(0..=max_dim - surplus);
    let beta_b = rng.random_range(0..=max_dim - surplus);
    let beta_a = alpha_b + surplus;
    let alpha_c = beta_b + surplus;
    let rank_a = rng.random_range(0..=max_dim - beta_a);
    let rank_b = rng.random_range(0..=max_dim - alpha_b.max(beta_b));
    let rank_c = rng.random_range(0..=max_dim - alpha_c);
    let a = matrix_with_rank(&mut rng, rank_a + beta_a, rank_a, rank_a, bound);
    let b = matrix_with_rank(&mut rng, rank_b + beta_b, rank_b + alpha_b, rank_b, bound);
    let c = matrix_with_rank(&mut rng, rank_c, rank_c + alpha_c, rank_c, bound);
    let inst = Instance3::new(a, b, c);
    debug_assert!(check_conditions(&inst).feasible);
    inst
}

/// Seeded infeasible 3-block instance. The violated condition is chosen by
/// the seed; the other conditions are arranged to hold, so the feasibility
/// report names exactly the planted failure first.
pub fn infeasible3(seed: u64, max_dim: usize, bound: i64) -> Result<Instance3, GenError> {
    if max_dim == 0 {
        // All dimensions zero forces every condition to hold vacuously.
        return Err(GenError::UnsatisfiableBounds(
            "cannot violate any feasibility condition with max_dim = 0".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let which = match rng.random_range(0..4u32) {
        0 => Condition::A,
        1 => Condition::B1,
        2 => Condition::B2,
        _ => Condition::C,
    };
    let inst = match which {
        Condition::A => {
            // A with a nontrivial kernel; B, C identity-like.
            let dim_x = rng.random_range(1..=max_dim);
            let rank_a = dim_x - 1;
            let a = matrix_with_rank(&mut rng, dim_x, dim_x, rank_a, bound);
            Instance3::new(a, Mat::identity(1.min(max_dim)), Mat::identity(1.min(max_dim)))
        }
        Condition::B1 => {
            // dim N(B) = 1 > codim R(A) = 0.
            let b = Mat::zero(1, 1);
            Instance3::new(Mat::identity(1), b, Mat::identity(1))
        }
        Condition::B2 => {
            // codim R(B) = 1 > dim N(C) = 0.
            let b = Mat::zero(1, 1);
            Instance3::new(Mat::zero(1, 0), b, Mat::identity(1))
        }
        Condition::C => {
            // Surpluses differ: codim R(A) = 1 on the left, 0 on the right.
            let a = Mat::zero(1, 0);
            Instance3::new(a, Mat::identity(1.min(max_dim)), Mat::identity(1.min(max_dim)))
        }
    };
    let report = check_conditions(&inst);
    debug_assert_eq!(report.first_failure(), Some(which));
    Ok(inst)
}

/// Arbitrary seeded 3-block instance: dimensions up to `max_dim`, entries
/// in `[-bound, bound]`. Usually infeasible, sometimes feasible.
pub fn random3(seed: u64, max_dim: usize, bound: i64) -> Instance3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims: Vec<usize> = (0..6).map(|_| rng.random_range(0..=max_dim)).collect();
    Instance3::new(
        random_matrix(&mut rng, dims[1], dims[0], bound),
        random_matrix(&mut rng, dims[3], dims[2], bound),
        random_matrix(&mut rng, dims[5], dims[4], bound),
    )
}

/// Arbitrary seeded n-block instance.
pub fn random_n(seed: u64, n: usize, max_dim: usize, bound: i64) -> InstanceN {
    assert!(n >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diagonals = (0..n)
        .map(|_| {
            let rows = rng.random_range(0..=max_dim);
            let cols = rng.random_range(0..=max_dim);
            random_matrix(&mut rng, rows, cols, bound)
        })
        .collect();
    InstanceN::new(diagonals).expect("n >= 2")
}

/// Seeded n-block instance together with an invertible completion.
///
/// The skeleton is a permutation-shaped matrix: each diagonal block bijects
/// a rank-sized part of its domain onto its range, and every kernel
/// direction of a later block is routed to exactly one cokernel direction
/// of an earlier block through a strictly-upper entry. Scrambling both
/// sides with block-diagonal invertible factors preserves the block
/// structure and invertibility while hiding the skeleton.
pub fn invertible_completion_n(
    seed: u64,
    n: usize,
    max_rank: usize,
    max_routes: usize,
    bound: i64,
) -> (InstanceN, CompletionN) {
    assert!(n >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ranks: Vec<usize> = (0..n).map(|_| rng.random_range(0..=max_rank)).collect();
    let route_count = rng.random_range(0..=max_routes);
    // Route t sends kernel slot of block j to cokernel slot of block i < j.
    let mut routes: Vec<(usize, usize)> = Vec::with_capacity(route_count);
    for _ in 0..route_count {
        let j = rng.random_range(1..n);
        let i = rng.random_range(0..j);
        routes.push((i, j));
    }
    let mut kernel_counts = vec![0usize; n];
    let mut cokernel_counts = vec![0usize; n];
    for &(i, j) in &routes {
        cokernel_counts[i] += 1;
        kernel_counts[j] += 1;
    }
    let domain_dims: Vec<usize> = (0..n).map(|k| ranks[k] + kernel_counts[k]).collect();
    let codomain_dims: Vec<usize> = (0..n).map(|k| ranks[k] + cokernel_counts[k]).collect();

    // Skeleton in split coordinates: identity on each rank part, one 1 per
    // route in the cokernel × kernel corner of its (i, j) block.
    let total_rows: usize = codomain_dims.iter().sum();
    let total_cols: usize = domain_dims.iter().sum();
    let row_offsets: Vec<usize> = codomain_dims
        .iter()
        .scan(0, |acc, d| {
            let at = *acc;
            *acc += d;
            Some(at)
        })
        .collect();
    let col_offsets: Vec<usize> = domain_dims
        .iter()
        .scan(0, |acc, d| {
            let at = *acc;
            *acc += d;
            Some(at)
        })
        .collect();
    let mut skeleton = Mat::zero(total_rows, total_cols);
    for k in 0..n {
        for r in 0..ranks[k] {
            skeleton[(row_offsets[k] + r, col_offsets[k] + r)] = num_traits::One::one();
        }
    }
    let mut used_cok = vec![0usize; n];
    let mut used_ker = vec![0usize; n];
    for &(i, j) in &routes {
        let row = row_offsets[i] + ranks[i] + used_cok[i];
        let col = col_offsets[j] + ranks[j] + used_ker[j];
        skeleton[(row, col)] = num_traits::One::one();
        used_cok[i] += 1;
        used_ker[j] += 1;
    }

    let left_blocks: Vec<Mat> = codomain_dims
        .iter()
        .map(|&d| random_invertible(&mut rng, d, bound))
        .collect();
    let right_blocks: Vec<Mat> = domain_dims
        .iter()
        .map(|&d| random_invertible(&mut rng, d, bound))
        .collect();
    let left = crate::matrix::block_diag(&left_blocks.iter().collect::<Vec<_>>());
    let right = crate::matrix::block_diag(&right_blocks.iter().collect::<Vec<_>>());
    let t = left.mul(&skeleton).mul(&right);

    let diagonals: Vec<Mat> = (0..n)
        .map(|k| {
            t.submatrix(
                row_offsets[k]..row_offsets[k] + codomain_dims[k],
                col_offsets[k]..col_offsets[k] + domain_dims[k],
            )
        })
        .collect();
    let mut blocks = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let block = t.submatrix(
                row_offsets[i]..row_offsets[i] + codomain_dims[i],
                col_offsets[j]..col_offsets[j] + domain_dims[j],
            );
            blocks.push(((i, j), block));
        }
    }
    let inst = InstanceN::new(diagonals).expect("n >= 2");
    let comp = CompletionN::from_blocks(blocks).expect("indices are strictly upper");
    (inst, comp)
}
