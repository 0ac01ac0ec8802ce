//! Information-theoretic comparison measures and the spectral/ultrametric
//! cross-checks.
//!
//! Entropies use the natural logarithm throughout; all uses here are
//! comparative, and the known closed-form anchors are stated base-free.
//! The element distribution is uniform on the ground set, and `0 * ln 0`
//! terms are zero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bifiltration::FirstMergeMatrix;
use crate::error::{Error, Result};
use crate::partition::{Partition, PartitionSequence};

/// Joint and conditional overlap probabilities between two partitions:
/// `joint[i][j] = |T_i & G_j| / n` and `conditional[i][j] = |T_i & G_j| /
/// |G_j|`, rows indexing the target partition, columns the given one.
#[derive(Debug, Clone)]
pub struct OverlapTable {
    pub joint: Vec<Vec<f64>>,
    pub conditional: Vec<Vec<f64>>,
}

pub fn overlap_table(target: &Partition, given: &Partition) -> Result<OverlapTable> {
    let counts = overlap_counts(target, given)?;
    let n = target.n_elements() as f64;
    let joint = counts
        .iter()
        .map(|row| row.iter().map(|&c| c as f64 / n).collect())
        .collect();
    let conditional = counts
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, &c)| c as f64 / given.blocks()[j].len() as f64)
                .collect()
        })
        .collect();
    Ok(OverlapTable { joint, conditional })
}

fn overlap_counts(target: &Partition, given: &Partition) -> Result<Vec<Vec<u64>>> {
    if target.n_elements() != given.n_elements() {
        return Err(Error::GroundSetMismatch {
            left: target.n_elements(),
            right: given.n_elements(),
        });
    }
    let mut counts = vec![vec![0u64; given.len()]; target.len()];
    for x in 0..target.n_elements() as u32 {
        counts[target.block_index(x) as usize][given.block_index(x) as usize] += 1;
    }
    Ok(counts)
}

/// Conditional entropy `H(target | given)` in nats: the expected Shannon
/// information of the target partition once the given one is known. Zero
/// exactly when `given` refines `target`.
pub fn conditional_entropy(target: &Partition, given: &Partition) -> Result<f64> {
    let counts = overlap_counts(target, given)?;
    let n = target.n_elements() as f64;
    let mut h = 0.0;
    for row in &counts {
        for (j, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let joint = c as f64 / n;
            let conditional = c as f64 / given.blocks()[j].len() as f64;
            h -= joint * conditional.ln();
        }
    }
    Ok(h)
}

/// Variation of information `H(p | q) + H(q | p)`, a metric on partitions.
pub fn variation_of_information(p: &Partition, q: &Partition) -> Result<f64> {
    Ok(conditional_entropy(p, q)? + conditional_entropy(q, p)?)
}

/// Mean pairwise variation of information over all unordered layer pairs.
/// Independent of the ordering of the sequence.
pub fn consensus_index(seq: &PartitionSequence) -> Result<f64> {
    let m = seq.len();
    if m < 2 {
        return Err(Error::InvalidConfig(
            "consensus index needs at least two layers".into(),
        ));
    }
    let mut total = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            total += variation_of_information(&seq.partitions()[i], &seq.partitions()[j])?;
        }
    }
    Ok(total / (m * (m - 1) / 2) as f64)
}

/// All triples `(x, y, z)` whose first-merge scales violate the strong
/// triangle inequality `D(x, z) <= max(D(x, y), D(y, z))`, with `y` the
/// chaining middle element and `x < z`. The list is empty exactly when the
/// matrix restricted to co-merging elements is an ultrametric; every
/// reported triple witnesses a triangle 0-conflict.
pub fn strong_triangle_violations(d: &FirstMergeMatrix) -> Vec<(u32, u32, u32)> {
    let n = d.n_elements() as u32;
    let mut out = Vec::new();
    for x in 0..n {
        for z in x + 1..n {
            let direct = d.get(x, z);
            for y in 0..n {
                if y == x || y == z {
                    continue;
                }
                if direct > d.get(x, y).max(d.get(y, z)) {
                    out.push((x, y, z));
                }
            }
        }
    }
    out
}

/// Kernel dimension of the weighted Laplacian `diag(P 1) - P P^T` built
/// from the conditional overlap matrix of `later` given `earlier`, computed
/// by exact rank over the rationals. Equals the 0-dimensional Hilbert
/// function of the bigrade spanning exactly the two partitions.
pub fn laplacian_kernel_dim(earlier: &Partition, later: &Partition) -> Result<usize> {
    let counts = overlap_counts(later, earlier)?;
    let rows = later.len();
    let ratio = |num: u64, den: usize| {
        BigRational::new(BigInt::from(num), BigInt::from(den as u64))
    };
    // P[i][j] = |L_i & E_j| / |E_j|
    let p: Vec<Vec<BigRational>> = counts
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, &c)| ratio(c, earlier.blocks()[j].len()))
                .collect()
        })
        .collect();
    let mut laplacian = vec![vec![BigRational::zero(); rows]; rows];
    for i in 0..rows {
        for k in 0..rows {
            let mut dot = BigRational::zero();
            for j in 0..earlier.len() {
                dot += &p[i][j] * &p[k][j];
            }
            laplacian[i][k] = -dot;
        }
        let row_sum: BigRational = p[i].iter().sum();
        let diagonal = std::mem::replace(&mut laplacian[i][i], BigRational::zero());
        laplacian[i][i] = row_sum + diagonal;
    }
    Ok(rows - rational_rank(&mut laplacian))
}

fn rational_rank(matrix: &mut [Vec<BigRational>]) -> usize {
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !matrix[r][col].is_zero()) else {
            continue;
        };
        matrix.swap(rank, pivot);
        let inv = BigRational::one() / matrix[rank][col].clone();
        for r in 0..rows {
            if r != rank && !matrix[r][col].is_zero() {
                let factor = matrix[r][col].clone() * &inv;
                for c in col..cols {
                    let delta = matrix[rank][c].clone() * &factor;
                    matrix[r][c] -= delta;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
