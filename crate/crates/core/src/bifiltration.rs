//! The three bifiltration constructions over a sequence of partitions, each
//! materialised one bigrade at a time, plus first-merge matrices.
//!
//! At bigrade `(i, j)` the element-based complex is the union of solid
//! simplices of every cluster appearing in layers `i..=j`; the nerve-based
//! complex has one vertex per cluster and a simplex for every family of
//! clusters with a common element; the Merge-Rips complex is the flag
//! complex of the first-merge matrix thresholded at `t_j`. All builders are
//! pure: each bigrade is constructed independently.

use crate::complex::{ComplexBuilder, SimplicialComplex};
use crate::error::{Error, Result};
use crate::partition::PartitionSequence;

/// Default cap on candidate triangles per element-based bigrade build.
pub const DEFAULT_TRIANGLE_CAP: u64 = 10_000_000;

/// A cluster of the sequence addressed as (layer, cluster index), the
/// vertex universe of the nerve-based construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NerveVertex {
    pub layer: usize,
    pub cluster: usize,
}

/// Stable global ids for nerve vertices across all bigrades of a sequence,
/// so complexes at different bigrades can be compared by inclusion.
#[derive(Debug, Clone)]
pub struct NerveVertexIndex {
    offsets: Vec<u32>,
}

impl NerveVertexIndex {
    pub fn new(seq: &PartitionSequence) -> Self {
        let mut offsets = Vec::with_capacity(seq.len() + 1);
        let mut total = 0u32;
        for p in seq.partitions() {
            offsets.push(total);
            total += p.len() as u32;
        }
        offsets.push(total);
        Self { offsets }
    }

    pub fn id(&self, v: NerveVertex) -> u32 {
        self.offsets[v.layer] + v.cluster as u32
    }

    pub fn vertex(&self, id: u32) -> NerveVertex {
        let layer = match self.offsets.binary_search(&id) {
            Ok(exact) if exact + 1 < self.offsets.len() => exact,
            Ok(exact) => exact - 1,
            Err(next) => next - 1,
        };
        NerveVertex {
            layer,
            cluster: (id - self.offsets[layer]) as usize,
        }
    }

    pub fn total(&self) -> usize {
        *self.offsets.last().expect("non-empty") as usize
    }
}

/// Element-based complex at bigrade `(i, j)` with the default triangle cap.
///
/// Vertices are always the full ground set; each cluster `C` of a layer in
/// the window contributes its solid simplex (restricted to the 2-skeleton).
pub fn build_element_complex(
    seq: &PartitionSequence,
    i: usize,
    j: usize,
) -> Result<SimplicialComplex> {
    build_element_complex_with_cap(seq, i, j, DEFAULT_TRIANGLE_CAP)
}

/// Element-based complex with an explicit cap on candidate triangles
/// (counted per contributing cluster, before deduplication).
pub fn build_element_complex_with_cap(
    seq: &PartitionSequence,
    i: usize,
    j: usize,
    cap: u64,
) -> Result<SimplicialComplex> {
    seq.check_window(i, j)?;
    let mut candidate_triangles = 0u64;
    for r in i..=j {
        for block in seq.partitions()[r].blocks() {
            let c = block.len() as u64;
            candidate_triangles += c * c.saturating_sub(1) * c.saturating_sub(2) / 6;
        }
        if candidate_triangles > cap {
            return Err(Error::TriangleCapExceeded {
                required: candidate_triangles,
                cap,
            });
        }
    }
    let mut builder = ComplexBuilder::new();
    for x in 0..seq.n_elements() as u32 {
        builder.add_vertex(x);
    }
    for r in i..=j {
        for block in seq.partitions()[r].blocks() {
            builder.add_clique(block);
        }
    }
    Ok(builder.build())
}

/// Nerve-based complex at bigrade `(i, j)`: one vertex per cluster of the
/// window, an edge per intersecting cluster pair, a triangle per cluster
/// triple with common intersection.
///
/// A family of clusters has non-empty common intersection exactly when some
/// element belongs to all of them, so the 2-skeleton is the union, over
/// elements, of the clique on that element's clusters in the window.
pub fn build_nerve_complex(seq: &PartitionSequence, i: usize, j: usize) -> Result<SimplicialComplex> {
    seq.check_window(i, j)?;
    let index = NerveVertexIndex::new(seq);
    let mut builder = ComplexBuilder::new();
    for r in i..=j {
        for cluster in 0..seq.partitions()[r].len() {
            builder.add_vertex(index.id(NerveVertex { layer: r, cluster }));
        }
    }
    let span = j - i + 1;
    let mut clique: Vec<u32> = Vec::with_capacity(span);
    for x in 0..seq.n_elements() as u32 {
        clique.clear();
        for r in i..=j {
            let cluster = seq.partitions()[r].block_index(x) as usize;
            clique.push(index.id(NerveVertex { layer: r, cluster }));
        }
        // Clusters of distinct layers have distinct ids; one id per layer.
        for a in 0..clique.len() {
            for b in a + 1..clique.len() {
                builder.add_edge(clique[a], clique[b]);
                for c in b + 1..clique.len() {
                    builder.add_triangle(clique[a], clique[b], clique[c]);
                }
            }
        }
    }
    Ok(builder.build())
}

/// Matrix of first-merge scales conditioned on a start layer: entry `(x, y)`
/// is the smallest change point `t_r >= t_i` at which `x` and `y` share a
/// cluster, or infinity if they never do. Diagonal entries are the start
/// scale itself.
#[derive(Debug, Clone)]
pub struct FirstMergeMatrix {
    start_scale: f64,
    n: usize,
    entries: Vec<f64>,
}

impl FirstMergeMatrix {
    pub fn start_scale(&self) -> f64 {
        self.start_scale
    }

    pub fn n_elements(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: u32, y: u32) -> f64 {
        self.entries[x as usize * self.n + y as usize]
    }
}

pub fn first_merge_matrix(seq: &PartitionSequence, start_layer: usize) -> Result<FirstMergeMatrix> {
    seq.check_window(start_layer, start_layer)?;
    let n = seq.n_elements();
    let start_scale = seq.change_points()[start_layer];
    let mut entries = vec![f64::INFINITY; n * n];
    for x in 0..n {
        entries[x * n + x] = start_scale;
    }
    for r in start_layer..seq.len() {
        let t = seq.change_points()[r];
        for block in seq.partitions()[r].blocks() {
            for (a, &x) in block.iter().enumerate() {
                for &y in &block[a + 1..] {
                    let (x, y) = (x as usize, y as usize);
                    if entries[x * n + y].is_infinite() {
                        entries[x * n + y] = t;
                        entries[y * n + x] = t;
                    }
                }
            }
        }
    }
    Ok(FirstMergeMatrix {
        start_scale,
        n,
        entries,
    })
}

/// Merge-Rips complex at bigrade `(i, j)`: the flag complex on the graph of
/// pairs with first-merge scale at most `t_j`, restricted to the 2-skeleton.
/// Shares its 1-skeleton with the element-based complex; every triangle of
/// that graph is filled, Rips-style.
pub fn build_merge_rips_complex(
    seq: &PartitionSequence,
    i: usize,
    j: usize,
) -> Result<SimplicialComplex> {
    seq.check_window(i, j)?;
    let merge = first_merge_matrix(seq, i)?;
    let n = seq.n_elements();
    let threshold = seq.change_points()[j];
    let words = n.div_ceil(64);
    let mut adjacency = vec![0u64; n * words];
    let mut builder = ComplexBuilder::new();
    for x in 0..n as u32 {
        builder.add_vertex(x);
    }
    for x in 0..n {
        for y in x + 1..n {
            if merge.get(x as u32, y as u32) <= threshold {
                builder.add_edge(x as u32, y as u32);
                adjacency[x * words + y / 64] |= 1 << (y % 64);
                adjacency[y * words + x / 64] |= 1 << (x % 64);
            }
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            if adjacency[x * words + y / 64] & (1 << (y % 64)) == 0 {
                continue;
            }
            for w in 0..words {
                let mut common = adjacency[x * words + w] & adjacency[y * words + w];
                // Only z > y, so each triangle is emitted once.
                if w == y / 64 {
                    common &= !((1u64 << (y % 64)) - 1) & !(1u64 << (y % 64));
                } else if w < y / 64 {
                    common = 0;
                }
                while common != 0 {
                    let z = w * 64 + common.trailing_zeros() as usize;
                    builder.add_triangle(x as u32, y as u32, z as u32);
                    common &= common - 1;
                }
            }
        }
    }
    Ok(builder.build())
}
