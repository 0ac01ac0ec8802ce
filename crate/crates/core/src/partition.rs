//! Partitions of a finite ground set, scale-indexed sequences of partitions,
//! and the refinement partial order.
//!
//! Elements are dense `0..n` indices; arbitrary input labels are interned to
//! indices at parse time (see [`crate::io`]). Blocks are kept in canonical
//! form (each block sorted, blocks ordered by minimum element), so partition
//! equality is plain structural equality. All types are immutable after
//! construction and every operation is a pure function of its inputs.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};

/// A partition of `{0, .., n_elements - 1}` into disjoint, covering,
/// non-empty blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n_elements: usize,
    /// Canonical blocks: each sorted ascending, ordered by minimum element.
    blocks: Vec<Vec<u32>>,
    /// `block_of[x]` is the index of the block containing element `x`.
    block_of: Vec<u32>,
}

impl Partition {
    /// Builds a partition from explicit blocks, validating disjointness and
    /// coverage of the ground set.
    pub fn from_blocks(n_elements: usize, blocks: Vec<Vec<u32>>) -> Result<Self> {
        if n_elements == 0 {
            return Err(Error::InvalidPartition("empty ground set".into()));
        }
        let mut block_of = vec![u32::MAX; n_elements];
        let mut canonical: Vec<Vec<u32>> = Vec::with_capacity(blocks.len());
        for block in blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            let mut block = block;
            block.sort_unstable();
            block.dedup();
            canonical.push(block);
        }
        canonical.sort_by_key(|b| b[0]);
        for (idx, block) in canonical.iter().enumerate() {
            for &x in block {
                let x_us = x as usize;
                if x_us >= n_elements {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} outside ground set of {n_elements}"
                    )));
                }
                if block_of[x_us] != u32::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} appears in more than one block"
                    )));
                }
                block_of[x_us] = idx as u32;
            }
        }
        if let Some(x) = block_of.iter().position(|&b| b == u32::MAX) {
            return Err(Error::InvalidPartition(format!(
                "element {x} is not covered by any block"
            )));
        }
        Ok(Self {
            n_elements,
            blocks: canonical,
            block_of,
        })
    }

    /// Builds a partition from per-element labels; equal labels end up in the
    /// same block. Labels carry no meaning beyond equality.
    pub fn from_labels<T: Eq + Hash>(labels: &[T]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidPartition("empty ground set".into()));
        }
        let mut ids: HashMap<&T, usize> = HashMap::new();
        let mut blocks: Vec<Vec<u32>> = Vec::new();
        for (x, label) in labels.iter().enumerate() {
            let next = ids.len();
            let id = *ids.entry(label).or_insert(next);
            if id == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[id].push(x as u32);
        }
        Self::from_blocks(labels.len(), blocks)
    }

    /// The partition of singletons, the lattice lower bound.
    pub fn singletons(n_elements: usize) -> Self {
        let blocks = (0..n_elements as u32).map(|x| vec![x]).collect();
        Self::from_blocks(n_elements, blocks).expect("singletons are always valid")
    }

    /// The one-block partition, the lattice upper bound.
    pub fn one_block(n_elements: usize) -> Self {
        let blocks = vec![(0..n_elements as u32).collect()];
        Self::from_blocks(n_elements, blocks).expect("one block is always valid")
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    /// Number of blocks `|pi|`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a valid partition always has at least one block
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// Index of the block containing element `x`.
    pub fn block_index(&self, x: u32) -> u32 {
        self.block_of[x as usize]
    }

    /// Per-element block indices, in element order.
    pub fn block_indices(&self) -> &[u32] {
        &self.block_of
    }

    /// Mean block size `n / |pi|`.
    pub fn mean_block_size(&self) -> f64 {
        self.n_elements as f64 / self.blocks.len() as f64
    }

    fn check_same_ground(&self, other: &Self) -> Result<()> {
        if self.n_elements != other.n_elements {
            return Err(Error::GroundSetMismatch {
                left: self.n_elements,
                right: other.n_elements,
            });
        }
        Ok(())
    }

    /// Refinement test: `self <= other` iff every block of `self` is
    /// contained in a block of `other`.
    pub fn refines(&self, other: &Self) -> Result<bool> {
        self.check_same_ground(other)?;
        for block in &self.blocks {
            let target = other.block_of[block[0] as usize];
            if block[1..].iter().any(|&x| other.block_of[x as usize] != target) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A piecewise-constant, scale-indexed sequence of partitions: strictly
/// increasing change points `t_1 < .. < t_M` with one partition per change
/// point, all over the same ground set.
///
/// The sequence is defined on `[t_1, oo)`; the value on `[t_m, t_{m+1})` is
/// `partitions[m]` and the last partition extends beyond `t_M`. Every
/// measure in this crate depends only on the values at the change points,
/// so the tail is represented implicitly. Window operations take layer
/// indices; use [`PartitionSequence::layer_of_scale`] to resolve a scale to
/// the layer of the containing piece.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSequence {
    change_points: Vec<f64>,
    partitions: Vec<Partition>,
}

impl PartitionSequence {
    pub fn new(change_points: Vec<f64>, partitions: Vec<Partition>) -> Result<Self> {
        if partitions.is_empty() {
            return Err(Error::InvalidSequence("no partitions".into()));
        }
        if change_points.len() != partitions.len() {
            return Err(Error::InvalidSequence(format!(
                "{} change points for {} partitions",
                change_points.len(),
                partitions.len()
            )));
        }
        if change_points.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidSequence("non-finite change point".into()));
        }
        if change_points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSequence(
                "change points must be strictly increasing".into(),
            ));
        }
        let n = partitions[0].n_elements();
        if let Some(p) = partitions.iter().find(|p| p.n_elements() != n) {
            return Err(Error::GroundSetMismatch {
                left: n,
                right: p.n_elements(),
            });
        }
        Ok(Self {
            change_points,
            partitions,
        })
    }

    /// Convenience constructor with change points `0, 1, .., M-1`.
    pub fn with_unit_scales(partitions: Vec<Partition>) -> Result<Self> {
        let points = (0..partitions.len()).map(|m| m as f64).collect();
        Self::new(points, partitions)
    }

    /// Number of change points `M`.
    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        false // at least one layer by construction
    }

    pub fn n_elements(&self) -> usize {
        self.partitions[0].n_elements()
    }

    pub fn change_points(&self) -> &[f64] {
        &self.change_points
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn partition(&self, layer: usize) -> Result<&Partition> {
        self.partitions
            .get(layer)
            .ok_or(Error::LayerOutOfRange {
                layer,
                layers: self.partitions.len(),
            })
    }

    /// Layer index of the piece containing scale `t`, or `None` for
    /// `t < t_1`. Scales at or beyond `t_M` resolve to the last layer.
    pub fn layer_of_scale(&self, t: f64) -> Option<usize> {
        if t < self.change_points[0] {
            return None;
        }
        match self
            .change_points
            .binary_search_by(|probe| probe.partial_cmp(&t).expect("finite"))
        {
            Ok(m) => Some(m),
            Err(next) => Some(next - 1),
        }
    }

    pub(crate) fn check_window(&self, i: usize, j: usize) -> Result<()> {
        if j >= self.partitions.len() {
            return Err(Error::LayerOutOfRange {
                layer: j,
                layers: self.partitions.len(),
            });
        }
        if i > j {
            return Err(Error::InvalidSequence(format!(
                "window start {i} is after window end {j}"
            )));
        }
        Ok(())
    }

    /// True iff block counts are non-increasing along the sequence.
    /// Equivalently, the mean block size is non-decreasing.
    pub fn is_coarse_graining(&self) -> bool {
        self.partitions.windows(2).all(|w| w[0].len() >= w[1].len())
    }

    /// Mirror of [`Self::is_coarse_graining`]: block counts non-decreasing.
    pub fn is_fine_graining(&self) -> bool {
        self.partitions.windows(2).all(|w| w[0].len() <= w[1].len())
    }

    /// True iff the window `[i, j]` is a chain of refinements, agglomerative
    /// (`theta(a) <= theta(b)` for `a <= b`) or divisive.
    pub fn is_hierarchical(&self, i: usize, j: usize) -> Result<bool> {
        self.check_window(i, j)?;
        let mut agglomerative = true;
        let mut divisive = true;
        for a in i..j {
            agglomerative &= self.partitions[a].refines(&self.partitions[a + 1])?;
            divisive &= self.partitions[a + 1].refines(&self.partitions[a])?;
            if !agglomerative && !divisive {
                return Ok(false);
            }
        }
        Ok(agglomerative || divisive)
    }

    /// True iff every pair of clusters drawn from layers in `[i, j]` is
    /// laminar: disjoint or one contained in the other.
    pub fn is_nested(&self, i: usize, j: usize) -> Result<bool> {
        self.check_window(i, j)?;
        // Clusters within one layer are disjoint, so only cross-layer pairs
        // can break laminarity.
        for a in i..=j {
            for b in (a + 1)..=j {
                if !laminar(&self.partitions[a], &self.partitions[b]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Returns a layer `r` in `[i, j]` whose partition is refined by every
    /// layer of the window, or `None` if the subposet has no maximum. An
    /// empty result is exactly a 0-conflict on the window.
    pub fn subposet_maximum(&self, i: usize, j: usize) -> Result<Option<usize>> {
        self.check_window(i, j)?;
        // A maximum must be a coarsest partition of the window.
        let min_count = (i..=j).map(|r| self.partitions[r].len()).min().expect("non-empty");
        'candidates: for r in i..=j {
            if self.partitions[r].len() != min_count {
                continue;
            }
            for a in i..=j {
                if !self.partitions[a].refines(&self.partitions[r])? {
                    continue 'candidates;
                }
            }
            return Ok(Some(r));
        }
        Ok(None)
    }
}

/// Laminar check across two partitions of the same ground set.
fn laminar(p: &Partition, q: &Partition) -> bool {
    // For each block A of p, histogram A over blocks of q. A is laminar with
    // every block of q iff A lies inside a single q-block, or every q-block
    // it touches is contained in A.
    let mut touched: HashMap<u32, usize> = HashMap::new();
    for block in p.blocks() {
        touched.clear();
        for &x in block {
            *touched.entry(q.block_index(x)).or_insert(0) += 1;
        }
        if touched.len() <= 1 {
            continue;
        }
        for (&qb, &count) in &touched {
            if count != q.blocks()[qb as usize].len() {
                return false;
            }
        }
    }
    true
}
