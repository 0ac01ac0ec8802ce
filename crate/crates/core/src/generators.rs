//! Seeded generators for synthetic sequences of partitions, plus a
//! brute-force order-preservation oracle.
//!
//! All randomness comes from ChaCha8 seeded with the config's 64-bit seed,
//! so identical configs produce bit-identical sequences on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::partition::{Partition, PartitionSequence};

/// Default cap for [`is_order_preserving_bruteforce`], which enumerates all
/// `n!` total orders.
pub const DEFAULT_ORDER_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    pub n_elements: usize,
    pub n_layers: usize,
    /// Per-layer probability of one cross-cluster swap (order generator).
    pub swap_probability: f64,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(n_elements: usize, n_layers: usize, swap_probability: f64, seed: u64) -> Result<Self> {
        let cfg = Self {
            n_elements,
            n_layers,
            swap_probability,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_elements < 1 {
            return Err(Error::InvalidConfig("need at least one element".into()));
        }
        if self.n_layers < 1 {
            return Err(Error::InvalidConfig("need at least one layer".into()));
        }
        if !(0.0..=1.0).contains(&self.swap_probability) {
            return Err(Error::InvalidConfig(format!(
                "swap probability {} outside [0, 1]",
                self.swap_probability
            )));
        }
        Ok(())
    }
}

/// A uniformly random partition with exactly `blocks` blocks, produced by
/// merging uniformly chosen block pairs down from singletons.
fn random_partition(n: usize, blocks: usize, rng: &mut ChaCha8Rng) -> Partition {
    debug_assert!((1..=n).contains(&blocks));
    let mut pool: Vec<Vec<u32>> = (0..n as u32).map(|x| vec![x]).collect();
    while pool.len() > blocks {
        let a = rng.gen_range(0..pool.len());
        let mut merged = pool.swap_remove(a);
        let b = rng.gen_range(0..pool.len());
        merged.append(&mut pool[b]);
        pool[b] = merged;
    }
    Partition::from_blocks(n, pool).expect("merge construction is valid")
}

/// Samples a coarse-graining sequence with `M` change points `0..M-1`:
/// singletons first, the full set last, block counts non-increasing.
///
/// Interior layer counts walk down by drawing each next count uniformly
/// from `1..=previous`; each interior partition with a given count is then
/// drawn independently by uniform random merges, so consecutive layers need
/// not refine each other. Repetition of counts (and partitions) is allowed,
/// which keeps every `M >= 2` feasible.
pub fn sample_coarse_graining(cfg: &GeneratorConfig) -> Result<PartitionSequence> {
    cfg.validate()?;
    if cfg.n_layers < 2 {
        return Err(Error::InvalidConfig(
            "a coarse-graining sample needs both endpoint layers (M >= 2)".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n_elements;
    let m = cfg.n_layers;
    let mut partitions = Vec::with_capacity(m);
    partitions.push(Partition::singletons(n));
    let mut count = n;
    for _ in 1..m - 1 {
        count = rng.gen_range(1..=count);
        partitions.push(random_partition(n, count, &mut rng));
    }
    partitions.push(Partition::one_block(n));
    PartitionSequence::with_unit_scales(partitions)
}

/// A generated order-task sample: the sequence plus the number of swaps
/// that were actually applied. The classification label is 1 when at least
/// one swap occurred.
#[derive(Debug, Clone)]
pub struct OrderSample {
    pub sequence: PartitionSequence,
    pub swaps: u32,
}

impl OrderSample {
    pub fn label(&self) -> u8 {
        u8::from(self.swaps > 0)
    }
}

/// Generates an interval-cut sequence, optionally corrupted by per-layer
/// element swaps.
///
/// Layer `m` cuts the identity-ordered ground set into a partition of
/// contiguous intervals whose count decreases stepwise-linearly from `N`
/// (singletons) at the first layer to 1 (the full set) at the last, with
/// uniformly random cut positions. With probability `swap_probability`,
/// each interior layer then exchanges the cluster assignments of two
/// elements chosen uniformly among pairs in different clusters that are not
/// both singletons (a swap that leaves the partition unchanged is vacuous);
/// endpoint layers admit no such pair and are never swapped.
pub fn generate_order_sequence(cfg: &GeneratorConfig) -> Result<OrderSample> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n_elements;
    let m = cfg.n_layers;
    let mut partitions = Vec::with_capacity(m);
    let mut swaps = 0u32;
    for layer in 0..m {
        let count = if m == 1 {
            n
        } else {
            n - layer * (n - 1) / (m - 1)
        };
        let mut labels = interval_labels(n, count, &mut rng);
        let interior = layer > 0 && layer + 1 < m;
        if interior && count >= 2 && rng.gen_bool(cfg.swap_probability) {
            if try_swap(&mut labels, &mut rng) {
                swaps += 1;
            }
        }
        partitions.push(Partition::from_labels(&labels).expect("non-empty labels"));
    }
    Ok(OrderSample {
        sequence: PartitionSequence::with_unit_scales(partitions)?,
        swaps,
    })
}

/// Per-element interval labels for a partition of `0..n` into `count`
/// contiguous runs with uniformly chosen cut positions.
fn interval_labels(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    debug_assert!((1..=n).contains(&count));
    // Partial Fisher-Yates over the n-1 interior gaps.
    let mut gaps: Vec<u32> = (1..n as u32).collect();
    for k in 0..count - 1 {
        let pick = rng.gen_range(k..gaps.len());
        gaps.swap(k, pick);
    }
    let mut cuts: Vec<u32> = gaps[..count - 1].to_vec();
    cuts.sort_unstable();
    let mut labels = vec![0u32; n];
    let mut run = 0u32;
    let mut next_cut = 0;
    for (x, slot) in labels.iter_mut().enumerate() {
        if next_cut < cuts.len() && x as u32 == cuts[next_cut] {
            run += 1;
            next_cut += 1;
        }
        *slot = run;
    }
    labels
}

/// Exchanges the cluster assignments of two elements in different,
/// not-both-singleton clusters. Returns false when no such pair was found.
fn try_swap(labels: &mut [u32], rng: &mut ChaCha8Rng) -> bool {
    let n = labels.len();
    let mut size = vec![0u32; n];
    for &l in labels.iter() {
        size[l as usize] += 1;
    }
    for _ in 0..64 {
        let x = rng.gen_range(0..n);
        let y = rng.gen_range(0..n);
        let (lx, ly) = (labels[x], labels[y]);
        if lx == ly || (size[lx as usize] == 1 && size[ly as usize] == 1) {
            continue;
        }
        labels[x] = ly;
        labels[y] = lx;
        return true;
    }
    false
}

/// True iff some total order of the ground set makes every layer's blocks
/// contiguous intervals simultaneously, established by enumerating all `n!`
/// orders (default cap [`DEFAULT_ORDER_CAP`]).
pub fn is_order_preserving_bruteforce(seq: &PartitionSequence) -> Result<bool> {
    is_order_preserving_bruteforce_with_cap(seq, DEFAULT_ORDER_CAP)
}

pub fn is_order_preserving_bruteforce_with_cap(
    seq: &PartitionSequence,
    cap: usize,
) -> Result<bool> {
    let n = seq.n_elements();
    if n > cap {
        return Err(Error::OrderCapExceeded { n, cap });
    }
    let mut positions: Vec<u32> = (0..n as u32).collect();
    Ok(search_orders(&mut positions, 0, seq))
}

fn search_orders(order: &mut Vec<u32>, at: usize, seq: &PartitionSequence) -> bool {
    if at == order.len() {
        // order[pos] = element; position of element x:
        let mut position = vec![0u32; order.len()];
        for (pos, &x) in order.iter().enumerate() {
            position[x as usize] = pos as u32;
        }
        return seq.partitions().iter().all(|p| {
            p.blocks().iter().all(|block| {
                let mut lo = u32::MAX;
                let mut hi = 0;
                for &x in block {
                    lo = lo.min(position[x as usize]);
                    hi = hi.max(position[x as usize]);
                }
                (hi - lo) as usize + 1 == block.len()
            })
        });
    }
    for i in at..order.len() {
        order.swap(at, i);
        if search_orders(order, at + 1, seq) {
            order.swap(at, i);
            return true;
        }
        order.swap(at, i);
    }
    false
}
