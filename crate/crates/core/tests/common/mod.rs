//! Shared fixtures and independent oracles for the integration suites.
//!
//! Every oracle here re-derives its answer from first principles (set
//! scans, breadth-first search, exhaustive enumeration) without calling the
//! production code paths it is used to check.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topoclust::sankey::{Layout, SankeyDiagram};
use topoclust::{Partition, PartitionSequence};

pub fn part(n: usize, blocks: &[&[u32]]) -> Partition {
    Partition::from_blocks(n, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
}

/// Three elements, five layers: singletons, {01|2}, {0|12}, {02|1}, all.
pub fn example1() -> PartitionSequence {
    PartitionSequence::with_unit_scales(vec![
        Partition::singletons(3),
        part(3, &[&[0, 1], &[2]]),
        part(3, &[&[0], &[1, 2]]),
        part(3, &[&[0, 2], &[1]]),
        Partition::one_block(3),
    ])
    .unwrap()
}

/// Four elements, ten layers: singletons, the six two-element-cluster
/// partitions, then the three three-element-cluster partitions.
pub fn example2() -> PartitionSequence {
    PartitionSequence::with_unit_scales(vec![
        Partition::singletons(4),
        part(4, &[&[0, 1], &[2], &[3]]),
        part(4, &[&[0], &[1, 2], &[3]]),
        part(4, &[&[0], &[1], &[2, 3]]),
        part(4, &[&[0, 2], &[1], &[3]]),
        part(4, &[&[0, 3], &[1], &[2]]),
        part(4, &[&[0], &[1, 3], &[2]]),
        part(4, &[&[0, 1, 2], &[3]]),
        part(4, &[&[0], &[1, 2, 3]]),
        part(4, &[&[0, 2, 3], &[1]]),
    ])
    .unwrap()
}

/// Two sequences over scales 1, 2, 3 that agree on every pairwise overlap
/// pattern yet differ in their third layer; only the first has a 1-cycle.
pub fn example3() -> (PartitionSequence, PartitionSequence) {
    let shared = vec![
        part(4, &[&[0, 1], &[2], &[3]]),
        part(4, &[&[0], &[1, 2], &[3]]),
    ];
    let mut theta = shared.clone();
    theta.push(part(4, &[&[0, 2], &[1], &[3]]));
    let mut eta = shared;
    eta.push(part(4, &[&[0], &[1], &[2, 3]]));
    (
        PartitionSequence::new(vec![1.0, 2.0, 3.0], theta).unwrap(),
        PartitionSequence::new(vec![1.0, 2.0, 3.0], eta).unwrap(),
    )
}

/// A random sequence of unconstrained partitions (layers are independent
/// uniform label vectors).
pub fn random_sequence(rng: &mut ChaCha8Rng, n: usize, m: usize) -> PartitionSequence {
    let partitions = (0..m)
        .map(|_| {
            let labels: Vec<u32> = (0..n).map(|_| rng.gen_range(0..n as u32)).collect();
            Partition::from_labels(&labels).unwrap()
        })
        .collect();
    PartitionSequence::with_unit_scales(partitions).unwrap()
}

/// A random strictly hierarchical coarse-graining sequence built by
/// successive merges of the previous layer's blocks.
pub fn random_dendrogram(rng: &mut ChaCha8Rng, n: usize) -> PartitionSequence {
    let mut blocks: Vec<Vec<u32>> = (0..n as u32).map(|x| vec![x]).collect();
    let mut partitions = vec![Partition::singletons(n)];
    while blocks.len() > 1 {
        let a = rng.gen_range(0..blocks.len());
        let mut merged = blocks.swap_remove(a);
        let b = rng.gen_range(0..blocks.len());
        merged.append(&mut blocks[b]);
        blocks[b] = merged;
        partitions.push(Partition::from_blocks(n, blocks.clone()).unwrap());
    }
    PartitionSequence::with_unit_scales(partitions).unwrap()
}

/// Reorders the layers of a sequence, keeping its change points.
pub fn permute_layers(seq: &PartitionSequence, order: &[usize]) -> PartitionSequence {
    let partitions = order.iter().map(|&k| seq.partitions()[k].clone()).collect();
    PartitionSequence::new(seq.change_points().to_vec(), partitions).unwrap()
}

/// Are `x` and `y` co-clustered at layer `r`? Set-scan, no index reuse.
fn co_clustered(seq: &PartitionSequence, r: usize, x: u32, y: u32) -> bool {
    seq.partitions()[r]
        .blocks()
        .iter()
        .any(|b| b.contains(&x) && b.contains(&y))
}

/// Component count of the window's co-clustering graph by breadth-first
/// search over elements.
pub fn oracle_components(seq: &PartitionSequence, i: usize, j: usize) -> usize {
    let n = seq.n_elements();
    let mut seen = vec![false; n];
    let mut components = 0;
    for start in 0..n as u32 {
        if seen[start as usize] {
            continue;
        }
        components += 1;
        let mut queue = VecDeque::from([start]);
        seen[start as usize] = true;
        while let Some(x) = queue.pop_front() {
            for y in 0..n as u32 {
                if !seen[y as usize]
                    && (i..=j).any(|r| co_clustered(seq, r, x, y))
                {
                    seen[y as usize] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    components
}

fn oracle_refines(p: &Partition, q: &Partition) -> bool {
    p.blocks().iter().all(|block| {
        q.blocks().iter().any(|qb| {
            let set: HashSet<u32> = qb.iter().copied().collect();
            block.iter().all(|x| set.contains(x))
        })
    })
}

/// Full scan for a window layer dominating every other layer.
pub fn oracle_subposet_maximum(seq: &PartitionSequence, i: usize, j: usize) -> Option<usize> {
    (i..=j).find(|&r| {
        (i..=j).all(|a| oracle_refines(&seq.partitions()[a], &seq.partitions()[r]))
    })
}

/// Direct triple enumeration of chained-but-never-transitive triples.
/// With `require_open = true`, only triples whose endpoints are never
/// co-clustered in the window count (the open-wedge case).
pub fn oracle_triangle_conflict(
    seq: &PartitionSequence,
    i: usize,
    j: usize,
    require_open: bool,
) -> bool {
    let n = seq.n_elements() as u32;
    for y in 0..n {
        for x in 0..n {
            for z in x + 1..n {
                if x == y || z == y {
                    continue;
                }
                let chain = (i..=j).any(|r| co_clustered(seq, r, x, y))
                    && (i..=j).any(|r| co_clustered(seq, r, y, z));
                if !chain {
                    continue;
                }
                let transitive_somewhere = (i..=j)
                    .any(|r| co_clustered(seq, r, x, y) && co_clustered(seq, r, y, z));
                if transitive_somewhere {
                    continue;
                }
                if !require_open || !(i..=j).any(|r| co_clustered(seq, r, x, z)) {
                    return true;
                }
            }
        }
    }
    false
}

/// Exhaustive minimum crossing count over all products of layer rankings.
pub fn brute_force_min_crossings(diagram: &SankeyDiagram) -> u64 {
    let per_layer: Vec<Vec<Vec<u32>>> = diagram
        .layer_sizes()
        .iter()
        .map(|&w| all_rank_vectors(w))
        .collect();
    let mut choice = vec![0usize; per_layer.len()];
    let mut best = u64::MAX;
    loop {
        let layout = Layout::from_rankings(
            choice
                .iter()
                .enumerate()
                .map(|(m, &c)| per_layer[m][c].clone())
                .collect(),
        );
        best = best.min(diagram.crossing_number(&layout).unwrap());
        let mut at = 0;
        loop {
            if at == choice.len() {
                return best;
            }
            choice[at] += 1;
            if choice[at] < per_layer[at].len() {
                break;
            }
            choice[at] = 0;
            at += 1;
        }
    }
}

fn all_rank_vectors(width: usize) -> Vec<Vec<u32>> {
    fn recurse(order: &mut Vec<u32>, at: usize, out: &mut Vec<Vec<u32>>) {
        if at == order.len() {
            let mut ranks = vec![0u32; order.len()];
            for (pos, &v) in order.iter().enumerate() {
                ranks[v as usize] = pos as u32;
            }
            out.push(ranks);
            return;
        }
        for k in at..order.len() {
            order.swap(at, k);
            recurse(order, at + 1, out);
            order.swap(at, k);
        }
    }
    let mut order: Vec<u32> = (0..width as u32).collect();
    let mut out = Vec::new();
    recurse(&mut order, 0, &mut out);
    out
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx) * (x - mx);
        vy += (y - my) * (y - my);
    }
    cov / (vx.sqrt() * vy.sqrt())
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
