//! Sankey diagrams of a sequence of partitions: construction, crossing
//! counts, exact and heuristic layout optimisation, and per-layer conflict
//! classification.
//!
//! The diagram has one vertex per cluster and layer, and an edge between
//! consecutive layers for every pair of overlapping clusters, weighted by
//! the overlap size. Weights are carried for export only; crossing counts
//! are unweighted and count each unordered pair of inverted edges once.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::grid::BigradeGrid;
use crate::partition::PartitionSequence;

/// Widest layer the exact optimiser will enumerate by default (8! = 40320
/// rankings per layer).
pub const DEFAULT_WIDTH_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SankeyEdge {
    /// Cluster index in layer `m`.
    pub source: u32,
    /// Cluster index in layer `m + 1`.
    pub target: u32,
    /// Overlap size between the two clusters.
    pub weight: u64,
}

/// An `M`-layered cluster-overlap graph.
#[derive(Debug, Clone)]
pub struct SankeyDiagram {
    layer_sizes: Vec<usize>,
    /// `edges[m]` links layer `m` to layer `m + 1`.
    edges: Vec<Vec<SankeyEdge>>,
}

/// Per-layer rankings `tau_m`, each a permutation of the layer's clusters.
/// Ranks are 0-based internally and 1-based in exports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    rankings: Vec<Vec<u32>>,
}

impl Layout {
    pub fn identity(diagram: &SankeyDiagram) -> Self {
        Self {
            rankings: diagram
                .layer_sizes
                .iter()
                .map(|&w| (0..w as u32).collect())
                .collect(),
        }
    }

    /// Wraps explicit per-layer rank vectors; dimensions and bijectivity
    /// are checked by the operations that consume the layout.
    pub fn from_rankings(rankings: Vec<Vec<u32>>) -> Self {
        Self { rankings }
    }

    /// `rankings[m][v]` is the rank of cluster `v` in layer `m`.
    pub fn rankings(&self) -> &[Vec<u32>] {
        &self.rankings
    }
}

pub fn build_sankey(seq: &PartitionSequence) -> SankeyDiagram {
    let layer_sizes: Vec<usize> = seq.partitions().iter().map(|p| p.len()).collect();
    let mut edges = Vec::with_capacity(seq.len().saturating_sub(1));
    for m in 0..seq.len().saturating_sub(1) {
        let a = &seq.partitions()[m];
        let b = &seq.partitions()[m + 1];
        let mut overlap: HashMap<(u32, u32), u64> = HashMap::new();
        for x in 0..seq.n_elements() as u32 {
            *overlap
                .entry((a.block_index(x), b.block_index(x)))
                .or_insert(0) += 1;
        }
        let mut layer: Vec<SankeyEdge> = overlap
            .into_iter()
            .map(|((source, target), weight)| SankeyEdge {
                source,
                target,
                weight,
            })
            .collect();
        layer.sort_by_key(|e| (e.source, e.target));
        edges.push(layer);
    }
    SankeyDiagram { layer_sizes, edges }
}

impl SankeyDiagram {
    pub fn layer_count(&self) -> usize {
        self.layer_sizes.len()
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    /// Edges between layer `m` and layer `m + 1`.
    pub fn edges(&self, m: usize) -> &[SankeyEdge] {
        &self.edges[m]
    }

    fn check_layout(&self, layout: &Layout) -> Result<()> {
        if layout.rankings.len() != self.layer_sizes.len() {
            return Err(Error::InvalidConfig(format!(
                "layout has {} layers, diagram has {}",
                layout.rankings.len(),
                self.layer_sizes.len()
            )));
        }
        for (m, ranks) in layout.rankings.iter().enumerate() {
            if ranks.len() != self.layer_sizes[m] {
                return Err(Error::InvalidConfig(format!(
                    "layout layer {m} ranks {} clusters, diagram has {}",
                    ranks.len(),
                    self.layer_sizes[m]
                )));
            }
            let mut seen = vec![false; ranks.len()];
            for &r in ranks {
                let slot = seen
                    .get_mut(r as usize)
                    .ok_or_else(|| Error::InvalidConfig(format!("rank {r} out of range")))?;
                if std::mem::replace(slot, true) {
                    return Err(Error::InvalidConfig(format!(
                        "layer {m} ranking is not a permutation"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Total number of inverted edge pairs between consecutive layers.
    pub fn crossing_number(&self, layout: &Layout) -> Result<u64> {
        self.check_layout(layout)?;
        Ok((0..self.edges.len())
            .map(|m| gap_crossings(&self.edges[m], &layout.rankings[m], &layout.rankings[m + 1]))
            .sum())
    }

    /// Plot-ready text export under a layout: one `layer,source_rank,
    /// target_rank,weight` line per edge, ranks and layers 1-based.
    pub fn to_edge_list(&self, layout: &Layout) -> Result<String> {
        self.check_layout(layout)?;
        let mut out = String::from("layer,source_rank,target_rank,weight\n");
        for (m, layer) in self.edges.iter().enumerate() {
            let mut rows: Vec<(u32, u32, u64)> = layer
                .iter()
                .map(|e| {
                    (
                        layout.rankings[m][e.source as usize] + 1,
                        layout.rankings[m + 1][e.target as usize] + 1,
                        e.weight,
                    )
                })
                .collect();
            rows.sort_unstable();
            for (s, t, w) in rows {
                out.push_str(&format!("{},{},{},{}\n", m + 1, s, t, w));
            }
        }
        Ok(out)
    }
}

fn gap_crossings(edges: &[SankeyEdge], ranks_a: &[u32], ranks_b: &[u32]) -> u64 {
    let mut count = 0;
    for (i, e) in edges.iter().enumerate() {
        for f in &edges[i + 1..] {
            let ds = ranks_a[e.source as usize] as i64 - ranks_a[f.source as usize] as i64;
            let dt = ranks_b[e.target as usize] as i64 - ranks_b[f.target as usize] as i64;
            if ds * dt < 0 {
                count += 1;
            }
        }
    }
    count
}

/// All rank vectors of a layer of the given width, in a fixed order.
fn all_rankings(width: usize) -> Vec<Vec<u32>> {
    let mut order: Vec<u32> = (0..width as u32).collect();
    let mut out = Vec::new();
    permute(&mut order, 0, &mut out);
    out
}

fn permute(order: &mut Vec<u32>, at: usize, out: &mut Vec<Vec<u32>>) {
    if at == order.len() {
        let mut ranks = vec![0u32; order.len()];
        for (pos, &v) in order.iter().enumerate() {
            ranks[v as usize] = pos as u32;
        }
        out.push(ranks);
        return;
    }
    for i in at..order.len() {
        order.swap(at, i);
        permute(order, at + 1, out);
        order.swap(at, i);
    }
}

/// Globally optimal layout and crossing number under the default width cap.
///
/// Crossings only couple consecutive layers, so a dynamic program whose
/// state is the ranking of the current layer is exact.
pub fn minimize_crossings_exact(diagram: &SankeyDiagram) -> Result<(Layout, u64)> {
    minimize_crossings_exact_with_cap(diagram, DEFAULT_WIDTH_CAP)
}

pub fn minimize_crossings_exact_with_cap(
    diagram: &SankeyDiagram,
    width_cap: usize,
) -> Result<(Layout, u64)> {
    for (m, &width) in diagram.layer_sizes.iter().enumerate() {
        if width > width_cap {
            return Err(Error::WidthCapExceeded {
                layer: m + 1, // 1-based, matching exported layer numbering
                width,
                cap: width_cap,
            });
        }
    }
    let states: Vec<Vec<Vec<u32>>> = diagram
        .layer_sizes
        .iter()
        .map(|&w| all_rankings(w))
        .collect();
    let m_layers = diagram.layer_count();
    let mut cost = vec![0u64; states[0].len()];
    let mut parents: Vec<Vec<usize>> = Vec::new();
    for m in 1..m_layers {
        let mut next = vec![u64::MAX; states[m].len()];
        let mut parent = vec![0usize; states[m].len()];
        for (b, ranks_b) in states[m].iter().enumerate() {
            for (a, ranks_a) in states[m - 1].iter().enumerate() {
                let through = cost[a] + gap_crossings(&diagram.edges[m - 1], ranks_a, ranks_b);
                if through < next[b] {
                    next[b] = through;
                    parent[b] = a;
                }
            }
        }
        cost = next;
        parents.push(parent);
    }
    let (mut best, &total) = cost
        .iter()
        .enumerate()
        .min_by_key(|&(_, c)| c)
        .expect("at least one state per layer");
    let mut chosen = vec![0usize; m_layers];
    for m in (0..m_layers).rev() {
        chosen[m] = best;
        if m > 0 {
            best = parents[m - 1][best];
        }
    }
    let layout = Layout {
        rankings: chosen
            .iter()
            .enumerate()
            .map(|(m, &s)| states[m][s].clone())
            .collect(),
    };
    Ok((layout, total))
}

/// Barycenter layer-sweep heuristic for widths beyond the exact cap.
///
/// Each sweep re-ranks every layer by the mean rank of its neighbours in
/// the preceding layer (forward pass) and in the following layer (backward
/// pass), unconditionally; the best layout seen across all half-sweeps,
/// starting from the identity, is returned. Ties break by current rank via
/// a stable sort, so the result is deterministic, and it is never worse
/// than the identity layout.
pub fn minimize_crossings_heuristic(diagram: &SankeyDiagram, sweeps: usize) -> (Layout, u64) {
    let mut layout = Layout::identity(diagram);
    let m_layers = diagram.layer_count();
    if m_layers <= 1 {
        return (layout, 0);
    }
    let total = |l: &Layout| -> u64 {
        (0..diagram.edges.len())
            .map(|m| gap_crossings(&diagram.edges[m], &l.rankings[m], &l.rankings[m + 1]))
            .sum()
    };
    let mut best = layout.clone();
    let mut best_cost = total(&layout);
    for _ in 0..sweeps.max(1) {
        for m in 1..m_layers {
            resort_layer(diagram, &mut layout, m, Direction::FromLeft);
        }
        let cost = total(&layout);
        if cost < best_cost {
            best_cost = cost;
            best = layout.clone();
        }
        for m in (0..m_layers - 1).rev() {
            resort_layer(diagram, &mut layout, m, Direction::FromRight);
        }
        let cost = total(&layout);
        if cost < best_cost {
            best_cost = cost;
            best = layout.clone();
        }
    }
    (best, best_cost)
}

enum Direction {
    FromLeft,
    FromRight,
}

fn resort_layer(diagram: &SankeyDiagram, layout: &mut Layout, m: usize, direction: Direction) {
    let width = diagram.layer_sizes[m];
    let mut rank_sum = vec![0.0f64; width];
    let mut degree = vec![0u32; width];
    match direction {
        Direction::FromLeft => {
            for e in &diagram.edges[m - 1] {
                rank_sum[e.target as usize] += layout.rankings[m - 1][e.source as usize] as f64;
                degree[e.target as usize] += 1;
            }
        }
        Direction::FromRight => {
            for e in &diagram.edges[m] {
                rank_sum[e.source as usize] += layout.rankings[m + 1][e.target as usize] as f64;
                degree[e.source as usize] += 1;
            }
        }
    }
    let current = &layout.rankings[m];
    let barycenter: Vec<f64> = (0..width)
        .map(|v| {
            if degree[v] == 0 {
                current[v] as f64 // keep isolated clusters where they are
            } else {
                rank_sum[v] / degree[v] as f64
            }
        })
        .collect();
    let mut by_rank: Vec<u32> = (0..width as u32).collect();
    by_rank.sort_by(|&a, &b| {
        barycenter[a as usize]
            .total_cmp(&barycenter[b as usize])
            .then(current[a as usize].cmp(&current[b as usize]))
    });
    let mut candidate = vec![0u32; width];
    for (pos, &v) in by_rank.iter().enumerate() {
        candidate[v as usize] = pos as u32;
    }
    layout.rankings[m] = candidate;
}

/// Conflict flags for a single layer of the diagram, read off the bipartite
/// overlap graph between layers `m` and `m + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerConflicts {
    /// Some cluster on each side overlaps at least two on the other side.
    pub zero: bool,
    /// The overlap graph contains a path of length at least 3.
    pub triangle_zero: bool,
    /// The overlap graph contains a cycle.
    pub one: bool,
}

pub fn classify_layer_conflicts(diagram: &SankeyDiagram, m: usize) -> Result<LayerConflicts> {
    if m + 1 >= diagram.layer_count() {
        return Err(Error::LayerOutOfRange {
            layer: m,
            layers: diagram.layer_count().saturating_sub(1),
        });
    }
    let edges = &diagram.edges[m];
    let (na, nb) = (diagram.layer_sizes[m], diagram.layer_sizes[m + 1]);
    let mut deg_a = vec![0u32; na];
    let mut deg_b = vec![0u32; nb];
    for e in edges {
        deg_a[e.source as usize] += 1;
        deg_b[e.target as usize] += 1;
    }
    let zero = deg_a.iter().any(|&d| d >= 2) && deg_b.iter().any(|&d| d >= 2);
    // A path of length 3 exists iff some edge has both endpoints branching.
    let triangle_zero = edges
        .iter()
        .any(|e| deg_a[e.source as usize] >= 2 && deg_b[e.target as usize] >= 2);
    // A cycle exists iff some edge closes an already-connected pair.
    let mut parent: Vec<usize> = (0..na + nb).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut one = false;
    for e in edges {
        let (ra, rb) = (
            find(&mut parent, e.source as usize),
            find(&mut parent, na + e.target as usize),
        );
        if ra == rb {
            one = true;
            break;
        }
        parent[ra] = rb;
    }
    Ok(LayerConflicts {
        zero,
        triangle_zero,
        one,
    })
}

/// Lower bound on the minimum crossing number: the sum of the
/// 1-dimensional Hilbert function along the superdiagonal.
pub fn hf1_crossing_bound(seq: &PartitionSequence, hf1: &BigradeGrid) -> Result<u64> {
    if hf1.layer_count() != seq.len() || hf1.change_points() != seq.change_points() {
        return Err(Error::GridMismatch(
            "grid was not computed for this sequence".into(),
        ));
    }
    Ok((0..seq.len().saturating_sub(1))
        .map(|m| hf1.get(m, m + 1))
        .sum())
}
