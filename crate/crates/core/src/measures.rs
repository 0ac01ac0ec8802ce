//! Hilbert-function grids over all bigrades, conflict detectors, averaged
//! conflict measures, and distances between grids.

use crate::bifiltration::{build_element_complex, build_nerve_complex};
use crate::error::{Error, Result};
use crate::grid::BigradeGrid;
use crate::partition::PartitionSequence;

/// Which bifiltration backs a Hilbert-function computation. The two
/// constructions produce identical grids; the nerve is far cheaper when
/// clusters are large.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Element,
    Nerve,
}

/// Homology dimension of a grid; only 0 and 1 are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomologyDim {
    Zero,
    One,
}

impl HomologyDim {
    pub fn as_u8(self) -> u8 {
        match self {
            HomologyDim::Zero => 0,
            HomologyDim::One => 1,
        }
    }
}

/// Grids and averaged measures for one sequence.
#[derive(Debug, Clone)]
pub struct ConflictSummary {
    pub avg_conflict0: f64,
    pub avg_conflict1: f64,
    pub hf0: BigradeGrid,
    pub hf1: BigradeGrid,
}

/// Fills the full upper-triangular grid of Betti numbers: entry `(i, j)` is
/// the Betti number of the chosen construction's complex at that bigrade.
pub fn hilbert_grid(
    seq: &PartitionSequence,
    dim: HomologyDim,
    construction: Construction,
) -> Result<BigradeGrid> {
    let m = seq.len();
    let mut grid = BigradeGrid::new_zero(seq.change_points().to_vec());
    for i in 0..m {
        for j in i..m {
            let complex = match construction {
                Construction::Element => build_element_complex(seq, i, j)?,
                Construction::Nerve => build_nerve_complex(seq, i, j)?,
            };
            let value = match dim {
                HomologyDim::Zero => complex.betti0(),
                HomologyDim::One => complex.betti1(),
            };
            grid.set(i, j, value as u64);
        }
    }
    Ok(grid)
}

/// Both grids plus the averaged conflict measures in one call.
pub fn conflict_summary(
    seq: &PartitionSequence,
    construction: Construction,
) -> Result<ConflictSummary> {
    let hf0 = hilbert_grid(seq, HomologyDim::Zero, construction)?;
    let hf1 = hilbert_grid(seq, HomologyDim::One, construction)?;
    Ok(ConflictSummary {
        avg_conflict0: average_conflict0(seq, &hf0)?,
        avg_conflict1: average_conflict1(seq, &hf1)?,
        hf0,
        hf1,
    })
}

fn check_grid(seq: &PartitionSequence, grid: &BigradeGrid) -> Result<()> {
    if grid.layer_count() != seq.len() || grid.change_points() != seq.change_points() {
        return Err(Error::GridMismatch(
            "grid was not computed for this sequence".into(),
        ));
    }
    Ok(())
}

/// A window `[i, j]` carries a 0-conflict exactly when its connected-component
/// count falls below the smallest cluster count of the window.
pub fn detect_zero_conflict(
    seq: &PartitionSequence,
    i: usize,
    j: usize,
    hf0: &BigradeGrid,
) -> Result<bool> {
    seq.check_window(i, j)?;
    check_grid(seq, hf0)?;
    let min_count = (i..=j)
        .map(|r| seq.partitions()[r].len() as u64)
        .min()
        .expect("non-empty window");
    Ok(hf0.get(i, j) < min_count)
}

/// Detects a triple `x, y, z` chained through clusters at two scales of the
/// window with no scale making the relation transitive.
///
/// Open wedges of the window 1-skeleton witness the non-cyclic case
/// directly; cyclic triples additionally require that no single layer
/// co-clusters both pairs, checked on per-pair layer masks. Enumeration
/// walks neighbour pairs, so it stays within connected components.
pub fn detect_triangle_zero_conflict(seq: &PartitionSequence, i: usize, j: usize) -> Result<bool> {
    seq.check_window(i, j)?;
    let n = seq.n_elements();
    let span = j - i + 1;
    let words = span.div_ceil(64);
    // mask[x][y] has bit r-i set when x and y share a cluster at layer r.
    let mut masks = vec![0u64; n * n * words];
    let mut neighbours: Vec<Vec<u32>> = vec![Vec::new(); n];
    for r in i..=j {
        let bit = r - i;
        for block in seq.partitions()[r].blocks() {
            for (a, &x) in block.iter().enumerate() {
                for &y in &block[a + 1..] {
                    let (x, y) = (x as usize, y as usize);
                    let fresh = masks[(x * n + y) * words..][..words].iter().all(|&w| w == 0);
                    if fresh {
                        neighbours[x].push(y as u32);
                        neighbours[y].push(x as u32);
                    }
                    masks[(x * n + y) * words + bit / 64] |= 1 << (bit % 64);
                    masks[(y * n + x) * words + bit / 64] |= 1 << (bit % 64);
                }
            }
        }
    }
    let mask_of = |x: usize, y: usize| &masks[(x * n + y) * words..][..words];
    for y in 0..n {
        for (a, &x) in neighbours[y].iter().enumerate() {
            for &z in &neighbours[y][a + 1..] {
                let disjoint = mask_of(x as usize, y)
                    .iter()
                    .zip(mask_of(y, z as usize))
                    .all(|(p, q)| p & q == 0);
                if disjoint {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Piecewise widths of the scale axis: the gap to the next change point,
/// with the terminal piece extended by the mean gap `(t_M - t_1) / (M - 1)`.
pub(crate) fn cell_widths(change_points: &[f64]) -> Vec<f64> {
    let m = change_points.len();
    assert!(m >= 2, "widths need at least two change points");
    let mut widths: Vec<f64> = change_points.windows(2).map(|w| w[1] - w[0]).collect();
    widths.push((change_points[m - 1] - change_points[0]) / (m - 1) as f64);
    widths
}

/// Exact integral over `{t_1 <= s <= t <= T}` of a function constant on
/// grid cells: diagonal cells are half squares, off-diagonal cells full
/// rectangles.
fn quadrature<F: FnMut(usize, usize) -> f64>(change_points: &[f64], mut cell: F) -> f64 {
    let widths = cell_widths(change_points);
    let m = change_points.len();
    let mut total = 0.0;
    for i in 0..m {
        total += 0.5 * widths[i] * widths[i] * cell(i, i);
        for j in i + 1..m {
            total += widths[i] * widths[j] * cell(i, j);
        }
    }
    total
}

fn normaliser(change_points: &[f64]) -> f64 {
    let widths = cell_widths(change_points);
    let span: f64 = widths.iter().sum();
    2.0 / (span * span)
}

/// Average 0-conflict: one minus the area-normalised integral of the
/// component count over the window's minimum cluster count. Always in
/// `[0, 1]`; zero for a single-layer sequence by convention.
pub fn average_conflict0(seq: &PartitionSequence, hf0: &BigradeGrid) -> Result<f64> {
    check_grid(seq, hf0)?;
    if seq.len() == 1 {
        return Ok(0.0);
    }
    let m = seq.len();
    // min over the in-window diagonal, by Cor. of the diagonal identity
    // HF0(t, t) = |theta(t)|; running minimum per row keeps this O(M^2).
    let mut min_diag = vec![vec![0u64; m]; m];
    for i in 0..m {
        let mut running = u64::MAX;
        for j in i..m {
            running = running.min(hf0.get(j, j));
            min_diag[i][j] = running;
        }
    }
    // Integrate the deficit 1 - HF0/min directly: hierarchical sequences
    // come out exactly zero instead of within rounding of it.
    let integral = quadrature(seq.change_points(), |i, j| {
        1.0 - hf0.get(i, j) as f64 / min_diag[i][j] as f64
    });
    Ok(normaliser(seq.change_points()) * integral)
}

/// Average 1-conflict: the area-normalised integral of the 1-dimensional
/// Hilbert function. Zero exactly when the grid is identically zero.
pub fn average_conflict1(seq: &PartitionSequence, hf1: &BigradeGrid) -> Result<f64> {
    check_grid(seq, hf1)?;
    if seq.len() == 1 {
        return Ok(0.0);
    }
    let integral = quadrature(seq.change_points(), |i, j| hf1.get(i, j) as f64);
    Ok(normaliser(seq.change_points()) * integral)
}

/// L2 distance between two grids over the same change points: the square
/// root of the area-weighted sum of squared entry differences. Grids over
/// different scale axes are rejected, not resampled.
pub fn hilbert_distance(a: &BigradeGrid, b: &BigradeGrid) -> Result<f64> {
    a.check_same_support(b)?;
    if a.layer_count() == 1 {
        let d = a.get(0, 0) as f64 - b.get(0, 0) as f64;
        return Ok(d.abs());
    }
    let squared = quadrature(a.change_points(), |i, j| {
        let d = a.get(i, j) as f64 - b.get(i, j) as f64;
        d * d
    });
    Ok(squared.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;

    fn part(n: usize, blocks: &[&[u32]]) -> Partition {
        Partition::from_blocks(n, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    fn three_element_sequence() -> PartitionSequence {
        PartitionSequence::with_unit_scales(vec![
            Partition::singletons(3),
            part(3, &[&[0, 1], &[2]]),
            part(3, &[&[0], &[1, 2]]),
            part(3, &[&[0, 2], &[1]]),
            Partition::one_block(3),
        ])
        .unwrap()
    }

    fn dendrogram() -> PartitionSequence {
        PartitionSequence::with_unit_scales(vec![
            Partition::singletons(4),
            part(4, &[&[0, 1], &[2], &[3]]),
            part(4, &[&[0, 1], &[2, 3]]),
            Partition::one_block(4),
        ])
        .unwrap()
    }

    #[test]
    fn hilbert_grids_of_three_element_example() {
        let seq = three_element_sequence();
        let hf0 = hilbert_grid(&seq, HomologyDim::Zero, Construction::Element).unwrap();
        let expected0: [&[u64]; 5] = [
            &[3, 2, 1, 1, 1],
            &[2, 1, 1, 1],
            &[2, 1, 1],
            &[2, 1],
            &[1],
        ];
        for (i, row) in expected0.iter().enumerate() {
            for (off, &want) in row.iter().enumerate() {
                assert_eq!(hf0.get(i, i + off), want, "HF0({i}, {})", i + off);
            }
        }
        let hf1 = hilbert_grid(&seq, HomologyDim::One, Construction::Element).unwrap();
        for (i, j, v) in hf1.iter_upper() {
            let want = u64::from((i, j) == (0, 3) || (i, j) == (1, 3));
            assert_eq!(v, want, "HF1({i}, {j})");
        }
    }

    #[test]
    fn element_and_nerve_grids_agree_on_example() {
        let seq = three_element_sequence();
        for dim in [HomologyDim::Zero, HomologyDim::One] {
            let a = hilbert_grid(&seq, dim, Construction::Element).unwrap();
            let b = hilbert_grid(&seq, dim, Construction::Nerve).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn zero_conflict_detector_on_example() {
        let seq = three_element_sequence();
        let hf0 = hilbert_grid(&seq, HomologyDim::Zero, Construction::Nerve).unwrap();
        assert!(detect_zero_conflict(&seq, 1, 2, &hf0).unwrap());
        for m in 0..seq.len() {
            assert!(!detect_zero_conflict(&seq, m, m, &hf0).unwrap());
        }
        // Hierarchical windows have no 0-conflict.
        assert!(!detect_zero_conflict(&seq, 0, 1, &hf0).unwrap());
        let d = dendrogram();
        let hf0 = hilbert_grid(&d, HomologyDim::Zero, Construction::Nerve).unwrap();
        for i in 0..d.len() {
            for j in i..d.len() {
                assert!(!detect_zero_conflict(&d, i, j, &hf0).unwrap());
            }
        }
    }

    #[test]
    fn triangle_zero_conflict_detector() {
        let seq = three_element_sequence();
        assert!(detect_triangle_zero_conflict(&seq, 1, 2).unwrap());
        // A 0-conflict without any chained triple: {01|2|3} vs {0|1|23}.
        let no_triple = PartitionSequence::with_unit_scales(vec![
            part(4, &[&[0, 1], &[2], &[3]]),
            part(4, &[&[0], &[1], &[2, 3]]),
        ])
        .unwrap();
        let hf0 = hilbert_grid(&no_triple, HomologyDim::Zero, Construction::Nerve).unwrap();
        assert!(detect_zero_conflict(&no_triple, 0, 1, &hf0).unwrap());
        assert!(!detect_triangle_zero_conflict(&no_triple, 0, 1).unwrap());
        // Nested windows have none either.
        let d = dendrogram();
        for i in 0..d.len() {
            for j in i..d.len() {
                assert!(!detect_triangle_zero_conflict(&d, i, j).unwrap());
            }
        }
    }

    #[test]
    fn average_conflicts_of_three_element_example() {
        let seq = three_element_sequence();
        let hf0 = hilbert_grid(&seq, HomologyDim::Zero, Construction::Nerve).unwrap();
        let hf1 = hilbert_grid(&seq, HomologyDim::One, Construction::Nerve).unwrap();
        // Unit gaps: every off-diagonal cell weighs 1, diagonal cells 1/2,
        // and the closed form reduces to 1 - 2/25 * 10 and 2/25 * 2.
        let c0 = average_conflict0(&seq, &hf0).unwrap();
        let c1 = average_conflict1(&seq, &hf1).unwrap();
        assert!((c0 - 0.2).abs() < 1e-12, "c0 = {c0}");
        assert!((c1 - 0.16).abs() < 1e-12, "c1 = {c1}");
    }

    #[test]
    fn average_conflicts_match_dense_sampling_oracle() {
        let seq = three_element_sequence();
        let hf0 = hilbert_grid(&seq, HomologyDim::Zero, Construction::Nerve).unwrap();
        let hf1 = hilbert_grid(&seq, HomologyDim::One, Construction::Nerve).unwrap();
        let c0 = average_conflict0(&seq, &hf0).unwrap();
        let c1 = average_conflict1(&seq, &hf1).unwrap();
        let (o0, o1) = dense_sampling_oracle(&seq, &hf0, &hf1, 400);
        assert!((c0 - o0).abs() < 1e-3, "c0 {c0} vs oracle {o0}");
        assert!((c1 - o1).abs() < 1e-3, "c1 {c1} vs oracle {o1}");
    }

    /// Midpoint Riemann sum over the triangle `{t_1 <= s <= t <= T}`,
    /// resolving each sample to its containing cell; independent of the
    /// closed-form quadrature.
    fn dense_sampling_oracle(
        seq: &PartitionSequence,
        hf0: &BigradeGrid,
        hf1: &BigradeGrid,
        divisions: usize,
    ) -> (f64, f64) {
        let points = seq.change_points();
        let m = points.len();
        let t1 = points[0];
        let terminal = points[m - 1] + (points[m - 1] - t1) / (m - 1) as f64;
        let step = (terminal - t1) / divisions as f64;
        let layer_of = |v: f64| match points.binary_search_by(|p| p.partial_cmp(&v).unwrap()) {
            Ok(k) => k,
            Err(next) => next - 1,
        };
        let counts: Vec<u64> = seq.partitions().iter().map(|p| p.len() as u64).collect();
        let mut sum0 = 0.0;
        let mut sum1 = 0.0;
        let mut area = 0.0;
        for a in 0..divisions {
            let s = t1 + (a as f64 + 0.5) * step;
            for b in a..divisions {
                let t = t1 + (b as f64 + 0.5) * step;
                if t < s {
                    continue;
                }
                let (i, j) = (layer_of(s), layer_of(t));
                let min_count = (i..=j).map(|r| counts[r]).min().unwrap();
                sum0 += hf0.get(i, j) as f64 / min_count as f64;
                sum1 += hf1.get(i, j) as f64;
                area += 1.0;
            }
        }
        (1.0 - sum0 / area, sum1 / area)
    }

    #[test]
    fn hierarchical_sequences_have_zero_conflict_measures() {
        let d = dendrogram();
        let hf0 = hilbert_grid(&d, HomologyDim::Zero, Construction::Nerve).unwrap();
        let hf1 = hilbert_grid(&d, HomologyDim::One, Construction::Nerve).unwrap();
        assert_eq!(average_conflict0(&d, &hf0).unwrap(), 0.0);
        assert_eq!(average_conflict1(&d, &hf1).unwrap(), 0.0);
        assert!(hf1.is_zero());
    }

    #[test]
    fn single_layer_sequences_have_zero_measures() {
        let seq = PartitionSequence::with_unit_scales(vec![part(3, &[&[0, 1], &[2]])]).unwrap();
        let hf0 = hilbert_grid(&seq, HomologyDim::Zero, Construction::Nerve).unwrap();
        let hf1 = hilbert_grid(&seq, HomologyDim::One, Construction::Nerve).unwrap();
        assert_eq!(average_conflict0(&seq, &hf0).unwrap(), 0.0);
        assert_eq!(average_conflict1(&seq, &hf1).unwrap(), 0.0);
    }

    #[test]
    fn hilbert_distance_is_a_metric_on_grids() {
        let seq = three_element_sequence();
        let hf0 = hilbert_grid(&seq, HomologyDim::Zero, Construction::Nerve).unwrap();
        let hf1 = hilbert_grid(&seq, HomologyDim::One, Construction::Nerve).unwrap();
        assert_eq!(hilbert_distance(&hf0, &hf0).unwrap(), 0.0);
        let ab = hilbert_distance(&hf0, &hf1).unwrap();
        let ba = hilbert_distance(&hf1, &hf0).unwrap();
        assert_eq!(ab, ba);
        assert!(ab > 0.0);
    }

    #[test]
    fn hilbert_distance_rejects_mismatched_grids() {
        let a = BigradeGrid::new_zero(vec![0.0, 1.0]);
        let b = BigradeGrid::new_zero(vec![0.0, 2.0]);
        assert!(matches!(
            hilbert_distance(&a, &b),
            Err(Error::GridMismatch(_))
        ));
    }

    #[test]
    fn grid_for_wrong_sequence_is_rejected() {
        let seq = three_element_sequence();
        let other = dendrogram();
        let grid = hilbert_grid(&other, HomologyDim::Zero, Construction::Nerve).unwrap();
        assert!(average_conflict0(&seq, &grid).is_err());
        assert!(detect_zero_conflict(&seq, 0, 1, &grid).is_err());
    }
}
