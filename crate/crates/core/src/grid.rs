//! Upper-triangular grids of values indexed by pairs of change points.

use crate::error::{Error, Result};

/// An `M x M` upper-triangular grid of non-negative integers indexed by
/// layer pairs `(i, j)` with `i <= j`, together with the scale values of
/// the change points it was computed from. Only upper-triangular entries
/// exist; the storage is packed row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct BigradeGrid {
    m: usize,
    change_points: Vec<f64>,
    values: Vec<u64>,
}

impl BigradeGrid {
    pub fn new_zero(change_points: Vec<f64>) -> Self {
        let m = change_points.len();
        assert!(m >= 1, "grid needs at least one layer");
        Self {
            m,
            change_points,
            values: vec![0; m * (m + 1) / 2],
        }
    }

    pub fn layer_count(&self) -> usize {
        self.m
    }

    pub fn change_points(&self) -> &[f64] {
        &self.change_points
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        assert!(i <= j && j < self.m, "bigrade ({i}, {j}) out of range");
        // Row i starts after the (m) + (m-1) + .. + (m-i+1) entries above it.
        i * (2 * self.m - i + 1) / 2 + (j - i)
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.values[self.offset(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        let at = self.offset(i, j);
        self.values[at] = value;
    }

    /// Iterates `(i, j, value)` over the upper triangle in row-major order.
    pub fn iter_upper(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        (0..self.m).flat_map(move |i| (i..self.m).map(move |j| (i, j, self.get(i, j))))
    }

    /// Grid with every entry zero?
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Checks that `other` is defined over the same layers and change
    /// points, as required before comparing or subtracting grids.
    pub fn check_same_support(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::GridMismatch(format!(
                "layer counts differ: {} vs {}",
                self.m, other.m
            )));
        }
        if self.change_points != other.change_points {
            return Err(Error::GridMismatch(
                "change points differ; grids over different scale axes are not resampled".into(),
            ));
        }
        Ok(())
    }
}
