//! Simplicial complexes restricted to the 2-skeleton, with Betti numbers
//! computed over the two-element field.
//!
//! Only simplices of dimension at most 2 are materialised: the 0- and
//! 1-dimensional homology of a complex is fully determined by its
//! 2-skeleton, and element-based clusters of size `c` would otherwise
//! generate `2^c` faces. Complexes are immutable once built; the Betti
//! computations allocate private scratch and can run concurrently.

use std::collections::HashSet;

/// A 2-skeleton: vertices, edges and triangles in canonical sorted-vertex
/// form, downward closed (every face of a stored simplex is stored).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<u32>,
    edges: Vec<(u32, u32)>,
    triangles: Vec<(u32, u32, u32)>,
}

/// Accumulates simplices and enforces downward closure; `build` produces the
/// canonical immutable complex.
#[derive(Debug, Default)]
pub struct ComplexBuilder {
    vertices: HashSet<u32>,
    edges: HashSet<(u32, u32)>,
    triangles: HashSet<(u32, u32, u32)>,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: u32) {
        self.vertices.insert(v);
    }

    pub fn add_edge(&mut self, a: u32, b: u32) {
        assert_ne!(a, b, "degenerate edge");
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.vertices.insert(a);
        self.vertices.insert(b);
        self.edges.insert((a, b));
    }

    pub fn add_triangle(&mut self, a: u32, b: u32, c: u32) {
        let mut v = [a, b, c];
        v.sort_unstable();
        assert!(v[0] != v[1] && v[1] != v[2], "degenerate triangle");
        self.add_edge(v[0], v[1]);
        self.add_edge(v[0], v[2]);
        self.add_edge(v[1], v[2]);
        self.triangles.insert((v[0], v[1], v[2]));
    }

    /// Adds the full solid simplex on `members` (all pairs and triples).
    pub fn add_clique(&mut self, members: &[u32]) {
        match members.len() {
            0 => {}
            1 => self.add_vertex(members[0]),
            _ => {
                for (i, &a) in members.iter().enumerate() {
                    for &b in &members[i + 1..] {
                        self.add_edge(a, b);
                    }
                }
                for i in 0..members.len() {
                    for j in i + 1..members.len() {
                        for k in j + 1..members.len() {
                            self.add_triangle(members[i], members[j], members[k]);
                        }
                    }
                }
            }
        }
    }

    pub fn build(self) -> SimplicialComplex {
        let mut vertices: Vec<u32> = self.vertices.into_iter().collect();
        let mut edges: Vec<(u32, u32)> = self.edges.into_iter().collect();
        let mut triangles: Vec<(u32, u32, u32)> = self.triangles.into_iter().collect();
        vertices.sort_unstable();
        edges.sort_unstable();
        triangles.sort_unstable();
        SimplicialComplex {
            vertices,
            edges,
            triangles,
        }
    }
}

impl SimplicialComplex {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn triangles(&self) -> &[(u32, u32, u32)] {
        &self.triangles
    }

    pub fn contains_edge(&self, a: u32, b: u32) -> bool {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges.binary_search(&key).is_ok()
    }

    pub fn contains_triangle(&self, a: u32, b: u32, c: u32) -> bool {
        let mut v = [a, b, c];
        v.sort_unstable();
        self.triangles.binary_search(&(v[0], v[1], v[2])).is_ok()
    }

    /// True iff every simplex of `self` also belongs to `other`. Vertex ids
    /// are compared globally, so this is meaningful for complexes drawn from
    /// a shared vertex universe.
    pub fn is_subcomplex_of(&self, other: &Self) -> bool {
        self.vertices
            .iter()
            .all(|v| other.vertices.binary_search(v).is_ok())
            && self.edges.iter().all(|e| other.edges.binary_search(e).is_ok())
            && self
                .triangles
                .iter()
                .all(|t| other.triangles.binary_search(t).is_ok())
    }

    fn dense_index(&self, v: u32) -> usize {
        self.vertices.binary_search(&v).expect("vertex present")
    }

    /// Number of connected components of the 1-skeleton, equal to the
    /// dimension of the 0-th homology group. The empty complex has Betti
    /// number 0.
    pub fn betti0(&self) -> usize {
        let mut dsu = DisjointSets::new(self.vertices.len());
        for &(a, b) in &self.edges {
            dsu.union(self.dense_index(a), self.dense_index(b));
        }
        dsu.component_count()
    }

    /// Dimension of the 1-st homology group over the two-element field:
    /// `|E| - |V| + betti0 - rank(boundary_2)`.
    pub fn betti1(&self) -> usize {
        let cycles = self.edges.len() + self.betti0() - self.vertices.len();
        cycles - self.boundary2().rank()
    }

    /// The boundary operator from triangles to edges as a bit matrix.
    pub fn boundary2(&self) -> BoundaryMatrix {
        let words = self.edges.len().div_ceil(64);
        let columns = self
            .triangles
            .iter()
            .map(|&(a, b, c)| {
                let mut col = vec![0u64; words];
                for (x, y) in [(a, b), (a, c), (b, c)] {
                    let row = self.edges.binary_search(&(x, y)).expect("closure");
                    col[row / 64] ^= 1 << (row % 64);
                }
                col
            })
            .collect();
        BoundaryMatrix {
            n_edges: self.edges.len(),
            columns,
        }
    }

    /// Graph clustering coefficient of the 1-skeleton: three times the
    /// number of (graph) triangles over the number of paths of length 2.
    /// Wedge-free graphs get 1 by convention, so a value strictly below 1
    /// always witnesses an open wedge.
    pub fn clustering_coefficient(&self) -> f64 {
        let n = self.vertices.len();
        let words = n.div_ceil(64);
        let mut adjacency = vec![0u64; n * words];
        let mut degree = vec![0usize; n];
        for &(a, b) in &self.edges {
            let (a, b) = (self.dense_index(a), self.dense_index(b));
            adjacency[a * words + b / 64] |= 1 << (b % 64);
            adjacency[b * words + a / 64] |= 1 << (a % 64);
            degree[a] += 1;
            degree[b] += 1;
        }
        let wedges: u64 = degree
            .iter()
            .map(|&d| (d as u64) * (d as u64).saturating_sub(1) / 2)
            .sum();
        if wedges == 0 {
            return 1.0;
        }
        // Each graph triangle is counted once per edge.
        let mut closed: u64 = 0;
        for &(a, b) in &self.edges {
            let (a, b) = (self.dense_index(a), self.dense_index(b));
            closed += (0..words)
                .map(|w| (adjacency[a * words + w] & adjacency[b * words + w]).count_ones() as u64)
                .sum::<u64>();
        }
        closed as f64 / wedges as f64
    }
}

/// Boundary matrix from 2-chains to 1-chains over the two-element field.
/// Rows are edges in canonical order, columns are triangles; every column
/// has exactly three set bits.
#[derive(Debug, Clone)]
pub struct BoundaryMatrix {
    n_edges: usize,
    columns: Vec<Vec<u64>>,
}

impl BoundaryMatrix {
    pub fn n_rows(&self) -> usize {
        self.n_edges
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    /// Matrix rank by bit-level Gaussian elimination.
    pub fn rank(&self) -> usize {
        let words = self.n_edges.div_ceil(64);
        // pivot_for[row] is the reduced column owning that pivot row.
        let mut pivot_for: Vec<Option<usize>> = vec![None; self.n_edges];
        let mut reduced: Vec<Vec<u64>> = Vec::new();
        for col in &self.columns {
            let mut col = col.clone();
            loop {
                let Some(low) = lowest_set_bit(&col) else {
                    break; // reduced to zero
                };
                match pivot_for[low] {
                    Some(other) => {
                        let other = &reduced[other];
                        for w in 0..words {
                            col[w] ^= other[w];
                        }
                    }
                    None => {
                        pivot_for[low] = Some(reduced.len());
                        reduced.push(col);
                        break;
                    }
                }
            }
        }
        reduced.len()
    }
}

fn lowest_set_bit(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

struct DisjointSets {
    parent: Vec<usize>,
    components: usize,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            components: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.components -= 1;
        }
    }

    fn component_count(&self) -> usize {
        self.components
    }
}
