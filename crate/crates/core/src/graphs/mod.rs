//! Simple undirected graphs and measurement configurations.
//!
//! Vertices are 0-indexed. A figure that labels qubits `1..=N` maps to this
//! crate by subtracting one from every label.

mod canon;
mod ensemble;
mod families;
mod graph6;

pub use canon::{canonical_bipartition_key, nonisomorphic_graphs, CANON_MAX_VERTICES};
pub use ensemble::{BipartitionMode, EnsembleKind, EnsembleSpec, Family};
pub use families::{connected, make_family, sample_uniform};
pub use graph6::{parse_graph6, read_graph6, to_graph6};

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector};

/// Largest vertex count a [`Graph`] can hold; each adjacency row is one word.
pub const MAX_VERTICES: usize = 64;

#[inline]
fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A simple undirected graph stored as a symmetric bit-packed adjacency
/// matrix. Row `i` holds the neighbourhood of vertex `i` as a bitmask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    ///
    /// Panics if `n > MAX_VERTICES`.
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "graphs are limited to {MAX_VERTICES} vertices");
        Self { n, adj: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(contract(format!(
                "{n} vertices exceeds the {MAX_VERTICES}-vertex limit"
            )));
        }
        let mut g = Self::empty(n);
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(contract(format!("edge ({a},{b}) out of range for {n} vertices")));
            }
            if a == b {
                return Err(contract(format!("self-loop at vertex {a}")));
            }
            g.add_edge(a, b);
        }
        Ok(g)
    }

    /// Builds a graph from the upper-triangle edge bits in the same pair
    /// order graph6 uses: (0,1), (0,2), (1,2), (0,3), ...
    pub fn from_upper_bits(n: usize, bits: u64) -> Self {
        let mut g = Self::empty(n);
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if bits >> k & 1 == 1 {
                    g.add_edge(i, j);
                }
                k += 1;
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b && a < self.n && b < self.n);
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        assert!(a < self.n && b < self.n);
        self.adj[a] &= !(1 << b);
        self.adj[b] &= !(1 << a);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    /// Neighbourhood of `v` as a bitmask over vertices.
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, ordered by `i` then `j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            let upper = self.adj[i] & !full_mask(i + 1);
            BitIter(upper).map(move |j| (i, j))
        })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Iterates set-bit positions of a word, lowest first.
pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// A split of `n` qubits into a measured side `A` and a target side `B`.
///
/// `A` is stored as a bitmask (bit `i` set means qubit `i` is measured);
/// `B` is its complement. Empty sides are representable; experiments that
/// need both sides nonempty or `|B|` even check that themselves.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bipartition {
    n: usize,
    a_mask: u64,
}

impl Bipartition {
    pub fn new(n: usize, a_mask: u64) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(contract(format!("{n} qubits exceeds the {MAX_VERTICES}-qubit limit")));
        }
        if a_mask & !full_mask(n) != 0 {
            return Err(contract(format!(
                "mask {a_mask:#b} has bits beyond qubit {}",
                n.max(1) - 1
            )));
        }
        Ok(Self { n, a_mask })
    }

    pub fn from_a(n: usize, a: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &i in a {
            if i >= n {
                return Err(contract(format!("qubit {i} out of range for {n} qubits")));
            }
            mask |= 1 << i;
        }
        Self::new(n, mask)
    }

    pub fn from_b(n: usize, b: &[usize]) -> Result<Self> {
        let inv = Self::from_a(n, b)?;
        Self::new(n, full_mask(n) & !inv.a_mask)
    }

    /// `A = {0, .., n_a - 1}`, `B` the rest.
    pub fn leading(n: usize, n_a: usize) -> Result<Self> {
        if n_a > n {
            return Err(contract(format!("n_a = {n_a} exceeds n = {n}")));
        }
        Self::new(n, full_mask(n_a))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a_mask(&self) -> u64 {
        self.a_mask
    }

    pub fn b_mask(&self) -> u64 {
        full_mask(self.n) & !self.a_mask
    }

    pub fn n_a(&self) -> usize {
        self.a_mask.count_ones() as usize
    }

    pub fn n_b(&self) -> usize {
        self.n - self.n_a()
    }

    pub fn contains_a(&self, v: usize) -> bool {
        self.a_mask >> v & 1 == 1
    }

    /// Measured qubits in ascending order.
    pub fn a_indices(&self) -> Vec<usize> {
        BitIter(self.a_mask).collect()
    }

    /// Target qubits in ascending order.
    pub fn b_indices(&self) -> Vec<usize> {
        BitIter(self.b_mask()).collect()
    }

    pub fn require_even_b(&self) -> Result<()> {
        if !self.n_b().is_multiple_of(2) {
            return Err(contract(format!(
                "|B| = {} is odd; the n-tangle needs an even target",
                self.n_b()
            )));
        }
        Ok(())
    }

    /// A uniformly random `A` of exactly `n_a` qubits.
    pub fn random_fixed<R: Rng + ?Sized>(n: usize, n_a: usize, rng: &mut R) -> Result<Self> {
        if n_a > n {
            return Err(contract(format!("n_a = {n_a} exceeds n = {n}")));
        }
        let picked = rand::seq::index::sample(rng, n, n_a);
        let mask = picked.iter().fold(0u64, |m, i| m | 1 << i);
        Self::new(n, mask)
    }

    /// Uniform over all bipartitions with `A` nonempty and `|B|` even and
    /// nonzero, by rejection on uniform masks.
    pub fn random_even_target<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n < 3 {
            return Err(contract(format!(
                "no bipartition of {n} qubits has nonempty A and even nonzero |B|"
            )));
        }
        loop {
            let mask = rng.random::<u64>() & full_mask(n);
            let bp = Self::new(n, mask)?;
            if bp.n_a() > 0 && bp.n_b() >= 2 && bp.n_b() % 2 == 0 {
                return Ok(bp);
            }
        }
    }
}

impl fmt::Debug for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bipartition(A={:?}, B={:?})", self.a_indices(), self.b_indices())
    }
}

/// The `|B| × |A|` cross block `Γ` of the adjacency matrix and the parity
/// vector `D`, with both sides ordered by ascending vertex index.
///
/// `D[b]` is 1 exactly when `b` has even degree (zero included) inside the
/// subgraph induced on `B`.
pub fn gamma_and_d(g: &Graph, bp: &Bipartition) -> Result<(Gf2Matrix, Gf2Vector)> {
    if g.n() != bp.n() {
        return Err(contract(format!(
            "graph has {} vertices, bipartition {}",
            g.n(),
            bp.n()
        )));
    }
    let a = bp.a_indices();
    let b = bp.b_indices();
    let b_mask = bp.b_mask();
    let mut gamma = Gf2Matrix::zeros(b.len(), a.len());
    let mut d = Gf2Vector::zeros(b.len());
    for (row, &bv) in b.iter().enumerate() {
        let nb = g.neighbors(bv);
        for (col, &av) in a.iter().enumerate() {
            if nb >> av & 1 == 1 {
                gamma.set(row, col, true);
            }
        }
        d.set(row, (nb & b_mask).count_ones().is_multiple_of(2));
    }
    Ok((gamma, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_and_d_path() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let bp = Bipartition::from_a(3, &[0]).unwrap();
        let (gamma, d) = gamma_and_d(&g, &bp).unwrap();
        assert_eq!(gamma, Gf2Matrix::from_rows(&[[1], [0]]));
        assert_eq!(d.to_bits(), vec![false, false]);
    }

    #[test]
    fn gamma_and_d_star() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        let bp = Bipartition::from_a(3, &[0]).unwrap();
        let (gamma, d) = gamma_and_d(&g, &bp).unwrap();
        assert_eq!(gamma, Gf2Matrix::from_rows(&[[1], [1]]));
        assert_eq!(d.to_bits(), vec![true, true]);
    }

    #[test]
    fn gamma_and_d_edgeless() {
        let g = Graph::empty(5);
        for mask in 0..32u64 {
            let bp = Bipartition::new(5, mask).unwrap();
            let (gamma, d) = gamma_and_d(&g, &bp).unwrap();
            assert_eq!(gamma.rows(), bp.n_b());
            assert_eq!(gamma.cols(), bp.n_a());
            assert!((0..gamma.rows()).all(|r| (0..gamma.cols()).all(|c| !gamma.get(r, c))));
            assert_eq!(d.count_ones(), bp.n_b());
        }
    }

    #[test]
    fn gamma_entries_match_adjacency() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let g = sample_uniform(9, &mut rng).unwrap();
            let bp = Bipartition::new(9, rng.random::<u64>() & 0x1ff).unwrap();
            let (gamma, d) = gamma_and_d(&g, &bp).unwrap();
            let (a, b) = (bp.a_indices(), bp.b_indices());
            assert_eq!((gamma.rows(), gamma.cols(), d.len()), (b.len(), a.len(), b.len()));
            for (r, &bv) in b.iter().enumerate() {
                for (c, &av) in a.iter().enumerate() {
                    assert_eq!(gamma.get(r, c), g.has_edge(bv, av));
                }
                let inner = b.iter().filter(|&&w| g.has_edge(bv, w)).count();
                assert_eq!(d.get(r), inner % 2 == 0);
            }
        }
    }

    #[test]
    fn bipartition_validation() {
        assert!(Bipartition::new(3, 0b1000).is_err());
        let bp = Bipartition::from_b(4, &[1, 2]).unwrap();
        assert_eq!(bp.a_indices(), vec![0, 3]);
        assert_eq!(bp.b_mask(), 0b0110);
        assert!(bp.require_even_b().is_ok());
        assert!(Bipartition::from_a(4, &[1]).unwrap().require_even_b().is_err());
        let full = Bipartition::new(64, u64::MAX).unwrap();
        assert_eq!(full.n_b(), 0);
    }

    #[test]
    fn edges_are_ordered() {
        let g = Graph::from_edges(4, &[(2, 3), (0, 3), (0, 1)]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 3), (2, 3)]);
        assert_eq!(g.edge_count(), 3);
        assert!(Graph::from_edges(3, &[(1, 1)]).is_err());
    }
}
