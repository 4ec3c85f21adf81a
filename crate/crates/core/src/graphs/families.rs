use rand::seq::SliceRandom;
use rand::Rng;

use super::{full_mask, Family, Graph, MAX_VERTICES};
use crate::error::{contract, Error, Result};

/// Pairing-model attempts before giving up on a regular graph.
const MAX_PAIRING_ATTEMPTS: usize = 1_000_000;

/// A graph from the uniform ensemble: every one of the `n(n-1)/2` edges is
/// present independently with probability 1/2.
pub fn sample_uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Graph> {
    if n == 0 || n > MAX_VERTICES {
        return Err(contract(format!(
            "uniform sampling needs 1 <= n <= {MAX_VERTICES}, got {n}"
        )));
    }
    let mut g = Graph::empty(n);
    for j in 1..n {
        // Row j's lower triangle in one draw; mirrored into the other rows.
        let bits = rng.random::<u64>() & full_mask(j);
        let mut rest = bits;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            g.add_edge(i, j);
        }
    }
    Ok(g)
}

pub fn make_family<R: Rng + ?Sized>(family: Family, n: usize, rng: &mut R) -> Result<Graph> {
    if n > MAX_VERTICES {
        return Err(contract(format!(
            "{n} vertices exceeds the {MAX_VERTICES}-vertex limit"
        )));
    }
    match family {
        Family::Path => {
            let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            Graph::from_edges(n, &edges)
        }
        Family::Cycle => {
            if n < 3 {
                return Err(contract(format!("a cycle needs at least 3 vertices, got {n}")));
            }
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            Graph::from_edges(n, &edges)
        }
        Family::Complete => {
            let mut g = Graph::empty(n);
            for j in 1..n {
                for i in 0..j {
                    g.add_edge(i, j);
                }
            }
            Ok(g)
        }
        Family::Regular(k) => random_regular(n, k, rng),
    }
}

/// Pairing model with full rejection: shuffle `n·k` half-edges, pair them up
/// and start over whenever a loop or a repeated edge appears.
fn random_regular<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Graph> {
    if k >= n.max(1) || !(n * k).is_multiple_of(2) {
        return Err(contract(format!(
            "no {k}-regular graph on {n} vertices (need k < n and k·n even)"
        )));
    }
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
    'attempt: for _ in 0..MAX_PAIRING_ATTEMPTS {
        points.shuffle(rng);
        let mut g = Graph::empty(n);
        for pair in points.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b || g.has_edge(a, b) {
                continue 'attempt;
            }
            g.add_edge(a, b);
        }
        debug_assert!((0..n).all(|v| g.degree(v) == k));
        return Ok(g);
    }
    Err(Error::Capability(format!(
        "pairing model found no simple {k}-regular graph on {n} vertices in {MAX_PAIRING_ATTEMPTS} attempts"
    )))
}

/// True when every vertex is reachable from vertex 0. The empty graph counts
/// as connected.
pub fn connected(g: &Graph) -> bool {
    let n = g.n();
    if n == 0 {
        return true;
    }
    let mut seen = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= g.neighbors(v);
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen == full_mask(n)
}
