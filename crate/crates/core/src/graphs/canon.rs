//! Brute-force canonical forms for small bipartitioned graphs.
//!
//! Two bipartitioned graphs are isomorphic when a relabelling maps `A` onto
//! `A`, `B` onto `B`, and makes the `A`-subgraph, the `B`-subgraph and the
//! cross block identical. The key is the lexicographically smallest
//! serialisation of that triple over all `|A|!·|B|!` colour-preserving
//! relabellings.

use std::collections::HashSet;

use super::{Bipartition, Graph};
use crate::error::{capability, Result};

/// Largest vertex count the brute-force canonicaliser accepts.
pub const CANON_MAX_VERTICES: usize = 10;

/// Largest vertex count for which [`nonisomorphic_graphs`] enumerates classes.
const ENUM_MAX_VERTICES: usize = 7;

/// All permutations of `0..k` (Heap's algorithm).
fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..k).collect();
    let mut out = vec![p.clone()];
    let mut c = vec![0usize; k];
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            out.push(p.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Upper-triangle bits of the subgraph on `order`, first pair most significant.
fn sub_bits(g: &Graph, order: &[usize]) -> u64 {
    let mut bits = 0u64;
    for j in 1..order.len() {
        for i in 0..j {
            bits = bits << 1 | u64::from(g.has_edge(order[i], order[j]));
        }
    }
    bits
}

fn cross_bits(g: &Graph, a: &[usize], b: &[usize]) -> u64 {
    let mut bits = 0u64;
    for &av in a {
        for &bv in b {
            bits = bits << 1 | u64::from(g.has_edge(av, bv));
        }
    }
    bits
}

/// Relabellings of `side` whose induced subgraph serialises minimally.
fn minimal_orders(g: &Graph, side: &[usize]) -> (u64, Vec<Vec<usize>>) {
    let mut best = u64::MAX;
    let mut orders = Vec::new();
    for perm in permutations(side.len()) {
        let order: Vec<usize> = perm.iter().map(|&i| side[i]).collect();
        let bits = sub_bits(g, &order);
        if bits < best {
            best = bits;
            orders.clear();
        }
        if bits == best {
            orders.push(order);
        }
    }
    (best, orders)
}

/// Canonical key of a bipartitioned graph: equal keys exactly when the two
/// bipartitioned graphs are isomorphic with `A` and `B` preserved.
pub fn canonical_bipartition_key(g: &Graph, bp: &Bipartition) -> Result<Vec<u8>> {
    let n = g.n();
    if n > CANON_MAX_VERTICES {
        return Err(capability(format!(
            "brute-force canonical keys support at most {CANON_MAX_VERTICES} vertices, got {n}"
        )));
    }
    if bp.n() != n {
        return Err(crate::error::contract(format!(
            "graph has {n} vertices, bipartition {}",
            bp.n()
        )));
    }
    let a = bp.a_indices();
    let b = bp.b_indices();
    let (a_bits, a_orders) = minimal_orders(g, &a);
    let (b_bits, b_orders) = minimal_orders(g, &b);
    let cross = a_orders
        .iter()
        .flat_map(|ao| b_orders.iter().map(move |bo| cross_bits(g, ao, bo)))
        .min()
        .unwrap_or(0);

    let b_len = b.len() * b.len().saturating_sub(1) / 2;
    let cross_len = a.len() * b.len();
    let packed = ((a_bits << b_len) | b_bits) << cross_len | cross;
    let mut key = vec![n as u8, a.len() as u8];
    key.extend_from_slice(&packed.to_be_bytes());
    Ok(key)
}

/// One representative of every isomorphism class of graphs on `n` vertices,
/// built by extending the classes on `n - 1` vertices with a new vertex and
/// deduplicating by canonical key. Supports `n <= 7`.
pub fn nonisomorphic_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > ENUM_MAX_VERTICES {
        return Err(capability(format!(
            "class enumeration supports at most {ENUM_MAX_VERTICES} vertices; use a graph6 list for n = {n}"
        )));
    }
    let mut classes = vec![Graph::empty(0)];
    for m in 1..=n {
        let all_b = Bipartition::new(m, 0)?;
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for base in &classes {
            for nbhd in 0u64..1 << (m - 1) {
                let mut g = Graph::empty(m);
                for (i, j) in base.edges() {
                    g.add_edge(i, j);
                }
                for i in 0..m - 1 {
                    if nbhd >> i & 1 == 1 {
                        g.add_edge(i, m - 1);
                    }
                }
                if seen.insert(canonical_bipartition_key(&g, &all_b)?) {
                    next.push(g);
                }
            }
        }
        classes = next;
    }
    Ok(classes)
}
