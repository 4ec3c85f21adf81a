//! GHZ extraction from linear cluster states.
//!
//! The `n`-vertex path graph state is measured on `A` and the remaining
//! vertices `B` split into islands, the maximal runs of consecutive `B`
//! vertices. Two classifiers are compared over every configuration:
//!
//! * the island criterion for extraction under local Cliffords, local Pauli
//!   measurements and classical communication (LC + LPM + CC), and
//! * the GF(2) test, which rules extraction out under arbitrary local
//!   unitaries, measurements and communication (LU + GM + CC).
//!
//! `S_N` holds the configurations the first rejects and `T_N` those the
//! second rejects; `T_N ⊆ S_N` and the ratio `|T_N|/|S_N|` tends to one.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{capability, contract, Result};
use crate::graphs::{Bipartition, Graph};
use crate::graphtest::ea_graph_test;

/// Largest path length [`census`] sweeps.
pub const CENSUS_MAX_VERTICES: usize = 20;

/// Maximal runs of `B` vertices along `0..n`, as `(start, length)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IslandDecomposition {
    pub runs: Vec<(usize, usize)>,
}

impl IslandDecomposition {
    pub fn lengths(&self) -> Vec<usize> {
        self.runs.iter().map(|r| r.1).collect()
    }
}

pub fn islands(bp: &Bipartition) -> IslandDecomposition {
    let mut runs = Vec::new();
    let mut start = None;
    for v in 0..=bp.n() {
        let in_b = v < bp.n() && !bp.contains_a(v);
        match (in_b, start) {
            (true, None) => start = Some(v),
            (false, Some(s)) => {
                runs.push((s, v - s));
                start = None;
            }
            _ => {}
        }
    }
    IslandDecomposition { runs }
}

/// The island arrangements that admit extraction under LC + LPM + CC.
/// Patterns read the ordered island sequence of `B`; `A` vertices at the
/// ends of the path play no role.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeJongPattern {
    /// Every island has size 1.
    Singles,
    /// A 2-island first, all others size 1.
    LeadingPair,
    /// A 2-island last, all others size 1.
    TrailingPair,
    /// 2-islands first and last, everything between size 1.
    BothEndPairs,
    /// `B` is a single 3-island.
    LoneTriple,
}

impl DeJongPattern {
    /// Every pattern with a short textual form, for audit output.
    pub const TABLE: [(DeJongPattern, &'static str); 5] = [
        (DeJongPattern::Singles, "1-1-...-1"),
        (DeJongPattern::LeadingPair, "2-1-...-1"),
        (DeJongPattern::TrailingPair, "1-...-1-2"),
        (DeJongPattern::BothEndPairs, "2-1-...-1-2"),
        (DeJongPattern::LoneTriple, "3"),
    ];
}

impl fmt::Display for DeJongPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = Self::TABLE
            .iter()
            .find(|(p, _)| p == self)
            .map(|(_, s)| *s)
            .unwrap_or("?");
        f.write_str(s)
    }
}

/// The pattern matched by an island-length sequence, if any. A single
/// 2-island counts as a leading pair.
pub fn dejong_pattern(lengths: &[usize]) -> Option<DeJongPattern> {
    match lengths {
        [] => None,
        [3] => Some(DeJongPattern::LoneTriple),
        _ if lengths.iter().all(|&l| l == 1) => Some(DeJongPattern::Singles),
        [first, middle @ .., last] if middle.iter().all(|&l| l == 1) => match (*first, *last) {
            (2, 2) => Some(DeJongPattern::BothEndPairs),
            (2, 1) => Some(DeJongPattern::LeadingPair),
            (1, 2) => Some(DeJongPattern::TrailingPair),
            _ => None,
        },
        [2] => Some(DeJongPattern::LeadingPair),
        _ => None,
    }
}

pub fn dejong_extractable(bp: &Bipartition) -> bool {
    dejong_pattern(&islands(bp).lengths()).is_some()
}

/// The path graph `0 - 1 - … - (n-1)`.
pub fn path_graph(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for i in 1..n {
        g.add_edge(i - 1, i);
    }
    g
}

/// GF(2) test on the path: `false` means extraction is impossible even with
/// LU + GM + CC.
pub fn matrix_test_line(bp: &Bipartition) -> Result<bool> {
    ea_graph_test(&path_graph(bp.n()), bp)
}

/// Counts over every configuration of the `n`-path with nonempty `A` and
/// nonempty even `B`. Configurations related by reflecting the path are
/// counted separately.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterCensus {
    pub n: usize,
    pub configurations: u64,
    /// `|S_N|`: no island pattern applies.
    pub s_count: u64,
    /// `|T_N|`: the GF(2) test fails.
    pub t_count: u64,
    /// Configurations in `T_N` but not `S_N`; zero when `T_N ⊆ S_N`.
    pub inclusion_violations: u64,
    /// Configurations with an island of size at least 3 that pass the GF(2)
    /// test; zero when such islands always block extraction.
    pub long_island_passes: u64,
    pub ratio: f64,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    configurations: u64,
    s: u64,
    t: u64,
    violations: u64,
    long_passes: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally {
            configurations: self.configurations + o.configurations,
            s: self.s + o.s,
            t: self.t + o.t,
            violations: self.violations + o.violations,
            long_passes: self.long_passes + o.long_passes,
        }
    }
}

pub fn census(n: usize) -> Result<ClusterCensus> {
    if n > CENSUS_MAX_VERTICES {
        return Err(capability(format!(
            "census supports n <= {CENSUS_MAX_VERTICES}, got {n}"
        )));
    }
    if n < 2 {
        return Err(contract("census needs at least two vertices"));
    }
    let g = path_graph(n);
    let full = (1u64 << n) - 1;
    let tally = (1..full)
        .into_par_iter()
        .map(|a_mask| -> Result<Tally> {
            if !(n - a_mask.count_ones() as usize).is_multiple_of(2) {
                return Ok(Tally::default());
            }
            let bp = Bipartition::new(n, a_mask)?;
            let lengths = islands(&bp).lengths();
            let in_s = dejong_pattern(&lengths).is_none();
            let passes = ea_graph_test(&g, &bp)?;
            let in_t = !passes;
            Ok(Tally {
                configurations: 1,
                s: u64::from(in_s),
                t: u64::from(in_t),
                violations: u64::from(in_t && !in_s),
                long_passes: u64::from(passes && lengths.iter().any(|&l| l >= 3)),
            })
        })
        .try_reduce(Tally::default, |a, b| Ok(a + b))?;
    Ok(ClusterCensus {
        n,
        configurations: tally.configurations,
        s_count: tally.s,
        t_count: tally.t,
        inclusion_violations: tally.violations,
        long_island_passes: tally.long_passes,
        ratio: if tally.s == 0 {
            f64::NAN
        } else {
            tally.t as f64 / tally.s as f64
        },
    })
}

/// Fibonacci numbers with `F_1 = F_2 = 1`.
pub fn fibonacci(k: usize) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..k {
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    a
}

/// Subsets of an `n`-path with no two adjacent vertices:
/// `f(n) = f(n−1) + f(n−2)`, `f(0) = 1`, `f(1) = 2`.
pub fn fib_f(n: usize) -> BigUint {
    let (mut a, mut b) = (BigUint::one(), BigUint::from(2u32));
    for _ in 0..n {
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    a
}

/// `g(m) = Σ_{i=3}^{m−2} g(m−i) F_{i−2}` with `g(2) = 1`, `g(3) = g(4) = 0`.
pub fn g_count(m: usize) -> Result<BigUint> {
    if m < 2 {
        return Err(contract(format!("g is defined for m >= 2, got {m}")));
    }
    Ok(g_table(m).swap_remove(m))
}

fn g_table(m: usize) -> Vec<BigUint> {
    let fib: Vec<BigUint> = (0..=m).map(fibonacci).collect();
    let mut g = vec![BigUint::zero(); m.max(4) + 1];
    g[2] = BigUint::one();
    for k in 5..=m {
        let mut acc = BigUint::zero();
        for i in 3..=k - 2 {
            acc += &g[k - i] * &fib[i - 2];
        }
        g[k] = acc;
    }
    g
}

/// Coefficients `c_0..=c_len` of `x²(1−x−x²)/(1−x−x²−x³)` by exact power
/// series division.
pub fn gf_series(len: usize) -> Vec<BigInt> {
    let num = poly(&[0, 0, 1, -1, -1]);
    let den = poly(&[1, -1, -1, -1]);
    series_divide(&num, &den, len)
}

fn poly(c: &[i64]) -> Vec<BigInt> {
    c.iter().map(|&x| BigInt::from(x)).collect()
}

/// `num / den` to order `len`, for `den[0] = ±1`.
fn series_divide(num: &[BigInt], den: &[BigInt], len: usize) -> Vec<BigInt> {
    let d0 = &den[0];
    let mut out: Vec<BigInt> = Vec::with_capacity(len + 1);
    for k in 0..=len {
        let mut c = num.get(k).cloned().unwrap_or_default();
        for j in 1..den.len().min(k + 1) {
            c -= &den[j] * &out[k - j];
        }
        out.push(c / d0);
    }
    out
}

/// `φ = (1+√5)/2`, the real root `R` of `1 − x − x² − x³`, and `a = 1/R`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthConstants {
    pub phi: f64,
    pub r: f64,
    pub a: f64,
}

pub fn growth_constants() -> GrowthConstants {
    let p = |x: f64| 1.0 - x - x * x - x * x * x;
    // p is decreasing on [0, 1] with p(0) = 1, p(1) = -2.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if p(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    GrowthConstants {
        phi: (1.0 + 5f64.sqrt()) / 2.0,
        r,
        a: 1.0 / r,
    }
}
