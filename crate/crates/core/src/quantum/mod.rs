//! Dense statevectors and density matrices.
//!
//! Qubit ordering is little-endian everywhere: qubit `i` is bit `i` of a
//! basis index. Bipartition masks use the same convention, and any state or
//! operator on a subsystem indexes its qubits in ascending order.

mod density;

pub(crate) use density::fidelity_with_flip;
pub use density::{fidelity, partial_trace, trace_ratio, DensityMatrix, DENSITY_MAX_QUBITS};

use num_complex::Complex64;

use crate::error::{capability, contract, Result};
use crate::graphs::{Bipartition, Graph};

pub type C64 = Complex64;

/// Largest qubit count for a dense statevector (2^14 amplitudes).
pub const STATE_MAX_QUBITS: usize = 14;

const NORM_TOL: f64 = 1e-10;

/// Operations that conjugate in the computational basis and then apply
/// `σ_y` to every qubit.
pub trait SpinFlip {
    fn spin_flip(&self) -> Self;
}

#[inline]
pub(crate) fn parity_sign(z: usize) -> f64 {
    if z.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `i^k` for `k >= 0`.
#[inline]
pub(crate) fn i_pow(k: usize) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// A normalized pure state on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amp: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes whose norm is within `1e-10` of one, renormalizing
    /// them exactly.
    pub fn new(n_qubits: usize, amp: Vec<C64>) -> Result<Self> {
        let s = Self::from_unnormalized(n_qubits, amp)?;
        Ok(s)
    }

    fn check_len(n_qubits: usize, len: usize) -> Result<()> {
        if n_qubits > STATE_MAX_QUBITS {
            return Err(capability(format!(
                "{n_qubits} qubits exceeds the {STATE_MAX_QUBITS}-qubit statevector cap"
            )));
        }
        if len != 1 << n_qubits {
            return Err(contract(format!(
                "{len} amplitudes for {n_qubits} qubits (expected {})",
                1usize << n_qubits
            )));
        }
        Ok(())
    }

    fn from_unnormalized(n_qubits: usize, mut amp: Vec<C64>) -> Result<Self> {
        Self::check_len(n_qubits, amp.len())?;
        let norm = amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(contract(format!("state has norm {norm}, expected 1")));
        }
        amp.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n_qubits, amp })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(n_qubits: usize, mut amp: Vec<C64>) -> Result<Self> {
        Self::check_len(n_qubits, amp.len())?;
        let norm = amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(contract("cannot normalize a zero or non-finite vector"));
        }
        amp.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n_qubits, amp })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut amp = vec![C64::new(0.0, 0.0); 1 << n_qubits.min(STATE_MAX_QUBITS + 1)];
        if index >= amp.len() {
            return Err(contract(format!("basis index {index} out of range")));
        }
        amp[index] = C64::new(1.0, 0.0);
        Self::new(n_qubits, amp)
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`.
    pub fn ghz(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(contract("GHZ state needs at least one qubit"));
        }
        let dim = 1usize << n_qubits.min(STATE_MAX_QUBITS + 1);
        let mut amp = vec![C64::new(0.0, 0.0); dim];
        amp[0] = C64::new(1.0, 0.0);
        amp[dim - 1] = C64::new(1.0, 0.0);
        Self::normalized(n_qubits, amp)
    }

    /// Equal superposition of the `n` single-excitation basis states.
    pub fn w(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(contract("W state needs at least one qubit"));
        }
        let mut amp = vec![C64::new(0.0, 0.0); 1 << n_qubits.min(STATE_MAX_QUBITS + 1)];
        for q in 0..n_qubits {
            amp[1 << q] = C64::new(1.0, 0.0);
        }
        Self::normalized(n_qubits, amp)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amp
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amp.iter().zip(&other.amp).map(|(a, b)| a.conj() * b).sum()
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_phase(&self, theta: f64) -> Self {
        let ph = C64::from_polar(1.0, theta);
        Self {
            n_qubits: self.n_qubits,
            amp: self.amp.iter().map(|a| a * ph).collect(),
        }
    }

    /// Reshapes the amplitudes into a row-major `d_A × d_B` matrix:
    /// entry `(a, b)` is the amplitude of the basis state whose `A` qubits
    /// spell `a` and whose `B` qubits spell `b`, each in ascending qubit order.
    pub fn split(&self, bp: &Bipartition) -> Result<Vec<C64>> {
        let (a_pos, b_pos) = deposit_tables(self.n_qubits, bp)?;
        let d_b = b_pos.len();
        let mut m = vec![C64::new(0.0, 0.0); self.dim()];
        for (a, &za) in a_pos.iter().enumerate() {
            for (b, &zb) in b_pos.iter().enumerate() {
                m[a * d_b + b] = self.amp[za | zb];
            }
        }
        Ok(m)
    }

    /// Inverse of [`split`](Self::split); normalizes the result.
    pub fn from_split(bp: &Bipartition, m: &[C64]) -> Result<Self> {
        let (a_pos, b_pos) = deposit_tables(bp.n(), bp)?;
        let d_b = b_pos.len();
        if m.len() != a_pos.len() * d_b {
            return Err(contract("matrix size does not match the bipartition"));
        }
        let mut amp = vec![C64::new(0.0, 0.0); 1 << bp.n()];
        for (a, &za) in a_pos.iter().enumerate() {
            for (b, &zb) in b_pos.iter().enumerate() {
                amp[za | zb] = m[a * d_b + b];
            }
        }
        Self::normalized(bp.n(), amp)
    }

    /// `|χ⟩_A ⊗ |φ⟩_B` placed on the qubits of `bp`.
    pub fn product(bp: &Bipartition, a_state: &Self, b_state: &Self) -> Result<Self> {
        if a_state.n_qubits != bp.n_a() || b_state.n_qubits != bp.n_b() {
            return Err(contract("factor sizes do not match the bipartition"));
        }
        let m: Vec<C64> = a_state
            .amp
            .iter()
            .flat_map(|x| b_state.amp.iter().map(move |y| x * y))
            .collect();
        Self::from_split(bp, &m)
    }
}

/// Basis-index contributions of each `A` value and each `B` value.
pub(crate) fn deposit_tables(n: usize, bp: &Bipartition) -> Result<(Vec<usize>, Vec<usize>)> {
    if bp.n() != n {
        return Err(contract(format!("state has {n} qubits, bipartition {}", bp.n())));
    }
    let deposit = |qubits: &[usize]| -> Vec<usize> {
        (0..1usize << qubits.len())
            .map(|x| {
                qubits
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| x >> k & 1 == 1)
                    .fold(0usize, |z, (_, &q)| z | 1 << q)
            })
            .collect()
    };
    Ok((deposit(&bp.a_indices()), deposit(&bp.b_indices())))
}

impl SpinFlip for StateVector {
    /// `σ_y^{⊗n} |ψ*⟩`, using `σ_y^{⊗n}|x⟩ = i^n (-1)^{h(x)} |x̄⟩`.
    fn spin_flip(&self) -> Self {
        let n = self.n_qubits;
        let all = self.dim() - 1;
        let phase = i_pow(n);
        let amp = (0..self.dim())
            .map(|w| {
                let x = w ^ all;
                phase * parity_sign(x) * self.amp[x].conj()
            })
            .collect();
        Self { n_qubits: n, amp }
    }
}

/// `|⟨ψ|ψ̃⟩|` evaluated by pairing each index with its complement:
/// `|Σ_z (-1)^{h(z)} ψ_z ψ_{z̄}|`.
pub fn n_tangle(s: &StateVector) -> f64 {
    overlap_with_flip(s.amplitudes()).norm()
}

/// `Σ_z (-1)^{h(z)} v_z v_{z̄}` for an unnormalized vector; its modulus is
/// `|⟨v|ṽ⟩|`.
pub(crate) fn overlap_with_flip(v: &[C64]) -> C64 {
    let all = v.len() - 1;
    v.iter()
        .enumerate()
        .map(|(z, &a)| parity_sign(z) * a * v[z ^ all])
        .sum()
}

/// The graph state `∏ CZ_ab |+⟩^{⊗n}` by direct sign accumulation: the
/// amplitude of `z` is `2^{-n/2} (-1)^{#edges inside z}`.
pub fn build_graph_state(g: &Graph) -> Result<StateVector> {
    let n = g.n();
    if n > STATE_MAX_QUBITS {
        return Err(capability(format!(
            "{n} qubits exceeds the {STATE_MAX_QUBITS}-qubit statevector cap"
        )));
    }
    let scale = (0.5f64).powf(n as f64 / 2.0);
    let amp = (0..1usize << n)
        .map(|z| {
            // Each edge inside z is counted from both endpoints.
            let twice: u32 = (0..n)
                .filter(|&i| z >> i & 1 == 1)
                .map(|i| (g.neighbors(i) & z as u64).count_ones())
                .sum();
            C64::new(if (twice / 2).is_multiple_of(2) { scale } else { -scale }, 0.0)
        })
        .collect();
    Ok(StateVector { n_qubits: n, amp })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn graph_states_small() {
        let e2 = build_graph_state(&Graph::empty(2)).unwrap();
        assert!(e2.amplitudes().iter().all(|a| (a - c(0.5)).norm() < 1e-15));

        let k2 = build_graph_state(&Graph::from_edges(2, &[(0, 1)]).unwrap()).unwrap();
        let want = [0.5, 0.5, 0.5, -0.5];
        for (a, w) in k2.amplitudes().iter().zip(want) {
            assert!((a - c(w)).norm() < 1e-15);
        }

        let k3 = build_graph_state(&Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()).unwrap();
        for z in 0..8usize {
            let (z0, z1, z2) = (z & 1, z >> 1 & 1, z >> 2 & 1);
            let e = (z0 & z1) + (z0 & z2) + (z1 & z2);
            let sign = if e % 2 == 0 { 1.0 } else { -1.0 };
            assert!((k3.amplitudes()[z] - c(sign / 8f64.sqrt())).norm() < 1e-15);
        }
        assert!(build_graph_state(&Graph::empty(15)).is_err());
    }

    #[test]
    fn graph_state_matches_gate_application() {
        // Independent route: apply CZ gates one at a time to |+>^n.
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let g = crate::graphs::sample_uniform(6, &mut rng).unwrap();
            let mut amp = vec![c(0.125); 64];
            for (a, b) in g.edges() {
                for (z, x) in amp.iter_mut().enumerate() {
                    if z >> a & 1 == 1 && z >> b & 1 == 1 {
                        *x = -*x;
                    }
                }
            }
            let s = build_graph_state(&g).unwrap();
            for (x, y) in s.amplitudes().iter().zip(&amp) {
                assert!((x - y).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn spin_flip_single_qubit_and_bell() {
        let zero = StateVector::basis(1, 0).unwrap();
        let f = zero.spin_flip();
        assert!((f.amplitudes()[0]).norm() < 1e-15);
        assert!((f.amplitudes()[1] - C64::new(0.0, 1.0)).norm() < 1e-15);

        let bell = StateVector::ghz(2).unwrap();
        let fb = bell.spin_flip();
        for (x, y) in fb.amplitudes().iter().zip(bell.amplitudes()) {
            assert!((x + y).norm() < 1e-15);
        }
    }

    #[test]
    fn tangle_examples() {
        for n in [2, 4, 6, 8] {
            assert!((n_tangle(&StateVector::ghz(n).unwrap()) - 1.0).abs() < 1e-12);
        }
        assert!(n_tangle(&StateVector::w(4).unwrap()).abs() < 1e-12);
        assert!(n_tangle(&StateVector::basis(2, 0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn tangle_equals_overlap_with_flipped_state() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for n in 1..=6 {
            let s = crate::localization::haar_state(n, &mut rng).unwrap();
            let direct = s.inner(&s.spin_flip()).norm();
            assert!((direct - n_tangle(&s)).abs() < 1e-12);
        }
    }

    #[test]
    fn tangle_is_phase_invariant() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let s = crate::localization::haar_state(4, &mut rng).unwrap();
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            assert!((n_tangle(&s) - n_tangle(&s.with_phase(theta))).abs() < 1e-12);
        }
    }

    #[test]
    fn split_round_trip() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let s = crate::localization::haar_state(5, &mut rng).unwrap();
        let bp = Bipartition::from_a(5, &[1, 4]).unwrap();
        let m = s.split(&bp).unwrap();
        // Entry (a=0b10, b=0b101): A qubits (1,4) = (0,1), B qubits (0,2,3) = (1,0,1).
        let z = (1 << 4) | 1 | (1 << 3);
        assert_eq!(m[0b10 * 8 + 0b101], s.amplitudes()[z]);
        let back = StateVector::from_split(&bp, &m).unwrap();
        for (x, y) in back.amplitudes().iter().zip(s.amplitudes()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(StateVector::new(1, vec![c(1.0), c(1.0)]).is_err());
        assert!(StateVector::new(2, vec![c(1.0)]).is_err());
        assert!(StateVector::normalized(1, vec![c(0.0), c(0.0)]).is_err());
    }
}
