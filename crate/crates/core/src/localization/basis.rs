use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{contract, Result};
use crate::quantum::{StateVector, C64};

const UNITARY_TOL: f64 = 1e-10;

/// An ordered orthonormal basis of the measured register.
///
/// Element `i` is a vector of length `2^n`; [`branches`](Self::branches)
/// contracts every element against the `A` index of a split state at once.
pub trait Basis {
    fn n_qubits(&self) -> usize;

    fn dim(&self) -> usize {
        1 << self.n_qubits()
    }

    /// Amplitudes of basis element `i`, little-endian over the register.
    fn element(&self, i: usize) -> Vec<C64>;

    /// For a row-major `d_A × d_B` matrix `m`, overwrites row `i` with
    /// `⟨φ_i| m`, the unnormalized post-measurement branch.
    fn branches(&self, m: &mut [C64], d_b: usize);
}

/// `{|v⟩, |v⊥⟩}` with `|v⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleQubitBasis {
    theta: f64,
    phi: f64,
}

impl SingleQubitBasis {
    /// Accepts any angles and folds them into `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
    /// Folding `θ > π` to `2π − θ` with `φ + π` flips the global sign of
    /// `|v⟩` only, so the projectors are unchanged.
    pub fn new(theta: f64, phi: f64) -> Self {
        let mut t = theta.rem_euclid(TAU);
        let mut p = phi;
        if t > PI {
            t = TAU - t;
            p += PI;
        }
        Self {
            theta: t,
            phi: p.rem_euclid(TAU),
        }
    }

    pub fn z() -> Self {
        Self::new(0.0, 0.0)
    }

    pub fn x() -> Self {
        Self::new(PI / 2.0, 0.0)
    }

    pub fn y() -> Self {
        Self::new(PI / 2.0, PI / 2.0)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `[|v⟩, |v⊥⟩]` as amplitude pairs.
    pub fn vectors(&self) -> [[C64; 2]; 2] {
        let (s, c) = (self.theta / 2.0).sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        [[C64::new(c, 0.0), e * s], [-e.conj() * s, C64::new(c, 0.0)]]
    }
}

/// A tensor product of single-qubit bases, one per qubit of the register.
///
/// Element `i` picks `|v_k⟩` or `|v_k⊥⟩` on qubit `k` according to bit `k`
/// of `i`, so the lowest qubit's choice varies fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductBasis {
    qubits: Vec<SingleQubitBasis>,
}

impl ProductBasis {
    pub fn new(qubits: Vec<SingleQubitBasis>) -> Self {
        Self { qubits }
    }

    pub fn uniform(n: usize, q: SingleQubitBasis) -> Self {
        Self::new(vec![q; n])
    }

    /// Pairs `(θ_0, φ_0, θ_1, φ_1, …)`.
    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        if !angles.len().is_multiple_of(2) {
            return Err(contract("product basis angles come in (θ, φ) pairs"));
        }
        Ok(Self::new(
            angles.chunks(2).map(|c| SingleQubitBasis::new(c[0], c[1])).collect(),
        ))
    }

    pub fn angles(&self) -> Vec<f64> {
        self.qubits.iter().flat_map(|q| [q.theta, q.phi]).collect()
    }

    pub fn qubits(&self) -> &[SingleQubitBasis] {
        &self.qubits
    }

    /// Haar-random single-qubit bases on every qubit.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self::new(
            (0..n)
                .map(|_| {
                    let cos_theta: f64 = rng.random_range(-1.0..=1.0);
                    SingleQubitBasis::new(cos_theta.acos(), rng.random_range(0.0..TAU))
                })
                .collect(),
        )
    }

    pub fn to_global(&self) -> GlobalBasis {
        let d = self.dim();
        let mut u = DMatrix::zeros(d, d);
        for i in 0..d {
            for (a, x) in self.element(i).into_iter().enumerate() {
                u[(a, i)] = x;
            }
        }
        GlobalBasis { u }
    }
}

impl Basis for ProductBasis {
    fn n_qubits(&self) -> usize {
        self.qubits.len()
    }

    fn element(&self, i: usize) -> Vec<C64> {
        let vecs: Vec<_> = self.qubits.iter().map(|q| q.vectors()).collect();
        (0..self.dim())
            .map(|a| {
                vecs.iter()
                    .enumerate()
                    .map(|(k, v)| v[i >> k & 1][a >> k & 1])
                    .product()
            })
            .collect()
    }

    fn branches(&self, m: &mut [C64], d_b: usize) {
        // One 2×2 butterfly per qubit axis: rows (a, a | 1<<k) become
        // (⟨v_k|, ⟨v_k⊥|) applied on that axis.
        let d_a = self.dim();
        for (k, q) in self.qubits.iter().enumerate() {
            let [v, w] = q.vectors();
            let (v0, v1, w0, w1) = (v[0].conj(), v[1].conj(), w[0].conj(), w[1].conj());
            let bit = 1 << k;
            for a in (0..d_a).filter(|a| a & bit == 0) {
                let (lo, hi) = (a * d_b, (a | bit) * d_b);
                for b in 0..d_b {
                    let (r0, r1) = (m[lo + b], m[hi + b]);
                    m[lo + b] = v0 * r0 + v1 * r1;
                    m[hi + b] = w0 * r0 + w1 * r1;
                }
            }
        }
    }
}

/// An arbitrary ordered orthonormal basis, stored as the unitary whose
/// columns are its elements.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalBasis {
    u: DMatrix<C64>,
}

impl GlobalBasis {
    /// Checks `U†U = I` within `1e-10` and a power-of-two dimension.
    pub fn new(u: DMatrix<C64>) -> Result<Self> {
        let d = u.nrows();
        if d != u.ncols() || !d.is_power_of_two() {
            return Err(contract(format!("{}x{} is not a qubit-register unitary", d, u.ncols())));
        }
        let dev = (u.adjoint() * &u - DMatrix::<C64>::identity(d, d)).camax();
        if dev > UNITARY_TOL {
            return Err(contract(format!("matrix deviates from unitarity by {dev:e}")));
        }
        Ok(Self { u })
    }

    /// Haar-random unitary: QR of a complex Ginibre matrix with the phases
    /// of `R`'s diagonal moved into `Q`.
    pub fn haar<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Self {
        let d = 1usize << n_qubits;
        let g = DMatrix::from_fn(d, d, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let qr = g.qr();
        let r = qr.r();
        let mut q = qr.q();
        for j in 0..d {
            let rjj = r[(j, j)];
            let ph = if rjj.norm() > 0.0 {
                rjj / rjj.norm()
            } else {
                C64::new(1.0, 0.0)
            };
            for i in 0..d {
                q[(i, j)] *= ph;
            }
        }
        Self { u: q }
    }

    pub fn unitary(&self) -> &DMatrix<C64> {
        &self.u
    }

    /// The same elements in a different order: element `i` of the result is
    /// element `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let d = self.dim();
        let mut seen = vec![false; d];
        if order.len() != d || order.iter().any(|&j| j >= d || std::mem::replace(&mut seen[j], true)) {
            return Err(contract("order is not a permutation of the basis indices"));
        }
        Ok(Self {
            u: DMatrix::from_fn(d, d, |i, j| self.u[(i, order[j])]),
        })
    }
}

impl Basis for GlobalBasis {
    fn n_qubits(&self) -> usize {
        self.u.nrows().trailing_zeros() as usize
    }

    fn element(&self, i: usize) -> Vec<C64> {
        self.u.column(i).iter().cloned().collect()
    }

    fn branches(&self, m: &mut [C64], d_b: usize) {
        let d_a = self.dim();
        let mm = DMatrix::from_row_slice(d_a, d_b, m);
        let p = self.u.adjoint() * mm;
        for i in 0..d_a {
            for b in 0..d_b {
                m[i * d_b + b] = p[(i, b)];
            }
        }
    }
}

/// `max_i ‖ |φ_i⟩⟨φ_i| − |η_i⟩⟨η_i| ‖_1`, each term `2√(1 − |⟨φ_i|η_i⟩|²)`.
pub fn basis_norm<B1: Basis + ?Sized, B2: Basis + ?Sized>(beta: &B1, gamma: &B2) -> Result<f64> {
    if beta.n_qubits() != gamma.n_qubits() {
        return Err(contract(format!(
            "bases on {} and {} qubits",
            beta.n_qubits(),
            gamma.n_qubits()
        )));
    }
    Ok((0..beta.dim())
        .map(|i| projector_distance(&beta.element(i), &gamma.element(i)))
        .fold(0.0, f64::max))
}

/// Trace distance `‖vv† − ww†‖_1 = 2√(1 − |⟨v|w⟩|²)` of unit vectors.
pub fn projector_distance(v: &[C64], w: &[C64]) -> f64 {
    let ov: C64 = v.iter().zip(w).map(|(a, b)| a.conj() * b).sum();
    2.0 * (1.0 - ov.norm_sqr()).max(0.0).sqrt()
}

/// Embeds a normalized vector as a [`StateVector`] for callers that want one.
pub fn element_state<B: Basis + ?Sized>(basis: &B, i: usize) -> Result<StateVector> {
    StateVector::new(basis.n_qubits(), basis.element(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::task_rng;

    fn assert_orthonormal<B: Basis>(b: &B) {
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                let ov: C64 = b.element(i).iter().zip(b.element(j)).map(|(x, y)| x.conj() * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ov - want).norm() < 1e-12, "⟨{i}|{j}⟩ = {ov}");
            }
        }
    }

    #[test]
    fn single_qubit_pairs_are_orthonormal() {
        for (t, p) in [(0.0, 0.0), (1.0, 2.0), (3.0, 5.9), (-1.0, 7.0), (4.0, 0.3)] {
            let q = SingleQubitBasis::new(t, p);
            assert!((0.0..=PI).contains(&q.theta()) && (0.0..TAU).contains(&q.phi()));
            assert_orthonormal(&ProductBasis::new(vec![q]));
        }
    }

    #[test]
    fn folding_preserves_the_projector() {
        let raw = |t: f64, p: f64| [C64::new((t / 2.0).cos(), 0.0), C64::from_polar((t / 2.0).sin(), p)];
        let v = raw(4.5, 1.2);
        let w = SingleQubitBasis::new(4.5, 1.2).vectors()[0];
        assert!(projector_distance(&v, &w) < 1e-7);
    }

    #[test]
    fn product_and_global_bases_are_orthonormal() {
        let mut rng = task_rng(1, 0);
        assert_orthonormal(&ProductBasis::random(3, &mut rng));
        let g = GlobalBasis::haar(2, &mut rng);
        assert_orthonormal(&g);
        assert!(GlobalBasis::new(g.unitary().clone()).is_ok());
        assert!(GlobalBasis::new(g.unitary() * C64::new(1.1, 0.0)).is_err());
    }

    #[test]
    fn product_element_ordering() {
        // Element 1 of Z⊗Z flips qubit 0 only: |v0⊥⟩ = |1⟩ on qubit 0.
        let b = ProductBasis::uniform(2, SingleQubitBasis::z());
        let e = b.element(1);
        assert!((e[1] - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn fast_branches_match_the_dense_route() {
        let mut rng = task_rng(2, 0);
        let b = ProductBasis::random(3, &mut rng);
        let g = b.to_global();
        let d_b = 4;
        let m: Vec<C64> = (0..8 * d_b).map(|k| C64::new(k as f64, -(k as f64) / 3.0)).collect();
        let (mut x, mut y) = (m.clone(), m);
        b.branches(&mut x, d_b);
        g.branches(&mut y, d_b);
        for (p, q) in x.iter().zip(&y) {
            assert!((p - q).norm() < 1e-10);
        }
    }

    #[test]
    fn basis_norm_examples() {
        let z = ProductBasis::uniform(1, SingleQubitBasis::z());
        let x = ProductBasis::uniform(1, SingleQubitBasis::x());
        assert!(basis_norm(&z, &z).unwrap() < 1e-12);
        assert!((basis_norm(&z, &x).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        let swapped = z.to_global().permuted(&[1, 0]).unwrap();
        assert!((basis_norm(&z, &swapped).unwrap() - 2.0).abs() < 1e-12);
        let two = ProductBasis::uniform(2, SingleQubitBasis::z());
        assert!(basis_norm(&z, &two).is_err());
    }

    #[test]
    fn haar_unitary_first_column_is_uniform() {
        // |U_00|² is Beta(1, d-1) distributed with mean 1/d.
        let mut rng = task_rng(3, 0);
        let n = 4000;
        let mean = (0..n)
            .map(|_| GlobalBasis::haar(1, &mut rng).unitary()[(0, 0)].norm_sqr())
            .sum::<f64>()
            / n as f64;
        // Var = (d-1)/(d²(d+1)) = 1/12 at d = 2.
        assert!((mean - 0.5).abs() < 4.0 * (1.0 / 12.0 / n as f64).sqrt());
    }
}
