use nalgebra::{DMatrix, SymmetricEigen};

use super::{deposit_tables, parity_sign, SpinFlip, StateVector, C64};
use crate::error::{capability, contract, Result};
use crate::graphs::Bipartition;

/// Largest qubit count for a dense density matrix (1024 × 1024).
pub const DENSITY_MAX_QUBITS: usize = 10;

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues below this are rejected as invariant violations.
const NEG_EIG_TOL: f64 = -1e-9;
/// Eigenvalues below this are treated as exact zeros before taking roots.
/// Round-off in a Hermitian eigensolver sits near `dim · ε ≈ 1e-14`, and
/// its square root would otherwise leak ~1e-7 into fidelities.
const EIG_FLOOR: f64 = 1e-12;

/// A Hermitian, positive semidefinite, unit-trace operator on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    m: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(n_qubits: usize, m: DMatrix<C64>) -> Result<Self> {
        let rho = Self::from_raw(n_qubits, m)?;
        rho.check_hermitian_and_trace()?;
        let min = SymmetricEigen::new(rho.m.clone())
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min < NEG_EIG_TOL {
            return Err(contract(format!("density matrix has eigenvalue {min}")));
        }
        Ok(rho)
    }

    fn from_raw(n_qubits: usize, m: DMatrix<C64>) -> Result<Self> {
        if n_qubits > DENSITY_MAX_QUBITS {
            return Err(capability(format!(
                "{n_qubits} qubits exceeds the {DENSITY_MAX_QUBITS}-qubit density-matrix cap"
            )));
        }
        let dim = 1usize << n_qubits;
        if m.nrows() != dim || m.ncols() != dim {
            return Err(contract(format!(
                "{}x{} matrix for {n_qubits} qubits",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self { n_qubits, m })
    }

    fn check_hermitian_and_trace(&self) -> Result<()> {
        let dim = self.dim();
        for i in 0..dim {
            for j in i..dim {
                if (self.m[(i, j)] - self.m[(j, i)].conj()).norm() > HERMITIAN_TOL {
                    return Err(contract(format!("matrix is not Hermitian at ({i},{j})")));
                }
            }
        }
        let tr = self.m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(contract(format!("trace is {tr}, expected 1")));
        }
        Ok(())
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(s: &StateVector) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(s.amplitudes());
        Self::from_raw(s.n_qubits(), &v * v.adjoint())
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        let dim = 1usize << n_qubits.min(DENSITY_MAX_QUBITS + 1);
        Self::from_raw(
            n_qubits,
            DMatrix::from_diagonal_element(dim, dim, C64::new(1.0 / dim as f64, 0.0)),
        )
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        self.m.iter().map(|x| x.norm_sqr()).sum()
    }

    /// `Tr[ρ σ]`, real part.
    pub fn overlap(&self, other: &Self) -> C64 {
        // Tr[ρσ] = Σ_ij ρ_ij σ_ji
        let dim = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..dim {
            for j in 0..dim {
                acc += self.m[(i, j)] * other.m[(j, i)];
            }
        }
        acc
    }

    /// Frobenius distance, for tests and diagnostics.
    pub fn distance(&self, other: &Self) -> f64 {
        (&self.m - &other.m).norm()
    }

    /// `√ρ` from an eigendecomposition, with dust-level eigenvalues zeroed.
    fn sqrt(&self) -> Result<DMatrix<C64>> {
        sqrt_psd(&self.m)
    }
}

fn sqrt_psd(m: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let eig = SymmetricEigen::new(m.clone());
    let mut roots = Vec::with_capacity(eig.eigenvalues.len());
    for &l in eig.eigenvalues.iter() {
        if l < NEG_EIG_TOL {
            return Err(contract(format!("eigenvalue {l} is negative beyond tolerance")));
        }
        roots.push(if l < EIG_FLOOR { 0.0 } else { l.sqrt() });
    }
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, r) in roots.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*r);
    }
    Ok(scaled * v.adjoint())
}

/// `σ_y^{⊗n} M* σ_y^{⊗n}` for any square matrix on `n` qubits:
/// entry `(w, w')` is `(-1)^{h(w)+h(w')} M*_{w̄, w̄'}`.
fn flip_matrix(m: &DMatrix<C64>) -> DMatrix<C64> {
    let dim = m.nrows();
    let all = dim - 1;
    DMatrix::from_fn(dim, dim, |w, v| {
        parity_sign(w) * parity_sign(v) * m[(w ^ all, v ^ all)].conj()
    })
}

impl SpinFlip for DensityMatrix {
    fn spin_flip(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            m: flip_matrix(&self.m),
        }
    }
}

/// Reduced state on the `B` side of `bp`, qubits in ascending order.
pub fn partial_trace(s: &StateVector, bp: &Bipartition) -> Result<DensityMatrix> {
    if bp.n_b() == 0 {
        return Err(contract("partial trace must keep at least one qubit"));
    }
    if bp.n_b() > DENSITY_MAX_QUBITS {
        return Err(capability(format!(
            "kept subsystem of {} qubits exceeds the {DENSITY_MAX_QUBITS}-qubit density-matrix cap",
            bp.n_b()
        )));
    }
    let (a_pos, b_pos) = deposit_tables(s.n_qubits(), bp)?;
    let amp = s.amplitudes();
    let d_b = b_pos.len();
    let mut rho = DMatrix::from_element(d_b, d_b, C64::new(0.0, 0.0));
    for &za in &a_pos {
        for (i, &zi) in b_pos.iter().enumerate() {
            let x = amp[za | zi];
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            for (j, &zj) in b_pos.iter().enumerate() {
                rho[(i, j)] += x * amp[za | zj].conj();
            }
        }
    }
    Ok(DensityMatrix {
        n_qubits: bp.n_b(),
        m: rho,
    })
}

/// Square-root fidelity `Tr √(√ρ σ √ρ)`, evaluated as the trace norm of
/// `√ρ √σ` so that no square root is taken of round-off.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(contract(format!(
            "fidelity of {}- and {}-dimensional operators",
            rho.dim(),
            sigma.dim()
        )));
    }
    rho.check_hermitian_and_trace()?;
    sigma.check_hermitian_and_trace()?;
    let sr = rho.sqrt()?;
    let ss = sigma.sqrt()?;
    Ok(trace_norm(&(sr * ss)))
}

/// `F(ρ, ρ̃)`, reusing one eigendecomposition: `√(ρ̃)` is the flip of `√ρ`.
pub(crate) fn fidelity_with_flip(rho: &DensityMatrix) -> Result<f64> {
    rho.check_hermitian_and_trace()?;
    let sr = rho.sqrt()?;
    let sf = flip_matrix(&sr);
    Ok(trace_norm(&(sr * sf)))
}

fn trace_norm(m: &DMatrix<C64>) -> f64 {
    m.clone().singular_values().iter().sum::<f64>().clamp(0.0, 1.0)
}

/// `Tr[ρ ρ̃] / Tr[ρ²]`.
pub fn trace_ratio(rho: &DensityMatrix) -> f64 {
    let num = rho.overlap(&rho.spin_flip());
    debug_assert!(num.im.abs() < 1e-10, "Tr[ρ ρ̃] has imaginary part {}", num.im);
    num.re / rho.purity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Graph;
    use crate::quantum::build_graph_state;
    use rand::SeedableRng;

    fn random_density(n: usize, rank: usize, rng: &mut crate::rng::TaskRng) -> DensityMatrix {
        // Mixture of Haar states with random weights.
        use rand::Rng;
        let dim = 1 << n;
        let mut m = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        let weights: Vec<f64> = (0..rank).map(|_| rng.random::<f64>() + 0.01).collect();
        let total: f64 = weights.iter().sum();
        for w in weights {
            let s = crate::localization::haar_state(n, rng).unwrap();
            m += DensityMatrix::pure(&s).unwrap().m * C64::new(w / total, 0.0);
        }
        DensityMatrix::new(n, m).unwrap()
    }

    #[test]
    fn partial_trace_examples() {
        let bp = Bipartition::from_a(2, &[0]).unwrap();
        let zero = StateVector::basis(1, 0).unwrap();
        let plus = StateVector::normalized(1, vec![C64::new(1.0, 0.0); 2]).unwrap();
        let prod = StateVector::product(&bp, &zero, &plus).unwrap();
        let rho = partial_trace(&prod, &bp).unwrap();
        assert!(rho.distance(&DensityMatrix::pure(&plus).unwrap()) < 1e-14);

        let bell = StateVector::ghz(2).unwrap();
        let mixed = partial_trace(&bell, &bp).unwrap();
        assert!(mixed.distance(&DensityMatrix::maximally_mixed(1).unwrap()) < 1e-14);

        let ghz3 = StateVector::ghz(3).unwrap();
        let m = partial_trace(&ghz3, &Bipartition::from_a(3, &[1]).unwrap()).unwrap();
        let mut want = DMatrix::from_element(4, 4, C64::new(0.0, 0.0));
        want[(0, 0)] = C64::new(0.5, 0.0);
        want[(3, 3)] = C64::new(0.5, 0.0);
        assert!((m.matrix() - want).norm() < 1e-14);
    }

    #[test]
    fn spin_flip_examples() {
        let zero = DensityMatrix::pure(&StateVector::basis(1, 0).unwrap()).unwrap();
        let one = DensityMatrix::pure(&StateVector::basis(1, 1).unwrap()).unwrap();
        assert!(zero.spin_flip().distance(&one) < 1e-15);
        let mm = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(mm.spin_flip().distance(&mm) < 1e-15);
    }

    #[test]
    fn density_flip_matches_state_flip() {
        let mut rng = crate::rng::task_rng(3, 0);
        let s = crate::localization::haar_state(3, &mut rng).unwrap();
        let a = DensityMatrix::pure(&s).unwrap().spin_flip();
        let b = DensityMatrix::pure(&s.spin_flip()).unwrap();
        assert!(a.distance(&b) < 1e-14);
    }

    #[test]
    fn spin_flip_is_an_involution() {
        let mut rng = crate::rng::task_rng(8, 0);
        for n in 1..=4 {
            let rho = random_density(n, 3, &mut rng);
            assert!(rho.spin_flip().spin_flip().distance(&rho) < 1e-12);
        }
    }

    #[test]
    fn fidelity_examples() {
        let zero = DensityMatrix::pure(&StateVector::basis(1, 0).unwrap()).unwrap();
        let one = DensityMatrix::pure(&StateVector::basis(1, 1).unwrap()).unwrap();
        let mm = DensityMatrix::maximally_mixed(1).unwrap();
        assert!((fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-12);
        assert!(fidelity(&zero, &one).unwrap().abs() < 1e-12);
        assert!((fidelity(&zero, &mm).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(fidelity(&zero, &DensityMatrix::maximally_mixed(2).unwrap()).is_err());
    }

    #[test]
    fn fidelity_is_symmetric_and_pure_states_reduce_to_overlap() {
        let mut rng = crate::rng::task_rng(5, 0);
        for n in 1..=4 {
            let r = random_density(n, 1 + n, &mut rng);
            let s = random_density(n, 2, &mut rng);
            let f1 = fidelity(&r, &s).unwrap();
            let f2 = fidelity(&s, &r).unwrap();
            assert!((f1 - f2).abs() < 1e-10, "n={n}: {f1} vs {f2}");
            assert!((0.0..=1.0).contains(&f1));

            let a = crate::localization::haar_state(n, &mut rng).unwrap();
            let b = crate::localization::haar_state(n, &mut rng).unwrap();
            let f = fidelity(&DensityMatrix::pure(&a).unwrap(), &DensityMatrix::pure(&b).unwrap()).unwrap();
            assert!((f - a.inner(&b).norm()).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_invalid_density_matrices() {
        let mut m = DMatrix::from_element(2, 2, C64::new(0.0, 0.0));
        m[(0, 0)] = C64::new(1.5, 0.0);
        m[(1, 1)] = C64::new(-0.5, 0.0);
        assert!(DensityMatrix::new(1, m.clone()).is_err());
        m[(0, 0)] = C64::new(0.5, 0.0);
        m[(1, 1)] = C64::new(0.5, 0.0);
        m[(0, 1)] = C64::new(0.2, 0.0);
        assert!(DensityMatrix::new(1, m).is_err());
    }

    #[test]
    fn trace_ratio_examples() {
        let k2 = build_graph_state(&Graph::from_edges(2, &[(0, 1)]).unwrap()).unwrap();
        let rho = partial_trace(&k2, &Bipartition::from_a(2, &[0]).unwrap()).unwrap();
        assert!((trace_ratio(&rho) - 1.0).abs() < 1e-12);

        let zz = DensityMatrix::pure(&StateVector::basis(2, 0).unwrap()).unwrap();
        assert!(trace_ratio(&zz).abs() < 1e-12);
    }

    #[test]
    fn trace_ratio_is_binary_on_three_vertex_graphs() {
        for bits in 0..8u64 {
            let g = Graph::from_upper_bits(3, bits);
            let s = build_graph_state(&g).unwrap();
            for a in 0..3 {
                let rho = partial_trace(&s, &Bipartition::from_a(3, &[a]).unwrap()).unwrap();
                let t = trace_ratio(&rho);
                assert!(
                    t.abs() < 1e-12 || (t - 1.0).abs() < 1e-12,
                    "graph {bits:03b}, A={{{a}}}: {t}"
                );
            }
        }
    }

    #[test]
    fn fidelity_with_flip_matches_general_fidelity() {
        let mut rng = crate::rng::task_rng(12, 0);
        for n in 1..=3 {
            let rho = random_density(n, 3, &mut rng);
            let a = fidelity(&rho, &rho.spin_flip()).unwrap();
            let b = fidelity_with_flip(&rho).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
        let _ = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    }
}
