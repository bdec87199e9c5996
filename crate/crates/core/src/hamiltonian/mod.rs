//! Pauli observables, model Hamiltonians, MaxCut encodings and the
//! dense exact-diagonalization oracle.

mod graph;
mod pauli;
mod spec;

pub use graph::{brute_force_maxcut, cut_value, Graph, MAX_BRUTE_FORCE_VERTICES};
pub use pauli::{Pauli, PauliString, PauliSum};
pub use spec::{HamiltonianSpec, Observable};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{StateVector, C64, MAX_UNITARY_QUBITS};

pub(crate) fn string_expectation(amps: &[C64], p: &PauliString) -> f64 {
    let (x, z) = p.masks();
    let ys = (x & z).count_ones();
    // P|b⟩ = i^{#Y} (-1)^{popcount(b & z)} |b ⊕ x⟩
    let phase = match ys % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    };
    let mut acc = C64::new(0.0, 0.0);
    for (b, a) in amps.iter().enumerate() {
        let term = amps[b ^ x].conj() * a;
        if (b & z).count_ones() % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    (phase * acc).re
}

/// `⟨ψ|H|ψ⟩`, summed in ascending term order.
pub fn expectation(state: &StateVector, obs: &PauliSum) -> Result<f64> {
    if state.num_qubits() != obs.num_qubits() {
        return Err(Error::QubitMismatch { expected: obs.num_qubits(), got: state.num_qubits() });
    }
    let amps = state.amplitudes();
    Ok(obs.terms().iter().map(|(c, p)| c * string_expectation(amps, p)).sum())
}

fn pauli_1q(p: Option<Pauli>) -> DMatrix<C64> {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let e = match p {
        None => [l, o, o, l],
        Some(Pauli::X) => [o, l, l, o],
        Some(Pauli::Y) => [o, -i, i, o],
        Some(Pauli::Z) => [l, o, o, -l],
    };
    DMatrix::from_row_slice(2, 2, &e)
}

/// Dense matrix of one Pauli string, `P_{n-1} ⊗ … ⊗ P_0` (qubit 0 least significant).
pub fn pauli_string_matrix(p: &PauliString) -> Result<DMatrix<C64>> {
    let n = p.num_qubits();
    if n == 0 || n > MAX_UNITARY_QUBITS {
        return Err(Error::Size { requested: n, max: MAX_UNITARY_QUBITS });
    }
    let mut m = pauli_1q(p.get(n - 1));
    for q in (0..n - 1).rev() {
        m = m.kronecker(&pauli_1q(p.get(q)));
    }
    Ok(m)
}

/// Dense Hermitian matrix of `obs` via Kronecker products.
pub fn pauli_matrix(obs: &PauliSum) -> Result<DMatrix<C64>> {
    let n = obs.num_qubits();
    if n == 0 || n > MAX_UNITARY_QUBITS {
        return Err(Error::Size { requested: n, max: MAX_UNITARY_QUBITS });
    }
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for (c, p) in obs.terms() {
        m += pauli_string_matrix(p)? * C64::new(*c, 0.0);
    }
    Ok(m)
}

/// Ground energy and a unit-norm ground state by dense diagonalization.
pub fn exact_ground(obs: &PauliSum) -> Result<(f64, StateVector)> {
    let m = pauli_matrix(obs)?;
    let eig = m.symmetric_eigen();
    let (k, &energy) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty spectrum");
    let v: Vec<C64> = eig.eigenvectors.column(k).iter().copied().collect();
    Ok((energy, StateVector::from_amplitudes(v)?.normalized()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Chain,
    Ring,
}

/// Bonds `(i, i+1)`, plus `(n-1, 0)` for a ring.
pub fn bonds(n: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    let mut b: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    if boundary == Boundary::Ring && n > 2 {
        b.push((n - 1, 0));
    }
    b
}

fn check_sites(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Invalid(format!("spin chain needs at least 2 sites, got {n}")));
    }
    Ok(())
}

fn two_site(n: usize, i: usize, j: usize, p: Pauli) -> Result<PauliString> {
    PauliString::new(n, [(i, p), (j, p)])
}

/// `H = -Σ_bonds Z_i Z_j - g Σ_i X_i`.
pub fn tfim_hamiltonian(n: usize, g: f64, boundary: Boundary) -> Result<PauliSum> {
    check_sites(n)?;
    let mut terms = Vec::new();
    for (i, j) in bonds(n, boundary) {
        terms.push((-1.0, two_site(n, i, j, Pauli::Z)?));
    }
    for i in 0..n {
        terms.push((-g, PauliString::single(n, i, Pauli::X)?));
    }
    PauliSum::from_terms(n, terms)
}

/// `H = J Σ_bonds (X_i X_j + Y_i Y_j + Z_i Z_j)`.
pub fn heisenberg_hamiltonian(n: usize, j: f64, boundary: Boundary) -> Result<PauliSum> {
    check_sites(n)?;
    let mut terms = Vec::new();
    for (a, b) in bonds(n, boundary) {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            terms.push((j, two_site(n, a, b, p)?));
        }
    }
    PauliSum::from_terms(n, terms)
}

/// Cut operator `C = offset + Σ -w/2 · Z_i Z_j`, with the constant kept
/// outside the Pauli sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxCutHamiltonian {
    pub cost: PauliSum,
    pub offset: f64,
}

impl MaxCutHamiltonian {
    pub fn expected_cut(&self, state: &StateVector) -> Result<f64> {
        Ok(expectation(state, &self.cost)? + self.offset)
    }
}

pub fn maxcut_hamiltonian(g: &Graph) -> Result<MaxCutHamiltonian> {
    if g.edges().is_empty() {
        return Err(Error::Graph("MaxCut needs at least one edge".into()));
    }
    let n = g.num_vertices();
    let mut terms = Vec::new();
    let mut offset = 0.0;
    for &(u, v, w) in g.edges() {
        offset += w / 2.0;
        terms.push((-w / 2.0, two_site(n, u, v, Pauli::Z)?));
    }
    Ok(MaxCutHamiltonian { cost: PauliSum::from_terms(n, terms)?, offset })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{apply_gate, Gate};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
        let amps = (0..1 << n).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        StateVector::from_amplitudes(amps).unwrap().normalized()
    }

    fn random_sum(n: usize, terms: usize, rng: &mut impl Rng) -> PauliSum {
        let t = (0..terms).map(|_| {
            let letters = (0..n).filter_map(|q| match rng.random_range(0..4) {
                0 => None,
                1 => Some((q, Pauli::X)),
                2 => Some((q, Pauli::Y)),
                _ => Some((q, Pauli::Z)),
            });
            let letters: Vec<_> = letters.collect();
            (rng.random::<f64>() * 2.0 - 1.0, PauliString::new(n, letters).unwrap())
        });
        PauliSum::from_terms(n, t.collect::<Vec<_>>()).unwrap()
    }

    fn z1() -> PauliSum {
        PauliSum::parse("1 Z0", Some(1)).unwrap()
    }

    #[test]
    fn expectation_examples() {
        let zero = StateVector::zero(1).unwrap();
        assert_eq!(expectation(&zero, &z1()).unwrap(), 1.0);
        let plus = apply_gate(&zero, &Gate::H, &[0]).unwrap();
        let x = PauliSum::parse("1 X0", Some(1)).unwrap();
        assert!((expectation(&plus, &x).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            expectation(&StateVector::zero(2).unwrap(), &z1()),
            Err(Error::QubitMismatch { .. })
        ));
    }

    #[test]
    fn expectation_matches_dense_quadratic_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            for _ in 0..5 {
                let psi = random_state(n, &mut rng);
                let h = random_sum(n, 6, &mut rng);
                let m = pauli_matrix(&h).unwrap();
                let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
                let dense = (v.adjoint() * &m * &v)[(0, 0)];
                assert!(dense.im.abs() < 1e-10);
                assert!((dense.re - expectation(&psi, &h).unwrap()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn pauli_matrix_examples() {
        let z = pauli_matrix(&z1()).unwrap();
        assert_eq!(z[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(z[(1, 1)], C64::new(-1.0, 0.0));
        assert_eq!(z[(0, 1)], C64::new(0.0, 0.0));

        let xx = pauli_matrix(&PauliSum::parse("0.5 X0 X1", Some(2)).unwrap()).unwrap();
        assert_eq!((&xx - xx.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max), 0.0);

        let x0 = pauli_matrix(&PauliSum::parse("1 X0", Some(2)).unwrap()).unwrap();
        for (r, c) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            assert_eq!(x0[(r, c)], C64::new(1.0, 0.0));
        }
        assert_eq!(x0.iter().filter(|c| c.norm() > 0.0).count(), 4);
        assert!(pauli_matrix(&PauliSum::new(11)).is_err());
    }

    #[test]
    fn exact_ground_examples() {
        let (e, s) = exact_ground(&z1()).unwrap();
        assert!((e + 1.0).abs() < 1e-12);
        assert!((s.amplitudes()[1].norm() - 1.0).abs() < 1e-12);

        let (e, s) = exact_ground(&PauliSum::parse("-1 X0", Some(1)).unwrap()).unwrap();
        assert!((e + 1.0).abs() < 1e-12);
        let plus = apply_gate(&StateVector::zero(1).unwrap(), &Gate::H, &[0]).unwrap();
        assert!((s.inner(&plus).unwrap().norm() - 1.0).abs() < 1e-12);

        let (e, _) = exact_ground(&tfim_hamiltonian(2, 0.0, Boundary::Chain).unwrap()).unwrap();
        assert!((e + 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_ground_residual_and_variational_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=5 {
            let h = random_sum(n, 8, &mut rng);
            let (e, v) = exact_ground(&h).unwrap();
            let m = pauli_matrix(&h).unwrap();
            let vec = nalgebra::DVector::from_column_slice(v.amplitudes());
            let r = &m * &vec - &vec * C64::new(e, 0.0);
            assert!(r.norm() < 1e-8);
            for _ in 0..10 {
                assert!(e <= expectation(&random_state(n, &mut rng), &h).unwrap() + 1e-9);
            }
        }
    }

    #[test]
    fn tfim_terms() {
        let h = tfim_hamiltonian(2, 0.7, Boundary::Chain).unwrap();
        let text: Vec<String> = h.terms().iter().map(|(c, p)| format!("{c} {p}")).collect();
        assert_eq!(text, vec!["-1 Z0 Z1", "-0.7 X0", "-0.7 X1"]);

        let ring = tfim_hamiltonian(4, 1.0, Boundary::Ring).unwrap();
        let zz: Vec<String> = ring.terms().iter().filter(|(_, p)| p.weight() == 2).map(|(_, p)| p.to_string()).collect();
        assert_eq!(zz, vec!["Z0 Z1", "Z1 Z2", "Z2 Z3", "Z0 Z3"]);
        assert!(tfim_hamiltonian(1, 1.0, Boundary::Chain).is_err());
    }

    #[test]
    fn tfim_triangle_ring_classical_ground() {
        // g = 0 is classical; the all-aligned configuration satisfies all
        // three bonds, so the 8-state enumeration minimum is -3.
        let h = tfim_hamiltonian(3, 0.0, Boundary::Ring).unwrap();
        let brute = (0..8usize)
            .map(|b| expectation(&StateVector::basis(3, b).unwrap(), &h).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert_eq!(brute, -3.0);
        let (e, _) = exact_ground(&h).unwrap();
        assert!((e - brute).abs() < 1e-10);
    }

    #[test]
    fn heisenberg_examples() {
        let h = heisenberg_hamiltonian(2, 1.0, Boundary::Chain).unwrap();
        assert_eq!(h.len(), 3);
        assert!(h.terms().iter().all(|(c, _)| *c == 1.0));
        let (e, _) = exact_ground(&h).unwrap();
        assert!((e + 3.0).abs() < 1e-10);
        assert!(heisenberg_hamiltonian(2, 0.0, Boundary::Chain).unwrap().is_empty());
    }

    #[test]
    fn maxcut_encoding() {
        let tri = Graph::cycle(3);
        let h = maxcut_hamiltonian(&tri).unwrap();
        assert_eq!(h.offset, 1.5);
        assert!(h.cost.terms().iter().all(|(c, p)| *c == -0.5 && p.weight() == 2));
        assert_eq!(h.cost.len(), 3);

        let edge = Graph::new(2, vec![(0, 1, 1.0)]).unwrap();
        let he = maxcut_hamiltonian(&edge).unwrap();
        assert_eq!(he.expected_cut(&StateVector::basis(2, 1).unwrap()).unwrap(), 1.0);

        let best = (0..8)
            .map(|b| h.expected_cut(&StateVector::basis(3, b).unwrap()).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(best, 2.0);
        assert!(maxcut_hamiltonian(&Graph::new(3, vec![]).unwrap()).is_err());
    }

    #[test]
    fn maxcut_matches_classical_cut_on_every_basis_state() {
        let g = Graph::new(5, vec![(0, 1, 1.0), (1, 2, 0.5), (2, 3, 2.0), (3, 4, 1.5), (4, 0, 0.25), (1, 3, 1.0)]).unwrap();
        let h = maxcut_hamiltonian(&g).unwrap();
        for b in 0..32 {
            let e = h.expected_cut(&StateVector::basis(5, b).unwrap()).unwrap();
            assert!((e - cut_value(&g, b)).abs() < 1e-12);
        }
    }
}
