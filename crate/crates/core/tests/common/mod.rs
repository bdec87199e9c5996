#![allow(dead_code)]

use ansatz_forge::hamiltonian::{pauli_string_matrix, Pauli, PauliString, PauliSum};
use ansatz_forge::sim::{Angle, Circuit, Gate, C64};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use std::f64::consts::PI;

/// Random fixed-angle circuit over the full gate set.
pub fn random_circuit<R: Rng>(rng: &mut R, n: usize, depth: usize) -> Circuit {
    let mut c = Circuit::new(n);
    let mut qubits: Vec<usize> = (0..n).collect();
    for _ in 0..depth {
        let a = |r: &mut R| Angle::Fixed(r.random_range(-PI..PI));
        let kind = if n == 1 { rng.random_range(0..10) } else { rng.random_range(0..16) };
        let gate = match kind {
            0 => Gate::H,
            1 => Gate::X,
            2 => Gate::Y,
            3 => Gate::Z,
            4 => Gate::S,
            5 => Gate::RX(a(rng)),
            6 => Gate::RY(a(rng)),
            7 => Gate::RZ(a(rng)),
            8 => Gate::R2(a(rng), a(rng)),
            9 => Gate::U3(a(rng), a(rng), a(rng)),
            10 => Gate::ZZ(a(rng)),
            11 => Gate::CNOT,
            12 => Gate::CZ,
            13 => Gate::SWAP,
            14 => Gate::controlled(1, Gate::RY(a(rng))),
            _ => Gate::controlled(1, Gate::U3(a(rng), a(rng), a(rng))),
        };
        qubits.shuffle(rng);
        c.push(gate.clone(), &qubits[..gate.arity()]).unwrap();
    }
    c
}

pub fn random_pauli_string<R: Rng>(rng: &mut R, n: usize) -> PauliString {
    loop {
        let letters: Vec<(usize, Pauli)> = (0..n)
            .filter_map(|q| match rng.random_range(0..4) {
                0 => None,
                1 => Some((q, Pauli::X)),
                2 => Some((q, Pauli::Y)),
                _ => Some((q, Pauli::Z)),
            })
            .collect();
        let p = PauliString::new(n, letters).unwrap();
        if !p.is_identity() {
            return p;
        }
    }
}

pub fn random_pauli_sum<R: Rng>(rng: &mut R, n: usize, terms: usize) -> PauliSum {
    let t: Vec<(f64, PauliString)> =
        (0..terms).map(|_| (rng.random_range(-1.0..1.0), random_pauli_string(rng, n))).collect();
    PauliSum::from_terms(n, t).unwrap()
}

/// `exp(−i θ P / 2) = cos(θ/2) I − i sin(θ/2) P`, valid because `P² = I`.
pub fn pauli_rotation_oracle(p: &PauliString, theta: f64) -> DMatrix<C64> {
    let m = pauli_string_matrix(p).unwrap();
    let dim = m.nrows();
    let c = C64::new((theta / 2.0).cos(), 0.0);
    let s = C64::new(0.0, -(theta / 2.0).sin());
    DMatrix::<C64>::identity(dim, dim) * c + m * s
}

pub fn max_abs(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `(f, x)` maximizing `f` over a `steps × steps` grid on `[0, a] × [0, b]`.
pub fn grid_max(steps: usize, a: f64, b: f64, f: impl Fn(f64, f64) -> f64) -> (f64, f64, f64) {
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..steps {
        for j in 0..steps {
            let (x, y) = (a * i as f64 / (steps - 1) as f64, b * j as f64 / (steps - 1) as f64);
            let v = f(x, y);
            if v > best.0 {
                best = (v, x, y);
            }
        }
    }
    best
}
