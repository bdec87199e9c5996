mod common;

use std::f64::consts::PI;

use ansatz_forge::ansatz::{hea_ansatz, pauli_exponential, spa_ansatz, tfim_hva, ucc_ansatz, Entangler};
use ansatz_forge::hamiltonian::{exact_ground, expectation, tfim_hamiltonian, Boundary, PauliSum};
use ansatz_forge::sim::{
    circuit_to_unitary, max_deviation_mod_phase, run_circuit, to_qasm, ParameterBinding, StateVector,
};
use ansatz_forge::variational::{optimize, Method, Objective, OptimizerConfig};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn circuits_preserve_norm(seed in any::<u64>(), n in 1usize..=6, depth in 0usize..40) {
        let mut r = rng(seed);
        let c = common::random_circuit(&mut r, n, depth);
        let start = StateVector::basis(n, seed as usize % (1 << n)).unwrap();
        let (s, _) = run_circuit(&c, &ParameterBinding::new(), &start, &mut r).unwrap();
        let norm: f64 = s.probabilities().iter().sum();
        prop_assert!((norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn unitaries_are_unitary(seed in any::<u64>(), n in 1usize..=4, depth in 0usize..25) {
        let mut r = rng(seed);
        let c = common::random_circuit(&mut r, n, depth);
        let u = circuit_to_unitary(&c, &ParameterBinding::new()).unwrap();
        let id = DMatrix::identity(1 << n, 1 << n);
        prop_assert!(common::max_abs(&(u.adjoint() * &u), &id) < 1e-10);
    }

    #[test]
    fn pauli_exponential_matches_oracle(seed in any::<u64>(), n in 1usize..=4, theta in -PI..PI) {
        let mut r = rng(seed);
        let p = common::random_pauli_string(&mut r, n);
        let c = pauli_exponential(&p, "t", 1.0).unwrap();
        let mut b = ParameterBinding::new();
        b.insert("t", theta);
        let u = circuit_to_unitary(&c, &b).unwrap();
        prop_assert!(max_deviation_mod_phase(&u, &common::pauli_rotation_oracle(&p, theta)) < 1e-10);
    }

    #[test]
    fn variational_bound_holds(seed in any::<u64>(), n in 1usize..=4, terms in 1usize..6) {
        let mut r = rng(seed);
        let h = common::random_pauli_sum(&mut r, n, terms);
        prop_assume!(!h.is_empty());
        let (e0, _) = exact_ground(&h).unwrap();
        let c = common::random_circuit(&mut r, n, 20);
        let s = run_circuit(&c, &ParameterBinding::new(), &StateVector::zero(n).unwrap(), &mut r).unwrap().0;
        prop_assert!(expectation(&s, &h).unwrap() >= e0 - 1e-9);
    }

    #[test]
    fn pauli_sum_text_round_trips(seed in any::<u64>(), n in 1usize..=6, terms in 0usize..8) {
        let mut r = rng(seed);
        let h = common::random_pauli_sum(&mut r, n, terms);
        prop_assert_eq!(PauliSum::parse(&h.to_text(), Some(n)).unwrap(), h);
    }

    #[test]
    fn expectation_bounded_by_coefficients(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let h = common::random_pauli_sum(&mut r, n, 5);
        let c = common::random_circuit(&mut r, n, 15);
        let s = run_circuit(&c, &ParameterBinding::new(), &StateVector::zero(n).unwrap(), &mut r).unwrap().0;
        let bound: f64 = h.terms().iter().map(|(c, _)| c.abs()).sum();
        prop_assert!(expectation(&s, &h).unwrap().abs() <= bound + 1e-12);
    }

    #[test]
    fn qasm_is_deterministic(seed in any::<u64>(), n in 1usize..=5) {
        let c = common::random_circuit(&mut rng(seed), n, 12);
        let a = to_qasm(&c, &ParameterBinding::new()).unwrap();
        prop_assert_eq!(&a, &to_qasm(&c, &ParameterBinding::new()).unwrap());
        prop_assert!(a.starts_with("OPENQASM 2.0;"));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn shift_rule_matches_finite_differences(seed in any::<u64>(), family in 0usize..4, n in 2usize..=4) {
        let mut r = rng(seed);
        let h = common::random_pauli_sum(&mut r, n, 4);
        prop_assume!(!h.is_empty());
        let bp = match family {
            0 => {
                let groups = vec![
                    vec![(1.0, common::random_pauli_string(&mut r, n))],
                    vec![(0.5, common::random_pauli_string(&mut r, n)), (-0.7, common::random_pauli_string(&mut r, n))],
                ];
                ucc_ansatz(&groups, None).unwrap()
            }
            1 => hea_ansatz(n, 2, Entangler::CnotRing).unwrap(),
            2 => spa_ansatz(n, 2).unwrap(),
            _ => tfim_hva(n, 0.8, Boundary::Ring, 2).unwrap(),
        };
        let obj = Objective::from_blueprint(&bp, &h).unwrap();
        let x: Vec<f64> = (0..obj.num_parameters()).map(|_| rand::Rng::random_range(&mut r, -PI..PI)).collect();
        let ps = obj.parameter_shift_gradient(&x).unwrap();
        let fd = obj.finite_difference_gradient(&x, 1e-5).unwrap();
        for (p, f) in ps.iter().zip(&fd) {
            prop_assert!((p - f).abs() < 1e-6, "{} vs {}", p, f);
        }
    }

    #[test]
    fn spa_conserves_hamming_weight(seed in any::<u64>(), layers in 1usize..3) {
        let bp = spa_ansatz(4, layers).unwrap();
        let c = bp.build().unwrap();
        let mut r = rng(seed);
        let vals: Vec<f64> = (0..c.num_parameters()).map(|_| rand::Rng::random_range(&mut r, -PI..PI)).collect();
        let b = ParameterBinding::from_values(&c, &vals).unwrap();
        for start in (0..16usize).filter(|i| i.count_ones() == 2) {
            let s = run_circuit(&c, &b, &StateVector::basis(4, start).unwrap(), &mut r).unwrap().0;
            let leak: f64 = s.probabilities().iter().enumerate().filter(|(i, _)| i.count_ones() != 2).map(|(_, p)| p).sum();
            prop_assert!(leak < 1e-10);
        }
    }

    #[test]
    fn optimizer_is_deterministic(seed in any::<u64>(), method in 0usize..3) {
        let h = tfim_hamiltonian(3, 0.7, Boundary::Chain).unwrap();
        let bp = hea_ansatz(3, 1, Entangler::CzRing).unwrap();
        let obj = Objective::from_blueprint(&bp, &h).unwrap();
        let m = [Method::GradientDescent, Method::Spsa, Method::NelderMead][method];
        let cfg = OptimizerConfig { seed, max_iters: 30, ..OptimizerConfig::with_method(m) };
        let start = ParameterBinding::from_values(obj.circuit(), &vec![0.2; obj.num_parameters()]).unwrap();
        let a = optimize(&obj, &cfg, &start).unwrap();
        prop_assert_eq!(&a, &optimize(&obj, &cfg, &start).unwrap());
        let best = a.trace.iter().map(|t| t.value).fold(f64::INFINITY, f64::min);
        prop_assert!((best - a.best_value).abs() <= 1e-12);
        prop_assert!(a.trace.len() <= 30);
    }
}
