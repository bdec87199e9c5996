use std::f64::consts::PI;

use ansatz_forge::ansatz::{tfim_hva, y_local_pool, AnsatzBlueprint, AnsatzConfig, HeaConfig};
use ansatz_forge::hamiltonian::{exact_ground, tfim_hamiltonian, Boundary, Graph, Observable, PauliString, PauliSum};
use ansatz_forge::sim::{Angle, Circuit, Gate, ParameterBinding, StateVector};
use ansatz_forge::variational::{
    adapt_vqe_run, optimize, qaoa_run, vqe_run, AdaptOptions, Init, Method, Objective, OptimizerConfig, Sense,
};
use ansatz_forge::Error;

fn ry_blueprint() -> AnsatzBlueprint {
    AnsatzBlueprint::new(
        serde_json::from_str(r#"{"family": "UCC", "n": 1, "groups": [["Y0"]]}"#).expect("config"),
    )
    .unwrap()
}

fn cos_objective() -> Objective {
    let mut c = Circuit::new(1);
    let t = c.param("t");
    c.push(Gate::RX(Angle::param(t)), &[0]).unwrap();
    let z = PauliSum::parse("Z0", Some(1)).unwrap();
    Objective::new(c, Observable { sum: z, offset: 0.0 }, StateVector::zero(1).unwrap()).unwrap()
}

fn binding(c: &Circuit, v: &[f64]) -> ParameterBinding {
    ParameterBinding::from_values(c, v).unwrap()
}

#[test]
fn gradient_descent_finds_cos_minimum() {
    let obj = cos_objective();
    let res = optimize(&obj, &OptimizerConfig::default(), &binding(obj.circuit(), &[0.1])).unwrap();
    assert!(res.converged);
    assert!((res.best_value + 1.0).abs() < 1e-6);
    assert!((res.best_vector[0] - PI).abs() < 1e-3);
    let min = res.trace.iter().map(|t| t.value).fold(f64::INFINITY, f64::min);
    assert!((min - res.best_value).abs() <= 1e-12);
    assert!(res.trace.len() <= OptimizerConfig::default().max_iters);
}

#[test]
fn every_method_is_deterministic() {
    let obj = cos_objective();
    for m in [Method::GradientDescent, Method::Spsa, Method::NelderMead] {
        let cfg = OptimizerConfig { seed: 17, max_iters: 80, ..OptimizerConfig::with_method(m) };
        let a = optimize(&obj, &cfg, &binding(obj.circuit(), &[0.3])).unwrap();
        let b = optimize(&obj, &cfg, &binding(obj.circuit(), &[0.3])).unwrap();
        assert_eq!(a, b);
        assert!(a.best_value < 0.5, "{m:?} made no progress: {}", a.best_value);
    }
}

#[test]
fn zero_parameter_objective_returns_single_evaluation() {
    let z = PauliSum::parse("Z0", Some(1)).unwrap();
    let obj = Objective::new(Circuit::new(1), Observable { sum: z, offset: 0.0 }, StateVector::zero(1).unwrap())
        .unwrap();
    let res = optimize(&obj, &OptimizerConfig::default(), &ParameterBinding::new()).unwrap();
    assert_eq!(res.trace.len(), 1);
    assert_eq!(res.evaluations, 1);
    assert_eq!(res.best_value, 1.0);
}

#[test]
fn vqe_minus_x() {
    let h = PauliSum::parse("-1 X0", Some(1)).unwrap();
    let cfg = OptimizerConfig { init: Init::Uniform { half_width: 0.1 }, ..Default::default() };
    let res = vqe_run(&h, &ry_blueprint(), &cfg).unwrap();
    assert!((res.best_value + 1.0).abs() < 1e-6);
    assert!(res.exact_gap.unwrap() >= -1e-9);
}

#[test]
fn vqe_tfim_ring_hva_p3() {
    let h = tfim_hamiltonian(4, 1.0, Boundary::Ring).unwrap();
    let bp = tfim_hva(4, 1.0, Boundary::Ring, 3).unwrap();
    let cfg = OptimizerConfig { init: Init::Uniform { half_width: 0.1 }, seed: 1, ..Default::default() };
    let res = vqe_run(&h, &bp, &cfg).unwrap();
    let (e0, _) = exact_ground(&h).unwrap();
    assert!(res.best_value >= e0 - 1e-9);
    assert!(res.best_value - e0 < 1e-3, "gap {}", res.best_value - e0);
}

#[test]
fn maximize_flips_the_sense() {
    let obj = cos_objective().with_sense(Sense::Maximize);
    let cfg = OptimizerConfig::with_method(Method::NelderMead);
    let res = optimize(&obj, &cfg, &binding(obj.circuit(), &[2.0])).unwrap();
    assert!((res.best_value - 1.0).abs() < 1e-6);
    let max = res.trace.iter().map(|t| t.value).fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(max, res.best_value);
}

#[test]
fn non_finite_value_carries_trace() {
    let z = PauliSum::parse("Z0", Some(1)).unwrap();
    let mut c = Circuit::new(1);
    let t = c.param("t");
    c.push(Gate::RX(Angle::param(t)), &[0]).unwrap();
    let obj = Objective::new(c, Observable { sum: z, offset: f64::NAN }, StateVector::zero(1).unwrap()).unwrap();
    let r = optimize(&obj, &OptimizerConfig::default(), &binding(obj.circuit(), &[0.1]));
    assert!(matches!(r, Err(Error::NonFinite { .. })));
}

#[test]
fn hea_uniform_start_is_seeded() {
    let bp = AnsatzBlueprint::new(AnsatzConfig::Hea(HeaConfig {
        n: 2,
        layers: 1,
        entangler: Default::default(),
    }))
    .unwrap();
    let h = PauliSum::parse("Z0 Z1 + 0.5 X0", Some(2)).unwrap();
    let cfg = OptimizerConfig { init: Init::Uniform { half_width: 0.1 }, seed: 5, ..Default::default() };
    assert_eq!(vqe_run(&h, &bp, &cfg).unwrap(), vqe_run(&h, &bp, &cfg).unwrap());
}

fn triangle() -> Graph {
    Graph::cycle(3)
}

fn single_edge() -> Graph {
    Graph::new(2, vec![(0, 1, 1.0)]).unwrap()
}

#[test]
fn qaoa_triangle_samples_optimum() {
    let cfg = OptimizerConfig::with_method(Method::NelderMead);
    let res = qaoa_run(&triangle(), 1, &cfg, 4096).unwrap();
    assert_eq!(res.best_cut, 2.0);
    assert_eq!(res.approximation_ratio, 1.0);
    assert!(res.opt.best_value > 1.5);
}

#[test]
fn qaoa_single_edge_reaches_one() {
    let cfg = OptimizerConfig::with_method(Method::NelderMead);
    let res = qaoa_run(&single_edge(), 1, &cfg, 64).unwrap();
    assert!((res.opt.best_value - 1.0).abs() < 1e-4, "{}", res.opt.best_value);
}

#[test]
fn adapt_minus_x_picks_y() {
    let h = PauliSum::parse("-1 X0", Some(1)).unwrap();
    let pool = vec![PauliString::parse("Y0", 1).unwrap(), PauliString::parse("Z0", 1).unwrap()];
    let opts = AdaptOptions { epsilon: 1e-3, max_depth: 4, reference: None, optimizer: OptimizerConfig::default() };
    let (res, state) = adapt_vqe_run(&h, &pool, &opts).unwrap();
    assert_eq!(state.chosen[0], 0);
    assert!((state.gradient_trace[0] - 1.0).abs() < 1e-12);
    assert!((res.best_value + 1.0).abs() < 1e-6);
    assert!(res.converged);
}

#[test]
fn adapt_large_epsilon_stops_immediately() {
    let h = PauliSum::parse("-1 X0", Some(1)).unwrap();
    let pool = vec![PauliString::parse("Y0", 1).unwrap()];
    let opts = AdaptOptions { epsilon: 2.0, max_depth: 4, reference: None, optimizer: OptimizerConfig::default() };
    let (res, state) = adapt_vqe_run(&h, &pool, &opts).unwrap();
    assert!(state.chosen.is_empty());
    assert_eq!(res.best_value, 0.0);
    assert_eq!(state.energy_trace, vec![0.0]);
    assert!(adapt_vqe_run(&h, &[], &opts).is_err());
}

#[test]
fn adapt_tfim_chain() {
    let h = tfim_hamiltonian(4, 1.0, Boundary::Chain).unwrap();
    let opts = AdaptOptions { epsilon: 1e-4, max_depth: 12, reference: None, optimizer: OptimizerConfig::default() };
    let (res, state) = adapt_vqe_run(&h, &y_local_pool(4), &opts).unwrap();
    let (e0, _) = exact_ground(&h).unwrap();
    for w in state.energy_trace.windows(2) {
        assert!(w[1] <= w[0] + opts.optimizer.tolerance);
    }
    assert!(state.chosen.len() <= 12);
    assert!(res.best_value - e0 < 1e-3, "gap {} after {:?}", res.best_value - e0, state.energy_trace);
    let bp = state.blueprint().unwrap();
    assert_eq!(bp.num_parameters, state.chosen.len());
}

#[test]
fn adapt_tfim_ring_needs_more_depth() {
    let h = tfim_hamiltonian(4, 1.0, Boundary::Ring).unwrap();
    let opts = AdaptOptions { epsilon: 1e-4, max_depth: 16, reference: None, optimizer: OptimizerConfig::default() };
    let (res, state) = adapt_vqe_run(&h, &y_local_pool(4), &opts).unwrap();
    let (e0, _) = exact_ground(&h).unwrap();
    assert!(res.best_value - e0 < 1e-3);
    assert!(state.chosen.len() > 12);
}
