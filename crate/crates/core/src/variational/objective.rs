//! Expectation-value objectives and their gradients.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use rayon::prelude::*;

use super::optimize::{Problem, Sense};
use crate::ansatz::AnsatzBlueprint;
use crate::error::{Error, Result};
use crate::hamiltonian::{expectation, Observable, PauliSum};
use crate::sim::execute::{execute_branches, execute_unitary, SlotShift};
use crate::sim::{Angle, Circuit, Operation, ParameterBinding, ShiftRule, StateVector};

/// Step used for finite-difference fallback of gates without a shift rule.
pub const FALLBACK_STEP: f64 = 1e-5;

/// `⟨ψ(θ)| H |ψ(θ)⟩ + offset` for `|ψ(θ)⟩ = C(θ)|initial⟩`.
///
/// Circuits with measurements are evaluated exactly as the
/// probability-weighted sum over all measurement branches.
#[derive(Debug, Clone)]
pub struct Objective {
    circuit: Circuit,
    observable: Observable,
    initial: StateVector,
    sense: Sense,
    fd_fallback: bool,
}

/// One parameterized angle slot: which parameter feeds it and how.
#[derive(Debug, Clone, Copy)]
struct Occurrence {
    op: usize,
    slot: usize,
    param: usize,
    scale: f64,
    rule: Option<ShiftRule>,
}

impl Objective {
    pub fn new(circuit: Circuit, observable: Observable, initial: StateVector) -> Result<Self> {
        let n = circuit.num_qubits();
        if observable.sum.num_qubits() != n {
            return Err(Error::QubitMismatch { expected: n, got: observable.sum.num_qubits() });
        }
        if initial.num_qubits() != n {
            return Err(Error::QubitMismatch { expected: n, got: initial.num_qubits() });
        }
        Ok(Self { circuit, observable, initial, sense: Sense::Minimize, fd_fallback: false })
    }

    /// Objective for `blueprint` on `h`, starting from `|0…0⟩`.
    pub fn from_blueprint(blueprint: &AnsatzBlueprint, h: &PauliSum) -> Result<Self> {
        let circuit = blueprint.build()?;
        let initial = StateVector::zero(circuit.num_qubits())?;
        Self::new(circuit, Observable { sum: h.clone(), offset: 0.0 }, initial)
    }

    pub fn with_sense(mut self, sense: Sense) -> Self {
        self.sense = sense;
        self
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.observable.offset = offset;
        self
    }

    /// Use central finite differences for slots without a shift rule.
    pub fn with_fd_fallback(mut self, on: bool) -> Self {
        self.fd_fallback = on;
        self
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn observable(&self) -> &Observable {
        &self.observable
    }

    pub fn initial_state(&self) -> &StateVector {
        &self.initial
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn num_parameters(&self) -> usize {
        self.circuit.num_parameters()
    }

    /// Objective value for a full binding.
    pub fn evaluate(&self, binding: &ParameterBinding) -> Result<f64> {
        self.value_at(&binding.resolve(&self.circuit)?)
    }

    /// Objective value for parameter values in table order.
    pub fn value_at(&self, params: &[f64]) -> Result<f64> {
        self.shifted(params, None)
    }

    /// Final state for parameter values; measurement-free circuits only.
    pub fn state_at(&self, params: &[f64]) -> Result<StateVector> {
        self.check_len(params)?;
        execute_unitary(&self.circuit, params, self.initial.clone(), None)
    }

    fn check_len(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.num_parameters() {
            return Err(Error::Invalid(format!(
                "{} values for {} parameters",
                params.len(),
                self.num_parameters()
            )));
        }
        Ok(())
    }

    fn shifted(&self, params: &[f64], shift: Option<SlotShift>) -> Result<f64> {
        self.check_len(params)?;
        let h = &self.observable.sum;
        let e = if self.circuit.has_measurements() {
            let mut total = 0.0;
            for b in execute_branches(&self.circuit, params, self.initial.clone(), shift)? {
                total += b.probability * expectation(&b.state, h)?;
            }
            total
        } else {
            expectation(&execute_unitary(&self.circuit, params, self.initial.clone(), shift)?, h)?
        };
        Ok(e + self.observable.offset)
    }

    fn occurrences(&self) -> Vec<Occurrence> {
        let mut out = Vec::new();
        for (op, o) in self.circuit.ops().iter().enumerate() {
            let Operation::Gate { gate, .. } = o else { continue };
            for (slot, a) in gate.angles().into_iter().enumerate() {
                if let Angle::Param { index, scale, .. } = a {
                    if scale != 0.0 {
                        out.push(Occurrence { op, slot, param: index, scale, rule: gate.shift_rule(slot) });
                    }
                }
            }
        }
        out
    }

    /// d value / d slot for one occurrence, and the evaluations it took.
    fn slot_derivative(&self, params: &[f64], occ: &Occurrence) -> Result<(f64, usize)> {
        let at = |delta: f64| self.shifted(params, Some(SlotShift { op: occ.op, slot: occ.slot, delta }));
        match occ.rule {
            Some(ShiftRule::TwoTerm) => Ok(((at(FRAC_PI_2)? - at(-FRAC_PI_2)?) / 2.0, 2)),
            Some(ShiftRule::FourTerm) => {
                let d1 = (SQRT_2 + 1.0) / (4.0 * SQRT_2);
                let d2 = (SQRT_2 - 1.0) / (4.0 * SQRT_2);
                let near = at(FRAC_PI_2)? - at(-FRAC_PI_2)?;
                let far = at(3.0 * FRAC_PI_2)? - at(-3.0 * FRAC_PI_2)?;
                Ok((d1 * near - d2 * far, 4))
            }
            None if self.fd_fallback => {
                Ok(((at(FALLBACK_STEP)? - at(-FALLBACK_STEP)?) / (2.0 * FALLBACK_STEP), 2))
            }
            None => {
                let gate = match &self.circuit.ops()[occ.op] {
                    Operation::Gate { gate, .. } => gate.name(),
                    Operation::Measure { .. } => unreachable!("occurrences are gates"),
                };
                Err(Error::Unsupported(format!("no shift rule for slot {} of {gate}", occ.slot)))
            }
        }
    }

    fn gradient_over(&self, params: &[f64], occs: &[Occurrence]) -> Result<(Vec<f64>, usize)> {
        self.check_len(params)?;
        let parts: Vec<(f64, usize)> =
            occs.par_iter().map(|o| self.slot_derivative(params, o)).collect::<Result<_>>()?;
        let mut grad = vec![0.0; params.len()];
        let mut evals = 0;
        for (o, (d, e)) in occs.iter().zip(parts) {
            grad[o.param] += o.scale * d;
            evals += e;
        }
        Ok((grad, evals))
    }

    /// Exact gradient by the parameter-shift rule, summed over every
    /// occurrence of each parameter. Also returns the evaluation count.
    pub fn parameter_shift_gradient_counted(&self, params: &[f64]) -> Result<(Vec<f64>, usize)> {
        self.gradient_over(params, &self.occurrences())
    }

    pub fn parameter_shift_gradient(&self, params: &[f64]) -> Result<Vec<f64>> {
        Ok(self.parameter_shift_gradient_counted(params)?.0)
    }

    /// Parameter-shift derivative with respect to a single parameter.
    pub fn gradient_component(&self, params: &[f64], index: usize) -> Result<f64> {
        let occs: Vec<Occurrence> = self.occurrences().into_iter().filter(|o| o.param == index).collect();
        Ok(self.gradient_over(params, &occs)?.0.get(index).copied().unwrap_or(0.0))
    }

    /// Central differences with step `h` in every parameter.
    pub fn finite_difference_gradient(&self, params: &[f64], h: f64) -> Result<Vec<f64>> {
        if h.is_nan() || h <= 0.0 {
            return Err(Error::Invalid(format!("finite-difference step must be positive, got {h}")));
        }
        self.check_len(params)?;
        (0..params.len())
            .into_par_iter()
            .map(|i| {
                let mut p = params.to_vec();
                p[i] = params[i] + h;
                let up = self.value_at(&p)?;
                p[i] = params[i] - h;
                let down = self.value_at(&p)?;
                Ok((up - down) / (2.0 * h))
            })
            .collect()
    }
}

impl Problem for Objective {
    fn dim(&self) -> usize {
        self.num_parameters()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.value_at(x)
    }

    fn gradient(&self, x: &[f64]) -> Result<(Vec<f64>, usize)> {
        self.parameter_shift_gradient_counted(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{hea_ansatz, ucc_ansatz, Entangler};
    use crate::hamiltonian::{PauliString, PauliSum};
    use crate::sim::Gate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn z0() -> PauliSum {
        PauliSum::parse("Z0", Some(1)).unwrap()
    }

    fn rx_objective() -> Objective {
        let mut c = Circuit::new(1);
        let t = c.param("t");
        c.push(Gate::RX(Angle::param(t)), &[0]).unwrap();
        Objective::new(c, Observable { sum: z0(), offset: 0.0 }, StateVector::zero(1).unwrap()).unwrap()
    }

    #[test]
    fn rx_values_and_gradients() {
        let o = rx_objective();
        assert!((o.value_at(&[0.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((o.value_at(&[PI]).unwrap() + 1.0).abs() < 1e-12);
        assert!((o.value_at(&[PI / 3.0]).unwrap() - 0.5).abs() < 1e-12);
        assert!(o.parameter_shift_gradient(&[0.0]).unwrap()[0].abs() < 1e-12);
        assert!((o.parameter_shift_gradient(&[FRAC_PI_2]).unwrap()[0] + 1.0).abs() < 1e-12);
        let fd = o.finite_difference_gradient(&[FRAC_PI_2], 1e-5).unwrap()[0];
        assert!((fd + 1.0).abs() < 1e-9);
        assert!(o.finite_difference_gradient(&[0.0], 0.0).is_err());
        let mut b = ParameterBinding::new();
        assert!(matches!(o.evaluate(&b), Err(Error::Unbound(_))));
        b.insert("t", PI);
        assert!((o.evaluate(&b).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_circuit_has_zero_gradient() {
        let o = Objective::new(Circuit::new(1), Observable { sum: z0(), offset: 2.0 }, StateVector::zero(1).unwrap())
            .unwrap();
        assert_eq!(o.value_at(&[]).unwrap(), 3.0);
        assert!(o.finite_difference_gradient(&[], 1e-5).unwrap().is_empty());
    }

    #[test]
    fn shared_and_scaled_parameters() {
        // RY(2t) then RY(-t + 0.3): net RY(t + 0.3), ⟨Z⟩ = cos(t + 0.3).
        let mut c = Circuit::new(1);
        let t = c.param("t");
        c.push(Gate::RY(Angle::affine(t, 2.0, 0.0)), &[0]).unwrap();
        c.push(Gate::RY(Angle::affine(t, -1.0, 0.3)), &[0]).unwrap();
        let o = Objective::new(c, Observable { sum: z0(), offset: 0.0 }, StateVector::zero(1).unwrap()).unwrap();
        let g = o.parameter_shift_gradient(&[0.4]).unwrap()[0];
        assert!((g + (0.7f64).sin()).abs() < 1e-12);
    }

    #[test]
    fn four_term_rule_for_controlled_rotations() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for inner in 0..3 {
            let mut c = Circuit::new(2);
            let t = c.param("t");
            c.push(Gate::H, &[0]).unwrap();
            c.push(Gate::RY(0.7.into()), &[1]).unwrap();
            let g = match inner {
                0 => Gate::RX(Angle::param(t)),
                1 => Gate::RY(Angle::param(t)),
                _ => Gate::RZ(Angle::param(t)),
            };
            c.push(Gate::controlled(1, g), &[0, 1]).unwrap();
            c.push(Gate::H, &[1]).unwrap();
            let h = PauliSum::parse("0.7 Z1 + 0.4 X0 Y1 - 0.2 X1", Some(2)).unwrap();
            let o = Objective::new(c, Observable { sum: h, offset: 0.0 }, StateVector::zero(2).unwrap()).unwrap();
            let x = [rng.random_range(-PI..PI)];
            let ps = o.parameter_shift_gradient(&x).unwrap()[0];
            let fd = o.finite_difference_gradient(&x, 1e-5).unwrap()[0];
            assert!((ps - fd).abs() < 1e-8, "{inner}: {ps} vs {fd}");
        }
    }

    #[test]
    fn unsupported_gate_and_fallback() {
        let mut c = Circuit::new(2);
        let t = c.param("t");
        c.push(Gate::H, &[0]).unwrap();
        c.push(Gate::controlled(1, Gate::U3(Angle::param(t), 0.2.into(), 0.1.into())), &[0, 1]).unwrap();
        let h = PauliSum::parse("Z1", Some(2)).unwrap();
        let o = Objective::new(c, Observable { sum: h, offset: 0.0 }, StateVector::zero(2).unwrap()).unwrap();
        assert!(matches!(o.parameter_shift_gradient(&[0.5]), Err(Error::Unsupported(_))));
        let o = o.with_fd_fallback(true);
        let g = o.parameter_shift_gradient(&[0.5]).unwrap()[0];
        let fd = o.finite_difference_gradient(&[0.5], 1e-5).unwrap()[0];
        assert!((g - fd).abs() < 1e-9);
    }

    #[test]
    fn measured_circuit_gradient_matches_fd() {
        let mut c = Circuit::new(2);
        let a = c.param("a");
        let b = c.param("b");
        c.push(Gate::RY(Angle::param(a)), &[0]).unwrap();
        let r = c.measure(0).unwrap();
        c.push_conditioned(Gate::RX(Angle::param(b)), &[1], r).unwrap();
        let h = PauliSum::parse("Z1 + 0.5 Z0", Some(2)).unwrap();
        let o = Objective::new(c, Observable { sum: h, offset: 0.0 }, StateVector::zero(2).unwrap()).unwrap();
        let x = [0.9, -0.4];
        let ps = o.parameter_shift_gradient(&x).unwrap();
        let fd = o.finite_difference_gradient(&x, 1e-5).unwrap();
        for (p, f) in ps.iter().zip(&fd) {
            assert!((p - f).abs() < 1e-8);
        }
    }

    #[test]
    fn ucc_and_hea_cross_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ps = |s: &str| PauliString::parse(s, 3).unwrap();
        let groups = vec![vec![(1.0, ps("X0 Y1"))], vec![(0.5, ps("Y0 X1 Z2")), (-1.0, ps("Z0 Y2"))]];
        let ucc = ucc_ansatz(&groups, Some("011")).unwrap();
        let hea = hea_ansatz(3, 2, Entangler::CzRing).unwrap();
        let h = PauliSum::parse("Z0 Z1 - 0.5 X1 + 0.3 Y0 Y2 + 0.2 Z2", Some(3)).unwrap();
        for bp in [ucc, hea] {
            let o = Objective::from_blueprint(&bp, &h).unwrap();
            let x: Vec<f64> = (0..o.num_parameters()).map(|_| rng.random_range(-PI..PI)).collect();
            let ps = o.parameter_shift_gradient(&x).unwrap();
            let fd = o.finite_difference_gradient(&x, 1e-5).unwrap();
            for (p, f) in ps.iter().zip(&fd) {
                assert!((p - f).abs() < 1e-6);
            }
            let k = x.len() - 1;
            assert!((o.gradient_component(&x, k).unwrap() - ps[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn qubit_mismatch_rejected() {
        let h = PauliSum::parse("Z0 Z1", Some(2)).unwrap();
        let r = Objective::new(Circuit::new(1), Observable { sum: h, offset: 0.0 }, StateVector::zero(1).unwrap());
        assert!(matches!(r, Err(Error::QubitMismatch { .. })));
    }
}
