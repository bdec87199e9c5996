//! Circuit execution: sampled runs, exhaustive branch enumeration and
//! dense unitary extraction.

use nalgebra::DMatrix;
use rand::Rng;

use super::circuit::{Circuit, Operation, ParameterBinding};
use super::gate::{Angle, Gate, C64};
use super::state::{MeasurementRecord, StateVector};
use crate::error::{Error, Result};

/// Dense unitaries are limited to 10 qubits (1024×1024 complex entries).
pub const MAX_UNITARY_QUBITS: usize = 10;

/// Adds `delta` to one angle slot of one operation during execution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SlotShift {
    pub op: usize,
    pub slot: usize,
    pub delta: f64,
}

/// One measurement branch of a circuit run.
#[derive(Debug, Clone)]
pub struct Branch {
    pub probability: f64,
    pub state: StateVector,
    pub records: Vec<MeasurementRecord>,
}

fn bound_gate(gate: &Gate, params: &[f64], op_index: usize, shift: Option<SlotShift>) -> Gate {
    gate.map_angles(&mut |slot, a| {
        let mut v = a.value(params);
        if let Some(s) = shift {
            if s.op == op_index && s.slot == slot {
                v += s.delta;
            }
        }
        Angle::Fixed(v)
    })
}

fn check_initial(circuit: &Circuit, initial: &StateVector) -> Result<()> {
    if initial.num_qubits() != circuit.num_qubits() {
        return Err(Error::QubitMismatch { expected: circuit.num_qubits(), got: initial.num_qubits() });
    }
    Ok(())
}

fn condition_holds(condition: Option<usize>, records: &[MeasurementRecord]) -> Result<bool> {
    match condition {
        None => Ok(true),
        Some(r) => records
            .get(r)
            .map(|rec| rec.outcome == 1)
            .ok_or(Error::Ordering { record: r, available: records.len() }),
    }
}

/// Run with explicit parameter values; measurements are sampled from `rng`.
pub(crate) fn execute<R: Rng + ?Sized>(
    circuit: &Circuit,
    params: &[f64],
    mut state: StateVector,
    shift: Option<SlotShift>,
    rng: &mut R,
) -> Result<(StateVector, Vec<MeasurementRecord>)> {
    check_initial(circuit, &state)?;
    let mut records = Vec::new();
    for (i, op) in circuit.ops().iter().enumerate() {
        match op {
            Operation::Gate { gate, targets, condition } => {
                if condition_holds(*condition, &records)? {
                    state.apply(&bound_gate(gate, params, i, shift), targets)?;
                }
            }
            Operation::Measure { qubit } => records.push(state.measure(*qubit, rng)?),
        }
    }
    Ok((state, records))
}

/// Measurement-free execution; measurements and conditioned gates are rejected.
pub(crate) fn execute_unitary(
    circuit: &Circuit,
    params: &[f64],
    mut state: StateVector,
    shift: Option<SlotShift>,
) -> Result<StateVector> {
    check_initial(circuit, &state)?;
    for (i, op) in circuit.ops().iter().enumerate() {
        match op {
            Operation::Gate { gate, targets, condition: None } => {
                state.apply(&bound_gate(gate, params, i, shift), targets)?;
            }
            _ => return Err(Error::Unsupported("measurement in a unitary-only context".into())),
        }
    }
    Ok(state)
}

/// Enumerate every measurement branch with nonzero probability.
pub(crate) fn execute_branches(
    circuit: &Circuit,
    params: &[f64],
    state: StateVector,
    shift: Option<SlotShift>,
) -> Result<Vec<Branch>> {
    check_initial(circuit, &state)?;
    let mut out = Vec::new();
    descend(circuit, params, shift, 0, Branch { probability: 1.0, state, records: Vec::new() }, &mut out)?;
    Ok(out)
}

fn descend(
    circuit: &Circuit,
    params: &[f64],
    shift: Option<SlotShift>,
    start: usize,
    mut branch: Branch,
    out: &mut Vec<Branch>,
) -> Result<()> {
    for (i, op) in circuit.ops().iter().enumerate().skip(start) {
        match op {
            Operation::Gate { gate, targets, condition } => {
                if condition_holds(*condition, &branch.records)? {
                    branch.state.apply(&bound_gate(gate, params, i, shift), targets)?;
                }
            }
            Operation::Measure { qubit } => {
                let p1 = branch.state.prob_one(*qubit);
                for (outcome, p) in [(0u8, 1.0 - p1), (1u8, p1)] {
                    if p <= 1e-14 {
                        continue;
                    }
                    let mut child = branch.clone();
                    let probability = child.state.collapse(*qubit, outcome)?;
                    child.probability *= probability;
                    child.records.push(MeasurementRecord { qubit: *qubit, outcome, probability });
                    descend(circuit, params, shift, i + 1, child, out)?;
                }
                return Ok(());
            }
        }
    }
    out.push(branch);
    Ok(())
}

/// Execute `circuit` on `initial`, sampling measurements from `rng`.
pub fn run_circuit<R: Rng + ?Sized>(
    circuit: &Circuit,
    binding: &ParameterBinding,
    initial: &StateVector,
    rng: &mut R,
) -> Result<(StateVector, Vec<MeasurementRecord>)> {
    let params = binding.resolve(circuit)?;
    execute(circuit, &params, initial.clone(), None, rng)
}

/// Every measurement branch of `circuit` on `initial`, in depth-first
/// outcome order (0 before 1). Probabilities sum to one.
pub fn run_circuit_branches(
    circuit: &Circuit,
    binding: &ParameterBinding,
    initial: &StateVector,
) -> Result<Vec<Branch>> {
    let params = binding.resolve(circuit)?;
    execute_branches(circuit, &params, initial.clone(), None)
}

/// Dense `2^n × 2^n` unitary; column `j` is the circuit applied to `|j⟩`.
pub fn circuit_to_unitary(circuit: &Circuit, binding: &ParameterBinding) -> Result<DMatrix<C64>> {
    let n = circuit.num_qubits();
    if n == 0 || n > MAX_UNITARY_QUBITS {
        return Err(Error::Size { requested: n, max: MAX_UNITARY_QUBITS });
    }
    if circuit.has_measurements() {
        return Err(Error::Unsupported("circuit_to_unitary on a circuit with measurements".into()));
    }
    let params = binding.resolve(circuit)?;
    let dim = 1usize << n;
    let mut u = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        let col = execute_unitary(circuit, &params, StateVector::basis(n, j)?, None)?;
        for (i, a) in col.amplitudes().iter().enumerate() {
            u[(i, j)] = *a;
        }
    }
    Ok(u)
}

/// `|tr(A†B)| / dim`: equals 1 exactly when `A` and `B` agree up to a global phase.
pub fn phase_invariant_overlap(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    let tr: C64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    tr.norm() / a.nrows() as f64
}

/// Max entrywise deviation between `a` and `b` after removing the best global phase.
pub fn max_deviation_mod_phase(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    let tr: C64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if tr.norm() > 0.0 { tr / tr.norm() } else { C64::new(1.0, 0.0) };
    a.iter().zip(b.iter()).map(|(x, y)| (x * phase - y).norm()).fold(0.0, f64::max)
}
