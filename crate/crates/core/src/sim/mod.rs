//! Exact statevector simulation.

pub mod circuit;
pub mod execute;
pub mod gate;
pub mod qasm;
pub mod state;

pub use circuit::{Circuit, Operation, ParameterBinding};
pub use execute::{
    circuit_to_unitary, max_deviation_mod_phase, phase_invariant_overlap, run_circuit,
    run_circuit_branches, Branch, MAX_UNITARY_QUBITS,
};
pub use gate::{Angle, Gate, ShiftRule, C64};
pub use qasm::to_qasm;
pub use state::{
    apply_gate, bitstring, measure_qubit, new_zero_state, parse_bitstring, MeasurementRecord,
    StateVector, MAX_STATE_QUBITS,
};
