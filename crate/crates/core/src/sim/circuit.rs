use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::gate::{Angle, Gate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Operation {
    Gate {
        gate: Gate,
        targets: Vec<usize>,
        /// Apply only when measurement record `condition` read 1.
        condition: Option<usize>,
    },
    Measure { qubit: usize },
}

impl Operation {
    pub fn qubits(&self) -> &[usize] {
        match self {
            Operation::Gate { targets, .. } => targets,
            Operation::Measure { qubit } => std::slice::from_ref(qubit),
        }
    }
}

/// Ordered gate list over `num_qubits` wires with a table of named
/// symbolic parameters. Gates refer to parameters by table index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<Operation>,
    params: Vec<String>,
    measurements: usize,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, ops: Vec::new(), params: Vec::new(), measurements: 0 }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn parameters(&self) -> &[String] {
        &self.params
    }

    pub fn num_parameters(&self) -> usize {
        self.params.len()
    }

    pub fn num_measurements(&self) -> usize {
        self.measurements
    }

    pub fn has_measurements(&self) -> bool {
        self.measurements > 0
    }

    /// True when some gate follows a measurement.
    pub fn has_mid_circuit_measurement(&self) -> bool {
        let first = self.ops.iter().position(|o| matches!(o, Operation::Measure { .. }));
        match first {
            Some(i) => self.ops[i..].iter().any(|o| matches!(o, Operation::Gate { .. })),
            None => false,
        }
    }

    /// Index of the parameter called `name`, registering it if new.
    pub fn param(&mut self, name: &str) -> usize {
        match self.param_index(name) {
            Some(i) => i,
            None => {
                self.params.push(name.to_string());
                self.params.len() - 1
            }
        }
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p == name)
    }

    fn validate(&self, gate: &Gate, targets: &[usize]) -> Result<()> {
        if targets.len() != gate.arity() {
            return Err(Error::Arity { gate: gate.name(), expected: gate.arity(), got: targets.len() });
        }
        for (i, &t) in targets.iter().enumerate() {
            if t >= self.num_qubits {
                return Err(Error::TargetOutOfRange { qubit: t, num_qubits: self.num_qubits });
            }
            if targets[..i].contains(&t) {
                return Err(Error::DuplicateTarget(t));
            }
        }
        if let Gate::Controlled { inner, .. } = gate {
            if inner.arity() != 1 {
                return Err(Error::Unsupported(format!("controlled {}", inner.name())));
            }
        }
        for a in gate.angles() {
            if let Some(i) = a.param_index() {
                if i >= self.params.len() {
                    return Err(Error::UnknownParameter(format!("#{i}")));
                }
            }
        }
        Ok(())
    }

    pub fn push(&mut self, gate: Gate, targets: &[usize]) -> Result<&mut Self> {
        self.validate(&gate, targets)?;
        self.ops.push(Operation::Gate { gate, targets: targets.to_vec(), condition: None });
        Ok(self)
    }

    /// Append `gate` conditioned on measurement record `record` reading 1.
    pub fn push_conditioned(&mut self, gate: Gate, targets: &[usize], record: usize) -> Result<&mut Self> {
        self.validate(&gate, targets)?;
        if record >= self.measurements {
            return Err(Error::Ordering { record, available: self.measurements });
        }
        self.ops.push(Operation::Gate { gate, targets: targets.to_vec(), condition: Some(record) });
        Ok(self)
    }

    /// Append a measurement and return its record index.
    pub fn measure(&mut self, qubit: usize) -> Result<usize> {
        if qubit >= self.num_qubits {
            return Err(Error::TargetOutOfRange { qubit, num_qubits: self.num_qubits });
        }
        self.ops.push(Operation::Measure { qubit });
        self.measurements += 1;
        Ok(self.measurements - 1)
    }

    /// Append all of `other`, merging parameter tables by name.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::QubitMismatch { expected: self.num_qubits, got: other.num_qubits });
        }
        let remap: Vec<usize> = other.params.iter().map(|p| self.param(p)).collect();
        let record_base = self.measurements;
        for op in &other.ops {
            match op {
                Operation::Gate { gate, targets, condition } => {
                    let gate = gate.map_angles(&mut |_, a| match a {
                        Angle::Param { index, scale, offset } => {
                            Angle::Param { index: remap[index], scale, offset }
                        }
                        fixed => fixed,
                    });
                    self.ops.push(Operation::Gate {
                        gate,
                        targets: targets.clone(),
                        condition: condition.map(|r| r + record_base),
                    });
                }
                Operation::Measure { qubit } => {
                    self.ops.push(Operation::Measure { qubit: *qubit });
                    self.measurements += 1;
                }
            }
        }
        Ok(self)
    }

    /// As-soon-as-possible layering of the two-qubit gates: each gate sits
    /// one layer after the latest earlier two-qubit gate sharing a qubit.
    /// Single-qubit gates and measurements are ignored. Each layer is a
    /// sorted set of sorted qubit pairs.
    pub fn two_qubit_layers(&self) -> Vec<BTreeSet<(usize, usize)>> {
        layer_pairs(self.num_qubits, self.ops.iter())
    }

    /// [`Circuit::two_qubit_layers`] computed on the reversed operation order.
    pub fn reversed_two_qubit_layers(&self) -> Vec<BTreeSet<(usize, usize)>> {
        layer_pairs(self.num_qubits, self.ops.iter().rev())
    }
}

fn layer_pairs<'a>(n: usize, ops: impl Iterator<Item = &'a Operation>) -> Vec<BTreeSet<(usize, usize)>> {
    let mut layers: Vec<BTreeSet<(usize, usize)>> = Vec::new();
    let mut next = vec![0usize; n];
    for op in ops {
        let q = op.qubits();
        if q.len() != 2 || !matches!(op, Operation::Gate { .. }) {
            continue;
        }
        let pair = (q[0].min(q[1]), q[0].max(q[1]));
        let at = next[pair.0].max(next[pair.1]);
        if at == layers.len() {
            layers.push(BTreeSet::new());
        }
        layers[at].insert(pair);
        next[pair.0] = at + 1;
        next[pair.1] = at + 1;
    }
    layers
}

/// Parameter name → value (radians).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParameterBinding(pub BTreeMap<String, f64>);

impl ParameterBinding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(circuit: &Circuit) -> Self {
        Self(circuit.parameters().iter().map(|p| (p.clone(), 0.0)).collect())
    }

    /// Bind `values` in parameter-table order.
    pub fn from_values(circuit: &Circuit, values: &[f64]) -> Result<Self> {
        if values.len() != circuit.num_parameters() {
            return Err(Error::Invalid(format!(
                "{} values for {} parameters",
                values.len(),
                circuit.num_parameters()
            )));
        }
        Ok(Self(circuit.parameters().iter().cloned().zip(values.iter().copied()).collect()))
    }

    pub fn insert(&mut self, name: impl Into<String>, value: f64) {
        self.0.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    /// Values in `circuit`'s parameter-table order.
    pub fn resolve(&self, circuit: &Circuit) -> Result<Vec<f64>> {
        circuit
            .parameters()
            .iter()
            .map(|p| self.get(p).ok_or_else(|| Error::Unbound(p.clone())))
            .collect()
    }
}

impl FromIterator<(String, f64)> for ParameterBinding {
    fn from_iter<T: IntoIterator<Item = (String, f64)>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}
