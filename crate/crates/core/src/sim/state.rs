use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::gate::{Gate, C64};
use crate::error::{Error, Result};

/// Hard cap on statevector width (2^24 amplitudes ≈ 256 MiB).
pub const MAX_STATE_QUBITS: usize = 24;

/// Dense `2^n` amplitude vector. Qubit `k` is bit `k` of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub qubit: usize,
    pub outcome: u8,
    /// Born probability of `outcome` before collapse.
    pub probability: f64,
}

pub(crate) fn check_width(n: usize) -> Result<()> {
    if n == 0 || n > MAX_STATE_QUBITS {
        return Err(Error::Size { requested: n, max: MAX_STATE_QUBITS });
    }
    Ok(())
}

impl StateVector {
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_width(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::Invalid(format!("basis index {index} >= {dim}")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Wrap raw amplitudes; the length must be a power of two. The caller
    /// is responsible for normalization (see [`StateVector::normalized`]).
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::Invalid(format!("amplitude count {dim} is not a power of two ≥ 2")));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_width(num_qubits)?;
        Ok(Self { num_qubits, amps })
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            for a in &mut self.amps {
                *a /= n;
            }
        }
        self
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::QubitMismatch { expected: self.num_qubits, got: other.num_qubits });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn check_targets(&self, targets: &[usize]) -> Result<()> {
        for (i, &t) in targets.iter().enumerate() {
            if t >= self.num_qubits {
                return Err(Error::TargetOutOfRange { qubit: t, num_qubits: self.num_qubits });
            }
            if targets[..i].contains(&t) {
                return Err(Error::DuplicateTarget(t));
            }
        }
        Ok(())
    }

    /// Apply a bound gate in place.
    pub fn apply(&mut self, gate: &Gate, targets: &[usize]) -> Result<()> {
        if targets.len() != gate.arity() {
            return Err(Error::Arity { gate: gate.name(), expected: gate.arity(), got: targets.len() });
        }
        self.check_targets(targets)?;
        if let Some(m) = gate.single_qubit() {
            self.apply_1q(m, targets[0], 0);
            return Ok(());
        }
        match gate {
            Gate::CNOT => {
                let (c, t) = (1usize << targets[0], 1usize << targets[1]);
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
            Gate::CZ => {
                let mask = (1usize << targets[0]) | (1usize << targets[1]);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *a = -*a;
                    }
                }
            }
            Gate::SWAP => {
                let (a, b) = (1usize << targets[0], 1usize << targets[1]);
                for i in 0..self.amps.len() {
                    if i & a != 0 && i & b == 0 {
                        self.amps.swap(i, (i & !a) | b);
                    }
                }
            }
            Gate::ZZ(angle) => {
                let t = match angle {
                    super::gate::Angle::Fixed(v) => *v,
                    super::gate::Angle::Param { index, .. } => {
                        return Err(Error::Unbound(format!("#{index}")))
                    }
                };
                let same = C64::from_polar(1.0, -t / 2.0);
                let diff = C64::from_polar(1.0, t / 2.0);
                let (a, b) = (targets[0], targets[1]);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    let parity = ((i >> a) ^ (i >> b)) & 1;
                    *amp *= if parity == 0 { same } else { diff };
                }
            }
            Gate::Controlled { controls, inner } => {
                let m = inner.single_qubit().ok_or_else(|| {
                    if inner.is_parameterized() {
                        Error::Unbound(inner.name())
                    } else {
                        Error::Unsupported(format!("controlled {}", inner.name()))
                    }
                })?;
                let mask = targets[..*controls].iter().fold(0usize, |m, &q| m | (1 << q));
                self.apply_1q(m, targets[*controls], mask);
            }
            other => {
                // Only parameterized single-qubit gates fall through here.
                return Err(Error::Unbound(other.name()));
            }
        }
        Ok(())
    }

    /// 2×2 update on qubit `q`, restricted to indices where `control_mask` bits are set.
    fn apply_1q(&mut self, m: [C64; 4], q: usize, control_mask: usize) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit != 0 || i & control_mask != control_mask {
                continue;
            }
            let j = i | bit;
            let (a0, a1) = (self.amps[i], self.amps[j]);
            self.amps[i] = m[0] * a0 + m[1] * a1;
            self.amps[j] = m[2] * a0 + m[3] * a1;
        }
    }

    /// Born probability that qubit `q` reads 1.
    pub fn prob_one(&self, q: usize) -> f64 {
        let bit = 1usize << q;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Project qubit `q` onto `outcome` and renormalize. Returns the
    /// pre-collapse probability of that outcome.
    pub fn collapse(&mut self, q: usize, outcome: u8) -> Result<f64> {
        self.check_targets(&[q])?;
        let p1 = self.prob_one(q);
        let p = if outcome == 1 { p1 } else { 1.0 - p1 };
        if p <= 0.0 {
            return Err(Error::Invalid(format!("outcome {outcome} on qubit {q} has zero probability")));
        }
        let bit = 1usize << q;
        let keep = if outcome == 1 { bit } else { 0 };
        let scale = 1.0 / p.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit == keep {
                *a *= scale;
            } else {
                *a = C64::new(0.0, 0.0);
            }
        }
        Ok(p)
    }

    /// Sample and collapse qubit `q` by the Born rule.
    pub fn measure<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<MeasurementRecord> {
        self.check_targets(&[q])?;
        let p1 = self.prob_one(q);
        let r: f64 = rng.random();
        let outcome = u8::from(r < p1);
        let probability = self.collapse(q, outcome)?;
        Ok(MeasurementRecord { qubit: q, outcome, probability })
    }

    /// Draw `shots` computational-basis samples. Keys are bitstrings
    /// printed most-significant qubit first (`q_{n-1} … q_0`).
    pub fn sample<R: Rng + ?Sized>(&self, shots: usize, rng: &mut R) -> BTreeMap<String, usize> {
        let mut cumulative = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cumulative.push(acc);
        }
        let mut hist = vec![0usize; self.amps.len()];
        for _ in 0..shots {
            let r: f64 = rng.random::<f64>() * acc;
            let idx = cumulative.partition_point(|&c| c <= r).min(self.amps.len() - 1);
            hist[idx] += 1;
        }
        hist.iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (bitstring(i, self.num_qubits), c))
            .collect()
    }
}

/// Basis index as a bitstring, qubit `n-1` leftmost.
pub fn bitstring(index: usize, num_qubits: usize) -> String {
    (0..num_qubits).rev().map(|q| if index >> q & 1 == 1 { '1' } else { '0' }).collect()
}

/// Inverse of [`bitstring`].
pub fn parse_bitstring(s: &str) -> Result<usize> {
    s.chars().try_fold(0usize, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok(acc << 1 | 1),
        _ => Err(Error::Invalid(format!("bad bitstring `{s}`"))),
    })
}

/// Pure single-gate application on a copy of `state`.
pub fn apply_gate(state: &StateVector, gate: &Gate, targets: &[usize]) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate, targets)?;
    Ok(out)
}

pub fn new_zero_state(n: usize) -> Result<StateVector> {
    StateVector::zero(n)
}

/// Measure qubit `q` of a copy of `state`.
pub fn measure_qubit<R: Rng + ?Sized>(
    state: &StateVector,
    q: usize,
    rng: &mut R,
) -> Result<(MeasurementRecord, StateVector)> {
    let mut out = state.clone();
    let rec = out.measure(q, rng)?;
    Ok((rec, out))
}
