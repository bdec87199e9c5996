//! Quanvolutional feature maps, QCNN training on prepared states and
//! embedding fidelities.

use std::f64::consts::PI;
use std::io::{Read, Write};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{qcnn_ansatz, qcnn_readout, AnsatzBlueprint, AnsatzConfig, Family};
use crate::error::{Error, Result};
use crate::hamiltonian::{Observable, Pauli, PauliString, PauliSum};
use crate::sim::execute::{execute_branches, execute_unitary};
use crate::sim::{Angle, Circuit, Gate, ParameterBinding, StateVector};
use crate::variational::{minimize, Init, Objective, OptimizerConfig, Problem, Sense, TraceEntry};

/// Row-major image with pixel values in `[0, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    height: usize,
    width: usize,
    pixels: Vec<f64>,
}

impl ImageGrid {
    pub fn new(height: usize, width: usize, pixels: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 || pixels.len() != height * width {
            return Err(Error::Invalid(format!("{} pixels for a {height}×{width} image", pixels.len())));
        }
        if let Some(v) = pixels.iter().find(|v| !(0.0..=PI).contains(*v)) {
            return Err(Error::Invalid(format!("pixel {v} outside [0, π]")));
        }
        Ok(Self { height, width, pixels })
    }

    /// Scale non-negative raw rows so the largest value maps to π.
    pub fn from_raw_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Invalid("image rows have different lengths".into()));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        if let Some(v) = flat.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::Invalid(format!("raw pixel {v} must be finite and non-negative")));
        }
        let max = flat.iter().copied().fold(0.0, f64::max);
        let pixels = flat.into_iter().map(|v| if max > 0.0 { (v / max * PI).min(PI) } else { 0.0 }).collect();
        Self::new(height, width, pixels)
    }

    /// Headerless CSV, one image row per line.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Invalid(format!("image CSV: {e}")))?;
            let row = rec
                .iter()
                .map(|f| f.parse::<f64>().map_err(|_| Error::Invalid(format!("image CSV row {}: bad value `{f}`", i + 1))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_raw_rows(&rows)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    /// 2×2 block with top-left corner `(row, col)`, in qubit order
    /// `(r, c), (r, c+1), (r+1, c), (r+1, c+1)`.
    pub fn patch(&self, row: usize, col: usize) -> [f64; 4] {
        [self.get(row, col), self.get(row, col + 1), self.get(row + 1, col), self.get(row + 1, col + 1)]
    }
}

/// Output of [`quanv_layer`]: `rows × cols` cells of four channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureGrid {
    pub rows: usize,
    pub cols: usize,
    pub cells: Vec<[f64; 4]>,
}

impl FeatureGrid {
    pub fn get(&self, row: usize, col: usize) -> [f64; 4] {
        self.cells[row * self.cols + col]
    }

    /// CSV with header `row,col,c0,c1,c2,c3`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let err = |e: csv::Error| Error::Export(format!("feature CSV: {e}"));
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["row", "col", "c0", "c1", "c2", "c3"]).map_err(err)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let f = self.get(r, c);
                let mut rec = vec![r.to_string(), c.to_string()];
                rec.extend(f.iter().map(|v| v.to_string()));
                w.write_record(&rec).map_err(err)?;
            }
        }
        w.flush().map_err(|e| Error::Export(format!("feature CSV: {e}")))
    }
}

fn embedded_filter(patch: &[f64; 4], filter: &Circuit) -> Result<Circuit> {
    if filter.num_qubits() != 4 {
        return Err(Error::QubitMismatch { expected: 4, got: filter.num_qubits() });
    }
    let mut c = Circuit::new(4);
    for (q, &x) in patch.iter().enumerate() {
        c.push(Gate::RX(Angle::Fixed(x)), &[q])?;
    }
    c.append(filter)?;
    Ok(c)
}

fn z_expectations(state: &StateVector) -> Vec<f64> {
    (0..state.num_qubits()).map(|q| 1.0 - 2.0 * state.prob_one(q)).collect()
}

/// `⟨Z_i⟩` on each qubit after `RX(pixel_i)` embedding and `filter`; exact.
pub fn quanv_filter(patch: &[f64; 4], filter: &Circuit, binding: &ParameterBinding) -> Result<[f64; 4]> {
    let c = embedded_filter(patch, filter)?;
    let params = binding.resolve(&c)?;
    let mut z = [0.0; 4];
    if c.has_measurements() {
        for b in execute_branches(&c, &params, StateVector::zero(4)?, None)? {
            for (acc, v) in z.iter_mut().zip(z_expectations(&b.state)) {
                *acc += b.probability * v;
            }
        }
    } else {
        let s = execute_unitary(&c, &params, StateVector::zero(4)?, None)?;
        z.copy_from_slice(&z_expectations(&s));
    }
    Ok(z)
}

/// [`quanv_filter`] estimated from `shots` computational-basis samples.
pub fn quanv_filter_shots<R: Rng + ?Sized>(
    patch: &[f64; 4],
    filter: &Circuit,
    binding: &ParameterBinding,
    shots: usize,
    rng: &mut R,
) -> Result<[f64; 4]> {
    if shots == 0 {
        return Err(Error::Invalid("shots must be at least 1".into()));
    }
    let c = embedded_filter(patch, filter)?;
    let params = binding.resolve(&c)?;
    let mut z = [0.0; 4];
    for _ in 0..shots {
        let (s, _) = crate::sim::execute::execute(&c, &params, StateVector::zero(4)?, None, rng)?;
        let bits = s.sample(1, rng);
        let key = bits.keys().next().expect("one sample");
        let idx = crate::sim::parse_bitstring(key)?;
        for (q, acc) in z.iter_mut().enumerate() {
            *acc += if idx >> q & 1 == 1 { -1.0 } else { 1.0 };
        }
    }
    Ok(z.map(|v| v / shots as f64))
}

/// Apply the filter to every non-overlapping 2×2 patch (stride 2).
pub fn quanv_layer(img: &ImageGrid, filter: &Circuit, binding: &ParameterBinding) -> Result<FeatureGrid> {
    if !img.height.is_multiple_of(2) || !img.width.is_multiple_of(2) {
        return Err(Error::Invalid(format!("stride-2 layer needs even dimensions, got {}×{}", img.height, img.width)));
    }
    let (rows, cols) = (img.height / 2, img.width / 2);
    let cells = (0..rows * cols)
        .into_par_iter()
        .map(|k| quanv_filter(&img.patch(2 * (k / cols), 2 * (k % cols)), filter, binding))
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureGrid { rows, cols, cells })
}

/// A parameter-free state preparation and its class label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledStateSample {
    pub preparation: Circuit,
    pub label: u8,
}

impl LabeledStateSample {
    pub fn new(preparation: Circuit, label: u8) -> Result<Self> {
        if label > 1 {
            return Err(Error::Invalid(format!("label {label} is not 0 or 1")));
        }
        if preparation.num_parameters() > 0 || preparation.has_measurements() {
            return Err(Error::Invalid("preparation must be parameter- and measurement-free".into()));
        }
        Ok(Self { preparation, label })
    }

    /// Sample whose preparation flips the qubits set in `bits` (index form).
    pub fn basis(n: usize, bits: usize, label: u8) -> Result<Self> {
        let mut c = Circuit::new(n);
        for q in (0..n).filter(|q| bits >> q & 1 == 1) {
            c.push(Gate::X, &[q])?;
        }
        Self::new(c, label)
    }

    fn state(&self) -> Result<StateVector> {
        execute_unitary(&self.preparation, &[], StateVector::zero(self.preparation.num_qubits())?, None)
    }
}

/// `+1` for label 0, `−1` for label 1.
fn target(label: u8) -> f64 {
    if label == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Label predicted from a readout expectation: 0 when `⟨Z⟩ ≥ 0`.
pub fn predict_label(z: f64) -> u8 {
    u8::from(z < 0.0)
}

/// Mean squared error of the deferred-measurement QCNN readout against ±1 targets.
pub struct QcnnLoss {
    samples: Vec<(Objective, f64)>,
    dim: usize,
}

impl QcnnLoss {
    pub fn new(dataset: &[LabeledStateSample], n: usize) -> Result<Self> {
        if dataset.is_empty() {
            return Err(Error::Invalid("dataset is empty".into()));
        }
        if !dataset.iter().any(|s| s.label == 0) || !dataset.iter().any(|s| s.label == 1) {
            return Err(Error::Invalid("dataset must contain both labels".into()));
        }
        let circuit = qcnn_ansatz(n, false)?.build()?;
        let z = PauliSum::from_terms(n, [(1.0, PauliString::single(n, qcnn_readout(n), Pauli::Z)?)])?;
        let samples = dataset
            .iter()
            .map(|s| {
                if s.preparation.num_qubits() != n {
                    return Err(Error::QubitMismatch { expected: n, got: s.preparation.num_qubits() });
                }
                let obs = Observable { sum: z.clone(), offset: 0.0 };
                Ok((Objective::new(circuit.clone(), obs, s.state()?)?, target(s.label)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim: circuit.num_parameters(), samples })
    }

    /// Readout `⟨Z⟩` for every sample.
    pub fn outputs(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.samples.par_iter().map(|(o, _)| o.value_at(x)).collect()
    }

    pub fn accuracy(&self, x: &[f64]) -> Result<f64> {
        let out = self.outputs(x)?;
        let hits = out.iter().zip(&self.samples).filter(|(z, (_, y))| predict_label(**z) == predict_label(*y)).count();
        Ok(hits as f64 / out.len() as f64)
    }
}

impl Problem for QcnnLoss {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        let out = self.outputs(x)?;
        Ok(out.iter().zip(&self.samples).map(|(z, (_, y))| (z - y).powi(2)).sum::<f64>() / out.len() as f64)
    }

    fn value_cost(&self) -> usize {
        self.samples.len()
    }

    fn gradient(&self, x: &[f64]) -> Result<(Vec<f64>, usize)> {
        let m = self.samples.len() as f64;
        let mut grad = vec![0.0; self.dim];
        let mut evals = 0;
        for (obj, y) in &self.samples {
            let z = obj.value_at(x)?;
            let (g, e) = obj.parameter_shift_gradient_counted(x)?;
            for (acc, gi) in grad.iter_mut().zip(g) {
                *acc += 2.0 * (z - y) * gi / m;
            }
            evals += e + 1;
        }
        Ok((grad, evals))
    }
}

/// Gradient-descent settings for [`qcnn_train`]; `max_iters = 0` skips training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub max_iters: usize,
    pub step: f64,
    pub tolerance: f64,
    pub init: Init,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self { max_iters: 200, step: 0.5, tolerance: 1e-9, init: Init::Uniform { half_width: 0.1 }, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainResult {
    pub params: ParameterBinding,
    pub loss_trace: Vec<TraceEntry>,
    pub accuracy: f64,
}

/// Train the deferred-measurement QCNN on `dataset`.
pub fn qcnn_train(dataset: &[LabeledStateSample], n: usize, config: &TrainConfig) -> Result<TrainResult> {
    let loss = QcnnLoss::new(dataset, n)?;
    let circuit = qcnn_ansatz(n, false)?.build()?;
    let x0 = config.init.sample(loss.dim(), config.seed);
    let (x, loss_trace) = if config.max_iters == 0 {
        let v = loss.value(&x0)?;
        (x0, vec![TraceEntry { iteration: 0, value: v, grad_norm: None, evaluations: loss.value_cost() }])
    } else {
        let opt = OptimizerConfig {
            max_iters: config.max_iters,
            step: config.step,
            tolerance: config.tolerance,
            seed: config.seed,
            ..OptimizerConfig::default()
        };
        let raw = minimize(&loss, Sense::Minimize, &opt, &x0)?;
        (raw.best_x, raw.trace)
    };
    Ok(TrainResult { accuracy: loss.accuracy(&x)?, params: ParameterBinding::from_values(&circuit, &x)?, loss_trace })
}

fn qce_state(blueprint: &AnsatzBlueprint, x: &[f64], binding: &ParameterBinding) -> Result<StateVector> {
    let AnsatzConfig::Qce(cfg) = &blueprint.config else {
        return Err(Error::Config(format!("embedding fidelity needs a {} blueprint", Family::Qce)));
    };
    let mut cfg = cfg.clone();
    cfg.features = x.to_vec();
    let c = AnsatzConfig::Qce(cfg).build()?;
    let params = binding.resolve(&c)?;
    execute_unitary(&c, &params, StateVector::zero(c.num_qubits())?, None)
}

/// `|⟨ψ(x1)|ψ(x2)⟩|²` for the QCE embedding with the given variational binding.
pub fn embedding_fidelity(x1: &[f64], x2: &[f64], blueprint: &AnsatzBlueprint, binding: &ParameterBinding) -> Result<f64> {
    if x1.len() != x2.len() {
        return Err(Error::Invalid(format!("feature lengths differ: {} vs {}", x1.len(), x2.len())));
    }
    let a = qce_state(blueprint, x1, binding)?;
    let b = qce_state(blueprint, x2, binding)?;
    Ok(a.inner(&b)?.norm_sqr().min(1.0))
}
