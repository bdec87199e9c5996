//! VQE, QAOA and ADAPT-VQE run loops.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::objective::Objective;
use super::optimize::{minimize, OptimizerConfig, Sense, TraceEntry};
use crate::ansatz::{adapt_ansatz, qaoa_ansatz, AdaptConfig, AnsatzBlueprint, Mixer};
use crate::error::{Error, Result};
use crate::hamiltonian::{
    brute_force_maxcut, cut_value, exact_ground, maxcut_hamiltonian, Graph, Observable, PauliString, PauliSum,
};
use crate::sim::{bitstring, parse_bitstring, ParameterBinding, MAX_UNITARY_QUBITS};

/// Outcome of one optimization run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub best_params: ParameterBinding,
    /// `best_params` in parameter-table order.
    pub best_vector: Vec<f64>,
    pub best_value: f64,
    pub trace: Vec<TraceEntry>,
    pub evaluations: usize,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_ground: Option<f64>,
    /// `best_value − exact_ground` (minimization runs only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_gap: Option<f64>,
}

impl OptResult {
    /// Fill `exact_ground` / `exact_gap` from dense diagonalization when
    /// the observable is small enough.
    pub fn attach_exact(&mut self, obs: &Observable) -> Result<()> {
        if obs.sum.num_qubits() <= MAX_UNITARY_QUBITS {
            let (e0, _) = exact_ground(&obs.sum)?;
            let e0 = e0 + obs.offset;
            self.exact_ground = Some(e0);
            self.exact_gap = Some(self.best_value - e0);
        }
        Ok(())
    }
}

/// Default starting point from `config.init`.
pub fn initial_binding(obj: &Objective, config: &OptimizerConfig) -> Result<ParameterBinding> {
    ParameterBinding::from_values(obj.circuit(), &config.init.sample(obj.num_parameters(), config.seed))
}

/// Optimize `obj` from `start` in the objective's sense.
pub fn optimize(obj: &Objective, config: &OptimizerConfig, start: &ParameterBinding) -> Result<OptResult> {
    let x0 = start.resolve(obj.circuit())?;
    let obj = obj.clone().with_fd_fallback(config.finite_difference_fallback);
    let raw = minimize(&obj, obj.sense(), config, &x0)?;
    Ok(OptResult {
        best_params: ParameterBinding::from_values(obj.circuit(), &raw.best_x)?,
        best_vector: raw.best_x,
        best_value: raw.best_value,
        trace: raw.trace,
        evaluations: raw.evaluations,
        converged: raw.converged,
        exact_ground: None,
        exact_gap: None,
    })
}

/// Minimize `⟨H⟩ + offset` over `blueprint` from `|0…0⟩`.
pub fn vqe_run_observable(obs: &Observable, blueprint: &AnsatzBlueprint, config: &OptimizerConfig) -> Result<OptResult> {
    let obj = Objective::from_blueprint(blueprint, &obs.sum)?.with_offset(obs.offset);
    let start = initial_binding(&obj, config)?;
    let mut res = optimize(&obj, config, &start)?;
    res.attach_exact(obs)?;
    Ok(res)
}

pub fn vqe_run(h: &PauliSum, blueprint: &AnsatzBlueprint, config: &OptimizerConfig) -> Result<OptResult> {
    vqe_run_observable(&Observable { sum: h.clone(), offset: 0.0 }, blueprint, config)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaResult {
    #[serde(flatten)]
    pub opt: OptResult,
    pub shots: usize,
    /// Best-cut bitstring among the samples (`q_{n-1}` leftmost).
    pub best_bitstring: String,
    pub best_cut: f64,
    pub optimal_cut: f64,
    pub approximation_ratio: f64,
}

/// Maximize the expected cut `⟨C⟩` over a depth-`p` QAOA circuit, then draw
/// `shots` samples (seeded by `config.seed`) from the optimized state.
pub fn qaoa_run(g: &Graph, p: usize, config: &OptimizerConfig, shots: usize) -> Result<QaoaResult> {
    let m = maxcut_hamiltonian(g)?;
    let blueprint = qaoa_ansatz(&m.cost, Mixer::XMixer, p)?;
    qaoa_run_blueprint(g, &blueprint, config, shots)
}

/// [`qaoa_run`] with an explicit QAOA blueprint whose cost is `g`'s MaxCut operator.
pub fn qaoa_run_blueprint(
    g: &Graph,
    blueprint: &AnsatzBlueprint,
    config: &OptimizerConfig,
    shots: usize,
) -> Result<QaoaResult> {
    if shots == 0 {
        return Err(Error::Invalid("shots must be at least 1".into()));
    }
    let m = maxcut_hamiltonian(g)?;
    let (optimal_cut, _) = brute_force_maxcut(g)?;
    if optimal_cut.is_nan() || optimal_cut <= 0.0 {
        return Err(Error::Graph("maximum cut must be positive for an approximation ratio".into()));
    }
    let obj = Objective::from_blueprint(blueprint, &m.cost)?.with_offset(m.offset).with_sense(Sense::Maximize);
    let start = initial_binding(&obj, config)?;
    let opt = optimize(&obj, config, &start)?;
    let state = obj.state_at(&opt.best_vector)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best: Option<(f64, usize)> = None;
    for bits in state.sample(shots, &mut rng).keys() {
        let idx = parse_bitstring(bits)?;
        let cut = cut_value(g, idx);
        if best.is_none_or(|(c, i)| cut > c || (cut == c && idx < i)) {
            best = Some((cut, idx));
        }
    }
    let (best_cut, idx) = best.expect("at least one shot");
    Ok(QaoaResult {
        opt,
        shots,
        best_bitstring: bitstring(idx, g.num_vertices()),
        best_cut,
        optimal_cut,
        approximation_ratio: best_cut / optimal_cut,
    })
}

/// ADAPT-VQE stopping rules and inner optimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptOptions {
    pub epsilon: f64,
    pub max_depth: usize,
    /// Reference bitstring prepared before the chosen operators.
    pub reference: Option<String>,
    pub optimizer: OptimizerConfig,
}

impl AdaptOptions {
    pub fn from_config(cfg: &AdaptConfig, optimizer: OptimizerConfig) -> Self {
        Self { epsilon: cfg.epsilon, max_depth: cfg.max_depth, reference: cfg.reference.clone(), optimizer }
    }
}

/// Progress of an ADAPT-VQE run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdaptState {
    pub pool: Vec<PauliString>,
    /// Pool indices of the chosen generators, in circuit order.
    pub chosen: Vec<usize>,
    pub params: Vec<f64>,
    /// Energy before the first selection and after each re-optimization.
    pub energy_trace: Vec<f64>,
    /// Largest candidate gradient magnitude at each selection step.
    pub gradient_trace: Vec<f64>,
    pub epsilon: f64,
    reference: Option<String>,
}

impl AdaptState {
    pub fn chosen_generators(&self) -> Vec<&PauliString> {
        self.chosen.iter().map(|&i| &self.pool[i]).collect()
    }

    /// Circuit blueprint of the generators chosen so far.
    pub fn blueprint(&self) -> Result<AnsatzBlueprint> {
        let ops: Vec<PauliString> = self.chosen_generators().into_iter().cloned().collect();
        adapt_ansatz(num_qubits(&self.pool)?, &ops, self.reference.as_deref())
    }
}

fn num_qubits(pool: &[PauliString]) -> Result<usize> {
    let n = pool.first().ok_or_else(|| Error::Invalid("operator pool is empty".into()))?.num_qubits();
    if let Some(p) = pool.iter().find(|p| p.num_qubits() != n) {
        return Err(Error::QubitMismatch { expected: n, got: p.num_qubits() });
    }
    Ok(n)
}

fn adapt_objective(h: &PauliSum, ops: &[PauliString], reference: Option<&str>) -> Result<Objective> {
    Objective::from_blueprint(&adapt_ansatz(h.num_qubits(), ops, reference)?, h)
}

/// Grow an ansatz one pool generator at a time.
///
/// Each outer step appends the generator with the largest `|dE/dθ|` at
/// `θ = 0` (lowest index on ties), then re-optimizes all parameters from the
/// previous optimum extended by zero. Stops when the largest gradient is
/// below `epsilon` or `max_depth` generators are in place. The returned
/// trace is the final re-optimization's; `evaluations` covers the whole run.
pub fn adapt_vqe_run(h: &PauliSum, pool: &[PauliString], opts: &AdaptOptions) -> Result<(OptResult, AdaptState)> {
    let n = num_qubits(pool)?;
    if n != h.num_qubits() {
        return Err(Error::QubitMismatch { expected: h.num_qubits(), got: n });
    }
    if pool.iter().any(PauliString::is_identity) {
        return Err(Error::EmptyGenerator);
    }
    opts.optimizer.validate()?;
    let reference = opts.reference.as_deref();
    let mut state = AdaptState {
        pool: pool.to_vec(),
        chosen: Vec::new(),
        params: Vec::new(),
        energy_trace: Vec::new(),
        gradient_trace: Vec::new(),
        epsilon: opts.epsilon,
        reference: opts.reference.clone(),
    };
    let base = adapt_objective(h, &[], reference)?;
    let e0 = base.value_at(&[])?;
    state.energy_trace.push(e0);
    let mut evaluations = 1;
    let mut result = OptResult {
        best_params: ParameterBinding::new(),
        best_vector: Vec::new(),
        best_value: e0,
        trace: vec![TraceEntry { iteration: 0, value: e0, grad_norm: None, evaluations: 1 }],
        evaluations: 1,
        converged: true,
        exact_ground: None,
        exact_gap: None,
    };
    let mut ops: Vec<PauliString> = Vec::new();
    let mut converged = false;
    while state.chosen.len() < opts.max_depth {
        let mut x = state.params.clone();
        x.push(0.0);
        let k = x.len() - 1;
        let grads: Vec<f64> = pool
            .par_iter()
            .map(|cand| {
                let mut trial = ops.clone();
                trial.push(cand.clone());
                Ok(adapt_objective(h, &trial, reference)?.gradient_component(&x, k)?.abs())
            })
            .collect::<Result<_>>()?;
        evaluations += 2 * pool.len();
        let mut pick = 0;
        for (i, g) in grads.iter().enumerate() {
            if *g > grads[pick] {
                pick = i;
            }
        }
        state.gradient_trace.push(grads[pick]);
        if grads[pick] < opts.epsilon {
            converged = true;
            break;
        }
        ops.push(pool[pick].clone());
        state.chosen.push(pick);
        let obj = adapt_objective(h, &ops, reference)?;
        let start = ParameterBinding::from_values(obj.circuit(), &x)?;
        result = optimize(&obj, &opts.optimizer, &start)?;
        evaluations += result.evaluations;
        state.params = result.best_vector.clone();
        state.energy_trace.push(result.best_value);
    }
    result.evaluations = evaluations;
    result.converged = converged;
    result.attach_exact(&Observable { sum: h.clone(), offset: 0.0 })?;
    Ok((result, state))
}
