use std::path::{Path, PathBuf};
use std::time::Instant;

use ansatz_forge::ansatz::{AnsatzBlueprint, AnsatzConfig};
use ansatz_forge::variational::{adapt_vqe_run, qaoa_run_blueprint, vqe_run_observable, AdaptOptions, OptResult};
use ansatz_forge::Error;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::manifest::Manifest;
use crate::output::{fmt_f64, to_json_pretty, trace_csv, write_atomic};

pub const RESULT_FILE: &str = "result.json";
pub const TRACE_FILE: &str = "trace.csv";

#[derive(Debug, Serialize)]
struct Sampling {
    shots: usize,
    best_bitstring: String,
    best_cut: f64,
    optimal_cut: f64,
    approximation_ratio: f64,
}

#[derive(Debug, Serialize)]
struct AdaptSummary {
    operators: Vec<String>,
    energy_trace: Vec<f64>,
    gradient_trace: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct ResultBundle<'a> {
    tool: &'static str,
    version: &'static str,
    manifest: &'a Manifest,
    family: String,
    num_qubits: usize,
    num_parameters: usize,
    #[serde(flatten)]
    result: OptResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    sampling: Option<Sampling>,
    #[serde(skip_serializing_if = "Option::is_none")]
    adapt: Option<AdaptSummary>,
    wall_time_seconds: f64,
}

pub struct RunArgs<'a> {
    pub manifest: &'a Path,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub json: bool,
}

pub fn cmd_run(args: RunArgs) -> CliResult<()> {
    let manifest = Manifest::load(args.manifest, args.seed)?;
    let dir = args.output_dir.or_else(|| manifest.output_dir.clone()).unwrap_or_else(|| PathBuf::from("."));
    let started = Instant::now();

    let outcome = execute(&manifest);
    let (result, sampling, adapt, num_parameters) = match outcome {
        Ok(v) => v,
        Err(CliError::Core(Error::NonFinite { trace })) => {
            let path = write_atomic(&dir, TRACE_FILE, &trace_csv(&trace)?)?;
            eprintln!("partial trace written to {}", path.display());
            return Err(Error::NonFinite { trace }.into());
        }
        Err(e) => return Err(e),
    };

    let bundle = ResultBundle {
        tool: "ansatz-forge",
        version: env!("CARGO_PKG_VERSION"),
        manifest: &manifest,
        family: manifest.ansatz.family().name().to_string(),
        num_qubits: manifest.ansatz.num_qubits(),
        num_parameters,
        result,
        sampling,
        adapt,
        wall_time_seconds: started.elapsed().as_secs_f64(),
    };
    write_atomic(&dir, TRACE_FILE, &trace_csv(&bundle.result.trace)?)?;
    let text = to_json_pretty(&bundle);
    write_atomic(&dir, RESULT_FILE, format!("{text}\n").as_bytes())?;

    if args.json {
        println!("{text}");
    } else {
        let r = &bundle.result;
        println!(
            "family={} n={} best_value={} exact_gap={} evaluations={} converged={}",
            bundle.family,
            bundle.num_qubits,
            fmt_f64(r.best_value),
            r.exact_gap.map(fmt_f64).unwrap_or_else(|| "n/a".into()),
            r.evaluations,
            r.converged
        );
    }
    Ok(())
}

type Outcome = (OptResult, Option<Sampling>, Option<AdaptSummary>, usize);

fn execute(m: &Manifest) -> CliResult<Outcome> {
    let obs = m.hamiltonian.build()?;
    match &m.ansatz {
        AnsatzConfig::Qaoa(_) => {
            let graph = m
                .hamiltonian
                .graph()
                .map_err(|_| CliError::usage("hamiltonian: QAOA runs need model `maxcut`"))?;
            let bp = AnsatzBlueprint::new(m.ansatz.clone())?;
            let r = qaoa_run_blueprint(graph, &bp, &m.optimizer, m.shots)?;
            let sampling = Sampling {
                shots: r.shots,
                best_bitstring: r.best_bitstring,
                best_cut: r.best_cut,
                optimal_cut: r.optimal_cut,
                approximation_ratio: r.approximation_ratio,
            };
            Ok((r.opt, Some(sampling), None, bp.num_parameters))
        }
        AnsatzConfig::Adapt(cfg) => {
            if obs.offset != 0.0 {
                return Err(CliError::usage("hamiltonian: ADAPT runs need an observable without constant offset"));
            }
            let pool = cfg.pool.resolve(cfg.n)?;
            let opts = AdaptOptions::from_config(cfg, m.optimizer.clone());
            let (r, state) = adapt_vqe_run(&obs.sum, &pool, &opts)?;
            let summary = AdaptSummary {
                operators: state.chosen_generators().iter().map(|p| p.to_string()).collect(),
                energy_trace: state.energy_trace,
                gradient_trace: state.gradient_trace,
            };
            let k = state.chosen.len();
            Ok((r, None, Some(summary), k))
        }
        config => {
            let bp = AnsatzBlueprint::new(config.clone())?;
            let r = vqe_run_observable(&obs, &bp, &m.optimizer)?;
            Ok((r, None, None, bp.num_parameters))
        }
    }
}
