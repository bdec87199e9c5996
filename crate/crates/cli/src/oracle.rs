use std::path::Path;

use ansatz_forge::hamiltonian::{brute_force_maxcut, exact_ground, Graph, HamiltonianSpec};
use ansatz_forge::sim::bitstring;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::manifest::{from_value, load_hamiltonian_file, parse_json, read_text};
use crate::output::{fmt_f64, to_json_pretty};

pub fn cmd_ground(spec: &HamiltonianSpec, json: bool) -> CliResult<()> {
    let obs = spec.build()?;
    let (e0, state) = exact_ground(&obs.sum)?;
    let energy = e0 + obs.offset;
    // Largest-weight basis state; ties keep the lowest index.
    let (top, p) = state
        .probabilities()
        .into_iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, p)| if p > best.1 { (i, p) } else { best });
    let top = bitstring(top, obs.sum.num_qubits());
    if json {
        let doc = json!({
            "num_qubits": obs.sum.num_qubits(),
            "ground_energy": energy,
            "offset": obs.offset,
            "dominant_basis_state": top,
            "dominant_probability": p,
        });
        println!("{}", to_json_pretty(&doc));
    } else {
        println!("n={} ground_energy={} dominant_basis_state={top} probability={}", obs.sum.num_qubits(), fmt_f64(energy), fmt_f64(p));
    }
    Ok(())
}

pub fn load_spec(spec: Option<&Path>, hamiltonian_file: Option<&Path>, n: Option<usize>) -> CliResult<HamiltonianSpec> {
    match (spec, hamiltonian_file) {
        (Some(p), None) => {
            let text = read_text(p)?;
            let v = parse_json(&text, &p.display().to_string())?;
            from_value(v, "hamiltonian")
        }
        (None, Some(p)) => load_hamiltonian_file(p, n),
        _ => Err(CliError::usage("give exactly one of --spec or --hamiltonian-file")),
    }
}

pub fn cmd_maxcut(graph_path: &Path, json: bool) -> CliResult<()> {
    let text = read_text(graph_path)?;
    let g = Graph::from_json(&text).map_err(|e| CliError::usage(format!("{}: {e}", graph_path.display())))?;
    let (cut, bits) = brute_force_maxcut(&g)?;
    if json {
        println!("{}", to_json_pretty(&json!({"num_vertices": g.num_vertices(), "max_cut": cut, "bitstring": bits})));
    } else {
        println!("n={} max_cut={} bitstring={bits}", g.num_vertices(), fmt_f64(cut));
    }
    Ok(())
}
