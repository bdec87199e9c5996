//! Run manifests: parsing, validation and the normalized echo stored with results.

use std::path::{Path, PathBuf};

use ansatz_forge::ansatz::AnsatzConfig;
use ansatz_forge::hamiltonian::{HamiltonianSpec, PauliSum};
use ansatz_forge::variational::OptimizerConfig;
use ansatz_forge::Error;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub const DEFAULT_SHOTS: usize = 1024;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    ansatz: AnsatzConfig,
    hamiltonian: Value,
    #[serde(default)]
    optimizer: OptimizerConfig,
    seed: u64,
    #[serde(default)]
    shots: Option<usize>,
    #[serde(default)]
    output_dir: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSource {
    file: PathBuf,
    /// Qubit count for Pauli-sum text; inferred from the highest index when absent.
    #[serde(default)]
    n: Option<usize>,
}

/// A validated manifest. Serializing it gives a self-contained manifest
/// (file sources inlined, defaults spelled out) that reproduces the run.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub ansatz: AnsatzConfig,
    pub hamiltonian: HamiltonianSpec,
    pub optimizer: OptimizerConfig,
    pub seed: u64,
    pub shots: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

/// Deserialize `value`, reporting failures with their field path under `prefix`.
pub fn from_value<T: DeserializeOwned>(value: Value, prefix: &str) -> CliResult<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = match (prefix.is_empty(), inner.as_str()) {
            (true, ".") => "manifest".to_string(),
            (true, _) => inner,
            (false, ".") => prefix.to_string(),
            (false, _) => format!("{prefix}.{inner}"),
        };
        CliError::usage(format!("{path}: {}", e.inner()))
    })
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn parse_json(text: &str, what: &str) -> CliResult<Value> {
    serde_json::from_str(text).map_err(|e| CliError::usage(format!("{what}: {e}")))
}

impl Manifest {
    pub fn load(path: &Path, seed_override: Option<u64>) -> CliResult<Self> {
        let text = read_text(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base, seed_override)
    }

    /// `base` resolves relative hamiltonian files and output directories.
    pub fn parse(text: &str, base: &Path, seed_override: Option<u64>) -> CliResult<Self> {
        let mut value = parse_json(text, "manifest")?;
        let Value::Object(map) = &mut value else {
            return Err(CliError::usage("manifest: expected a JSON object"));
        };
        if let Some(seed) = seed_override {
            map.insert("seed".into(), seed.into());
        }
        let raw: RawManifest = from_value(value, "")?;
        let hamiltonian = resolve_hamiltonian(raw.hamiltonian, base)?;
        let mut ansatz = raw.ansatz;
        let n = hamiltonian.num_qubits();
        match &mut ansatz {
            AnsatzConfig::Qaoa(c) if c.cost.is_none() => c.cost = Some(hamiltonian.clone()),
            AnsatzConfig::Hva(c) if c.hamiltonian.is_none() => c.hamiltonian = Some(hamiltonian.clone()),
            _ => {}
        }
        if ansatz.num_qubits() != n {
            return Err(CliError::usage(format!(
                "ansatz.n: {} qubits but the hamiltonian acts on {n}",
                ansatz.num_qubits()
            )));
        }
        let mut optimizer = raw.optimizer;
        optimizer.seed = raw.seed;
        optimizer.validate().map_err(|e| match e {
            Error::Config(msg) => CliError::usage(msg),
            other => other.into(),
        })?;
        let shots = raw.shots.unwrap_or(DEFAULT_SHOTS);
        if shots == 0 {
            return Err(CliError::usage("shots: must be at least 1"));
        }
        Ok(Self {
            ansatz,
            hamiltonian,
            optimizer,
            seed: raw.seed,
            shots,
            output_dir: raw.output_dir.map(|d| base.join(d)),
        })
    }
}

/// `{"model": ...}` inline or generated, or `{"file": ..., "n": ...}`.
fn resolve_hamiltonian(value: Value, base: &Path) -> CliResult<HamiltonianSpec> {
    let Value::Object(map) = &value else {
        return Err(CliError::usage("hamiltonian: expected a JSON object"));
    };
    match (map.contains_key("model"), map.contains_key("file")) {
        (true, false) => from_value(value, "hamiltonian"),
        (false, true) => {
            let src: FileSource = from_value(value, "hamiltonian")?;
            load_hamiltonian_file(&base.join(&src.file), src.n)
        }
        _ => Err(CliError::usage("hamiltonian: give exactly one source, either `model` or `file`")),
    }
}

/// A `.json` file holds a hamiltonian spec; anything else is Pauli-sum text.
pub fn load_hamiltonian_file(path: &Path, n: Option<usize>) -> CliResult<HamiltonianSpec> {
    let text = read_text(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        return from_value(parse_json(&text, &path.display().to_string())?, "hamiltonian");
    }
    let sum = PauliSum::parse(&text, n).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    Ok(HamiltonianSpec::from_sum(&sum))
}
