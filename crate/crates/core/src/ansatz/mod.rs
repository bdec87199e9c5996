//! Ansatz families: serializable configs, blueprints and circuit builders.

mod builders;
mod catalog;

pub use builders::{
    adapt_ansatz, hea_ansatz, hva_ansatz, mera_ansatz, mera_widths, pauli_exponential, qaoa_ansatz, qcnn_ansatz,
    qcnn_readout, qce_embedding, qnn_filter, spa_a_gate, spa_ansatz, tfim_hva, ucc_ansatz, y_local_pool,
};
pub use catalog::{catalog_list, catalog_show, suggestions, CatalogEntry, VqaClass};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{Boundary, HamiltonianSpec, PauliString};
use crate::sim::Circuit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "UCC")]
    Ucc,
    #[serde(rename = "HEA")]
    Hea,
    #[serde(rename = "ADAPT")]
    Adapt,
    #[serde(rename = "SPA")]
    Spa,
    #[serde(rename = "QAOA")]
    Qaoa,
    #[serde(rename = "HVA")]
    Hva,
    #[serde(rename = "QCE")]
    Qce,
    #[serde(rename = "MERA")]
    Mera,
    #[serde(rename = "QNN")]
    Qnn,
    #[serde(rename = "QCNN")]
    Qcnn,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Ucc,
        Family::Hea,
        Family::Adapt,
        Family::Spa,
        Family::Qaoa,
        Family::Hva,
        Family::Qce,
        Family::Mera,
        Family::Qnn,
        Family::Qcnn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ucc => "UCC",
            Family::Hea => "HEA",
            Family::Adapt => "ADAPT",
            Family::Spa => "SPA",
            Family::Qaoa => "QAOA",
            Family::Hva => "HVA",
            Family::Qce => "QCE",
            Family::Mera => "MERA",
            Family::Qnn => "QNN",
            Family::Qcnn => "QCNN",
        }
    }

    pub fn names() -> Vec<String> {
        Self::ALL.iter().map(|f| f.name().to_string()).collect()
    }

    /// Parameter name for slot `index` of this family.
    pub fn param_name(self, index: usize) -> String {
        format!("{}_{index}", self.name())
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim();
        let key = key.strip_suffix("-VQE").or_else(|| key.strip_suffix(" VQE")).unwrap_or(key);
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(key))
            .ok_or_else(|| Error::UnknownFamily { name: s.to_string(), valid: Family::names() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Entangler {
    #[default]
    CnotRing,
    CzRing,
    Figure2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Mixer {
    #[default]
    XMixer,
    XyRing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum HvaInit {
    #[default]
    Plus,
    Zero,
    Neel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum QceMode {
    #[default]
    General,
    Figure,
}

/// A generator string, optionally weighted: `"X0 Y1"` or `[0.5, "X0 Y1"]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorTerm {
    Plain(String),
    Weighted(f64, String),
}

impl GeneratorTerm {
    pub fn resolve(&self, n: usize) -> Result<(f64, PauliString)> {
        match self {
            GeneratorTerm::Plain(s) => Ok((1.0, PauliString::parse(s, n)?)),
            GeneratorTerm::Weighted(c, s) => Ok((*c, PauliString::parse(s, n)?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoolName {
    /// Every Y-containing string on one site or on a pair of sites.
    YLocal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PoolSpec {
    Named(PoolName),
    Explicit(Vec<String>),
}

impl Default for PoolSpec {
    fn default() -> Self {
        PoolSpec::Named(PoolName::YLocal)
    }
}

impl PoolSpec {
    pub fn resolve(&self, n: usize) -> Result<Vec<PauliString>> {
        match self {
            PoolSpec::Named(PoolName::YLocal) => Ok(y_local_pool(n)),
            PoolSpec::Explicit(list) => list.iter().map(|s| PauliString::parse(s, n)).collect(),
        }
    }
}

fn default_layers() -> usize {
    1
}

fn default_epsilon() -> f64 {
    1e-3
}

fn default_depth() -> usize {
    12
}

fn yes() -> bool {
    true
}

fn default_qnn_qubits() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UccConfig {
    pub n: usize,
    /// Each group shares one parameter.
    pub groups: Vec<Vec<GeneratorTerm>>,
    /// Reference basis state, `q_{n-1}` leftmost.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeaConfig {
    pub n: usize,
    #[serde(default = "default_layers")]
    pub layers: usize,
    #[serde(default)]
    pub entangler: Entangler,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdaptConfig {
    pub n: usize,
    #[serde(default)]
    pub pool: PoolSpec,
    /// Operators chosen so far, in circuit order.
    #[serde(default)]
    pub operators: Vec<String>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_depth")]
    pub max_depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaConfig {
    pub n: usize,
    #[serde(default = "default_layers")]
    pub layers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QaoaConfig {
    pub n: usize,
    #[serde(default = "default_layers")]
    pub layers: usize,
    #[serde(default)]
    pub mixer: Mixer,
    /// Cost observable; a run manifest supplies it when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<HamiltonianSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HvaConfig {
    pub n: usize,
    #[serde(default = "default_layers")]
    pub layers: usize,
    /// Model Hamiltonian; a run manifest supplies it when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<HamiltonianSpec>,
    /// Term-index partition into commuting groups.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub init: HvaInit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QceConfig {
    pub n: usize,
    #[serde(default)]
    pub features: Vec<f64>,
    #[serde(default)]
    pub mode: QceMode,
    #[serde(default = "default_layers")]
    pub layers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeraConfig {
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QnnConfig {
    #[serde(default = "default_qnn_qubits")]
    pub n: usize,
    #[serde(default = "default_layers")]
    pub layers: usize,
    /// Seed for the random filter structure.
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QcnnConfig {
    pub n: usize,
    /// Mid-circuit measurement with classically conditioned pooling gates
    /// (default); `false` gives the coherent controlled form.
    #[serde(default = "yes")]
    pub measured: bool,
}

/// Structural configuration of one ansatz, tagged by `family`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum AnsatzConfig {
    #[serde(rename = "UCC", alias = "ucc")]
    Ucc(UccConfig),
    #[serde(rename = "HEA", alias = "hea")]
    Hea(HeaConfig),
    #[serde(rename = "ADAPT", alias = "adapt")]
    Adapt(AdaptConfig),
    #[serde(rename = "SPA", alias = "spa")]
    Spa(SpaConfig),
    #[serde(rename = "QAOA", alias = "qaoa")]
    Qaoa(QaoaConfig),
    #[serde(rename = "HVA", alias = "hva")]
    Hva(HvaConfig),
    #[serde(rename = "QCE", alias = "qce")]
    Qce(QceConfig),
    #[serde(rename = "MERA", alias = "mera")]
    Mera(MeraConfig),
    #[serde(rename = "QNN", alias = "qnn")]
    Qnn(QnnConfig),
    #[serde(rename = "QCNN", alias = "qcnn")]
    Qcnn(QcnnConfig),
}

impl AnsatzConfig {
    pub fn family(&self) -> Family {
        match self {
            AnsatzConfig::Ucc(_) => Family::Ucc,
            AnsatzConfig::Hea(_) => Family::Hea,
            AnsatzConfig::Adapt(_) => Family::Adapt,
            AnsatzConfig::Spa(_) => Family::Spa,
            AnsatzConfig::Qaoa(_) => Family::Qaoa,
            AnsatzConfig::Hva(_) => Family::Hva,
            AnsatzConfig::Qce(_) => Family::Qce,
            AnsatzConfig::Mera(_) => Family::Mera,
            AnsatzConfig::Qnn(_) => Family::Qnn,
            AnsatzConfig::Qcnn(_) => Family::Qcnn,
        }
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            AnsatzConfig::Ucc(c) => c.n,
            AnsatzConfig::Hea(c) => c.n,
            AnsatzConfig::Adapt(c) => c.n,
            AnsatzConfig::Spa(c) => c.n,
            AnsatzConfig::Qaoa(c) => c.n,
            AnsatzConfig::Hva(c) => c.n,
            AnsatzConfig::Qce(c) => c.n,
            AnsatzConfig::Mera(c) => c.n,
            AnsatzConfig::Qnn(c) => c.n,
            AnsatzConfig::Qcnn(c) => c.n,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Construct the circuit.
    pub fn build(&self) -> Result<Circuit> {
        builders::build(self)
    }
}

/// A validated ansatz description: building it yields a circuit with
/// exactly `num_parameters` parameters named `<FAMILY>_<index>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzBlueprint {
    pub family: Family,
    pub num_qubits: usize,
    pub num_parameters: usize,
    pub config: AnsatzConfig,
}

impl AnsatzBlueprint {
    pub fn new(config: AnsatzConfig) -> Result<Self> {
        let circuit = config.build()?;
        Ok(Self {
            family: config.family(),
            num_qubits: circuit.num_qubits(),
            num_parameters: circuit.num_parameters(),
            config,
        })
    }

    pub fn build(&self) -> Result<Circuit> {
        self.config.build()
    }

    pub fn parameter_names(&self) -> Vec<String> {
        (0..self.num_parameters).map(|i| self.family.param_name(i)).collect()
    }
}

/// Bonds used by the ring-shaped entanglers: `n` bonds for `n ≥ 3`, one for `n = 2`.
pub(crate) fn ring_bonds(n: usize) -> Vec<(usize, usize)> {
    crate::hamiltonian::bonds(n, Boundary::Ring)
}
