use serde::Serialize;
use serde_json::{json, Value};

use super::Family;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum VqaClass {
    #[serde(rename = "VQE")]
    Vqe,
    #[serde(rename = "QAOA")]
    Qaoa,
    #[serde(rename = "QML")]
    Qml,
}

impl VqaClass {
    pub fn name(self) -> &'static str {
        match self {
            VqaClass::Vqe => "VQE",
            VqaClass::Qaoa => "QAOA",
            VqaClass::Qml => "QML",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub family: Family,
    pub title: &'static str,
    pub vqa_class: VqaClass,
    pub description: &'static str,
    pub intent: &'static str,
    pub applicability: &'static str,
    pub references: Vec<&'static str>,
    pub extensions: Vec<&'static str>,
    /// Accepted config keys with their meaning.
    pub config_schema: Value,
    /// A config that builds as-is.
    pub example_config: Value,
}

fn entry(family: Family) -> CatalogEntry {
    match family {
        Family::Ucc => CatalogEntry {
            family,
            title: "Unitary Coupled Cluster",
            vqa_class: VqaClass::Vqe,
            description: "It is the scalable scheme for generating the parameterized states required for variational methods. This heuristic ansatz is widely used in quantum chemistry problems",
            intent: "Prepare a correlated trial state by applying exponentials of anti-Hermitian excitation generators to a reference determinant.",
            applicability: "Ground-state energies of molecular Hamiltonians already mapped to qubits; deep circuits make it a poor fit for large systems on current hardware.",
            references: vec!["shen2017quantum"],
            extensions: vec!["UVCC", "UCCG", "UCCSD", "k-UpCCGSD", "OO-UCC", "Unitary Cluster-Jastrow", "LDCA"],
            config_schema: json!({
                "family": "UCC",
                "n": "qubit count",
                "groups": "list of generator groups; each entry is \"X0 Y1\" or [coefficient, \"X0 Y1\"]; one parameter per group",
                "reference": "optional reference bitstring, highest qubit leftmost"
            }),
            example_config: json!({"family": "UCC", "n": 2, "groups": [[[1.0, "X0 Y1"], [-1.0, "Y0 X1"]]], "reference": "01"}),
        },
        Family::Hea => CatalogEntry {
            family,
            title: "Hardware-Efficient Ansatz",
            vqa_class: VqaClass::Vqe,
            description: "It customizes the initialization state for QVE problems to specific quantum devices.",
            intent: "Alternate layers of native single-qubit rotations with a fixed entangling pattern that the target device runs cheaply.",
            applicability: "Small VQE instances where circuit depth matters more than physical structure; expect flat landscapes as width and depth grow.",
            references: vec!["kandala2017hardware"],
            extensions: vec!["QCC", "iQCC"],
            config_schema: json!({
                "family": "HEA",
                "n": "qubit count, at least 2",
                "layers": "rotation plus entangler repetitions (default 1)",
                "entangler": "cnot_ring | cz_ring | figure2 (figure2 needs n = 4; default cnot_ring)"
            }),
            example_config: json!({"family": "HEA", "n": 4, "layers": 2, "entangler": "cnot_ring"}),
        },
        Family::Adapt => CatalogEntry {
            family,
            title: "ADAPT-VQE",
            vqa_class: VqaClass::Vqe,
            description: "An adaptive ansatz aimed at incrementally constructing a parametric representation of quantum states, reducing circuit depth to achieve higher accuracy.",
            intent: "Grow the circuit one generator at a time, picking whichever pool element has the steepest energy gradient, then re-optimize everything.",
            applicability: "Problems where a compact problem-tailored circuit is worth many extra gradient measurements.",
            references: vec!["grimsley2019adaptive"],
            extensions: vec!["qubit-ADAPT-VQE", "QEB-ADAPT-VQE", "ClusterVQE"],
            config_schema: json!({
                "family": "ADAPT",
                "n": "qubit count",
                "pool": "\"y_local\" or an explicit list of Pauli strings",
                "operators": "generators chosen so far (empty to start)",
                "epsilon": "stop when every pool gradient magnitude is below this (default 1e-3)",
                "max_depth": "maximum number of chosen generators (default 12)",
                "reference": "optional reference bitstring"
            }),
            example_config: json!({"family": "ADAPT", "n": 4, "pool": "y_local"}),
        },
        Family::Spa => CatalogEntry {
            family,
            title: "Symmetry-Preserving Ansatz",
            vqa_class: VqaClass::Vqe,
            description: "An ansatz constructing a parameterized representation of quantum states, aimed at ensuring that the generated quantum states remain invariant under specific symmetry operations.",
            intent: "Build circuits from two-qubit exchange gates that never change the number of excited qubits.",
            applicability: "Fixed-particle-number problems where leaving the symmetry sector wastes the search.",
            references: vec!["barkoutsos2018quantum"],
            extensions: vec!["ESPA"],
            config_schema: json!({
                "family": "SPA",
                "n": "qubit count, at least 2",
                "layers": "brick columns pairs: odd bonds then even bonds (default 1)"
            }),
            example_config: json!({"family": "SPA", "n": 4, "layers": 2}),
        },
        Family::Qaoa => CatalogEntry {
            family,
            title: "Quantum Alternating Operator Ansatz",
            vqa_class: VqaClass::Qaoa,
            description: "It customizes an alternating structure in its ansatz to address Quantum Approximate Optimization Algorithm obtaining approximate solutions for combinatorial optimization problems.",
            intent: "Alternate a cost-phase unitary with a mixing unitary, one angle for each, starting from the uniform superposition.",
            applicability: "Combinatorial problems with a diagonal cost such as MaxCut; the XY ring mixer suits constraints that fix the number of ones.",
            references: vec!["farhi2014quantum"],
            extensions: vec!["GM-QAOA", "QAOA+"],
            config_schema: json!({
                "family": "QAOA",
                "n": "qubit count",
                "layers": "number of cost/mixer rounds p (default 1)",
                "mixer": "x_mixer | xy_ring (default x_mixer)",
                "cost": "Hamiltonian spec; supplied by the run manifest when omitted"
            }),
            example_config: json!({
                "family": "QAOA", "n": 3, "layers": 1,
                "cost": {"model": "maxcut", "graph": {"vertices": 3, "edges": [[0, 1, 1.0], [1, 2, 1.0], [0, 2, 1.0]]}}
            }),
        },
        Family::Hva => CatalogEntry {
            family,
            title: "Hamiltonian Variational Ansatz",
            vqa_class: VqaClass::Qaoa,
            description: "A circuit design approach based on hierarchical structure and adjustable parameters aimed at more effectively managing and controlling the complexity of quantum circuits to tackle complex quantum computing problems.",
            intent: "Trotterize evolution under commuting pieces of the target Hamiltonian, giving each piece its own angle per layer.",
            applicability: "Lattice models such as the transverse-field Ising and Heisenberg chains, where the Hamiltonian splits into a few commuting groups.",
            references: vec!["wecker2015progress"],
            extensions: vec!["Symmetry Breaking HVA", "VMFHA", "QOCA", "Fourier-transform HVA"],
            config_schema: json!({
                "family": "HVA",
                "n": "qubit count",
                "layers": "Trotter layers p (default 1)",
                "hamiltonian": "Hamiltonian spec; supplied by the run manifest when omitted",
                "groups": "optional term-index partition into commuting groups",
                "init": "plus | zero | neel (default plus)"
            }),
            example_config: json!({
                "family": "HVA", "n": 4, "layers": 1,
                "hamiltonian": {"model": "tfim", "n": 4, "g": 1.0, "boundary": "ring"}
            }),
        },
        Family::Qce => CatalogEntry {
            family,
            title: "Quantum Circuit Embedding",
            vqa_class: VqaClass::Qml,
            description: "An ansatz for encoding conventional data into quantum states.",
            intent: "Load a classical feature vector through rotation angles, then apply a trainable entangling layer.",
            applicability: "Feature maps for kernel methods and variational classifiers on low-dimensional data.",
            references: vec!["lloyd2020quantum"],
            extensions: vec!["FQCE", "QEK"],
            config_schema: json!({
                "family": "QCE",
                "n": "qubit count",
                "features": "real feature vector, at most n entries",
                "mode": "general | figure (figure needs n = 4 and at most 3 features)",
                "layers": "trainable layer repetitions (default 1)"
            }),
            example_config: json!({"family": "QCE", "n": 4, "features": [0.1, 0.2, 0.3], "mode": "figure"}),
        },
        Family::Mera => CatalogEntry {
            family,
            title: "Multiscale Entanglement Renormalization Ansatz",
            vqa_class: VqaClass::Qml,
            description: "An ansatz for quantum many-body states on a D-dimensional lattice precisely and efficiently calculate the local observables' expectation",
            intent: "Entangle the central wires first and widen the active region by a factor of two per super-layer.",
            applicability: "Critical and scale-invariant one-dimensional states; also the skeleton that a QCNN runs in reverse.",
            references: vec!["vidal2008class"],
            extensions: vec![],
            config_schema: json!({"family": "MERA", "n": "2, 4, 8 or 16"}),
            example_config: json!({"family": "MERA", "n": 8}),
        },
        Family::Qnn => CatalogEntry {
            family,
            title: "Quanvolutional Neural Network",
            vqa_class: VqaClass::Qml,
            description: "A hybrid classical-quantum algorithm leveraging some non-linear quantum circuit transformations for CNN.",
            intent: "Slide a small random quantum circuit over image patches and use its Z expectations as new feature channels.",
            applicability: "Feature extraction in front of a classical network for small images.",
            references: vec!["henderson2020quanvolutional"],
            extensions: vec![],
            config_schema: json!({
                "family": "QNN",
                "n": "must be 4 (one qubit per pixel of a 2×2 patch)",
                "layers": "random rotation and CNOT layers (default 1)",
                "seed": "seed for the random filter structure (default 0)"
            }),
            example_config: json!({"family": "QNN", "n": 4, "layers": 2, "seed": 7}),
        },
        Family::Qcnn => CatalogEntry {
            family,
            title: "Quantum Convolutional Neural Network",
            vqa_class: VqaClass::Qml,
            description: "A quantum convolutional neural network inspired by an inversed MERA circuit to enable efficient machine learning on quantum devices.",
            intent: "Alternate translation-invariant two-qubit convolutions with pooling that halves the active register, then read out one qubit.",
            applicability: "Binary classification of quantum states, for example phase recognition.",
            references: vec!["cong2019quantum"],
            extensions: vec![],
            config_schema: json!({
                "family": "QCNN",
                "n": "4, 8 or 16",
                "measured": "true: mid-circuit measurement with conditioned pooling gates (default); false: controlled gates"
            }),
            example_config: json!({"family": "QCNN", "n": 8}),
        },
    }
}

/// All ten families, grouped VQE, QAOA, QML.
pub fn catalog_list() -> Vec<CatalogEntry> {
    Family::ALL.into_iter().map(entry).collect()
}

/// Case-insensitive lookup by family name.
pub fn catalog_show(family: &str) -> Result<CatalogEntry> {
    let f: Family = family.parse()?;
    Ok(entry(f))
}

/// Valid family names closest to `name`, best first.
pub fn suggestions(name: &str) -> Vec<String> {
    let lower = name.to_ascii_lowercase();
    let mut scored: Vec<(usize, String)> = Family::ALL
        .iter()
        .map(|f| (strsim::levenshtein(&lower, &f.name().to_ascii_lowercase()), f.name().to_string()))
        .collect();
    scored.sort();
    scored.into_iter().filter(|(d, _)| *d <= 2).map(|(_, n)| n).collect()
}
