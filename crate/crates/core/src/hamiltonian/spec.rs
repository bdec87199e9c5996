use serde::{Deserialize, Serialize};

use super::{heisenberg_hamiltonian, maxcut_hamiltonian, tfim_hamiltonian, Boundary, Graph, PauliString, PauliSum};
use crate::error::{Error, Result};

/// Serializable description of an observable.
///
/// `{"model": "tfim", "n": 4, "g": 1.0, "boundary": "ring"}`,
/// `{"model": "maxcut", "graph": {...}}` or
/// `{"model": "terms", "n": 2, "terms": [[-1.0, "Z0 Z1"], [0.5, "X0"]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum HamiltonianSpec {
    Tfim {
        n: usize,
        g: f64,
        #[serde(default)]
        boundary: Boundary,
    },
    Heisenberg {
        n: usize,
        #[serde(default = "one")]
        j: f64,
        #[serde(default)]
        boundary: Boundary,
    },
    Maxcut {
        graph: Graph,
    },
    Terms {
        n: usize,
        terms: Vec<(f64, String)>,
    },
}

fn one() -> f64 {
    1.0
}

/// An observable plus a constant added to every expectation value.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    pub sum: PauliSum,
    pub offset: f64,
}

impl HamiltonianSpec {
    pub fn num_qubits(&self) -> usize {
        match self {
            HamiltonianSpec::Tfim { n, .. }
            | HamiltonianSpec::Heisenberg { n, .. }
            | HamiltonianSpec::Terms { n, .. } => *n,
            HamiltonianSpec::Maxcut { graph } => graph.num_vertices(),
        }
    }

    pub fn build(&self) -> Result<Observable> {
        match self {
            HamiltonianSpec::Tfim { n, g, boundary } => {
                Ok(Observable { sum: tfim_hamiltonian(*n, *g, *boundary)?, offset: 0.0 })
            }
            HamiltonianSpec::Heisenberg { n, j, boundary } => {
                Ok(Observable { sum: heisenberg_hamiltonian(*n, *j, *boundary)?, offset: 0.0 })
            }
            HamiltonianSpec::Maxcut { graph } => {
                let m = maxcut_hamiltonian(graph)?;
                Ok(Observable { sum: m.cost, offset: m.offset })
            }
            HamiltonianSpec::Terms { n, terms } => {
                let t = terms
                    .iter()
                    .map(|(c, s)| PauliString::parse(s, *n).map(|p| (*c, p)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Observable { sum: PauliSum::from_terms(*n, t)?, offset: 0.0 })
            }
        }
    }

    pub fn from_sum(sum: &PauliSum) -> Self {
        HamiltonianSpec::Terms {
            n: sum.num_qubits(),
            terms: sum.terms().iter().map(|(c, p)| (*c, p.to_string())).collect(),
        }
    }

    pub fn graph(&self) -> Result<&Graph> {
        match self {
            HamiltonianSpec::Maxcut { graph } => Ok(graph),
            _ => Err(Error::Config("a MaxCut graph is required".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_forms() {
        let t: HamiltonianSpec = serde_json::from_str(r#"{"model": "tfim", "n": 3, "g": 0.5}"#).unwrap();
        assert_eq!(t, HamiltonianSpec::Tfim { n: 3, g: 0.5, boundary: Boundary::Chain });
        assert_eq!(t.build().unwrap().sum.len(), 5);

        let m: HamiltonianSpec =
            serde_json::from_str(r#"{"model": "maxcut", "graph": {"vertices": 3, "edges": [[0,1,1],[1,2,1],[0,2,1]]}}"#)
                .unwrap();
        assert_eq!(m.build().unwrap().offset, 1.5);
        assert_eq!(m.num_qubits(), 3);

        let raw: HamiltonianSpec =
            serde_json::from_str(r#"{"model": "terms", "n": 2, "terms": [[-1, "Z0 Z1"], [0.5, "X0"]]}"#).unwrap();
        let obs = raw.build().unwrap();
        assert_eq!(HamiltonianSpec::from_sum(&obs.sum), raw);
        assert!(serde_json::from_str::<HamiltonianSpec>(r#"{"model": "tfim", "n": 3}"#).is_err());
    }
}
