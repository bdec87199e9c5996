use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::bitstring;

/// Largest vertex count accepted by [`brute_force_maxcut`].
pub const MAX_BRUTE_FORCE_VERTICES: usize = 20;

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: usize,
    edges: Vec<(usize, usize, f64)>,
}

/// Undirected weighted graph; edges are stored with `u < v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(g: GraphJson) -> Result<Self> {
        Graph::new(g.vertices, g.edges)
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson { vertices: g.num_vertices, edges: g.edges }
    }
}

impl Graph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::Graph(format!("edge ({u}, {v}) outside {num_vertices} vertices")));
            }
            if u == v {
                return Err(Error::Graph(format!("self-loop on vertex {u}")));
            }
            if !w.is_finite() {
                return Err(Error::Graph(format!("non-finite weight on edge ({u}, {v})")));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::Graph(format!("duplicate edge ({}, {})", key.0, key.1)));
            }
            out.push((key.0, key.1, w));
        }
        Ok(Self { num_vertices, edges: out })
    }

    /// Unit-weight cycle `0-1-…-(n-1)-0`.
    pub fn cycle(n: usize) -> Self {
        let edges = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
        Self::new(n, edges).expect("cycle is a simple graph")
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Graph(e.to_string()))
    }
}

/// Total weight of edges whose endpoints differ in `assignment` (bit k = side of vertex k).
pub fn cut_value(g: &Graph, assignment: usize) -> f64 {
    g.edges
        .iter()
        .filter(|(u, v, _)| (assignment >> u & 1) != (assignment >> v & 1))
        .map(|(_, _, w)| w)
        .sum()
}

/// Exhaustive maximum cut. Ties keep the smallest assignment index.
pub fn brute_force_maxcut(g: &Graph) -> Result<(f64, String)> {
    let n = g.num_vertices;
    if n == 0 || n > MAX_BRUTE_FORCE_VERTICES {
        return Err(Error::Size { requested: n, max: MAX_BRUTE_FORCE_VERTICES });
    }
    let mut best = (f64::NEG_INFINITY, 0usize);
    for b in 0..1usize << n {
        let c = cut_value(g, b);
        if c > best.0 {
            best = (c, b);
        }
    }
    Ok((best.0, bitstring(best.1, n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_maxcut(&Graph::cycle(3)).unwrap().0, 2.0);
        let edge = Graph::new(2, vec![(0, 1, 1.0)]).unwrap();
        assert_eq!(brute_force_maxcut(&edge).unwrap(), (1.0, "01".to_string()));
        let (c, s) = brute_force_maxcut(&Graph::cycle(4)).unwrap();
        assert_eq!(c, 4.0);
        assert!(s == "0101" || s == "1010");
        assert!(brute_force_maxcut(&Graph::new(21, vec![(0, 1, 1.0)]).unwrap()).is_err());
    }

    #[test]
    fn validation_and_json() {
        assert!(Graph::new(3, vec![(1, 1, 1.0)]).is_err());
        assert!(Graph::new(3, vec![(0, 1, 1.0), (1, 0, 2.0)]).is_err());
        assert!(Graph::new(3, vec![(0, 3, 1.0)]).is_err());
        let g = Graph::from_json(r#"{"vertices": 3, "edges": [[2, 0, 1.5], [0, 1, 1]]}"#).unwrap();
        assert_eq!(g.edges(), &[(0, 2, 1.5), (0, 1, 1.0)]);
        let back: Graph = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
        assert!(Graph::from_json(r#"{"vertices": 2, "edges": [[0, 0, 1]]}"#).is_err());
    }
}
