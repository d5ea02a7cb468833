//! Finite directed graphs for path algebras.
//!
//! A [`GraphSpec`] is a finite directed multigraph with named vertices and
//! edges. Frame constructions require the graph to be finite and sink-free
//! (every vertex emits at least one edge); that is exactly when the unital
//! Leavitt path algebra is strongly ℤ-graded.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub name: String,
    pub src: String,
    pub dst: String,
}

/// Raw JSON shape of a graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

/// Validated graph with index lookups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSpec {
    vertices: Vec<String>,
    edges: Vec<EdgeSpec>,
    /// Edge endpoints as vertex indices, parallel to `edges`.
    ends: Vec<(usize, usize)>,
    /// Out-edge indices per vertex, in edge-list order.
    out_edges: Vec<Vec<usize>>,
}

impl GraphSpec {
    pub fn new(vertices: Vec<String>, edges: Vec<EdgeSpec>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::BadInput("graph needs at least one vertex".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in vertices.iter().chain(edges.iter().map(|e| &e.name)) {
            if name.is_empty() {
                return Err(Error::BadInput("empty vertex/edge name".into()));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::BadInput(format!("duplicate name: {}", name)));
            }
        }
        let vidx = |n: &str| -> Result<usize> {
            vertices
                .iter()
                .position(|v| v == n)
                .ok_or_else(|| Error::UnknownSymbol(format!("vertex {}", n)))
        };
        let mut ends = Vec::with_capacity(edges.len());
        let mut out_edges = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            let s = vidx(&e.src)?;
            let d = vidx(&e.dst)?;
            ends.push((s, d));
            out_edges[s].push(i);
        }
        Ok(GraphSpec {
            vertices,
            edges,
            ends,
            out_edges,
        })
    }

    pub fn from_json(j: GraphJson) -> Result<Self> {
        GraphSpec::new(j.vertices, j.edges)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
        }
    }

    /// The rose with `k` petals: one vertex `v`, loops `e1..ek`. `R_k`'s
    /// Leavitt path algebra is the Leavitt algebra L(1,k).
    pub fn rose(k: usize) -> Result<Self> {
        let edges = (1..=k)
            .map(|i| EdgeSpec {
                name: format!("e{}", i),
                src: "v".to_string(),
                dst: "v".to_string(),
            })
            .collect();
        GraphSpec::new(vec!["v".to_string()], edges)
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn vertex_name(&self, i: usize) -> &str {
        &self.vertices[i]
    }
    pub fn edge_name(&self, i: usize) -> &str {
        &self.edges[i].name
    }
    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownSymbol(format!("vertex {}", name)))
    }

    pub fn edge_index(&self, name: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.name == name)
            .ok_or_else(|| Error::UnknownSymbol(format!("edge {}", name)))
    }

    /// Source vertex index of edge `e`.
    pub fn src(&self, e: usize) -> usize {
        self.ends[e].0
    }
    /// Range (target) vertex index of edge `e`.
    pub fn dst(&self, e: usize) -> usize {
        self.ends[e].1
    }

    /// Out-edges of a vertex, in edge-list order.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    /// The first out-edge in edge-list order (used to pick junction
    /// monomials for the normal form); `None` at a sink.
    pub fn first_out_edge(&self, v: usize) -> Option<usize> {
        self.out_edges[v].first().copied()
    }

    /// Vertices with no outgoing edge.
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.out_edges[v].is_empty())
            .collect()
    }

    /// Error unless the graph is sink-free.
    pub fn require_sink_free(&self) -> Result<()> {
        let sinks = self.sinks();
        if sinks.is_empty() {
            Ok(())
        } else {
            Err(Error::SinkPresent(format!(
                "vertices without outgoing edges: {}",
                sinks
                    .iter()
                    .map(|&v| self.vertices[v].clone())
                    .collect::<Vec<_>>()
                    .join(", ")
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rose_two_petals() {
        let g = GraphSpec::rose(2).unwrap();
        assert_eq!(g.n_vertices(), 1);
        assert_eq!(g.n_edges(), 2);
        assert_eq!(g.out_edges(0), &[0, 1]);
        assert_eq!(g.first_out_edge(0), Some(0));
        g.require_sink_free().unwrap();
    }

    #[test]
    fn sink_detected() {
        let g = GraphSpec::new(
            vec!["a".into(), "b".into()],
            vec![EdgeSpec {
                name: "e".into(),
                src: "a".into(),
                dst: "b".into(),
            }],
        )
        .unwrap();
        assert_eq!(g.sinks(), vec![1]);
        assert!(g.require_sink_free().is_err());
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(GraphSpec::new(
            vec!["v".into()],
            vec![EdgeSpec {
                name: "v".into(),
                src: "v".into(),
                dst: "v".into()
            }]
        )
        .is_err());
    }
}
