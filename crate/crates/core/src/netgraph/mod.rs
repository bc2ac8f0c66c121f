//! Graph representation, ingestion, synthetic generation and the classical
//! transition operators built on top of a graph.

mod generate;
mod io;
mod stochastic;
mod toy;

use std::collections::HashSet;

use crate::error::{Error, Result};

pub use generate::{generate, GraphGenSpec, GraphModel};
pub use io::{load_edge_list, save_edge_list, LoadReport};
pub use stochastic::{google_matrix, transition_matrix, StochasticMatrix, DEFAULT_Q};
pub use toy::{toy_graph, TOY_EDGE_LIST};

/// A simple directed graph on nodes `0..n`.
///
/// Edges keep their insertion order so that saving and reloading a graph that
/// came from an edge list reproduces the same node indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    labels: Option<Vec<String>>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl DirectedGraph {
    /// Builds a graph, rejecting self-loops, out-of-range endpoints and
    /// duplicate edges.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for &(s, t) in &edges {
            if s >= n || t >= n || s == t {
                return Err(Error::InvalidEdge {
                    source_node: s,
                    target: t,
                    n,
                });
            }
            if !seen.insert((s, t)) {
                return Err(Error::InvalidParameter(format!("duplicate edge ({s}, {t})")));
            }
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(s, t) in &edges {
            out_adj[s].push(t);
            in_adj[t].push(s);
        }
        Ok(Self {
            n,
            edges,
            labels: None,
            out_adj,
            in_adj,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of a node: its label if present, otherwise its index.
    pub fn label(&self, node: usize) -> String {
        match &self.labels {
            Some(l) => l[node].clone(),
            None => node.to_string(),
        }
    }

    pub fn out_neighbors(&self, node: usize) -> &[usize] {
        &self.out_adj[node]
    }

    pub fn in_neighbors(&self, node: usize) -> &[usize] {
        &self.in_adj[node]
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.out_adj[node].len()
    }

    pub fn has_edge(&self, source: usize, target: usize) -> bool {
        self.out_adj[source].contains(&target)
    }

    /// Distinct nodes adjacent to `node` in either direction, sorted.
    pub fn undirected_neighbors(&self, node: usize) -> Vec<usize> {
        let mut nb: Vec<usize> = self.out_adj[node]
            .iter()
            .chain(&self.in_adj[node])
            .copied()
            .collect();
        nb.sort_unstable();
        nb.dedup();
        nb
    }

    /// Number of distinct neighbors regardless of direction.
    pub fn total_degree(&self, node: usize) -> usize {
        self.undirected_neighbors(node).len()
    }

    /// True when every edge has its reverse.
    pub fn is_symmetric(&self) -> bool {
        self.edges.iter().all(|&(s, t)| self.has_edge(t, s))
    }
}
