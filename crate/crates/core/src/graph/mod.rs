//! Immutable undirected simple graphs with offset-indexed adjacency.
//!
//! Edge ids are positions in the edge sequence passed at construction; every
//! sampler in the crate addresses edges by these ids.

mod generators;
mod structure;
mod text;

pub use generators::{cartesian_product, generate, FamilySpec};
pub use structure::{ball, components, girth, graph_metrics, GraphMetrics};
pub use text::{read_graph, write_graph};

use std::collections::HashSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    incident: Vec<usize>,
}

impl Graph {
    /// Validates `edges` and builds the adjacency index.
    ///
    /// Pairs are stored with the smaller endpoint first; the position of a
    /// pair in `edges` becomes its edge id.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in &edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::EndpointOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge(key.0, key.1));
            }
            normalized.push(key);
        }
        Ok(Self::from_valid_edges(n, normalized))
    }

    /// Builds the index for edges already known to be simple and in range.
    pub(crate) fn from_valid_edges(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0; 2 * edges.len()];
        let mut incident = vec![0; 2 * edges.len()];
        for (id, &(u, v)) in edges.iter().enumerate() {
            neighbors[fill[u]] = v;
            incident[fill[u]] = id;
            fill[u] += 1;
            neighbors[fill[v]] = u;
            incident[fill[v]] = id;
            fill[v] += 1;
        }
        let edges = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        Graph {
            n,
            edges,
            offsets,
            neighbors,
            incident,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Edge ids incident to `v`, aligned with [`Graph::neighbors`].
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// The spanning subgraph keeping only edges with `open[id]` set.
    pub fn spanning_subgraph(&self, open: &[bool]) -> Graph {
        assert_eq!(open.len(), self.m(), "one indicator per edge");
        let kept = self
            .edges
            .iter()
            .zip(open)
            .filter(|(_, &o)| o)
            .map(|(&e, _)| e)
            .collect();
        Graph::from_valid_edges(self.n, kept)
    }
}
