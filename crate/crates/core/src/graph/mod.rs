//! Undirected graphs in CSR form, the generators that produce them and the
//! edge-list file format.

mod generate;
mod io;

pub use generate::{
    default_edge_prob, generate, generate_erdos_renyi, generate_small_world, generate_star, Family,
    GeneratorSpec, DEFAULT_CHUNK_SIZE,
};
pub use io::{read_edge_list, read_edge_list_file, write_edge_list, write_edge_list_file};

use std::collections::HashSet;

use crate::{Error, Result, VertexId};

/// Undirected edges over `[0, vertex_count)`, each stored once as `(u, v)`
/// with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeList {
    vertex_count: u64,
    edges: Vec<(VertexId, VertexId)>,
}

impl EdgeList {
    /// Validates and normalises `edges`. Pairs are reoriented to `u < v`;
    /// order is otherwise preserved.
    pub fn new(vertex_count: u64, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut normalised = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) references a vertex outside [0, {vertex_count})"
                )));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop ({u}, {v})")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidInput(format!("duplicate edge ({u}, {v})")));
            }
            normalised.push(e);
        }
        Ok(Self {
            vertex_count,
            edges: normalised,
        })
    }

    /// Skips validation. Callers guarantee the `u < v`, in-range and
    /// duplicate-free invariants.
    pub(crate) fn from_normalised(vertex_count: u64, edges: Vec<(VertexId, VertexId)>) -> Self {
        debug_assert!(edges.iter().all(|&(u, v)| u < v && v < vertex_count));
        Self {
            vertex_count,
            edges,
        }
    }

    pub fn vertex_count(&self) -> u64 {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn into_edges(self) -> Vec<(VertexId, VertexId)> {
        self.edges
    }
}

/// Immutable undirected graph in compressed sparse row form.
///
/// Every edge appears in both endpoints' adjacency lists and each list is
/// sorted ascending, so two graphs built from the same edge set compare
/// equal regardless of edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    row_offsets: Vec<usize>,
    neighbors: Vec<VertexId>,
}

impl Graph {
    /// Builds the CSR form of `edges`. Rejects self-loops and duplicate
    /// undirected edges, naming the offending pair.
    pub fn from_edge_list(edges: &EdgeList) -> Result<Self> {
        let n = usize::try_from(edges.vertex_count())
            .map_err(|_| Error::InvalidInput("vertex count exceeds address space".into()))?;
        let mut degree = vec![0usize; n];
        for &(u, v) in edges.edges() {
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop ({u}, {v})")));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) references a vertex outside [0, {n})"
                )));
            }
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }

        let mut row_offsets = Vec::with_capacity(n + 1);
        row_offsets.push(0);
        for d in &degree {
            row_offsets.push(row_offsets.last().unwrap() + d);
        }

        let mut cursor = row_offsets[..n].to_vec();
        let mut neighbors = vec![0; row_offsets[n]];
        for &(u, v) in edges.edges() {
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }

        for u in 0..n {
            let row = &mut neighbors[row_offsets[u]..row_offsets[u + 1]];
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidInput(format!(
                    "duplicate edge ({}, {})",
                    (u as u64).min(w[0]),
                    (u as u64).max(w[0])
                )));
            }
        }

        Ok(Self {
            row_offsets,
            neighbors,
        })
    }

    pub fn vertex_count(&self) -> u64 {
        (self.row_offsets.len() - 1) as u64
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> u64 {
        (self.neighbors.len() / 2) as u64
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn neighbor_array(&self) -> &[VertexId] {
        &self.neighbors
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.neighbors[self.row_offsets[v]..self.row_offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.row_offsets[v + 1] - self.row_offsets[v]
    }

    /// Canonical edge list: `(u, v)` with `u < v`, sorted lexicographically.
    pub fn to_edge_list(&self) -> EdgeList {
        let mut edges = Vec::with_capacity(self.neighbors.len() / 2);
        for u in 0..self.vertex_count() {
            edges.extend(
                self.neighbors(u)
                    .iter()
                    .filter(|&&v| v > u)
                    .map(|&v| (u, v)),
            );
        }
        EdgeList::from_normalised(self.vertex_count(), edges)
    }

    /// Scans the structural invariants. Used by tests and debug checks.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.vertex_count();
        let bad = |m: String| Err(Error::InvalidInput(m));
        if self.row_offsets[0] != 0 {
            return bad("row_offsets[0] != 0".into());
        }
        if *self.row_offsets.last().unwrap() != self.neighbors.len() {
            return bad("row_offsets[n] != neighbors.len()".into());
        }
        if self.row_offsets.windows(2).any(|w| w[0] > w[1]) {
            return bad("row_offsets not monotone".into());
        }
        for u in 0..n {
            for &v in self.neighbors(u) {
                if v >= n {
                    return bad(format!("neighbor {v} of {u} out of range"));
                }
                if v == u {
                    return bad(format!("self-loop at {u}"));
                }
                let forward = self.neighbors(u).iter().filter(|&&w| w == v).count();
                let backward = self.neighbors(v).iter().filter(|&&w| w == u).count();
                if forward != backward {
                    return bad(format!("asymmetric adjacency between {u} and {v}"));
                }
            }
        }
        Ok(())
    }
}

/// Convenience wrapper matching the generator → builder pipeline.
pub fn build_graph(edges: &EdgeList) -> Result<Graph> {
    Graph::from_edge_list(edges)
}
