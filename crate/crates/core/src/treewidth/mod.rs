//! Graphs, tree decompositions and the weighted-CSP dynamic program over them.

mod csp;
mod decomposition;
mod nice;

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub use csp::{
    csp_brute, csp_brute_with_cap, csp_solve, csp_solve_with, CspInstance, CspSolution,
    HardConstraint, Relation, SoftConstraint, TieBreak,
};
pub use decomposition::{min_fill_decomposition, validate_decomposition, TreeDecomposition, Violation};
pub use nice::{make_nice, NiceDecomposition, NiceKind, NiceNode};

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    /// Rejects loops, repeated edges and out-of-range endpoints.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Invalid(format!("edge ({u}, {v}) leaves the vertex range 0..{n}")));
            }
            if u == v {
                return Err(Error::Invalid(format!("loop at vertex {u}")));
            }
            if !adj[u].insert(v) {
                return Err(Error::Invalid(format!("edge ({u}, {v}) appears twice")));
            }
            adj[v].insert(u);
        }
        Ok(Self { adj })
    }

    /// Like [`Graph::new`] but silently merges repeated edges.
    pub fn from_edges_dedup(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let set: BTreeSet<(usize, usize)> =
            edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        Self::new(n, &set.into_iter().collect::<Vec<_>>())
    }

    pub fn empty(n: usize) -> Self {
        Self { adj: vec![BTreeSet::new(); n] }
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::new(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs three vertices");
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((n - 1, 0));
        Self::new(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::new(n, &edges).unwrap()
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Self::new(10, &edges).unwrap()
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.range(u + 1..).map(move |&v| (u, v)))
            .collect()
    }

    /// Closed neighbourhood `N[v]`.
    pub fn closed_neighborhood(&self, v: usize) -> BTreeSet<usize> {
        let mut set = self.adj[v].clone();
        set.insert(v);
        set
    }

    /// Adds every edge of the clique on `vertices` (ignoring ones already present).
    pub(crate) fn add_clique(&mut self, vertices: &[usize]) {
        for (a, &u) in vertices.iter().enumerate() {
            for &v in &vertices[a + 1..] {
                if u != v {
                    self.adj[u].insert(v);
                    self.adj[v].insert(u);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors() {
        assert_eq!(Graph::path(4).num_edges(), 3);
        assert_eq!(Graph::cycle(5).num_edges(), 5);
        assert_eq!(Graph::complete(4).num_edges(), 6);
        let p = Graph::petersen();
        assert_eq!(p.num_edges(), 15);
        assert!((0..10).all(|v| p.neighbors(v).len() == 3));
    }

    #[test]
    fn rejects_non_simple_input() {
        assert!(Graph::new(2, &[(0, 0)]).is_err());
        assert!(Graph::new(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(2, &[(0, 2)]).is_err());
        assert_eq!(Graph::from_edges_dedup(2, [(0, 1), (1, 0)]).unwrap().num_edges(), 1);
    }
}
