//! Undirected graphs with exact nonnegative edge costs.

use std::collections::BinaryHeap;
use std::cmp::Reverse;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    #[serde(with = "crate::rational::serde_text")]
    pub cost: Rational,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }
}

/// Vertices are `0..n`; edges are identified by their index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, edges: Vec::new(), adjacency: vec![Vec::new(); n] }
    }

    /// Builds a graph, rejecting loops, negative costs and unknown vertices.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId, Rational)>) -> Result<Self> {
        let mut g = Graph::new(n);
        for (u, v, c) in edges {
            g.add_edge(u, v, c)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, cost: Rational) -> Result<EdgeId> {
        if u >= self.n || v >= self.n {
            return Err(Error::domain(format!("edge ({u},{v}) references a vertex outside 0..{}", self.n)));
        }
        if u == v {
            return Err(Error::domain(format!("self-loop at vertex {u}")));
        }
        if cost.is_negative() {
            return Err(Error::domain(format!("edge ({u},{v}) has negative cost")));
        }
        let id = self.edges.len();
        self.edges.push(Edge { u, v, cost });
        self.adjacency[u].push((v, id));
        self.adjacency[v].push((u, id));
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    /// `(neighbour, edge id)` pairs.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.adjacency[u].iter().find(|(w, _)| *w == v).map(|&(_, e)| e)
    }

    pub fn length<'a>(&self, edges: impl IntoIterator<Item = &'a EdgeId>) -> Rational {
        edges.into_iter().fold(Rational::zero(), |acc, &e| acc + &self.edges[e].cost)
    }

    /// Same topology with new costs.
    pub fn with_costs(&self, costs: Vec<Rational>) -> Result<Self> {
        if costs.len() != self.edges.len() {
            return Err(Error::domain("cost vector length differs from edge count"));
        }
        Graph::from_edges(self.n, self.edges.iter().zip(costs).map(|(e, c)| (e.u, e.v, c)))
    }

    /// Component label per vertex using only `edges`.
    pub fn components_of<'a>(&self, edges: impl IntoIterator<Item = &'a EdgeId>) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n);
        for &e in edges {
            uf.union(self.edges[e].u, self.edges[e].v);
        }
        (0..self.n).map(|v| uf.find(v)).collect()
    }

    /// Single-source shortest path lengths; `None` marks unreachable vertices.
    pub fn shortest_paths(&self, source: VertexId) -> Vec<Option<Rational>> {
        let mut dist: Vec<Option<Rational>> = vec![None; self.n];
        let mut heap = BinaryHeap::new();
        dist[source] = Some(Rational::zero());
        heap.push(Reverse((Rational::zero(), source)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v].as_ref().is_some_and(|best| *best < d) {
                continue;
            }
            for &(w, e) in &self.adjacency[v] {
                let nd = &d + &self.edges[e].cost;
                if dist[w].as_ref().is_none_or(|cur| nd < *cur) {
                    dist[w] = Some(nd.clone());
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        dist
    }

    /// All-pairs shortest path lengths (the metric closure).
    pub fn metric_closure(&self) -> Vec<Vec<Option<Rational>>> {
        (0..self.n).map(|s| self.shortest_paths(s)).collect()
    }

    /// Cheapest edge ids of a shortest path, for reconstructing walks.
    pub fn shortest_path_edges(&self, source: VertexId, target: VertexId) -> Option<Vec<EdgeId>> {
        let mut dist: Vec<Option<Rational>> = vec![None; self.n];
        let mut via: Vec<Option<EdgeId>> = vec![None; self.n];
        let mut heap = BinaryHeap::new();
        dist[source] = Some(Rational::zero());
        heap.push(Reverse((Rational::zero(), source)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v].as_ref().is_some_and(|best| *best < d) {
                continue;
            }
            for &(w, e) in &self.adjacency[v] {
                let nd = &d + &self.edges[e].cost;
                if dist[w].as_ref().is_none_or(|cur| nd < *cur) {
                    dist[w] = Some(nd.clone());
                    via[w] = Some(e);
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        dist[target].as_ref()?;
        let mut path = Vec::new();
        let mut cur = target;
        while cur != source {
            let e = via[cur]?;
            path.push(e);
            cur = self.edges[e].other(cur);
        }
        path.reverse();
        Some(path)
    }

    /// True when `edges` contains no cycle (multi-edges count as cycles).
    pub fn is_forest(&self, edges: &[EdgeId]) -> bool {
        let mut uf = UnionFind::new(self.n);
        edges.iter().all(|&e| uf.union(self.edges[e].u, self.edges[e].v))
    }

    /// Minimum spanning forest of the subgraph formed by `edges`; on every
    /// cycle the longest edge is dropped, ties broken by larger edge id.
    pub fn spanning_forest(&self, edges: &[EdgeId]) -> Vec<EdgeId> {
        let mut sorted: Vec<EdgeId> = edges.to_vec();
        sorted.sort_by(|&a, &b| self.edges[a].cost.cmp(&self.edges[b].cost).then(a.cmp(&b)));
        sorted.dedup();
        let mut uf = UnionFind::new(self.n);
        let mut kept: Vec<EdgeId> = sorted.into_iter().filter(|&e| uf.union(self.edges[e].u, self.edges[e].v)).collect();
        kept.sort_unstable();
        kept
    }
}

/// Disjoint sets with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn path(costs: &[i64]) -> Graph {
        Graph::from_edges(costs.len() + 1, costs.iter().enumerate().map(|(i, &c)| (i, i + 1, int(c)))).unwrap()
    }

    #[test]
    fn rejects_loops_and_negative_costs() {
        let mut g = Graph::new(3);
        assert!(g.add_edge(1, 1, int(1)).is_err());
        assert!(g.add_edge(0, 1, int(-1)).is_err());
        assert!(g.add_edge(0, 5, int(1)).is_err());
        assert!(g.add_edge(0, 1, int(0)).is_ok());
    }

    #[test]
    fn shortest_paths_on_a_path() {
        let g = path(&[2, 3, 4]);
        let d = g.shortest_paths(0);
        assert_eq!(d[3], Some(int(9)));
        assert_eq!(g.shortest_path_edges(0, 3).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn spanning_forest_drops_longest_cycle_edge() {
        let g = Graph::from_edges(3, [(0, 1, int(1)), (1, 2, int(2)), (0, 2, int(5))]).unwrap();
        assert_eq!(g.spanning_forest(&[0, 1, 2]), vec![0, 1]);
        assert!(!g.is_forest(&[0, 1, 2]));
        assert!(g.is_forest(&[0, 1]));
    }
}
