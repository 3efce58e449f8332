//! Tree decompositions, their nice form, and exact dynamic programs for
//! prize-collecting trees, tours and strolls of bounded treewidth.

pub(crate) mod dp;
mod dp_tree;
mod dp_walk;
mod heuristic;
mod nice;
mod pace;
pub(crate) mod partition;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, UnionFind, VertexId};

pub use dp::DpStats;
pub use dp_tree::DpResult;
pub use dp_tree::dp_pcst;
pub use dp_walk::{dp_pcs, dp_pctsp};
pub use heuristic::{heuristic_decompose, heuristic_decompose_pairs};
pub use nice::{to_nice, NiceDecomposition, NiceKind, NiceNode};
pub use pace::{parse_pace, write_pace};

/// Bags plus the edges of the tree joining them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    /// Sorted vertex ids per bag.
    pub bags: Vec<Vec<VertexId>>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TdViolation {
    /// Not a tree over the bags.
    NotATree,
    /// A bag names a vertex outside the graph.
    UnknownVertex(VertexId),
    /// Condition 1: the vertex lies in no bag.
    VertexUncovered(VertexId),
    /// Condition 2: no bag holds both endpoints of the edge.
    EdgeUncovered(VertexId, VertexId),
    /// Condition 3: the bags holding the vertex are disconnected.
    Disconnected(VertexId),
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<VertexId>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, edges }
    }

    /// `max |B_i| − 1`; zero for a decomposition without bags.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            if a < self.bags.len() && b < self.bags.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }

    pub fn is_tree(&self) -> bool {
        let m = self.bags.len();
        if m == 0 {
            return self.edges.is_empty();
        }
        if self.edges.len() != m - 1 {
            return false;
        }
        let mut uf = UnionFind::new(m);
        self.edges.iter().all(|&(a, b)| a < m && b < m && uf.union(a, b))
    }

    /// Checks the three defining conditions against `graph`; empty iff valid.
    pub fn validate(&self, graph: &Graph) -> Vec<TdViolation> {
        self.validate_pairs(graph.vertex_count(), graph.edges().iter().map(|e| (e.u, e.v)))
    }

    /// [`TreeDecomposition::validate`] for an arbitrary list of vertex pairs.
    pub fn validate_pairs(&self, n: usize, pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Vec<TdViolation> {
        let mut out = Vec::new();
        if !self.is_tree() {
            out.push(TdViolation::NotATree);
        }
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    out.push(TdViolation::UnknownVertex(v));
                } else {
                    holders[v].push(i);
                }
            }
        }
        for (v, h) in holders.iter().enumerate() {
            if h.is_empty() {
                out.push(TdViolation::VertexUncovered(v));
            }
        }
        for (u, v) in pairs {
            if u >= n || v >= n {
                continue;
            }
            let covered = holders[u].iter().any(|&i| self.bags[i].binary_search(&v).is_ok());
            if !covered {
                out.push(TdViolation::EdgeUncovered(u.min(v), u.max(v)));
            }
        }
        let adj = self.adjacency();
        for (v, h) in holders.iter().enumerate() {
            if h.len() < 2 {
                continue;
            }
            // search within the bags holding v
            let mut seen = vec![false; self.bags.len()];
            let mut stack = vec![h[0]];
            seen[h[0]] = true;
            while let Some(i) = stack.pop() {
                for &j in &adj[i] {
                    if !seen[j] && self.bags[j].binary_search(&v).is_ok() {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            if h.iter().any(|&i| !seen[i]) {
                out.push(TdViolation::Disconnected(v));
            }
        }
        out
    }
}
