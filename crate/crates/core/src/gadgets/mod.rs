//! Instance generators: the vertex-cover and Euclidean hardness
//! constructions over 3-regular graphs, and seeded random instances.

mod euclid;
mod random;
mod vc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use euclid::{squared_distance, Anchor, EuclideanCounts, EuclideanGadget, EuclideanPoint, DEFAULT_POINT_BUDGET};
pub use random::{gen_random, PenaltyKind, RandomKind, RandomParams};
pub use vc::{cover_from_solution, gadget_optimum_check, gen_vc_gadget, solution_from_cover, GadgetCheck, VcGadget};

/// A simple 3-regular graph on vertices `0..n`; edge `j` is `edges[j]`
/// with first endpoint `edges[j].0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl CubicGraph {
    /// Rejects loops, repeated edges and vertices of degree other than 3.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut degree = vec![0usize; n];
        let mut seen = std::collections::BTreeSet::new();
        for &(u, v) in &edges {
            if u >= n || v >= n || u == v {
                return Err(Error::domain(format!("edge ({u},{v}) is not a simple edge on 0..{n}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::domain(format!("edge ({u},{v}) is repeated")));
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        if let Some(v) = degree.iter().position(|&d| d != 3) {
            return Err(Error::domain(format!("vertex {v} has degree {}, not 3", degree[v])));
        }
        Ok(CubicGraph { n, edges })
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn k4() -> Self {
        CubicGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).expect("K4 is cubic")
    }

    pub fn k33() -> Self {
        let edges = (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect();
        CubicGraph::new(6, edges).expect("K3,3 is cubic")
    }

    /// Two triangles joined by a perfect matching.
    pub fn prism() -> Self {
        CubicGraph::new(6, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)])
            .expect("the prism is cubic")
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        CubicGraph::new(10, edges).expect("the Petersen graph is cubic")
    }

    /// `k4`, `k33`, `prism` or `petersen`.
    pub fn named(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "k4" => Ok(CubicGraph::k4()),
            "k33" | "k3,3" => Ok(CubicGraph::k33()),
            "prism" => Ok(CubicGraph::prism()),
            "petersen" => Ok(CubicGraph::petersen()),
            other => Err(Error::domain(format!("unknown graph {other:?}"))),
        }
    }

    pub fn is_cover(&self, cover: &[usize]) -> bool {
        self.edges.iter().all(|(u, v)| cover.contains(u) || cover.contains(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_graphs_are_cubic() {
        for (name, n, m) in [("k4", 4, 6), ("k33", 6, 9), ("prism", 6, 9), ("petersen", 10, 15)] {
            let g = CubicGraph::named(name).unwrap();
            assert_eq!((g.n, g.m()), (n, m));
        }
    }

    #[test]
    fn non_regular_is_rejected() {
        assert!(matches!(CubicGraph::new(3, vec![(0, 1), (1, 2)]), Err(Error::Domain(_))));
        assert!(CubicGraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).is_err());
    }
}
