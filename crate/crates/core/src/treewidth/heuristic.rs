//! Min-degree elimination.

use std::collections::BTreeSet;

use super::TreeDecomposition;
use crate::graph::{Graph, VertexId};

/// A valid decomposition from the min-degree elimination order; ties go to
/// the smaller vertex id. No optimality promise.
pub fn heuristic_decompose(graph: &Graph) -> TreeDecomposition {
    heuristic_decompose_pairs(graph.vertex_count(), graph.edges().iter().map(|e| (e.u, e.v)))
}

/// [`heuristic_decompose`] over an arbitrary list of vertex pairs.
pub fn heuristic_decompose_pairs(n: usize, pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> TreeDecomposition {
    if n == 0 {
        return TreeDecomposition::default();
    }
    let mut adj: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); n];
    for (u, v) in pairs {
        if u != v {
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    let mut eliminated = vec![false; n];
    let mut position = vec![0; n];
    let mut bags = Vec::with_capacity(n);
    let mut order = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n).filter(|&v| !eliminated[v]).min_by_key(|&v| (adj[v].len(), v)).expect("vertex left");
        let nbrs: Vec<VertexId> = adj[v].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        let mut bag = nbrs.clone();
        bag.push(v);
        bags.push(bag);
        order.push(nbrs);
        eliminated[v] = true;
        position[v] = step;
    }
    // bag of v hangs below the bag of its earliest-eliminated later neighbour
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, nbrs) in order.iter().enumerate() {
        match nbrs.iter().map(|&u| position[u]).min() {
            Some(j) => edges.push((i, j)),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    TreeDecomposition::new(bags, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().map(|&(u, v)| (u, v, int(1)))).unwrap()
    }

    #[test]
    fn tree_has_width_one() {
        let g = graph(6, &[(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)]);
        let td = heuristic_decompose(&g);
        assert!(td.validate(&g).is_empty());
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn cycle_has_width_two() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let td = heuristic_decompose(&g);
        assert!(td.validate(&g).is_empty());
        assert_eq!(td.width(), 2);
    }

    #[test]
    fn clique_has_width_three() {
        let g = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let td = heuristic_decompose(&g);
        assert!(td.validate(&g).is_empty());
        assert_eq!(td.width(), 3);
    }

    #[test]
    fn disconnected_graph_gives_one_tree() {
        let g = graph(5, &[(0, 1), (2, 3)]);
        let td = heuristic_decompose(&g);
        assert!(td.validate(&g).is_empty());
    }
}
