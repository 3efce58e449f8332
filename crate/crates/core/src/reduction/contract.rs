//! Contracting the tree components of a forest.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, UnionFind, VertexId};

#[derive(Clone, Debug)]
pub struct Contraction {
    /// `G*`: one vertex per component, loops dropped, the cheapest of
    /// parallel edges kept (the smaller id on ties).
    pub graph: Graph,
    /// Original vertex to contracted vertex.
    pub map: Vec<VertexId>,
    /// Contracted edge to the original edge it stands for.
    pub origin: Vec<EdgeId>,
    /// Forest edges inside each contracted vertex.
    pub trees: Vec<Vec<EdgeId>>,
}

/// Contracts every tree of `forest`; contracted vertices are numbered by
/// their smallest original vertex.
pub fn contract_components(graph: &Graph, forest: &[EdgeId]) -> Result<Contraction> {
    let n = graph.vertex_count();
    let mut uf = UnionFind::new(n);
    for &e in forest {
        if e >= graph.edge_count() {
            return Err(Error::domain(format!("edge {e} is not in the graph")));
        }
        if !uf.union(graph.edge(e).u, graph.edge(e).v) {
            return Err(Error::domain(format!("forest edge {e} closes a cycle")));
        }
    }
    let mut id_of_root = vec![usize::MAX; n];
    let mut map = vec![0; n];
    let mut count = 0;
    for v in 0..n {
        let r = uf.find(v);
        if id_of_root[r] == usize::MAX {
            id_of_root[r] = count;
            count += 1;
        }
        map[v] = id_of_root[r];
    }
    let mut trees = vec![Vec::new(); count];
    for &e in forest {
        trees[map[graph.edge(e).u]].push(e);
    }
    for t in &mut trees {
        t.sort_unstable();
    }
    let mut best: std::collections::BTreeMap<(VertexId, VertexId), EdgeId> = std::collections::BTreeMap::new();
    for (id, e) in graph.edges().iter().enumerate() {
        let (a, b) = (map[e.u], map[e.v]);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        match best.get(&key) {
            Some(&old) if graph.edge(old).cost <= e.cost => {}
            _ => {
                best.insert(key, id);
            }
        }
    }
    let mut star = Graph::new(count);
    let mut origin = Vec::with_capacity(best.len());
    for ((a, b), e) in best {
        star.add_edge(a, b, graph.edge(e).cost.clone())?;
        origin.push(e);
    }
    Ok(Contraction { graph: star, map, origin, trees })
}
