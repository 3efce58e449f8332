//! Solutions and their cost `length(F) + π(𝒟ᵘⁿˢᵃᵗ)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, UnionFind, VertexId};
use crate::instance::Instance;
use crate::penalty::DemandSet;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    /// Edge ids; for walks an id may repeat once per traversal.
    pub edges: Vec<EdgeId>,
    pub satisfied: DemandSet,
    pub length: Rational,
    pub penalty: Rational,
    pub total: Rational,
}

impl Solution {
    pub fn unsatisfied(&self, inst: &Instance) -> DemandSet {
        inst.all_demands().difference(&self.satisfied)
    }

    pub fn report(&self) -> SolutionReport {
        SolutionReport {
            total: rational::format(&self.total),
            total_exact: rational::format_fraction(&self.total),
            length: rational::format(&self.length),
            length_exact: rational::format_fraction(&self.length),
            penalty: rational::format(&self.penalty),
            penalty_exact: rational::format_fraction(&self.penalty),
            satisfied: self.satisfied.to_vec(),
            edges: self.edges.clone(),
        }
    }
}

/// Text form of a solution. Each value is given in its shortest exact form
/// and as a plain fraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub total: String,
    pub total_exact: String,
    pub length: String,
    pub length_exact: String,
    pub penalty: String,
    pub penalty_exact: String,
    pub satisfied: Vec<usize>,
    pub edges: Vec<EdgeId>,
}

/// Costs the edge multiset `edges`: a demand is satisfied when both of its
/// endpoints lie in one component of the edges.
pub fn solution_cost(inst: &Instance, edges: &[EdgeId]) -> Result<Solution> {
    let g = &inst.graph;
    if let Some(&e) = edges.iter().find(|&&e| e >= g.edge_count()) {
        return Err(Error::domain(format!("edge {e} is not in the graph")));
    }
    let mut uf = UnionFind::new(g.vertex_count());
    for &e in edges {
        uf.union(g.edge(e).u, g.edge(e).v);
    }
    let satisfied: DemandSet = (0..inst.demands.len()).filter(|&i| uf.same(inst.demands[i].s, inst.demands[i].t)).collect();
    with_satisfied(inst, edges.to_vec(), satisfied)
}

/// Costs `edges` with an explicitly given satisfied set.
pub fn with_satisfied(inst: &Instance, edges: Vec<EdgeId>, satisfied: DemandSet) -> Result<Solution> {
    let length = inst.graph.length(&edges);
    let penalty = inst.penalty.eval(&inst.all_demands().difference(&satisfied))?;
    let total = &length + &penalty;
    Ok(Solution { edges, satisfied, length, penalty, total })
}

/// Degree of every vertex in the multigraph formed by `edges`.
pub fn degrees(inst: &Instance, edges: &[EdgeId]) -> Vec<usize> {
    let mut deg = vec![0; inst.graph.vertex_count()];
    for &e in edges {
        deg[inst.graph.edge(e).u] += 1;
        deg[inst.graph.edge(e).v] += 1;
    }
    deg
}

/// True when `edges` is connected, touches `root` (or is empty) and has
/// even degrees: an Euler tour through the root exists.
pub fn is_closed_walk(inst: &Instance, edges: &[EdgeId], root: VertexId) -> bool {
    connected_through(inst, edges, root) && degrees(inst, edges).iter().all(|d| d % 2 == 0)
}

/// True when `edges` is connected, touches `root` (or is empty) and has at
/// most two odd-degree vertices: an Euler trail covers it.
pub fn is_open_walk(inst: &Instance, edges: &[EdgeId], root: VertexId) -> bool {
    connected_through(inst, edges, root) && degrees(inst, edges).iter().filter(|d| *d % 2 == 1).count() <= 2
}

/// True when `edges` form one tree containing `root`, or are empty.
pub fn is_rooted_tree(inst: &Instance, edges: &[EdgeId], root: VertexId) -> bool {
    connected_through(inst, edges, root) && inst.graph.is_forest(edges)
}

fn connected_through(inst: &Instance, edges: &[EdgeId], root: VertexId) -> bool {
    let g = &inst.graph;
    let mut uf = UnionFind::new(g.vertex_count());
    for &e in edges {
        uf.union(g.edge(e).u, g.edge(e).v);
    }
    edges.iter().all(|&e| uf.same(g.edge(e).u, root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::instance::Demand;
    use crate::penalty::PenaltyFn;
    use crate::rational::int;

    fn path_instance() -> Instance {
        let g = Graph::from_edges(3, [(0, 1, int(2)), (1, 2, int(3))]).unwrap();
        let demands = vec![Demand { s: 0, t: 1 }, Demand { s: 1, t: 2 }];
        Instance::new(g, demands, PenaltyFn::additive(vec![int(3), int(4)]).unwrap(), None).unwrap()
    }

    #[test]
    fn empty_forest_pays_everything() {
        let g = Graph::from_edges(2, [(0, 1, int(5))]).unwrap();
        let inst = Instance::new(g, vec![Demand { s: 0, t: 1 }], PenaltyFn::additive(vec![int(7)]).unwrap(), None).unwrap();
        let sol = solution_cost(&inst, &[]).unwrap();
        assert_eq!(sol.total, int(7));
        assert!(sol.satisfied.is_empty());
        let sol = solution_cost(&inst, &[0]).unwrap();
        assert_eq!(sol.total, int(5));
    }

    #[test]
    fn partial_satisfaction_charges_the_rest() {
        let inst = path_instance();
        let sol = solution_cost(&inst, &[0]).unwrap();
        assert_eq!(sol.length, int(2));
        assert_eq!(sol.total, int(2 + 4));
        assert_eq!(sol.satisfied.to_vec(), vec![0]);
    }

    #[test]
    fn unknown_edge_is_a_domain_error() {
        assert!(matches!(solution_cost(&path_instance(), &[9]), Err(Error::Domain(_))));
    }

    #[test]
    fn walk_shape_checks() {
        let inst = path_instance();
        assert!(is_closed_walk(&inst, &[0, 0], 0));
        assert!(!is_closed_walk(&inst, &[0], 0));
        assert!(is_open_walk(&inst, &[0, 1], 0));
        assert!(!is_open_walk(&inst, &[1], 0));
        assert!(is_rooted_tree(&inst, &[], 2));
    }

    proptest::proptest! {
        #[test]
        fn adding_edges_never_raises_the_penalty(mask in 0u8..4, extra in 0usize..2) {
            let inst = path_instance();
            let base: Vec<EdgeId> = (0..2).filter(|i| mask >> i & 1 == 1).collect();
            let mut more = base.clone();
            more.push(extra);
            let a = solution_cost(&inst, &base).unwrap();
            let b = solution_cost(&inst, &more).unwrap();
            proptest::prop_assert!(a.satisfied.is_subset(&b.satisfied));
            proptest::prop_assert!(b.penalty <= a.penalty);
        }
    }
}
