//! Exact solvers used as ground truth: edge-subset enumeration,
//! satisfied-set enumeration with Dreyfus–Wagner Steiner forests, Held–Karp
//! tours and strolls, a tree-decomposition forest program for additive
//! penalties, and branch-and-bound vertex cover.

mod enumerate;
mod steiner;
mod td_forest;
mod vertex_cover;
mod walk;

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::UnionFind;
use crate::instance::{Instance, Problem};
use crate::solution::{solution_cost, Solution};

pub use enumerate::oracle_by_edges;
pub use steiner::{oracle_by_satisfied_sets, steiner_forest, steiner_forest_len, steiner_tree};
pub use td_forest::oracle_pcsf_td;
pub use vertex_cover::oracle_vertex_cover;
pub use walk::{oracle_stroll, oracle_tour};

/// Size limits; exceeding one is a capacity error, never an approximation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    /// Edge-subset enumeration.
    pub max_edges: usize,
    /// Distinct terminals for Dreyfus–Wagner and Held–Karp.
    pub max_terminals: usize,
    /// Demands for the satisfied-set route.
    pub max_demands: usize,
    /// Stored states of the tree-decomposition program.
    pub max_states: usize,
    /// Vertices for vertex cover.
    pub max_cover_vertices: usize,
    pub time_limit: Option<Duration>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_edges: 20,
            max_terminals: 12,
            max_demands: 14,
            max_states: 20_000_000,
            max_cover_vertices: 24,
            time_limit: None,
        }
    }
}

impl OracleBudget {
    /// Defaults overridden by `PCSTEINER_ORACLE_MAX_EDGES`,
    /// `PCSTEINER_ORACLE_MAX_TERMINALS`, `PCSTEINER_ORACLE_MAX_DEMANDS` and
    /// `PCSTEINER_ORACLE_MAX_STATES` when set.
    pub fn from_env() -> Self {
        let mut b = OracleBudget::default();
        let read = |key: &str| std::env::var(key).ok().and_then(|v| v.trim().parse::<usize>().ok());
        if let Some(v) = read("PCSTEINER_ORACLE_MAX_EDGES") {
            b.max_edges = v;
        }
        if let Some(v) = read("PCSTEINER_ORACLE_MAX_TERMINALS") {
            b.max_terminals = v;
        }
        if let Some(v) = read("PCSTEINER_ORACLE_MAX_DEMANDS") {
            b.max_demands = v;
        }
        if let Some(v) = read("PCSTEINER_ORACLE_MAX_STATES") {
            b.max_states = v;
        }
        b
    }

    pub(crate) fn deadline(&self) -> Deadline {
        Deadline { end: self.time_limit.map(|d| Instant::now() + d) }
    }
}

pub(crate) struct Deadline {
    end: Option<Instant>,
}

impl Deadline {
    pub(crate) fn check(&self) -> Result<()> {
        match self.end {
            Some(end) if Instant::now() > end => Err(Error::capacity("oracle time limit reached")),
            _ => Ok(()),
        }
    }
}

/// Exact optimum of a forest instance by the first route that fits the
/// budget: edge subsets, then satisfied sets, then the decomposition program.
pub fn oracle_spcsf(inst: &Instance, budget: &OracleBudget) -> Result<Solution> {
    if inst.graph.edge_count() <= budget.max_edges {
        return oracle_by_edges(inst, budget);
    }
    match oracle_by_satisfied_sets(inst, budget) {
        Err(Error::Capacity(first)) if inst.penalty.is_additive() => {
            oracle_pcsf_td(inst, budget).map_err(|e| match e {
                Error::Capacity(second) => Error::capacity(format!("{first}; {second}")),
                other => other,
            })
        }
        other => other,
    }
}

/// Exact optimum for the given problem kind.
pub fn oracle_solve(inst: &Instance, problem: Problem, budget: &OracleBudget) -> Result<Solution> {
    match problem {
        Problem::Forest => oracle_spcsf(inst, budget),
        Problem::Tree => {
            let r = inst.require_root()?;
            let sol = oracle_spcsf(inst, budget)?;
            root_component(inst, &sol, r)
        }
        Problem::Tour => oracle_tour(inst, budget),
        Problem::Stroll => oracle_stroll(inst, budget),
    }
}

/// Keeps only the edges in the root's component; on rooted instances no
/// demand depends on the others.
fn root_component(inst: &Instance, sol: &Solution, r: usize) -> Result<Solution> {
    let g = &inst.graph;
    let mut uf = UnionFind::new(g.vertex_count());
    for &e in &sol.edges {
        uf.union(g.edge(e).u, g.edge(e).v);
    }
    let kept: Vec<_> = sol.edges.iter().copied().filter(|&e| uf.same(g.edge(e).u, r)).collect();
    let out = solution_cost(inst, &g.spanning_forest(&kept))?;
    if out.total > sol.total {
        return Err(Error::Internal("root component costs more than the forest".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::instance::Demand;
    use crate::penalty::PenaltyFn;
    use crate::rational::int;

    fn k2(c: i64, p: i64) -> Instance {
        let g = Graph::from_edges(2, [(0, 1, int(c))]).unwrap();
        Instance::new(g, vec![Demand { s: 0, t: 1 }], PenaltyFn::additive(vec![int(p)]).unwrap(), Some(0)).unwrap()
    }

    #[test]
    fn k2_examples() {
        let b = OracleBudget::default();
        let buy = oracle_spcsf(&k2(2, 10), &b).unwrap();
        assert_eq!((buy.total, buy.edges), (int(2), vec![0]));
        let pay = oracle_spcsf(&k2(2, 1), &b).unwrap();
        assert_eq!((pay.total, pay.edges), (int(1), vec![]));
        assert_eq!(oracle_solve(&k2(2, 10), Problem::Tree, &b).unwrap().total, int(2));
    }

    #[test]
    fn triangle_buys_two_edges() {
        let g = Graph::from_edges(3, [(0, 1, int(1)), (1, 2, int(1)), (0, 2, int(1))]).unwrap();
        let demands = vec![Demand { s: 0, t: 1 }, Demand { s: 1, t: 2 }];
        let inst = Instance::new(g, demands, PenaltyFn::additive(vec![int(5), int(5)]).unwrap(), None).unwrap();
        let b = OracleBudget::default();
        assert_eq!(oracle_by_edges(&inst, &b).unwrap().total, int(2));
        assert_eq!(oracle_by_satisfied_sets(&inst, &b).unwrap().total, int(2));
        assert_eq!(oracle_pcsf_td(&inst, &b).unwrap().total, int(2));
    }

    #[test]
    fn budget_is_enforced() {
        let b = OracleBudget { max_edges: 0, max_terminals: 1, ..OracleBudget::default() };
        assert!(matches!(oracle_by_edges(&k2(1, 1), &b), Err(Error::Capacity(_))));
        assert!(matches!(oracle_by_satisfied_sets(&k2(1, 1), &b), Err(Error::Capacity(_))));
    }

    fn random_instance(n: usize, edges: &[(usize, usize, i64)], demands: &[(usize, usize, i64)], cap: Option<i64>) -> Option<Instance> {
        let g = Graph::from_edges(n, edges.iter().filter(|e| e.0 != e.1).map(|&(u, v, c)| (u, v, int(c)))).ok()?;
        let ds: Vec<_> = demands.iter().filter(|d| d.0 != d.1).collect();
        let values = ds.iter().map(|d| int(d.2)).collect();
        let pen = match cap {
            Some(c) => PenaltyFn::capped(values, int(c)).ok()?,
            None => PenaltyFn::additive(values).ok()?,
        };
        Instance::new(g, ds.iter().map(|d| Demand { s: d.0, t: d.1 }).collect(), pen, None).ok()
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn forest_oracles_agree(
            edges in proptest::collection::vec((0usize..6, 0usize..6, 0i64..6), 0..10),
            demands in proptest::collection::vec((0usize..6, 0usize..6, 0i64..8), 0..4),
            cap in proptest::option::of(1i64..10),
        ) {
            let Some(inst) = random_instance(6, &edges, &demands, cap) else { return Ok(()) };
            let b = OracleBudget::default();
            let a = oracle_by_edges(&inst, &b).unwrap();
            let s = oracle_by_satisfied_sets(&inst, &b).unwrap();
            proptest::prop_assert_eq!(&a.total, &s.total);
            if cap.is_none() {
                proptest::prop_assert_eq!(&a.total, &oracle_pcsf_td(&inst, &b).unwrap().total);
            }
        }

        #[test]
        fn rooted_walks_dominate_trees(
            edges in proptest::collection::vec((0usize..6, 0usize..6, 0i64..6), 0..10),
            terms in proptest::collection::vec((1usize..6, 0i64..8), 0..4),
        ) {
            let Ok(g) = Graph::from_edges(6, edges.iter().filter(|e| e.0 != e.1).map(|&(u, v, c)| (u, v, int(c)))) else { return Ok(()) };
            let ts: Vec<usize> = terms.iter().map(|t| t.0).collect();
            let pen = PenaltyFn::additive(terms.iter().map(|t| int(t.1)).collect()).unwrap();
            let inst = Instance::rooted(g, 0, &ts, pen).unwrap();
            let b = OracleBudget::default();
            let tree = oracle_solve(&inst, Problem::Tree, &b).unwrap().total;
            let stroll = oracle_stroll(&inst, &b).unwrap().total;
            let tour = oracle_tour(&inst, &b).unwrap().total;
            proptest::prop_assert!(tree <= stroll && stroll <= tour);
            proptest::prop_assert!(tour <= &stroll + &stroll);
        }
    }
}
