//! Restricting the demand set.

use num_traits::Signed;

use crate::clustering::{submodular_pc_clustering, ClusteringOutput};
use crate::error::{Error, Result};
use crate::graph::EdgeId;
use crate::instance::Instance;
use crate::oracle::{oracle_spcsf, OracleBudget};
use crate::penalty::DemandSet;
use crate::rational::{self, Rational};
use crate::solution::{solution_cost, Solution};

/// Supplies the starting solution `(F⁺, 𝒟⁺)`.
pub trait InitialSolver {
    fn name(&self) -> &'static str;
    fn solve(&self, inst: &Instance) -> Result<Solution>;
}

/// The exact oracle.
#[derive(Clone, Debug, Default)]
pub struct ExactInitial {
    pub budget: OracleBudget,
}

impl InitialSolver for ExactInitial {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn solve(&self, inst: &Instance) -> Result<Solution> {
        oracle_spcsf(inst, &self.budget)
    }
}

/// The clustering forest on the unmodified instance.
#[derive(Clone, Copy, Debug, Default)]
pub struct ClusteringInitial;

impl InitialSolver for ClusteringInitial {
    fn name(&self) -> &'static str {
        "cluster"
    }

    fn solve(&self, inst: &Instance) -> Result<Solution> {
        let out = submodular_pc_clustering(inst)?;
        solution_cost(inst, &out.forest)
    }
}

#[derive(Clone, Debug)]
pub struct RestrictOutput {
    pub epsilon: Rational,
    /// `F`: the clustering forest joined with `F⁺`, reduced to a spanning
    /// forest, measured in the original graph.
    pub forest: Vec<EdgeId>,
    pub length: Rational,
    pub satisfied: DemandSet,
    pub unsatisfied: DemandSet,
    pub initial: Solution,
    pub clustering: ClusteringOutput,
    /// `(G, 𝒟ˢᵃᵗ, π′)` with `π′(D) = π(D ∪ 𝒟ᵘⁿˢᵃᵗ) − π(𝒟ᵘⁿˢᵃᵗ)`; the
    /// demands are `satisfied` in ascending order.
    pub restricted: Instance,
    /// `π(𝒟ᵘⁿˢᵃᵗ)`.
    pub base: Rational,
}

/// Runs the clustering on `G*` (the edges of `F⁺` at cost zero) with
/// penalties `π/ε`; the dead demands are dropped.
pub fn restrict_demands(inst: &Instance, epsilon: &Rational, initial: &dyn InitialSolver) -> Result<RestrictOutput> {
    if !epsilon.is_positive() {
        return Err(Error::domain(format!("epsilon must be positive, got {}", rational::format(epsilon))));
    }
    let start = initial.solve(inst)?;
    let g = &inst.graph;
    let mut costs: Vec<Rational> = g.edges().iter().map(|e| e.cost.clone()).collect();
    for &e in &start.edges {
        costs[e] = Rational::default();
    }
    let scaled = inst.penalty.scaled(&epsilon.recip())?;
    let star = Instance::new(g.with_costs(costs)?, inst.demands.clone(), scaled, inst.root)?;
    let clustering = submodular_pc_clustering(&star)?;
    let mut joined = clustering.forest.clone();
    joined.extend(&start.edges);
    let forest = g.spanning_forest(&joined);
    let length = g.length(&forest);
    let unsatisfied = clustering.dead.clone();
    let satisfied = inst.all_demands().difference(&unsatisfied);
    let check = solution_cost(inst, &forest)?;
    if !satisfied.is_subset(&check.satisfied) {
        return Err(Error::Internal("restricted forest misses a surviving demand".into()));
    }
    let (restricted, base) = inst.restricted_to(&satisfied.to_vec())?;
    Ok(RestrictOutput {
        epsilon: epsilon.clone(),
        forest,
        length,
        satisfied,
        unsatisfied,
        initial: start,
        clustering,
        restricted,
        base,
    })
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
        Instance::new(g, vec![Demand { s: 0, t: 1 }], PenaltyFn::additive(vec![int(p)]).unwrap(), None).unwrap()
    }

    #[test]
    fn cheap_penalty_is_dropped() {
        let out = restrict_demands(&k2(100, 1), &int(1), &ExactInitial::default()).unwrap();
        assert!(out.forest.is_empty());
        assert_eq!(out.unsatisfied.to_vec(), vec![0]);
        assert_eq!(out.base, int(1));
        assert_eq!(out.restricted.demand_count(), 0);
    }

    #[test]
    fn expensive_penalty_keeps_the_edge() {
        let out = restrict_demands(&k2(100, 1000), &int(1), &ExactInitial::default()).unwrap();
        assert_eq!(out.initial.edges, vec![0]);
        assert_eq!(out.forest, vec![0]);
        assert!(out.unsatisfied.is_empty());
    }

    #[test]
    fn satisfied_start_sees_zero_lengths() {
        let g = Graph::from_edges(3, [(0, 1, int(1)), (1, 2, int(1))]).unwrap();
        let inst = Instance::new(g, vec![Demand { s: 0, t: 2 }], PenaltyFn::additive(vec![int(50)]).unwrap(), None).unwrap();
        let out = restrict_demands(&inst, &crate::rational::ratio(1, 2), &ExactInitial::default()).unwrap();
        assert_eq!(out.forest, out.initial.edges);
        assert!(out.unsatisfied.is_empty());
    }

    #[test]
    fn nonpositive_epsilon_is_rejected() {
        assert!(matches!(restrict_demands(&k2(1, 1), &int(0), &ClusteringInitial), Err(Error::Domain(_))));
    }
}
