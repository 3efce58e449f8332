//! Submodular prize-collecting clustering: a primal-dual growth phase that
//! builds a forest `F₁` and a feasible dual `y`, followed by a pruning phase
//! that yields the final forest `F₂` and the set of dead demands.

mod growth;
mod prune;
mod trace;
mod verify;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{EdgeId, VertexId};
use crate::instance::Instance;
use crate::penalty::DemandSet;
use crate::rational::{self, Rational};

pub use growth::{grow, GrowthOutput, GrowthRun};
pub use prune::{prune, prune_forest};
pub use trace::{y_hash, TraceEvent, TraceKind};
pub use verify::{
    check_dual_feasibility, check_growth_guarantees, check_laminar, verify_clustering, Violation,
};

/// One member of the laminar family `𝒮`; its index is its creation index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    /// Sorted vertex ids.
    pub members: Vec<VertexId>,
    /// The two merged clusters and the edge joining them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub merge: Option<Merge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub edge: EdgeId,
}

impl Cluster {
    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

/// Every cluster ever created plus the current partition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaminarFamily {
    pub clusters: Vec<Cluster>,
    /// Ids of the maximal clusters; they partition the vertex set.
    pub current: Vec<usize>,
}

impl LaminarFamily {
    pub fn singletons(n: usize) -> Self {
        LaminarFamily {
            clusters: (0..n).map(|v| Cluster { members: vec![v], merge: None }).collect(),
            current: (0..n).collect(),
        }
    }

    /// Membership table `inside[c][v]`.
    pub fn membership(&self, n: usize) -> Vec<Vec<bool>> {
        self.clusters
            .iter()
            .map(|c| {
                let mut row = vec![false; n];
                for &v in &c.members {
                    row[v] = true;
                }
                row
            })
            .collect()
    }
}

/// The sparse dual `y_{S,d}` keyed by (cluster id, demand id).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualState {
    pub entries: BTreeMap<(usize, usize), Rational>,
}

impl DualState {
    pub fn get(&self, cluster: usize, demand: usize) -> Rational {
        self.entries.get(&(cluster, demand)).cloned().unwrap_or_default()
    }

    pub fn add(&mut self, cluster: usize, demand: usize, amount: &Rational) {
        *self.entries.entry((cluster, demand)).or_insert_with(Rational::zero) += amount;
    }

    /// `y_d` for each of `k` demands.
    pub fn demand_totals(&self, k: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); k];
        for ((_, d), v) in &self.entries {
            out[*d] += v;
        }
        out
    }

    /// `y_S` for each of `clusters` clusters.
    pub fn cluster_totals(&self, clusters: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); clusters];
        for ((c, _), v) in &self.entries {
            out[*c] += v;
        }
        out
    }

    /// `y(D)`.
    pub fn total_of(&self, set: &DemandSet) -> Rational {
        self.entries.iter().filter(|((_, d), _)| set.contains(*d)).fold(Rational::zero(), |acc, (_, v)| acc + v)
    }

    pub fn total(&self) -> Rational {
        self.entries.values().fold(Rational::zero(), |acc, v| acc + v)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct DualEntry {
    cluster: usize,
    demand: usize,
    value: String,
}

impl Serialize for DualState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<DualEntry> = self
            .entries
            .iter()
            .map(|(&(cluster, demand), v)| DualEntry { cluster, demand, value: rational::format(v) })
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DualState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<DualEntry>::deserialize(d)?;
        let mut entries = BTreeMap::new();
        for r in rows {
            let v = rational::parse(&r.value).map_err(serde::de::Error::custom)?;
            entries.insert((r.cluster, r.demand), v);
        }
        Ok(DualState { entries })
    }
}

/// Result of [`submodular_pc_clustering`]; also the artifact checked by
/// [`verify_clustering`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusteringOutput {
    /// The pruned forest `F₂`.
    pub forest: Vec<EdgeId>,
    /// The forest `F₁` before pruning.
    pub grown: Vec<EdgeId>,
    pub dead: DemandSet,
    pub family: LaminarFamily,
    pub dual: DualState,
    pub iterations: usize,
    pub trace: Vec<TraceEvent>,
}

impl ClusteringOutput {
    pub fn satisfied(&self, inst: &Instance) -> DemandSet {
        inst.all_demands().difference(&self.dead)
    }
}

/// Growth followed by pruning.
pub fn submodular_pc_clustering(inst: &Instance) -> Result<ClusteringOutput> {
    let growth = grow(inst)?;
    let (forest, pruned) = prune(inst, &growth);
    let mut trace = growth.trace;
    let hash = y_hash(&growth.dual);
    for e in pruned {
        trace.push(TraceEvent {
            step: trace.len(),
            kind: TraceKind::Prune,
            eta: None,
            clusters: vec![],
            edge: Some(e),
            demands: vec![],
            y_hash: hash.clone(),
        });
    }
    Ok(ClusteringOutput {
        forest,
        grown: growth.forest,
        dead: growth.dead,
        family: growth.family,
        dual: growth.dual,
        iterations: growth.iterations,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::instance::Demand;
    use crate::penalty::PenaltyFn;
    use crate::rational::{int, ratio};

    fn k2(cost: i64, penalty: i64) -> Instance {
        let g = Graph::from_edges(2, [(0, 1, int(cost))]).unwrap();
        Instance::new(g, vec![Demand { s: 0, t: 1 }], PenaltyFn::additive(vec![int(penalty)]).unwrap(), None).unwrap()
    }

    #[test]
    fn cheap_edge_is_bought() {
        let inst = k2(2, 10);
        let out = submodular_pc_clustering(&inst).unwrap();
        assert_eq!(out.forest, vec![0]);
        assert!(out.dead.is_empty());
        assert_eq!(out.dual.demand_totals(1), vec![int(2)]);
        assert_eq!(out.iterations, 1);
        assert!(verify_clustering(&inst, &out).is_empty());
    }

    #[test]
    fn cheap_penalty_is_paid() {
        let inst = k2(2, 1);
        let out = submodular_pc_clustering(&inst).unwrap();
        assert!(out.forest.is_empty());
        assert!(out.grown.is_empty());
        assert_eq!(out.dead.to_vec(), vec![0]);
        assert_eq!(out.dual.demand_totals(1), vec![int(1)]);
        assert_eq!(out.trace[0].eta.as_deref(), Some("0.5"));
        assert!(verify_clustering(&inst, &out).is_empty());
    }

    #[test]
    fn no_demands_means_nothing_grows() {
        let g = Graph::from_edges(3, [(0, 1, int(1)), (1, 2, int(0))]).unwrap();
        let inst = Instance::new(g, vec![], PenaltyFn::additive(vec![]).unwrap(), None).unwrap();
        let out = submodular_pc_clustering(&inst).unwrap();
        assert!(out.forest.is_empty());
        assert!(out.dual.entries.is_empty());
        assert_eq!(out.family.clusters.len(), 3);
    }

    #[test]
    fn dead_pendant_is_pruned() {
        // live demand 0–1 on a cheap edge, dead demand 1–2 across an expensive one
        let g = Graph::from_edges(3, [(0, 1, int(2)), (1, 2, int(3))]).unwrap();
        let demands = vec![Demand { s: 0, t: 1 }, Demand { s: 0, t: 2 }];
        let pi = PenaltyFn::additive(vec![int(100), ratio(5, 2)]).unwrap();
        let inst = Instance::new(g, demands, pi, None).unwrap();
        let out = submodular_pc_clustering(&inst).unwrap();
        assert_eq!(out.dead.to_vec(), vec![1]);
        assert_eq!(out.forest, vec![0]);
        assert!(verify_clustering(&inst, &out).is_empty());
    }

    #[test]
    fn all_dead_component_is_removed() {
        // path 0–1–2 grown tight, then the only demand dies once penalty binds
        let g = Graph::from_edges(4, [(0, 1, int(1)), (1, 2, int(1)), (2, 3, int(40))]).unwrap();
        let pi = PenaltyFn::additive(vec![int(6)]).unwrap();
        let inst = Instance::new(g, vec![Demand { s: 0, t: 3 }], pi, None).unwrap();
        let out = submodular_pc_clustering(&inst).unwrap();
        assert_eq!(out.dead.to_vec(), vec![0]);
        assert!(!out.grown.is_empty());
        assert!(out.forest.is_empty());
        assert!(verify_clustering(&inst, &out).is_empty());
    }
}
