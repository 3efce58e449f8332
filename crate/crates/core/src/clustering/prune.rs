//! The pruning phase.

use super::growth::GrowthOutput;
use super::Cluster;
use crate::graph::{EdgeId, Graph};
use crate::instance::Instance;

/// Prunes `F₁` against the clusters that cut no surviving demand. Returns
/// the pruned forest and the removed edges in removal order.
pub fn prune(inst: &Instance, growth: &GrowthOutput) -> (Vec<EdgeId>, Vec<EdgeId>) {
    let n = inst.graph.vertex_count();
    let inside = growth.family.membership(n);
    let live: Vec<usize> = (0..inst.demand_count()).filter(|d| !growth.dead.contains(*d)).collect();
    let removable: Vec<bool> = inside
        .iter()
        .map(|row| live.iter().all(|&d| row[inst.demands[d].s] == row[inst.demands[d].t]))
        .collect();
    prune_forest(&inst.graph, &growth.family.clusters, &removable, &growth.forest)
}

/// While some removable cluster has exactly one forest edge on its
/// boundary, drops that edge. Clusters are scanned by decreasing creation
/// index until nothing changes.
pub fn prune_forest(
    graph: &Graph,
    clusters: &[Cluster],
    removable: &[bool],
    forest: &[EdgeId],
) -> (Vec<EdgeId>, Vec<EdgeId>) {
    let n = graph.vertex_count();
    let mut kept = forest.to_vec();
    let mut removed = Vec::new();
    let inside: Vec<Option<Vec<bool>>> = clusters
        .iter()
        .zip(removable)
        .map(|(c, &r)| {
            r.then(|| {
                let mut row = vec![false; n];
                for &v in &c.members {
                    row[v] = true;
                }
                row
            })
        })
        .collect();
    loop {
        let mut changed = false;
        for row in inside.iter().rev().flatten() {
            let mut boundary = kept.iter().enumerate().filter(|(_, &e)| {
                let edge = graph.edge(e);
                row[edge.u] != row[edge.v]
            });
            let first = boundary.next().map(|(i, _)| i);
            if let (Some(i), None) = (first, boundary.next()) {
                removed.push(kept.remove(i));
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    kept.sort_unstable();
    (kept, removed)
}
