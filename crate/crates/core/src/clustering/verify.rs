//! Independent re-checks of a clustering run, recomputed from scratch.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{ClusteringOutput, DualState, LaminarFamily};
use crate::graph::{EdgeId, UnionFind};
use crate::instance::Instance;
use crate::penalty::{DemandSet, MAX_EXHAUSTIVE_AXIOM_GROUND};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

fn violation(check: &str, detail: String) -> Violation {
    Violation { check: check.into(), detail }
}

/// Nonnegativity, crossing support, edge constraints and penalty
/// constraints. Penalty constraints are checked on every subset when there
/// are at most twelve demands, otherwise on singletons and `extra` sets.
pub fn check_dual_feasibility(
    inst: &Instance,
    family: &LaminarFamily,
    dual: &DualState,
    extra: &[DemandSet],
) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = inst.graph.vertex_count();
    let k = inst.demand_count();
    let inside = family.membership(n);
    for (&(c, d), v) in &dual.entries {
        if c >= family.clusters.len() || d >= k {
            out.push(violation("dual-index", format!("entry ({c},{d}) names an unknown cluster or demand")));
            continue;
        }
        if v.is_negative() {
            out.push(violation("dual-nonnegative", format!("y[{c},{d}] = {}", rational::format(v))));
        }
        let dm = inst.demands[d];
        if !v.is_zero() && inside[c][dm.s] == inside[c][dm.t] {
            out.push(violation("dual-crossing", format!("y[{c},{d}] > 0 but demand {d} does not cross cluster {c}")));
        }
    }
    if !out.is_empty() {
        return out;
    }
    let ys = dual.cluster_totals(family.clusters.len());
    for (id, e) in inst.graph.edges().iter().enumerate() {
        let load = inside
            .iter()
            .zip(&ys)
            .filter(|(row, _)| row[e.u] != row[e.v])
            .fold(Rational::zero(), |acc, (_, y)| acc + y);
        if load > e.cost {
            out.push(violation(
                "edge-feasibility",
                format!("edge {id}: load {} exceeds cost {}", rational::format(&load), rational::format(&e.cost)),
            ));
        }
    }
    let yd = dual.demand_totals(k);
    let mut check_set = |set: &DemandSet| {
        let y = set.iter().fold(Rational::zero(), |acc, d| acc + &yd[d]);
        let pi = inst.penalty.eval(set).unwrap_or_default();
        if y > pi {
            out.push(violation(
                "penalty-feasibility",
                format!("y({:?}) = {} exceeds π = {}", set.to_vec(), rational::format(&y), rational::format(&pi)),
            ));
        }
    };
    if k <= MAX_EXHAUSTIVE_AXIOM_GROUND {
        for mask in 1..1u64 << k {
            check_set(&DemandSet::from_mask(mask));
        }
    } else {
        for d in 0..k {
            check_set(&DemandSet::from_iter([d]));
        }
        for s in extra {
            check_set(s);
        }
    }
    out
}

/// Laminarity of `𝒮`, the merge records, and that the current clusters
/// partition the vertex set.
pub fn check_laminar(n: usize, family: &LaminarFamily) -> Vec<Violation> {
    let mut out = Vec::new();
    let inside = family.membership(n);
    let count = family.clusters.len();
    for a in 0..count {
        for b in a + 1..count {
            let (mut ab, mut ba, mut both) = (false, false, false);
            for v in 0..n {
                match (inside[a][v], inside[b][v]) {
                    (true, true) => both = true,
                    (true, false) => ab = true,
                    (false, true) => ba = true,
                    _ => {}
                }
            }
            if both && ab && ba {
                out.push(violation("laminar", format!("clusters {a} and {b} overlap without nesting")));
            }
        }
    }
    for (id, c) in family.clusters.iter().enumerate() {
        match c.merge {
            None if c.members.len() != 1 => {
                out.push(violation("merge-record", format!("cluster {id} has {} members but no children", c.members.len())))
            }
            Some(m) => {
                if m.left >= id || m.right >= id {
                    out.push(violation("merge-record", format!("cluster {id} has a child created later")));
                    continue;
                }
                let mut union = family.clusters[m.left].members.clone();
                union.extend_from_slice(&family.clusters[m.right].members);
                union.sort_unstable();
                if union != c.members || inside[m.left].iter().zip(&inside[m.right]).any(|(x, y)| *x && *y) {
                    out.push(violation("merge-record", format!("cluster {id} is not the disjoint union of its children")));
                }
            }
            None => {}
        }
    }
    let mut seen = vec![0usize; n];
    for &c in &family.current {
        if let Some(cluster) = family.clusters.get(c) {
            for &v in &cluster.members {
                seen[v] += 1;
            }
        }
    }
    if seen.iter().any(|&s| s != 1) {
        out.push(violation("partition", "current clusters do not partition the vertices".into()));
    }
    out
}

/// The three guarantees of the growth phase: dead demands are paid for
/// exactly by the dual, surviving demands are connected by the forest, and
/// `length(F) ≤ 2·y(𝒟)`.
pub fn check_growth_guarantees(inst: &Instance, forest: &[EdgeId], dead: &DemandSet, dual: &DualState) -> Vec<Violation> {
    let mut out = Vec::new();
    let y_dead = dual.total_of(dead);
    match inst.penalty.eval(dead) {
        Ok(pi) if pi == y_dead => {}
        Ok(pi) => out.push(violation(
            "dead-tight",
            format!("y(dead) = {} but π(dead) = {}", rational::format(&y_dead), rational::format(&pi)),
        )),
        Err(e) => out.push(violation("dead-tight", e.to_string())),
    }
    let mut uf = UnionFind::new(inst.graph.vertex_count());
    for &e in forest {
        if e >= inst.graph.edge_count() {
            out.push(violation("forest", format!("edge {e} is not in the graph")));
            return out;
        }
        uf.union(inst.graph.edge(e).u, inst.graph.edge(e).v);
    }
    for (d, dm) in inst.demands.iter().enumerate() {
        if !dead.contains(d) && !uf.same(dm.s, dm.t) {
            out.push(violation("live-satisfied", format!("demand {d} is neither dead nor connected")));
        }
    }
    let length = inst.graph.length(forest);
    let bound = dual.total() * Rational::from_integer(2.into());
    if length > bound {
        out.push(violation(
            "length-bound",
            format!("length {} exceeds 2·y(𝒟) = {}", rational::format(&length), rational::format(&bound)),
        ));
    }
    out
}

/// Every check above plus the structural relations between `F₁`, `F₂` and
/// the family.
pub fn verify_clustering(inst: &Instance, out: &ClusteringOutput) -> Vec<Violation> {
    let n = inst.graph.vertex_count();
    let mut report = check_laminar(n, &out.family);
    if !report.is_empty() {
        return report;
    }
    report.extend(check_dual_feasibility(inst, &out.family, &out.dual, std::slice::from_ref(&out.dead)));
    report.extend(check_growth_guarantees(inst, &out.forest, &out.dead, &out.dual));
    if out.grown.iter().chain(&out.forest).any(|&e| e >= inst.graph.edge_count()) {
        report.push(violation("forest", "edge id out of range".into()));
        return report;
    }
    if !out.forest.iter().all(|e| out.grown.contains(e)) {
        report.push(violation("forest", "pruned forest is not contained in the grown forest".into()));
    }
    if !inst.graph.is_forest(&out.grown) {
        report.push(violation("forest", "grown edges contain a cycle".into()));
    }
    // F₁ restricted to each cluster is connected
    let inside = out.family.membership(n);
    for (id, row) in inside.iter().enumerate() {
        let mut uf = UnionFind::new(n);
        for &e in &out.grown {
            let edge = inst.graph.edge(e);
            if row[edge.u] && row[edge.v] {
                uf.union(edge.u, edge.v);
            }
        }
        let members = &out.family.clusters[id].members;
        if members.iter().any(|&v| !uf.same(v, members[0])) {
            report.push(violation("cluster-connected", format!("grown forest inside cluster {id} is disconnected")));
        }
    }
    report
}
