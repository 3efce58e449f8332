//! Merging the trees of a forest by moat growth with vertex potentials.
//!
//! Each contracted tree `T` carries the potential `ε⁻¹·length(T)`; every
//! other vertex carries zero. Clusters grow while the dual credited inside
//! them is below their total potential, merge along tight edges, and the
//! clusters that ran out of potential are pruned where they hang by a
//! single edge.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::contract::{contract_components, Contraction};
use crate::clustering::{prune_forest, Cluster, Merge};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, UnionFind, VertexId};
use crate::instance::Instance;
use crate::penalty::DemandSet;
use crate::rational::{self, Rational};

/// One output tree `T̂_i` with its demand class `𝒟_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeTree {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    #[serde(with = "crate::rational::serde_text")]
    pub length: Rational,
    pub demands: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct MergeOutput {
    pub trees: Vec<MergeTree>,
    pub contraction: Contraction,
    /// `φ` per contracted vertex.
    pub potentials: Vec<Rational>,
    /// Original ids of the edges added between trees.
    pub added: Vec<EdgeId>,
    pub forest_length: Rational,
    /// `Σ length(T̂_i)`.
    pub total_length: Rational,
    /// `(2/ε + 1)·length(F)`.
    pub bound: Rational,
    pub iterations: usize,
}

impl MergeOutput {
    pub fn bound_holds(&self) -> bool {
        self.total_length <= self.bound
    }
}

struct Moat {
    clusters: Vec<Cluster>,
    current: Vec<usize>,
    owner: Vec<usize>,
    potential: Vec<Rational>,
    spent: Vec<Rational>,
    dead: Vec<bool>,
}

impl Moat {
    fn active(&self, c: usize) -> bool {
        self.spent[c] < self.potential[c]
    }

    fn mark_deaths(&mut self) {
        for &c in &self.current {
            if !self.active(c) {
                self.dead[c] = true;
            }
        }
    }
}

/// Contracts `forest`, grows moats with potentials `ε⁻¹·length(T)`,
/// prunes, and uncontracts. Every demand in `demands` must be satisfied by
/// `forest`; each lands in the tree holding its endpoints.
pub fn pc_cluster_merge(inst: &Instance, forest: &[EdgeId], demands: &DemandSet, epsilon: &Rational) -> Result<MergeOutput> {
    if !epsilon.is_positive() {
        return Err(Error::domain(format!("epsilon must be positive, got {}", rational::format(epsilon))));
    }
    let g = &inst.graph;
    let contraction = contract_components(g, forest)?;
    let star = &contraction.graph;
    let nv = star.vertex_count();
    let potentials: Vec<Rational> = contraction.trees.iter().map(|t| g.length(t) / epsilon).collect();
    let mut moat = Moat {
        clusters: (0..nv).map(|v| Cluster { members: vec![v], merge: None }).collect(),
        current: (0..nv).collect(),
        owner: (0..nv).collect(),
        potential: potentials.clone(),
        spent: vec![Rational::zero(); nv],
        dead: vec![false; nv],
    };
    moat.mark_deaths();
    let mut load = vec![Rational::zero(); star.edge_count()];
    let mut merged: Vec<EdgeId> = Vec::new();
    let mut iterations = 0;
    let limit = 2 * nv + 1;
    loop {
        let active: Vec<usize> = moat.current.iter().copied().filter(|&c| moat.active(c)).collect();
        if active.is_empty() {
            break;
        }
        iterations += 1;
        if iterations > limit {
            return Err(Error::Internal(format!("merge growth exceeded {limit} iterations")));
        }
        let mut eta: Option<Rational> = None;
        let mut consider = |x: Rational| {
            if eta.as_ref().is_none_or(|e| x < *e) {
                eta = Some(x);
            }
        };
        for &c in &active {
            consider(&moat.potential[c] - &moat.spent[c]);
        }
        let rates: Vec<u32> = star
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = (moat.owner[e.u], moat.owner[e.v]);
                if a == b {
                    0
                } else {
                    u32::from(moat.active(a)) + u32::from(moat.active(b))
                }
            })
            .collect();
        for (id, e) in star.edges().iter().enumerate() {
            if rates[id] > 0 {
                consider((&e.cost - &load[id]) / Rational::from_integer(rates[id].into()));
            }
        }
        let eta = eta.expect("an active cluster bounds the step");
        for &c in &active {
            moat.spent[c] += &eta;
        }
        for (id, &r) in rates.iter().enumerate() {
            if r > 0 {
                load[id] += &eta * Rational::from_integer(r.into());
            }
        }
        // merge tight edges next to an active cluster, lowest id first, to a fixpoint
        loop {
            let tight = star.edges().iter().enumerate().find(|(id, e)| {
                let (a, b) = (moat.owner[e.u], moat.owner[e.v]);
                a != b && (moat.active(a) || moat.active(b)) && load[*id] == e.cost
            });
            let Some((id, e)) = tight else { break };
            let (a, b) = (moat.owner[e.u], moat.owner[e.v]);
            let mut members = moat.clusters[a].members.clone();
            members.extend_from_slice(&moat.clusters[b].members);
            members.sort_unstable();
            let new = moat.clusters.len();
            for &v in &members {
                moat.owner[v] = new;
            }
            moat.clusters.push(Cluster { members, merge: Some(Merge { left: a, right: b, edge: id }) });
            moat.potential.push(&moat.potential[a] + &moat.potential[b]);
            moat.spent.push(&moat.spent[a] + &moat.spent[b]);
            moat.dead.push(false);
            moat.current.retain(|&c| c != a && c != b);
            moat.current.push(new);
            merged.push(id);
        }
        moat.mark_deaths();
    }
    let (kept, _) = prune_forest(star, &moat.clusters, &moat.dead, &merged);
    let mut added: Vec<EdgeId> = kept.iter().map(|&e| contraction.origin[e]).collect();
    added.sort_unstable();
    let mut union: Vec<EdgeId> = forest.to_vec();
    union.extend(&added);
    let union = g.spanning_forest(&union);

    let n = g.vertex_count();
    let mut uf = UnionFind::new(n);
    for &e in &union {
        uf.union(g.edge(e).u, g.edge(e).v);
    }
    let mut tree_of_root: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    let mut trees: Vec<MergeTree> = Vec::new();
    for &e in forest {
        let r = uf.find(g.edge(e).u);
        tree_of_root.entry(r).or_insert(usize::MAX);
    }
    // number trees by their smallest vertex
    for v in 0..n {
        let r = uf.find(v);
        if let Some(slot) = tree_of_root.get_mut(&r) {
            if *slot == usize::MAX {
                *slot = trees.len();
                trees.push(MergeTree { vertices: Vec::new(), edges: Vec::new(), length: Rational::zero(), demands: Vec::new() });
            }
            trees[*slot].vertices.push(v);
        }
    }
    for &e in &union {
        let Some(&t) = tree_of_root.get(&uf.find(g.edge(e).u)) else {
            return Err(Error::Internal(format!("added edge {e} joins no tree of the forest")));
        };
        trees[t].edges.push(e);
        trees[t].length += &g.edge(e).cost;
    }
    for d in demands.iter() {
        let dm = inst.demands[d];
        let (rs, rt) = (uf.find(dm.s), uf.find(dm.t));
        match tree_of_root.get(&rs) {
            Some(&t) if rs == rt => trees[t].demands.push(d),
            _ => return Err(Error::Internal(format!("demand {d} is not inside one merged tree"))),
        }
    }
    let forest_length = g.length(forest);
    let total_length = trees.iter().fold(Rational::zero(), |acc, t| acc + &t.length);
    let two = Rational::from_integer(2.into());
    let bound = (two / epsilon + Rational::from_integer(1.into())) * &forest_length;
    Ok(MergeOutput { trees, contraction, potentials, added, forest_length, total_length, bound, iterations })
}
