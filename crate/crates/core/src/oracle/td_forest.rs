//! Exact forests with additive penalties over a tree decomposition of the
//! graph together with its demand pairs.
//!
//! A state partitions the bag by the component of the partial forest
//! holding each vertex, and remembers the demands already decided to join
//! two live components that are not yet connected. A demand is looked at
//! when its first endpoint is forgotten; it is paid when one of its
//! components can no longer grow.

use super::OracleBudget;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::instance::Instance;
use crate::penalty::PenaltyFn;
use crate::rational::{self, Rational};
use crate::solution::{solution_cost, Solution};
use crate::treewidth::dp::{self, Rules, Taken};
use crate::treewidth::partition;
use crate::treewidth::{heuristic_decompose_pairs, to_nice};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    labels: Vec<u8>,
    /// `(demand, a, b)` with `a < b`, sorted.
    pending: Vec<(u32, u8, u8)>,
}

impl State {
    /// Moves pending entries from the labelling `before` to `after`
    /// (position by position), dropping entries whose parts became one.
    fn relabel(&mut self, before: &[u8], after: &[u8]) {
        let mut map = [0u8; 256];
        for (b, a) in before.iter().zip(after) {
            map[*b as usize] = *a;
        }
        for p in &mut self.pending {
            let (x, y) = (map[p.1 as usize], map[p.2 as usize]);
            *p = (p.0, x.min(y), x.max(y));
        }
        self.pending.retain(|p| p.1 != p.2);
        self.pending.sort_unstable();
    }
}

struct ForestRules<'a> {
    graph: &'a Graph,
    cost: Vec<i128>,
    penalty: Vec<i128>,
    /// `(demand, other endpoint)` per vertex.
    incident: Vec<Vec<(u32, VertexId)>>,
}

impl Rules for ForestRules<'_> {
    type State = State;
    type W = i128;

    fn leaf(&self, _v: VertexId) -> Vec<(State, i128)> {
        vec![(State { labels: vec![1], pending: Vec::new() }, 0)]
    }

    fn introduce(&self, v: VertexId, bag: &[VertexId], edges: &[EdgeId], st: &State) -> Vec<(State, i128, Taken)> {
        let pos = bag.binary_search(&v).expect("introduced vertex in bag");
        let mut start = st.labels.clone();
        start.insert(pos, partition::fresh_label(&st.labels));
        let mut options: Vec<(Vec<u8>, i128, Taken)> = vec![(start.clone(), 0, Vec::new())];
        for &e in edges {
            let u = self.graph.edge(e).other(v);
            let pu = bag.binary_search(&u).expect("edge endpoint in bag");
            let mut more = Vec::new();
            for (labels, w, taken) in &options {
                let (a, b) = (labels[pos], labels[pu]);
                if a != b {
                    let mut l = labels.clone();
                    partition::merge(&mut l, a.min(b), a.max(b));
                    let mut t = taken.clone();
                    t.push((e, 1));
                    more.push((l, w + self.cost[e], t));
                }
            }
            options.extend(more);
        }
        options
            .into_iter()
            .map(|(mut labels, w, taken)| {
                partition::canonicalize(&mut labels);
                let mut s = State { labels, pending: st.pending.clone() };
                s.relabel(&start, &s.labels.clone());
                (s, w, taken)
            })
            .collect()
    }

    fn forget(&self, v: VertexId, bag: &[VertexId], st: &State) -> Option<(State, i128)> {
        let pos = bag.binary_search(&v).expect("forgotten vertex in bag");
        let x = st.labels[pos];
        let survives = st.labels.iter().enumerate().any(|(i, &l)| i != pos && l == x);
        let mut paid = 0i128;
        let mut pending = st.pending.clone();
        for &(d, u) in &self.incident[v] {
            let Ok(pu) = bag.binary_search(&u) else { continue };
            let y = st.labels[pu];
            if y == x {
                continue;
            }
            if survives {
                pending.push((d, x.min(y), x.max(y)));
            } else {
                paid += self.penalty[d as usize];
            }
        }
        if !survives {
            pending.retain(|p| {
                let hit = p.1 == x || p.2 == x;
                if hit {
                    paid += self.penalty[p.0 as usize];
                }
                !hit
            });
        }
        let mut before = st.labels.clone();
        before.remove(pos);
        let mut labels = before.clone();
        partition::canonicalize(&mut labels);
        let mut s = State { labels, pending };
        s.relabel(&before, &s.labels.clone());
        Some((s, paid))
    }

    fn join(&self, a: &State, b: &State) -> Option<State> {
        let labels = partition::join(&a.labels, &b.labels)?;
        let mut left = State { labels: labels.clone(), pending: a.pending.clone() };
        left.relabel(&a.labels, &labels);
        let mut right = State { labels: labels.clone(), pending: b.pending.clone() };
        right.relabel(&b.labels, &labels);
        left.pending.extend(right.pending);
        left.pending.sort_unstable();
        Some(left)
    }

    fn accept(&self, st: &State) -> Option<i128> {
        st.pending.is_empty().then_some(0)
    }
}

/// Exact optimum for additive penalties; the state count is bounded by
/// `budget.max_states`.
pub fn oracle_pcsf_td(inst: &Instance, budget: &OracleBudget) -> Result<Solution> {
    let PenaltyFn::Additive { values } = &inst.penalty else {
        return Err(Error::Precondition("the decomposition oracle needs additive penalties".into()));
    };
    let g = &inst.graph;
    let n = g.vertex_count();
    if n == 0 {
        return solution_cost(inst, &[]);
    }
    let costs: Vec<Rational> = g.edges().iter().map(|e| e.cost.clone()).collect();
    let (scaled, denom) = rational::common_scale_all(&[&costs, values], rational::SCALE_LIMIT)
        .ok_or_else(|| Error::capacity("costs are not representable as scaled integers"))?;
    let mut it = scaled.into_iter();
    let (cost, penalty) = (it.next().expect("costs"), it.next().expect("penalties"));
    let mut incident = vec![Vec::new(); n];
    for (d, dm) in inst.demands.iter().enumerate() {
        incident[dm.s].push((d as u32, dm.t));
        incident[dm.t].push((d as u32, dm.s));
    }
    let edge_pairs: Vec<(VertexId, VertexId)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    let all_pairs = edge_pairs.iter().copied().chain(inst.demands.iter().map(|d| (d.s, d.t)));
    let td = heuristic_decompose_pairs(n, all_pairs);
    if td.width() >= 255 {
        return Err(Error::capacity("decomposition too wide for the state encoding"));
    }
    let nice = to_nice(&td, n, None)?;
    let assigned = dp::assign_edges(&nice, &edge_pairs, n)?;
    let rules = ForestRules { graph: g, cost, penalty, incident };
    let found = dp::run(&nice, &rules, &assigned, budget.max_states)?
        .ok_or_else(|| Error::Internal("no accepted root state".into()))?;
    let sol = solution_cost(inst, &found.edges)?;
    let value = rational::from_scaled(found.value, &denom);
    if sol.total != value {
        return Err(Error::Internal(format!(
            "decomposition witness costs {} but the table holds {}",
            rational::format(&sol.total),
            rational::format(&value)
        )));
    }
    Ok(sol)
}
