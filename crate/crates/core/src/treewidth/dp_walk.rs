//! Exact prize-collecting tours and strolls over a nice decomposition.
//!
//! Edges are taken with multiplicity 0, 1 or 2. A state holds the part
//! labels of the bag, the degree parity of each bag vertex, and the number
//! of forgotten vertices of odd degree (at most two, strolls only).

use num_traits::Zero;

use super::dp::{self, Rules, Taken};
use super::dp_tree::{check_rooted, finish, DpResult, STATE_BUDGET};
use super::nice::NiceDecomposition;
use super::partition;
use crate::error::Result;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::instance::Instance;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct WalkState {
    labels: Vec<u8>,
    parity: Vec<u8>,
    odd: u8,
}

struct WalkRules<'a, W> {
    graph: &'a Graph,
    cost: Vec<W>,
    prize: Vec<W>,
    root: VertexId,
    closed: bool,
}

impl<W> Rules for WalkRules<'_, W>
where
    W: Clone + Ord + std::ops::Add<Output = W> + Zero,
{
    type State = WalkState;
    type W = W;

    fn leaf(&self, v: VertexId) -> Vec<(WalkState, W)> {
        let inc = WalkState { labels: vec![1], parity: vec![0], odd: 0 };
        if v == self.root {
            vec![(inc, W::zero())]
        } else {
            vec![(WalkState { labels: vec![0], parity: vec![0], odd: 0 }, W::zero()), (inc, W::zero())]
        }
    }

    fn introduce(&self, v: VertexId, bag: &[VertexId], edges: &[EdgeId], st: &WalkState) -> Vec<(WalkState, W, Taken)> {
        let pos = bag.binary_search(&v).expect("introduced vertex in bag");
        let mut out = Vec::new();
        if v != self.root {
            let mut s = st.clone();
            s.labels.insert(pos, 0);
            s.parity.insert(pos, 0);
            out.push((s, W::zero(), Vec::new()));
        }
        let mut s = st.clone();
        s.labels.insert(pos, partition::fresh_label(&st.labels));
        s.parity.insert(pos, 0);
        let mut options: Vec<(WalkState, W, Taken)> = vec![(s, W::zero(), Vec::new())];
        for &e in edges {
            let u = self.graph.edge(e).other(v);
            let pu = bag.binary_search(&u).expect("edge endpoint in bag");
            let mut more = Vec::new();
            for (s, w, taken) in &options {
                if s.labels[pu] == 0 {
                    continue;
                }
                for m in 1..=2u8 {
                    let mut n = s.clone();
                    let (a, b) = (n.labels[pos], n.labels[pu]);
                    if a != b {
                        partition::merge(&mut n.labels, a.min(b), a.max(b));
                    }
                    if m == 1 {
                        n.parity[pos] ^= 1;
                        n.parity[pu] ^= 1;
                    }
                    let mut t = taken.clone();
                    t.push((e, m));
                    let mut cost = w.clone();
                    for _ in 0..m {
                        cost = cost + self.cost[e].clone();
                    }
                    more.push((n, cost, t));
                }
            }
            options.extend(more);
        }
        for (mut s, w, t) in options {
            partition::canonicalize(&mut s.labels);
            out.push((s, w, t));
        }
        out
    }

    fn forget(&self, v: VertexId, bag: &[VertexId], st: &WalkState) -> Option<(WalkState, W)> {
        let pos = bag.binary_search(&v).expect("forgotten vertex in bag");
        let x = st.labels[pos];
        let odd = st.parity[pos];
        let mut s = st.clone();
        s.labels.remove(pos);
        s.parity.remove(pos);
        if x == 0 {
            return Some((s, self.prize[v].clone()));
        }
        if !s.labels.contains(&x) {
            return None;
        }
        if odd == 1 {
            if self.closed || s.odd == 2 {
                return None;
            }
            s.odd += 1;
        }
        partition::canonicalize(&mut s.labels);
        Some((s, W::zero()))
    }

    fn join(&self, a: &WalkState, b: &WalkState) -> Option<WalkState> {
        let labels = partition::join(&a.labels, &b.labels)?;
        let odd = a.odd + b.odd;
        if odd > 2 {
            return None;
        }
        let parity = a.parity.iter().zip(&b.parity).map(|(x, y)| x ^ y).collect();
        Some(WalkState { labels, parity, odd })
    }

    fn accept(&self, st: &WalkState) -> Option<W> {
        let ok = st.labels == [1] && if self.closed { st.parity[0] == 0 } else { st.odd + st.parity[0] <= 2 };
        ok.then(W::zero)
    }
}

fn solve_walk(inst: &Instance, nice: &NiceDecomposition, closed: bool) -> Result<DpResult> {
    let root = check_rooted(inst, nice)?;
    let prize = inst.vertex_penalties()?;
    let n = inst.graph.vertex_count();
    let pairs: Vec<_> = inst.graph.edges().iter().map(|e| (e.u, e.v)).collect();
    let assigned = dp::assign_edges(nice, &pairs, n)?;
    let costs: Vec<Rational> = inst.graph.edges().iter().map(|e| e.cost.clone()).collect();
    match rational::common_scale_all(&[&costs, &prize], rational::SCALE_LIMIT) {
        Some((scaled, denom)) => {
            let mut it = scaled.into_iter();
            let rules =
                WalkRules { graph: &inst.graph, cost: it.next().unwrap(), prize: it.next().unwrap(), root, closed };
            let found = dp::run(nice, &rules, &assigned, STATE_BUDGET)?;
            finish(inst, found, |w| rational::from_scaled(*w, &denom))
        }
        None => {
            let rules = WalkRules { graph: &inst.graph, cost: costs, prize, root, closed };
            let found = dp::run(nice, &rules, &assigned, STATE_BUDGET)?;
            finish(inst, found, Rational::clone)
        }
    }
}

/// Optimal prize-collecting tour: a closed walk through the root.
pub fn dp_pctsp(inst: &Instance, nice: &NiceDecomposition) -> Result<DpResult> {
    solve_walk(inst, nice, true)
}

/// Optimal prize-collecting stroll: an open walk through the root with
/// free endpoints.
pub fn dp_pcs(inst: &Instance, nice: &NiceDecomposition) -> Result<DpResult> {
    solve_walk(inst, nice, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::penalty::PenaltyFn;
    use crate::rational::int;
    use crate::solution::{is_closed_walk, is_open_walk};
    use crate::treewidth::{heuristic_decompose, to_nice};

    fn k2(c: i64, p: i64) -> Instance {
        let g = Graph::from_edges(2, [(0, 1, int(c))]).unwrap();
        Instance::rooted(g, 0, &[1], PenaltyFn::additive(vec![int(p)]).unwrap()).unwrap()
    }

    fn nice(inst: &Instance) -> NiceDecomposition {
        to_nice(&heuristic_decompose(&inst.graph), inst.graph.vertex_count(), inst.root).unwrap()
    }

    #[test]
    fn tour_on_an_edge() {
        let inst = k2(3, 10);
        let r = dp_pctsp(&inst, &nice(&inst)).unwrap();
        assert_eq!(r.solution.total, int(6));
        assert_eq!(r.solution.edges, vec![0, 0]);
        assert_eq!(dp_pctsp(&k2(3, 5), &nice(&inst)).unwrap().solution.total, int(5));
    }

    #[test]
    fn stroll_on_an_edge() {
        let inst = k2(3, 10);
        assert_eq!(dp_pcs(&inst, &nice(&inst)).unwrap().solution.total, int(3));
        assert_eq!(dp_pcs(&k2(3, 2), &nice(&inst)).unwrap().solution.total, int(2));
    }

    #[test]
    fn unit_square_tour() {
        let g = Graph::from_edges(4, [(0, 1, int(1)), (1, 2, int(1)), (2, 3, int(1)), (3, 0, int(1))]).unwrap();
        let inst = Instance::rooted(g, 0, &[1, 2, 3], PenaltyFn::additive(vec![int(10); 3]).unwrap()).unwrap();
        let n = nice(&inst);
        let tour = dp_pctsp(&inst, &n).unwrap();
        assert_eq!(tour.solution.total, int(4));
        assert!(is_closed_walk(&inst, &tour.solution.edges, 0));
        let stroll = dp_pcs(&inst, &n).unwrap();
        assert_eq!(stroll.solution.total, int(3));
        assert!(is_open_walk(&inst, &stroll.solution.edges, 0));
    }
}
