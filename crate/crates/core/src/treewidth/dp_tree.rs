//! Exact prize-collecting Steiner tree over a nice decomposition.
//!
//! A state labels each bag vertex as excluded (0) or by the part of the
//! partial tree holding it. Excluded vertices pay their prize when
//! forgotten; an included vertex may only be forgotten while its part still
//! meets the bag, so every part eventually joins the root.

use num_traits::Zero;

use super::dp::{self, DpSolution, DpStats, Rules, Taken};
use super::nice::NiceDecomposition;
use super::partition;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::instance::Instance;
use crate::rational::{self, Rational};
use crate::solution::{solution_cost, Solution};

/// Default bound on stored states.
pub const STATE_BUDGET: usize = 20_000_000;

struct TreeRules<'a, W> {
    graph: &'a Graph,
    cost: Vec<W>,
    prize: Vec<W>,
    root: VertexId,
}

impl<W> Rules for TreeRules<'_, W>
where
    W: Clone + Ord + std::ops::Add<Output = W> + Zero,
{
    type State = Vec<u8>;
    type W = W;

    fn leaf(&self, v: VertexId) -> Vec<(Vec<u8>, W)> {
        if v == self.root {
            vec![(vec![1], W::zero())]
        } else {
            vec![(vec![0], W::zero()), (vec![1], W::zero())]
        }
    }

    fn introduce(&self, v: VertexId, bag: &[VertexId], edges: &[EdgeId], st: &Vec<u8>) -> Vec<(Vec<u8>, W, Taken)> {
        let pos = bag.binary_search(&v).expect("introduced vertex in bag");
        let mut out = Vec::new();
        if v != self.root {
            let mut s = st.clone();
            s.insert(pos, 0);
            out.push((s, W::zero(), Vec::new()));
        }
        let mut s = st.clone();
        s.insert(pos, partition::fresh_label(st));
        let mut options: Vec<(Vec<u8>, W, Taken)> = vec![(s, W::zero(), Vec::new())];
        for &e in edges {
            let u = self.graph.edge(e).other(v);
            let pu = bag.binary_search(&u).expect("edge endpoint in bag");
            let mut more = Vec::new();
            for (labels, w, taken) in &options {
                let (a, b) = (labels[pos], labels[pu]);
                if b != 0 && a != b {
                    let mut l = labels.clone();
                    partition::merge(&mut l, a.min(b), a.max(b));
                    let mut t = taken.clone();
                    t.push((e, 1));
                    more.push((l, w.clone() + self.cost[e].clone(), t));
                }
            }
            options.extend(more);
        }
        for (mut l, w, t) in options {
            partition::canonicalize(&mut l);
            out.push((l, w, t));
        }
        out
    }

    fn forget(&self, v: VertexId, bag: &[VertexId], st: &Vec<u8>) -> Option<(Vec<u8>, W)> {
        let pos = bag.binary_search(&v).expect("forgotten vertex in bag");
        let x = st[pos];
        let mut s = st.clone();
        s.remove(pos);
        if x == 0 {
            return Some((s, self.prize[v].clone()));
        }
        if !s.contains(&x) {
            return None;
        }
        partition::canonicalize(&mut s);
        Some((s, W::zero()))
    }

    fn join(&self, a: &Vec<u8>, b: &Vec<u8>) -> Option<Vec<u8>> {
        partition::join(a, b)
    }

    fn accept(&self, st: &Vec<u8>) -> Option<W> {
        (st.as_slice() == [1]).then(W::zero)
    }
}

/// An exact result together with table statistics.
#[derive(Clone, Debug)]
pub struct DpResult {
    pub solution: Solution,
    pub stats: DpStats,
}

/// Checks that `nice` decomposes the instance graph and is rooted at the
/// instance root.
pub(crate) fn check_rooted(inst: &Instance, nice: &NiceDecomposition) -> Result<VertexId> {
    let r = inst.require_root()?;
    let problems = nice.validate(&inst.graph);
    if !problems.is_empty() {
        return Err(Error::domain(format!("invalid nice decomposition: {}", problems.join("; "))));
    }
    if nice.nodes[nice.root()].bag != [r] {
        return Err(Error::domain(format!("nice decomposition must end in the bag {{{r}}}")));
    }
    Ok(r)
}

/// Converts a scaled or exact optimum into a checked [`Solution`].
pub(crate) fn finish<W>(inst: &Instance, found: Option<DpSolution<W>>, to_rational: impl Fn(&W) -> Rational) -> Result<DpResult> {
    let found = found.ok_or_else(|| Error::Internal("no accepted root state".into()))?;
    let value = to_rational(&found.value);
    let solution = solution_cost(inst, &found.edges)?;
    if solution.total != value {
        return Err(Error::Internal(format!(
            "witness costs {} but the table holds {}",
            rational::format(&solution.total),
            rational::format(&value)
        )));
    }
    Ok(DpResult { solution, stats: found.stats })
}

/// Optimal prize-collecting Steiner tree through the root; penalties must
/// be additive over rooted demands.
pub fn dp_pcst(inst: &Instance, nice: &NiceDecomposition) -> Result<DpResult> {
    let root = check_rooted(inst, nice)?;
    let prize = inst.vertex_penalties()?;
    let n = inst.graph.vertex_count();
    let pairs: Vec<_> = inst.graph.edges().iter().map(|e| (e.u, e.v)).collect();
    let assigned = dp::assign_edges(nice, &pairs, n)?;
    let costs: Vec<Rational> = inst.graph.edges().iter().map(|e| e.cost.clone()).collect();
    match rational::common_scale_all(&[&costs, &prize], rational::SCALE_LIMIT) {
        Some((scaled, denom)) => {
            let mut it = scaled.into_iter();
            let rules = TreeRules { graph: &inst.graph, cost: it.next().unwrap(), prize: it.next().unwrap(), root };
            let found = dp::run(nice, &rules, &assigned, STATE_BUDGET)?;
            finish(inst, found, |w| rational::from_scaled(*w, &denom))
        }
        None => {
            let rules = TreeRules { graph: &inst.graph, cost: costs, prize, root };
            let found = dp::run(nice, &rules, &assigned, STATE_BUDGET)?;
            finish(inst, found, Rational::clone)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::penalty::PenaltyFn;
    use crate::rational::int;
    use crate::treewidth::{heuristic_decompose, to_nice};

    fn k2(c: i64, p: i64) -> Instance {
        let g = Graph::from_edges(2, [(0, 1, int(c))]).unwrap();
        Instance::rooted(g, 0, &[1], PenaltyFn::additive(vec![int(p)]).unwrap()).unwrap()
    }

    fn solve(inst: &Instance) -> DpResult {
        let nice = to_nice(&heuristic_decompose(&inst.graph), inst.graph.vertex_count(), inst.root).unwrap();
        dp_pcst(inst, &nice).unwrap()
    }

    #[test]
    fn two_choices_on_an_edge() {
        assert_eq!(solve(&k2(3, 5)).solution.total, int(3));
        assert_eq!(solve(&k2(3, 2)).solution.total, int(2));
        assert_eq!(solve(&k2(3, 2)).solution.edges, Vec::<EdgeId>::new());
    }

    #[test]
    fn no_prizes_costs_nothing() {
        let g = Graph::from_edges(3, [(0, 1, int(1)), (1, 2, int(1))]).unwrap();
        let inst = Instance::rooted(g, 1, &[], PenaltyFn::additive(vec![]).unwrap()).unwrap();
        assert_eq!(solve(&inst).solution.total, int(0));
    }

    #[test]
    fn wrong_root_bag_is_rejected() {
        let inst = k2(1, 1);
        let nice = to_nice(&heuristic_decompose(&inst.graph), 2, Some(1)).unwrap();
        assert!(matches!(dp_pcst(&inst, &nice), Err(Error::Domain(_))));
    }
}
