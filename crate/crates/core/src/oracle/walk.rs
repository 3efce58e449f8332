//! Held–Karp over the metric closure of the root and terminals.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::enumerate::scaled_costs_and_penalties;
use super::OracleBudget;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId};
use crate::instance::Instance;
use crate::solution::{solution_cost, Solution};

const INF: i128 = i128::MAX / 4;

struct Closure {
    /// `nodes[0]` is the root, the rest are distinct terminals.
    nodes: Vec<VertexId>,
    dist: Vec<Vec<i128>>,
    /// Demand mask served by visiting each node.
    serves: Vec<u64>,
    pen: Vec<i128>,
    full: u64,
}

impl Closure {
    fn new(inst: &Instance, budget: &OracleBudget) -> Result<Self> {
        let r = inst.require_root()?;
        let (cost, pen, _) = scaled_costs_and_penalties(inst)?;
        let mut nodes = vec![r];
        let mut serves = vec![0u64];
        for d in 0..inst.demand_count() {
            let t = inst.terminal(d).expect("rooted demand");
            match nodes.iter().position(|&v| v == t) {
                Some(i) => serves[i] |= 1 << d,
                None => {
                    nodes.push(t);
                    serves.push(1 << d);
                }
            }
        }
        if nodes.len() - 1 > budget.max_terminals {
            return Err(Error::capacity(format!(
                "{} terminals exceed the Held–Karp budget of {}",
                nodes.len() - 1,
                budget.max_terminals
            )));
        }
        let g = &inst.graph;
        let dist = nodes
            .iter()
            .map(|&s| {
                let mut d = vec![INF; g.vertex_count()];
                d[s] = 0;
                let mut heap = BinaryHeap::from([Reverse((0i128, s))]);
                while let Some(Reverse((dv, v))) = heap.pop() {
                    if dv > d[v] {
                        continue;
                    }
                    for &(w, e) in g.neighbors(v) {
                        if dv + cost[e] < d[w] {
                            d[w] = dv + cost[e];
                            heap.push(Reverse((d[w], w)));
                        }
                    }
                }
                nodes.iter().map(|&t| d[t]).collect()
            })
            .collect();
        let full = (1u64 << inst.demand_count()) - 1;
        Ok(Closure { nodes, dist, serves, pen, full })
    }

    fn terminals(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Penalty when exactly the terminals in `set` (bit `i` is node `i+1`) are visited.
    fn penalty(&self, set: usize) -> i128 {
        let mut sat = 0u64;
        for i in 0..self.terminals() {
            if set >> i & 1 == 1 {
                sat |= self.serves[i + 1];
            }
        }
        self.pen[(self.full & !sat) as usize]
    }

    /// Expands a node order into graph edges along shortest paths.
    fn expand(&self, inst: &Instance, order: &[usize]) -> Result<Vec<EdgeId>> {
        let mut edges = Vec::new();
        for w in order.windows(2) {
            let path = inst
                .graph
                .shortest_path_edges(self.nodes[w[0]], self.nodes[w[1]])
                .ok_or_else(|| Error::Internal("finite distance without a path".into()))?;
            edges.extend(path);
        }
        edges.sort_unstable();
        Ok(edges)
    }
}

/// Cheapest closed walk from the root plus penalties of unvisited terminals.
pub fn oracle_tour(inst: &Instance, budget: &OracleBudget) -> Result<Solution> {
    let c = Closure::new(inst, budget)?;
    let k = c.terminals();
    let deadline = budget.deadline();
    // dp[S][j]: path from the root through S ending at terminal j ∈ S
    let mut dp = vec![vec![INF; k]; 1 << k];
    let mut back = vec![vec![usize::MAX; k]; 1 << k];
    for j in 0..k {
        dp[1 << j][j] = c.dist[0][j + 1];
    }
    for s in 1usize..1 << k {
        if s & 0xff == 0 {
            deadline.check()?;
        }
        for j in 0..k {
            if s >> j & 1 == 0 || dp[s][j] >= INF {
                continue;
            }
            for l in 0..k {
                if s >> l & 1 == 1 {
                    continue;
                }
                let nd = dp[s][j] + c.dist[j + 1][l + 1];
                let t = s | 1 << l;
                if nd < dp[t][l] {
                    dp[t][l] = nd;
                    back[t][l] = j;
                }
            }
        }
    }
    let mut best = (c.penalty(0), 0usize, usize::MAX);
    for s in 1usize..1 << k {
        for j in 0..k {
            if dp[s][j] < INF && c.dist[j + 1][0] < INF {
                let v = dp[s][j] + c.dist[j + 1][0] + c.penalty(s);
                if v < best.0 {
                    best = (v, s, j);
                }
            }
        }
    }
    let mut order = vec![0];
    if best.1 != 0 {
        let (mut s, mut j) = (best.1, best.2);
        let mut rev = Vec::new();
        while j != usize::MAX {
            rev.push(j + 1);
            let p = back[s][j];
            s &= !(1 << j);
            j = p;
        }
        order.extend(rev.into_iter().rev());
        order.push(0);
    }
    witness(inst, &c, &order, best.0)
}

/// Cheapest walk through the root with free ends plus penalties of
/// unvisited terminals.
pub fn oracle_stroll(inst: &Instance, budget: &OracleBudget) -> Result<Solution> {
    let c = Closure::new(inst, budget)?;
    let n = c.nodes.len();
    let deadline = budget.deadline();
    // dp[S][j]: Hamiltonian path over node set S ending at j, any start
    let mut dp = vec![vec![INF; n]; 1 << n];
    let mut back = vec![vec![usize::MAX; n]; 1 << n];
    for j in 0..n {
        dp[1 << j][j] = 0;
    }
    for s in 1usize..1 << n {
        if s & 0xff == 0 {
            deadline.check()?;
        }
        for j in 0..n {
            if s >> j & 1 == 0 || dp[s][j] >= INF {
                continue;
            }
            for l in 0..n {
                if s >> l & 1 == 1 {
                    continue;
                }
                let nd = dp[s][j] + c.dist[j][l];
                let t = s | 1 << l;
                if nd < dp[t][l] {
                    dp[t][l] = nd;
                    back[t][l] = j;
                }
            }
        }
    }
    let mut best = (INF, 0usize, 0usize);
    for s in (1usize..1 << n).filter(|s| s & 1 == 1) {
        for j in 0..n {
            if dp[s][j] < INF {
                let v = dp[s][j] + c.penalty(s >> 1);
                if v < best.0 {
                    best = (v, s, j);
                }
            }
        }
    }
    let (mut s, mut j) = (best.1, best.2);
    let mut order = Vec::new();
    while j != usize::MAX {
        order.push(j);
        let p = back[s][j];
        s &= !(1 << j);
        j = p;
    }
    witness(inst, &c, &order, best.0)
}

fn witness(inst: &Instance, c: &Closure, order: &[usize], value: i128) -> Result<Solution> {
    let edges = c.expand(inst, order)?;
    let sol = solution_cost(inst, &edges)?;
    let (_, _, denom) = scaled_costs_and_penalties(inst)?;
    let expected = crate::rational::from_scaled(value, &denom);
    if sol.total != expected {
        return Err(Error::Internal(format!(
            "walk witness costs {} but Held–Karp found {}",
            crate::rational::format(&sol.total),
            crate::rational::format(&expected)
        )));
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::penalty::PenaltyFn;
    use crate::rational::int;
    use crate::solution::{is_closed_walk, is_open_walk};

    fn unit_square(p: i64) -> Instance {
        let g = Graph::from_edges(4, [(0, 1, int(1)), (1, 2, int(1)), (2, 3, int(1)), (3, 0, int(1))]).unwrap();
        Instance::rooted(g, 0, &[1, 2, 3], PenaltyFn::additive(vec![int(p); 3]).unwrap()).unwrap()
    }

    #[test]
    fn square_tour_and_stroll() {
        let b = OracleBudget::default();
        let inst = unit_square(10);
        let tour = oracle_tour(&inst, &b).unwrap();
        assert_eq!(tour.total, int(4));
        assert!(is_closed_walk(&inst, &tour.edges, 0));
        let stroll = oracle_stroll(&inst, &b).unwrap();
        assert_eq!(stroll.total, int(3));
        assert!(is_open_walk(&inst, &stroll.edges, 0));
    }

    #[test]
    fn cheap_penalties_are_paid() {
        let b = OracleBudget::default();
        let inst = unit_square(1);
        // visiting 1 and back costs 2 and saves 1, so pay everything
        assert_eq!(oracle_tour(&inst, &b).unwrap().total, int(3));
        // stroll to 1 costs 1 and saves 1; any choice totals 3
        assert_eq!(oracle_stroll(&inst, &b).unwrap().total, int(3));
    }

    #[test]
    fn unrooted_is_rejected() {
        let g = Graph::from_edges(3, [(0, 1, int(1))]).unwrap();
        let inst = Instance::new(g, vec![crate::instance::Demand { s: 1, t: 2 }], PenaltyFn::additive(vec![int(1)]).unwrap(), Some(0)).unwrap();
        assert!(matches!(oracle_tour(&inst, &OracleBudget::default()), Err(Error::Precondition(_))));
    }
}
