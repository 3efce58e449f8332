//! Dreyfus–Wagner Steiner trees and exact Steiner forests by grouping
//! demands, plus the satisfied-set oracle built on them.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::enumerate::scaled_costs_and_penalties;
use super::OracleBudget;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::instance::{Demand, Instance};
use crate::rational::{self, Rational};
use crate::solution::{solution_cost, Solution};

const INF: i128 = i128::MAX / 4;

#[derive(Clone, Copy, Debug)]
enum Back {
    Root,
    Edge(EdgeId),
    Split(u32),
}

/// `cost[X][v]`: cheapest tree spanning the terminals in mask `X` plus `v`.
struct DreyfusWagner<'a> {
    graph: &'a Graph,
    cost: Vec<Vec<i128>>,
    back: Vec<Vec<Back>>,
}

impl<'a> DreyfusWagner<'a> {
    fn new(graph: &'a Graph, edge_cost: &[i128], terminals: &[VertexId], deadline: &super::Deadline) -> Result<Self> {
        let n = graph.vertex_count();
        let t = terminals.len();
        let mut cost = vec![Vec::new(); 1 << t];
        let mut back = vec![Vec::new(); 1 << t];
        cost[0] = vec![0; n];
        back[0] = vec![Back::Root; n];
        for x in 1usize..1 << t {
            if x & 0xff == 0 {
                deadline.check()?;
            }
            let mut c = vec![INF; n];
            let mut b = vec![Back::Root; n];
            if x.is_power_of_two() {
                c[terminals[x.trailing_zeros() as usize]] = 0;
            } else {
                let low = x & x.wrapping_neg();
                let rest = x ^ low;
                // subsets containing the lowest bit, excluding x itself
                let mut sub = rest;
                loop {
                    sub = (sub.wrapping_sub(1)) & rest;
                    let x1 = sub | low;
                    let x2 = x ^ x1;
                    if x2 != 0 {
                        for v in 0..n {
                            let s = cost[x1][v] + cost[x2][v];
                            if s < c[v] {
                                c[v] = s;
                                b[v] = Back::Split(x1 as u32);
                            }
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                }
            }
            dijkstra(graph, edge_cost, &mut c, &mut b);
            cost[x] = c;
            back[x] = b;
        }
        Ok(DreyfusWagner { graph, cost, back })
    }

    /// Edges of the tree behind `cost[x][v]`.
    fn edges(&self, x: usize, v: VertexId, out: &mut Vec<EdgeId>) {
        let mut stack = vec![(x, v)];
        while let Some((x, v)) = stack.pop() {
            match self.back[x][v] {
                Back::Root => {}
                Back::Edge(e) => {
                    out.push(e);
                    stack.push((x, self.graph.edge(e).other(v)));
                }
                Back::Split(x1) => {
                    stack.push((x1 as usize, v));
                    stack.push((x ^ x1 as usize, v));
                }
            }
        }
    }
}

/// Multi-source relaxation starting from the given tentative costs.
fn dijkstra(graph: &Graph, edge_cost: &[i128], c: &mut [i128], b: &mut [Back]) {
    let mut heap: BinaryHeap<Reverse<(i128, VertexId)>> =
        c.iter().enumerate().filter(|(_, &d)| d < INF).map(|(v, &d)| Reverse((d, v))).collect();
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > c[v] {
            continue;
        }
        for &(w, e) in graph.neighbors(v) {
            let nd = d + edge_cost[e];
            if nd < c[w] {
                c[w] = nd;
                b[w] = Back::Edge(e);
                heap.push(Reverse((nd, w)));
            }
        }
    }
}

/// Forest costs for every subset of `demands`: `forest[D]` is the cheapest
/// edge set connecting every pair in `D`, with the grouping that achieves it.
struct ForestTable<'a> {
    dw: DreyfusWagner<'a>,
    terminals: Vec<VertexId>,
    terminal_mask: Vec<usize>,
    forest: Vec<i128>,
    choice: Vec<u32>,
}

impl<'a> ForestTable<'a> {
    fn new(graph: &'a Graph, edge_cost: &[i128], demands: &[Demand], budget: &OracleBudget) -> Result<Self> {
        let k = demands.len();
        if k > budget.max_demands {
            return Err(Error::capacity(format!("{k} demands exceed the grouping budget of {}", budget.max_demands)));
        }
        let mut terminals: Vec<VertexId> = demands.iter().flat_map(|d| [d.s, d.t]).collect();
        terminals.sort_unstable();
        terminals.dedup();
        if terminals.len() > budget.max_terminals {
            return Err(Error::capacity(format!(
                "{} terminals exceed the Steiner budget of {}",
                terminals.len(),
                budget.max_terminals
            )));
        }
        let deadline = budget.deadline();
        let dw = DreyfusWagner::new(graph, edge_cost, &terminals, &deadline)?;
        let idx = |v: VertexId| terminals.binary_search(&v).expect("terminal");
        let per_demand: Vec<usize> = demands.iter().map(|d| (1 << idx(d.s)) | (1 << idx(d.t))).collect();
        let mut terminal_mask = vec![0usize; 1 << k];
        for g in 1usize..1 << k {
            let low = g.trailing_zeros() as usize;
            terminal_mask[g] = terminal_mask[g & (g - 1)] | per_demand[low];
        }
        let tree = |tm: usize| dw.cost[tm][terminals[tm.trailing_zeros() as usize]];
        let mut forest = vec![INF; 1 << k];
        let mut choice = vec![0u32; 1 << k];
        forest[0] = 0;
        for d in 1usize..1 << k {
            if d & 0xff == 0 {
                deadline.check()?;
            }
            let low = d & d.wrapping_neg();
            let rest = d ^ low;
            let mut sub = rest;
            loop {
                let g = sub | low;
                let rem = d ^ g;
                let t = tree(terminal_mask[g]);
                if t < INF && forest[rem] < INF && t + forest[rem] < forest[d] {
                    forest[d] = t + forest[rem];
                    choice[d] = g as u32;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        Ok(ForestTable { dw, terminals, terminal_mask, forest, choice })
    }

    fn edges(&self, mut d: usize) -> Vec<EdgeId> {
        let mut out = Vec::new();
        while d != 0 {
            let g = self.choice[d] as usize;
            let tm = self.terminal_mask[g];
            let v = self.terminal_of(tm);
            self.dw.edges(tm, v, &mut out);
            d ^= g;
        }
        out.sort_unstable();
        out.dedup();
        self.dw.graph.spanning_forest(&out)
    }

    fn terminal_of(&self, tm: usize) -> VertexId {
        self.terminals[tm.trailing_zeros() as usize]
    }
}

fn scaled_graph_costs(graph: &Graph) -> Result<(Vec<i128>, num_bigint::BigInt)> {
    let costs: Vec<Rational> = graph.edges().iter().map(|e| e.cost.clone()).collect();
    rational::common_scale(&costs, rational::SCALE_LIMIT)
        .ok_or_else(|| Error::capacity("costs are not representable as scaled integers"))
}

/// Minimum Steiner tree spanning `terminals`: its length and edges.
pub fn steiner_tree(graph: &Graph, terminals: &[VertexId], budget: &OracleBudget) -> Result<Option<(Rational, Vec<EdgeId>)>> {
    let mut ts = terminals.to_vec();
    ts.sort_unstable();
    ts.dedup();
    if ts.len() > budget.max_terminals {
        return Err(Error::capacity(format!("{} terminals exceed the Steiner budget", ts.len())));
    }
    if ts.is_empty() {
        return Ok(Some((Rational::default(), Vec::new())));
    }
    let (cost, denom) = scaled_graph_costs(graph)?;
    let dw = DreyfusWagner::new(graph, &cost, &ts, &budget.deadline())?;
    let full = (1 << ts.len()) - 1;
    let value = dw.cost[full][ts[0]];
    if value >= INF {
        return Ok(None);
    }
    let mut edges = Vec::new();
    dw.edges(full, ts[0], &mut edges);
    edges.sort_unstable();
    edges.dedup();
    Ok(Some((rational::from_scaled(value, &denom), graph.spanning_forest(&edges))))
}

/// Minimum Steiner forest for `demands`: its length and edges; `None` when
/// some pair is disconnected.
pub fn steiner_forest(graph: &Graph, demands: &[Demand], budget: &OracleBudget) -> Result<Option<(Rational, Vec<EdgeId>)>> {
    let (cost, denom) = scaled_graph_costs(graph)?;
    let table = ForestTable::new(graph, &cost, demands, budget)?;
    let full = (1usize << demands.len()) - 1;
    if table.forest[full] >= INF {
        return Ok(None);
    }
    Ok(Some((rational::from_scaled(table.forest[full], &denom), table.edges(full))))
}

/// `SteinerForest(G, D)`; a disconnected pair is a domain error.
pub fn steiner_forest_len(graph: &Graph, demands: &[Demand], budget: &OracleBudget) -> Result<Rational> {
    steiner_forest(graph, demands, budget)?
        .map(|(len, _)| len)
        .ok_or_else(|| Error::domain("some demand pair is disconnected"))
}

/// Exact optimum as `min_{D'} SteinerForest(D') + π(𝒟 \ D')`.
pub fn oracle_by_satisfied_sets(inst: &Instance, budget: &OracleBudget) -> Result<Solution> {
    let k = inst.demand_count();
    if k > budget.max_demands {
        return Err(Error::capacity(format!("{k} demands exceed the grouping budget of {}", budget.max_demands)));
    }
    let (cost, pen, _) = scaled_costs_and_penalties(inst)?;
    let table = ForestTable::new(&inst.graph, &cost, &inst.demands, budget)?;
    let full = (1usize << k) - 1;
    let mut best = (INF, 0usize);
    for d in 0..=full {
        if table.forest[d] < INF {
            let total = table.forest[d] + pen[full & !d];
            if total < best.0 {
                best = (total, d);
            }
        }
    }
    let edges = table.edges(best.1);
    solution_cost(inst, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn square() -> Graph {
        Graph::from_edges(4, [(0, 1, int(1)), (1, 2, int(1)), (2, 3, int(1)), (3, 0, int(1))]).unwrap()
    }

    #[test]
    fn crossing_pairs_on_a_square() {
        let demands = [Demand { s: 0, t: 2 }, Demand { s: 1, t: 3 }];
        assert_eq!(steiner_forest_len(&square(), &demands, &OracleBudget::default()).unwrap(), int(3));
    }

    #[test]
    fn empty_and_single_demand() {
        let b = OracleBudget::default();
        assert_eq!(steiner_forest_len(&square(), &[], &b).unwrap(), int(0));
        let g = Graph::from_edges(3, [(0, 1, int(2)), (1, 2, int(3)), (0, 2, int(7))]).unwrap();
        assert_eq!(steiner_forest_len(&g, &[Demand { s: 0, t: 2 }], &b).unwrap(), int(5));
    }

    #[test]
    fn star_tree() {
        let g = Graph::from_edges(4, [(0, 3, int(1)), (1, 3, int(1)), (2, 3, int(1)), (0, 1, int(3))]).unwrap();
        let (len, edges) = steiner_tree(&g, &[0, 1, 2], &OracleBudget::default()).unwrap().unwrap();
        assert_eq!(len, int(3));
        assert_eq!(edges, vec![0, 1, 2]);
    }
}
