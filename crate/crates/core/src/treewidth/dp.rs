//! Bottom-up table evaluation over a nice decomposition, shared by the
//! tree and walk programs.

use std::collections::HashMap;
use std::hash::Hash;
use std::ops::Add;

use num_traits::Zero;

use super::nice::{NiceDecomposition, NiceKind};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId};

/// Edge ids taken by a transition, with multiplicity.
pub type Taken = Vec<(EdgeId, u8)>;

pub trait Rules {
    type State: Clone + Eq + Hash;
    type W: Clone + Ord + Add<Output = Self::W> + Zero;

    fn leaf(&self, v: VertexId) -> Vec<(Self::State, Self::W)>;
    /// `bag` is the new bag; `edges` are the edges assigned to this node.
    fn introduce(&self, v: VertexId, bag: &[VertexId], edges: &[EdgeId], st: &Self::State) -> Vec<(Self::State, Self::W, Taken)>;
    /// `bag` is the child's bag, still holding `v`.
    fn forget(&self, v: VertexId, bag: &[VertexId], st: &Self::State) -> Option<(Self::State, Self::W)>;
    fn join(&self, a: &Self::State, b: &Self::State) -> Option<Self::State>;
    /// Extra cost of accepting a root state, if acceptable.
    fn accept(&self, st: &Self::State) -> Option<Self::W>;
}

#[derive(Clone, Debug)]
enum Back {
    Start,
    One(usize, Taken),
    Two(usize, usize),
}

#[derive(Clone, Debug)]
struct Entry<S, W> {
    state: S,
    cost: W,
    back: Back,
}

struct Table<S, W> {
    index: HashMap<S, usize>,
    entries: Vec<Entry<S, W>>,
}

impl<S: Clone + Eq + Hash, W: Clone + Ord> Table<S, W> {
    fn new() -> Self {
        Table { index: HashMap::new(), entries: Vec::new() }
    }

    fn offer(&mut self, state: S, cost: W, back: Back) {
        match self.index.get(&state) {
            Some(&i) => {
                if cost < self.entries[i].cost {
                    self.entries[i].cost = cost;
                    self.entries[i].back = back;
                }
            }
            None => {
                self.index.insert(state.clone(), self.entries.len());
                self.entries.push(Entry { state, cost, back });
            }
        }
    }
}

/// Table sizes of a run.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DpStats {
    pub nodes: usize,
    pub max_bag: usize,
    pub total_states: usize,
    pub max_states: usize,
}

/// Optimal value (without constant terms) and the multiset of edges.
#[derive(Clone, Debug)]
pub struct DpSolution<W> {
    pub value: W,
    pub edges: Vec<EdgeId>,
    pub stats: DpStats,
}

/// Evaluates every node, then backtracks from the cheapest accepted root
/// state. `assigned[i]` lists the edges decided at node `i`; `state_budget`
/// bounds the total number of stored states.
pub fn run<R: Rules>(
    nice: &NiceDecomposition,
    rules: &R,
    assigned: &[Vec<EdgeId>],
    state_budget: usize,
) -> Result<Option<DpSolution<R::W>>> {
    let mut tables: Vec<Table<R::State, R::W>> = Vec::with_capacity(nice.nodes.len());
    let mut stats = DpStats { nodes: nice.nodes.len(), ..DpStats::default() };
    for (i, node) in nice.nodes.iter().enumerate() {
        let mut table = Table::new();
        match node.kind {
            NiceKind::Leaf(v) => {
                for (s, w) in rules.leaf(v) {
                    table.offer(s, w, Back::Start);
                }
            }
            NiceKind::Introduce(v) => {
                let child = &tables[node.children[0]];
                for (ci, e) in child.entries.iter().enumerate() {
                    for (s, w, taken) in rules.introduce(v, &node.bag, &assigned[i], &e.state) {
                        table.offer(s, e.cost.clone() + w, Back::One(ci, taken));
                    }
                }
            }
            NiceKind::Forget(v) => {
                let cbag = &nice.nodes[node.children[0]].bag;
                let child = &tables[node.children[0]];
                for (ci, e) in child.entries.iter().enumerate() {
                    if let Some((s, w)) = rules.forget(v, cbag, &e.state) {
                        table.offer(s, e.cost.clone() + w, Back::One(ci, Vec::new()));
                    }
                }
            }
            NiceKind::Join => {
                let (a, b) = (&tables[node.children[0]], &tables[node.children[1]]);
                for (ai, ea) in a.entries.iter().enumerate() {
                    for (bi, eb) in b.entries.iter().enumerate() {
                        if let Some(s) = rules.join(&ea.state, &eb.state) {
                            table.offer(s, ea.cost.clone() + eb.cost.clone(), Back::Two(ai, bi));
                        }
                    }
                }
            }
        }
        stats.total_states += table.entries.len();
        stats.max_states = stats.max_states.max(table.entries.len());
        stats.max_bag = stats.max_bag.max(node.bag.len());
        if stats.total_states > state_budget {
            return Err(Error::capacity(format!("dynamic program exceeded {state_budget} states")));
        }
        // children tables are no longer needed for evaluation but are kept
        // for backtracking
        tables.push(table);
    }
    let root = nice.root();
    let mut best: Option<(usize, R::W)> = None;
    for (i, e) in tables[root].entries.iter().enumerate() {
        if let Some(extra) = rules.accept(&e.state) {
            let total = e.cost.clone() + extra;
            if best.as_ref().is_none_or(|(_, b)| total < *b) {
                best = Some((i, total));
            }
        }
    }
    let Some((entry, value)) = best else { return Ok(None) };
    let mut edges = Vec::new();
    let mut stack = vec![(root, entry)];
    while let Some((node, ei)) = stack.pop() {
        let children = &nice.nodes[node].children;
        match &tables[node].entries[ei].back {
            Back::Start => {}
            Back::One(ci, taken) => {
                for &(e, m) in taken {
                    edges.extend(std::iter::repeat_n(e, m as usize));
                }
                stack.push((children[0], *ci));
            }
            Back::Two(a, b) => {
                stack.push((children[0], *a));
                stack.push((children[1], *b));
            }
        }
    }
    edges.sort_unstable();
    Ok(Some(DpSolution { value, edges, stats }))
}

/// `assigned[i]` for every node: each graph edge goes to its first
/// introduce node.
pub fn assign_edges(nice: &NiceDecomposition, pairs: &[(VertexId, VertexId)], n: usize) -> Result<Vec<Vec<EdgeId>>> {
    let at = nice.assign_pairs(pairs, n)?;
    let mut assigned = vec![Vec::new(); nice.nodes.len()];
    for (e, &i) in at.iter().enumerate() {
        assigned[i].push(e);
    }
    Ok(assigned)
}
