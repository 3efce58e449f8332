//! Enumeration of all edge subsets.

use num_bigint::BigInt;

use super::OracleBudget;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::penalty::MAX_TABLE_GROUND;
use crate::rational::{self, Rational};
use crate::solution::{solution_cost, Solution};

/// Scaled edge costs and the scaled penalty of every unsatisfied-set mask.
pub(crate) fn scaled_costs_and_penalties(inst: &Instance) -> Result<(Vec<i128>, Vec<i128>, BigInt)> {
    let k = inst.demand_count();
    if k > MAX_TABLE_GROUND {
        return Err(Error::capacity(format!("{k} demands exceed the penalty table limit")));
    }
    let costs: Vec<Rational> = inst.graph.edges().iter().map(|e| e.cost.clone()).collect();
    let table = inst.penalty.tabulate()?;
    let (mut scaled, denom) = rational::common_scale_all(&[&costs, &table], rational::SCALE_LIMIT)
        .ok_or_else(|| Error::capacity("costs are not representable as scaled integers"))?;
    let pen = scaled.pop().expect("two groups");
    let cost = scaled.pop().expect("two groups");
    Ok((cost, pen, denom))
}

/// Exact optimum over all `2^|E|` edge subsets.
pub fn oracle_by_edges(inst: &Instance, budget: &OracleBudget) -> Result<Solution> {
    let m = inst.graph.edge_count();
    if m > budget.max_edges {
        return Err(Error::capacity(format!("{m} edges exceed the enumeration budget of {}", budget.max_edges)));
    }
    let (cost, pen, _) = scaled_costs_and_penalties(inst)?;
    let n = inst.graph.vertex_count();
    let k = inst.demand_count();
    let ends: Vec<(usize, usize)> = inst.graph.edges().iter().map(|e| (e.u, e.v)).collect();
    let full = (1u64 << k) - 1;
    let deadline = budget.deadline();
    let mut parent = vec![0usize; n];
    let mut best: Option<(i128, u64)> = None;
    for mask in 0..1u64 << m {
        if mask & 0xffff == 0 {
            deadline.check()?;
        }
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i;
        }
        let mut length = 0i128;
        let mut bits = mask;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            length += cost[e];
            let (a, b) = (find(&mut parent, ends[e].0), find(&mut parent, ends[e].1));
            if a != b {
                parent[a] = b;
            }
        }
        if best.as_ref().is_some_and(|(b, _)| length > *b) {
            continue;
        }
        let mut sat = 0u64;
        for (d, dm) in inst.demands.iter().enumerate() {
            if find(&mut parent, dm.s) == find(&mut parent, dm.t) {
                sat |= 1 << d;
            }
        }
        let total = length + pen[(full & !sat) as usize];
        if best.as_ref().is_none_or(|(b, _)| total < *b) {
            best = Some((total, mask));
        }
    }
    let (_, mask) = best.expect("the empty set is a candidate");
    let edges: Vec<usize> = (0..m).filter(|e| mask >> e & 1 == 1).collect();
    solution_cost(inst, &edges)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}
