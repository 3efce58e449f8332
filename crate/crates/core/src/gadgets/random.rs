//! Seeded random instances on grids, series-parallel graphs and
//! Erdős–Rényi graphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::{Demand, Instance};
use crate::penalty::PenaltyFn;
use crate::rational::{int, ratio, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum RandomKind {
    Grid { rows: usize, cols: usize },
    /// Built from one edge by adding vertices in series over an existing
    /// edge or as pendants; treewidth at most 2.
    SeriesParallel { n: usize },
    ErdosRenyi { n: usize, p: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PenaltyKind {
    Additive,
    Capped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomParams {
    pub demands: usize,
    pub penalty: PenaltyKind,
    /// All demands share vertex 0.
    pub rooted: bool,
    /// Costs are drawn from `{1/2, 1, …, max_cost}` in steps of 1/2.
    pub max_cost: i64,
    /// Penalties are drawn from `{1, …, max_penalty}`.
    pub max_penalty: i64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams { demands: 4, penalty: PenaltyKind::Additive, rooted: false, max_cost: 6, max_penalty: 10 }
    }
}

/// A reproducible instance: the same kind, parameters and seed always give
/// the same instance.
pub fn gen_random(kind: RandomKind, params: &RandomParams, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, pairs) = match kind {
        RandomKind::Grid { rows, cols } => {
            let mut pairs = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    let v = r * cols + c;
                    if c + 1 < cols {
                        pairs.push((v, v + 1));
                    }
                    if r + 1 < rows {
                        pairs.push((v, v + cols));
                    }
                }
            }
            (rows * cols, pairs)
        }
        RandomKind::SeriesParallel { n } => {
            let mut pairs = Vec::new();
            if n >= 2 {
                pairs.push((0, 1));
            }
            for w in 2..n {
                let (u, v) = pairs[rng.gen_range(0..pairs.len())];
                if rng.gen_bool(0.7) {
                    pairs.push((u, w));
                    pairs.push((w, v));
                } else {
                    pairs.push((if rng.gen_bool(0.5) { u } else { v }, w));
                }
            }
            (n, pairs)
        }
        RandomKind::ErdosRenyi { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::domain(format!("edge probability {p} outside [0, 1]")));
            }
            let mut pairs = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        pairs.push((u, v));
                    }
                }
            }
            (n, pairs)
        }
    };
    if params.max_cost < 1 || params.max_penalty < 1 {
        return Err(Error::domain("cost and penalty ranges must be positive"));
    }
    let mut graph = Graph::new(n);
    for (u, v) in pairs {
        let halves = rng.gen_range(1..=2 * params.max_cost);
        graph.add_edge(u, v, ratio(halves, 2))?;
    }
    let demands = random_demands(&mut rng, n, params)?;
    let values: Vec<Rational> = (0..demands.len()).map(|_| int(rng.gen_range(1..=params.max_penalty))).collect();
    let penalty = match params.penalty {
        PenaltyKind::Additive => PenaltyFn::additive(values)?,
        PenaltyKind::Capped => {
            let total: i64 = values.iter().map(|v| v.to_integer().try_into().unwrap_or(0i64)).sum();
            let cap = rng.gen_range(1..=total.max(1));
            PenaltyFn::capped(values, int(cap))?
        }
    };
    Instance::new(graph, demands, penalty, params.rooted.then_some(0))
}

fn random_demands(rng: &mut ChaCha8Rng, n: usize, params: &RandomParams) -> Result<Vec<Demand>> {
    if params.demands > 0 && n < 2 {
        return Err(Error::domain("demands need at least two vertices"));
    }
    if params.rooted {
        let mut others: Vec<usize> = (1..n).collect();
        others.shuffle(rng);
        let mut out: Vec<Demand> = others.iter().take(params.demands).map(|&t| Demand { s: t, t: 0 }).collect();
        while out.len() < params.demands {
            out.push(Demand { s: rng.gen_range(1..n), t: 0 });
        }
        return Ok(out);
    }
    Ok((0..params.demands)
        .map(|_| {
            let s = rng.gen_range(0..n);
            let mut t = rng.gen_range(0..n - 1);
            if t >= s {
                t += 1;
            }
            Demand { s, t }
        })
        .collect())
}
