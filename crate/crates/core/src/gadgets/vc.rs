//! The vertex-cover gadget: a central vertex `w`, a spoke of cost 2 to each
//! `a_i`, and a 4-cycle `w, c¹_j, b_j, c²_j` of unit edges per edge `e_j`.

use std::collections::BTreeSet;

use super::CubicGraph;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::instance::{Demand, Instance};
use crate::oracle::{oracle_spcsf, oracle_vertex_cover, OracleBudget};
use crate::penalty::PenaltyFn;
use crate::rational::{int, Rational};
use crate::solution::{solution_cost, Solution};

#[derive(Clone, Debug)]
pub struct VcGadget {
    pub source: CubicGraph,
    pub instance: Instance,
    pub w: VertexId,
    pub a: Vec<VertexId>,
    pub b: Vec<VertexId>,
    pub c1: Vec<VertexId>,
    pub c2: Vec<VertexId>,
}

impl VcGadget {
    /// Edge `{w, a_i}`.
    pub fn spoke(&self, i: usize) -> EdgeId {
        i
    }

    /// Edges `{w,c¹_j}, {w,c²_j}, {c¹_j,b_j}, {c²_j,b_j}`.
    pub fn cycle(&self, j: usize) -> [EdgeId; 4] {
        let base = self.source.n + 4 * j;
        [base, base + 1, base + 2, base + 3]
    }

    /// `2m + 2n + k`.
    pub fn target(&self, k: usize) -> Rational {
        int((2 * self.source.m() + 2 * self.source.n + k) as i64)
    }
}

/// Builds the gadget with `w = 0`, `a_i = 1 + i` and
/// `b_j, c¹_j, c²_j = 1 + n + 3j + {0, 1, 2}`. Demands `{w, b_j}` come
/// first, then `{a_i, c^ℓ_j}` for `j` ascending and `ℓ = 1, 2`.
pub fn gen_vc_gadget(source: &CubicGraph) -> Result<VcGadget> {
    let source = CubicGraph::new(source.n, source.edges.clone())?;
    let (n, m) = (source.n, source.m());
    let w = 0;
    let a: Vec<VertexId> = (0..n).map(|i| 1 + i).collect();
    let b: Vec<VertexId> = (0..m).map(|j| 1 + n + 3 * j).collect();
    let c1: Vec<VertexId> = b.iter().map(|x| x + 1).collect();
    let c2: Vec<VertexId> = b.iter().map(|x| x + 2).collect();
    let mut g = Graph::new(1 + n + 3 * m);
    for &ai in &a {
        g.add_edge(w, ai, int(2))?;
    }
    for j in 0..m {
        g.add_edge(w, c1[j], int(1))?;
        g.add_edge(w, c2[j], int(1))?;
        g.add_edge(c1[j], b[j], int(1))?;
        g.add_edge(c2[j], b[j], int(1))?;
    }
    let mut demands: Vec<Demand> = b.iter().map(|&bj| Demand { s: w, t: bj }).collect();
    let mut penalties = vec![int(3); m];
    for (j, &(u, v)) in source.edges.iter().enumerate() {
        demands.push(Demand { s: a[u], t: c1[j] });
        demands.push(Demand { s: a[v], t: c2[j] });
        penalties.extend([int(1), int(1)]);
    }
    let instance = Instance::new(g, demands, PenaltyFn::additive(penalties)?, None)?;
    Ok(VcGadget { source, instance, w, a, b, c1, c2 })
}

/// The tree built from a vertex cover: spokes of uncovered vertices, and
/// for each edge the side `ℓ = 1` when its first endpoint is uncovered.
pub fn solution_from_cover(g: &VcGadget, cover: &[usize]) -> Result<Solution> {
    if !g.source.is_cover(cover) {
        return Err(Error::domain("not a vertex cover"));
    }
    let mut edges = Vec::new();
    for i in 0..g.source.n {
        if !cover.contains(&i) {
            edges.push(g.spoke(i));
        }
    }
    for (j, &(first, _)) in g.source.edges.iter().enumerate() {
        let [wc1, wc2, c1b, c2b] = g.cycle(j);
        if cover.contains(&first) {
            edges.extend([wc2, c2b]);
        } else {
            edges.extend([wc1, c1b]);
        }
    }
    edges.sort_unstable();
    solution_cost(&g.instance, &edges)
}

/// Extracts a vertex cover from any gadget solution after normalizing it:
/// every `b_j` is connected to `w`, only one side of each 4-cycle is kept,
/// and spokes whose three demands are not all met are dropped. The cover
/// has at most `cost − 2m − 2n` vertices.
pub fn cover_from_solution(g: &VcGadget, sol: &Solution) -> Result<Vec<usize>> {
    let start = solution_cost(&g.instance, &sol.edges)?;
    let mut f: BTreeSet<EdgeId> = sol.edges.iter().copied().collect();
    for j in 0..g.source.m() {
        let [wc1, wc2, c1b, c2b] = g.cycle(j);
        let side1 = f.contains(&wc1) && f.contains(&c1b);
        let side2 = f.contains(&wc2) && f.contains(&c2b);
        let keep = if side1 || !side2 { [wc1, c1b] } else { [wc2, c2b] };
        for e in [wc1, wc2, c1b, c2b] {
            f.remove(&e);
        }
        f.extend(keep);
    }
    // after the cycle step, c^ℓ_j is reachable from w exactly when {w,c^ℓ_j} ∈ F
    for i in 0..g.source.n {
        let met = g.source.edges.iter().enumerate().all(|(j, &(u, v))| {
            let [wc1, wc2, ..] = g.cycle(j);
            (u != i || f.contains(&wc1)) && (v != i || f.contains(&wc2))
        });
        if !met {
            f.remove(&g.spoke(i));
        }
    }
    let cover: Vec<usize> = (0..g.source.n).filter(|&i| !f.contains(&g.spoke(i))).collect();
    if !g.source.is_cover(&cover) {
        return Err(Error::Internal("normalized solution does not yield a vertex cover".into()));
    }
    let edges: Vec<EdgeId> = f.into_iter().collect();
    let normalized = solution_cost(&g.instance, &edges)?;
    if normalized.total > start.total || g.target(cover.len()) > start.total {
        return Err(Error::Internal(format!(
            "cover of size {} is not bounded by the solution cost {}",
            cover.len(),
            crate::rational::format(&start.total)
        )));
    }
    Ok(cover)
}

/// Both sides of the gadget identity.
#[derive(Clone, Debug)]
pub struct GadgetCheck {
    pub optimum: Solution,
    pub tau: usize,
    /// Extracted from the optimum.
    pub cover: Vec<usize>,
    /// `2m + 2n + τ(G)`.
    pub expected: Rational,
    pub equal: bool,
}

/// Solves the gadget exactly and compares with `2m + 2n + τ(G)`.
pub fn gadget_optimum_check(g: &VcGadget, budget: &OracleBudget) -> Result<GadgetCheck> {
    let (tau, _) = oracle_vertex_cover(g.source.n, &g.source.edges, budget)?;
    let optimum = oracle_spcsf(&g.instance, budget)?;
    let expected = g.target(tau);
    let equal = optimum.total == expected;
    let cover = cover_from_solution(g, &optimum)?;
    Ok(GadgetCheck { optimum, tau, cover, expected, equal })
}
