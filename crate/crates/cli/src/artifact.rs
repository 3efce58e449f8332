//! Self-contained run artifacts and their independent re-checks.

use std::path::Path;

use num_traits::{Signed, Zero};
use pcsteiner::clustering::{verify_clustering, ClusteringOutput, Violation};
use pcsteiner::instance::InstanceSpec;
use pcsteiner::rational::{self, Rational};
use pcsteiner::reduction::MergeTree;
use pcsteiner::solution::{is_closed_walk, is_open_walk, is_rooted_tree, with_satisfied, SolutionReport};
use pcsteiner::{DemandSet, EdgeId, Instance, Problem, UnionFind};
use serde::{Deserialize, Serialize};

use crate::failure::{CliResult, Failure, EXIT_PARSE};

/// Everything `verify` needs, including the instance itself.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Artifact {
    Clustering {
        instance: InstanceSpec,
        output: ClusteringOutput,
    },
    Merge {
        instance: InstanceSpec,
        epsilon: String,
        /// The restricted forest `F` that was merged.
        forest: Vec<EdgeId>,
        satisfied: Vec<usize>,
        trees: Vec<MergeTree>,
        forest_length: String,
        total_length: String,
        bound: String,
    },
    Solution {
        instance: InstanceSpec,
        problem: Problem,
        solution: SolutionReport,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub kind: &'static str,
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl Artifact {
    pub fn save(&self, path: &Path) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read artifact {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::new(EXIT_PARSE, format!("cannot parse artifact {}: {e}", path.display())))
    }

    pub fn verify(&self) -> CliResult<VerifyReport> {
        let (kind, violations) = match self {
            Artifact::Clustering { instance, output } => ("clustering", verify_clustering(&instance.build()?, output)),
            Artifact::Merge { instance, epsilon, forest, satisfied, trees, forest_length, total_length, bound } => {
                let inst = instance.build()?;
                let claims = MergeClaims {
                    epsilon: rational::parse(epsilon)?,
                    forest_length: rational::parse(forest_length)?,
                    total_length: rational::parse(total_length)?,
                    bound: rational::parse(bound)?,
                };
                ("merge", check_merge(&inst, forest, satisfied, trees, &claims))
            }
            Artifact::Solution { instance, problem, solution } => {
                ("solution", check_solution(&instance.build()?, *problem, solution)?)
            }
        };
        Ok(VerifyReport { kind, passed: violations.is_empty(), violations })
    }
}

fn violation(check: &str, detail: String) -> Violation {
    Violation { check: check.into(), detail }
}

struct MergeClaims {
    epsilon: Rational,
    forest_length: Rational,
    total_length: Rational,
    bound: Rational,
}

fn check_merge(inst: &Instance, forest: &[EdgeId], satisfied: &[usize], trees: &[MergeTree], claims: &MergeClaims) -> Vec<Violation> {
    let mut out = Vec::new();
    let g = &inst.graph;
    let n = g.vertex_count();
    let in_range = |edges: &[EdgeId]| edges.iter().all(|&e| e < g.edge_count());
    if !in_range(forest) || trees.iter().any(|t| !in_range(&t.edges)) {
        out.push(violation("edges", "edge id out of range".into()));
        return out;
    }
    if satisfied.iter().any(|&d| d >= inst.demand_count()) || trees.iter().any(|t| t.vertices.iter().any(|&v| v >= n)) {
        out.push(violation("ids", "demand or vertex id out of range".into()));
        return out;
    }
    if !claims.epsilon.is_positive() {
        out.push(violation("epsilon", "epsilon must be positive".into()));
        return out;
    }
    let mut uf = UnionFind::new(n);
    for &e in forest {
        uf.union(g.edge(e).u, g.edge(e).v);
    }
    for &d in satisfied {
        if !uf.same(inst.demands[d].s, inst.demands[d].t) {
            out.push(violation("forest", format!("demand {d} is not connected by the restricted forest")));
        }
    }
    let forest_length = g.length(forest);
    if forest_length != claims.forest_length {
        out.push(violation("forest-length", format!("recomputed {} differs", rational::format(&forest_length))));
    }
    let mut covered = vec![0usize; inst.demand_count()];
    let mut total = Rational::zero();
    for (i, t) in trees.iter().enumerate() {
        let length = g.length(&t.edges);
        if length != t.length {
            out.push(violation("tree-length", format!("tree {i}: recomputed length {}", rational::format(&length))));
        }
        total += length;
        let mut vertices = t.vertices.clone();
        vertices.sort_unstable();
        vertices.dedup();
        let mut tu = UnionFind::new(n);
        let mut spans = g.is_forest(&t.edges) && t.edges.len() + 1 == vertices.len();
        for &e in &t.edges {
            let edge = g.edge(e);
            spans &= vertices.binary_search(&edge.u).is_ok() && vertices.binary_search(&edge.v).is_ok();
            tu.union(edge.u, edge.v);
        }
        spans &= vertices.windows(2).all(|w| tu.same(w[0], w[1]));
        if !spans {
            out.push(violation("spanning", format!("tree {i} is not a tree on its vertex list")));
        }
        for &d in &t.demands {
            if d >= covered.len() {
                out.push(violation("ids", format!("tree {i} names unknown demand {d}")));
                continue;
            }
            covered[d] += 1;
            let dm = inst.demands[d];
            if vertices.binary_search(&dm.s).is_err() || vertices.binary_search(&dm.t).is_err() {
                out.push(violation("coverage", format!("tree {i} does not contain both endpoints of demand {d}")));
            }
        }
    }
    let wanted: DemandSet = satisfied.iter().copied().collect();
    for (d, &c) in covered.iter().enumerate() {
        let expect = usize::from(wanted.contains(d));
        if c != expect {
            out.push(violation("coverage", format!("demand {d} is assigned to {c} trees, expected {expect}")));
        }
    }
    if total != claims.total_length {
        out.push(violation("total-length", format!("recomputed {} differs", rational::format(&total))));
    }
    let bound = (Rational::from_integer(2.into()) / &claims.epsilon + Rational::from_integer(1.into())) * &forest_length;
    if bound != claims.bound {
        out.push(violation("bound", format!("recomputed bound {} differs", rational::format(&bound))));
    }
    if total > bound {
        out.push(violation(
            "merge-bound",
            format!("Σ length {} exceeds (2/ε+1)·length(F) = {}", rational::format(&total), rational::format(&bound)),
        ));
    }
    out
}

fn check_solution(inst: &Instance, problem: Problem, report: &SolutionReport) -> CliResult<Vec<Violation>> {
    let mut out = Vec::new();
    let g = &inst.graph;
    if report.edges.iter().any(|&e| e >= g.edge_count()) || report.satisfied.iter().any(|&d| d >= inst.demand_count()) {
        out.push(violation("ids", "edge or demand id out of range".into()));
        return Ok(out);
    }
    if problem.is_rooted() {
        let root = inst.require_root()?;
        let shaped = match problem {
            Problem::Tree => is_rooted_tree(inst, &report.edges, root),
            Problem::Tour => is_closed_walk(inst, &report.edges, root),
            _ => is_open_walk(inst, &report.edges, root),
        };
        if !shaped {
            out.push(violation("shape", format!("edges do not form a {problem:?} through the root").to_lowercase()));
        }
    }
    let mut uf = UnionFind::new(g.vertex_count());
    for &e in &report.edges {
        uf.union(g.edge(e).u, g.edge(e).v);
    }
    for &d in &report.satisfied {
        if !uf.same(inst.demands[d].s, inst.demands[d].t) {
            out.push(violation("satisfied", format!("demand {d} is claimed but not connected")));
        }
    }
    let sol = with_satisfied(inst, report.edges.clone(), report.satisfied.iter().copied().collect())?;
    let claims = [("length", &report.length, &sol.length), ("penalty", &report.penalty, &sol.penalty), ("total", &report.total, &sol.total)];
    for (name, claimed, actual) in claims {
        if rational::parse(claimed)? != *actual {
            out.push(violation(name, format!("claimed {claimed}, recomputed {}", rational::format(actual))));
        }
    }
    Ok(out)
}
