//! Running one algorithm on one instance.

use std::path::Path;

use clap::ValueEnum;
use pcsteiner::clustering::submodular_pc_clustering;
use pcsteiner::oracle::{oracle_pcsf_td, oracle_solve, oracle_spcsf, OracleBudget};
use pcsteiner::rational::{self, Rational};
use pcsteiner::reduction::{reduction_pipeline, restrict_demands, ClusteringInitial, ExactInitial, InitialSolver, PipelineOutput};
use pcsteiner::solution::{solution_cost, with_satisfied};
use pcsteiner::treewidth::{dp_pcs, dp_pcst, dp_pctsp, heuristic_decompose, parse_pace, to_nice, TreeDecomposition};
use pcsteiner::{Instance, Problem, Solution};
use serde::Serialize;

use crate::artifact::Artifact;
use crate::failure::{CliResult, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Brute-force oracle.
    Exact,
    /// Tree-decomposition dynamic program.
    Dp,
    /// Submodular prize-collecting clustering.
    Cluster,
    /// Demand restriction; the restricted forest is the answer.
    Restrict,
    /// Restriction, merging, and exact solves of every piece.
    Pipeline,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    Forest,
    Tree,
    Tour,
    Stroll,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::Forest => Problem::Forest,
            ProblemArg::Tree => Problem::Tree,
            ProblemArg::Tour => Problem::Tour,
            ProblemArg::Stroll => Problem::Stroll,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InitialArg {
    Exact,
    Cluster,
}

/// Settings shared by `solve`, `reduce` and `bench`.
pub struct RunConfig {
    pub problem: Option<ProblemArg>,
    pub epsilon: Rational,
    pub initial: InitialArg,
    pub td: Option<TreeDecomposition>,
    pub budget: OracleBudget,
}

impl RunConfig {
    /// The requested problem, or `tree` for rooted instances and `forest`
    /// otherwise.
    pub fn problem_for(&self, inst: &Instance) -> Problem {
        match self.problem {
            Some(p) => p.into(),
            None if inst.root.is_some() => Problem::Tree,
            None => Problem::Forest,
        }
    }

    pub fn initial_solver(&self) -> Box<dyn InitialSolver> {
        match self.initial {
            InitialArg::Exact => Box::new(ExactInitial { budget: self.budget.clone() }),
            InitialArg::Cluster => Box::new(ClusteringInitial),
        }
    }
}

pub fn parse_epsilon(text: &str) -> CliResult<Rational> {
    let eps = rational::parse(text)?;
    if eps <= Rational::from_integer(0.into()) {
        return Err(Failure::config(format!("epsilon must be positive, got {text}")));
    }
    Ok(eps)
}

pub fn load_td(path: &Path) -> CliResult<TreeDecomposition> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_pace(&text)?.0)
}

pub struct Run {
    pub problem: Problem,
    pub solution: Solution,
    pub artifact: Artifact,
}

fn forest_only(alg: Algorithm, problem: Problem) -> CliResult<()> {
    if problem != Problem::Forest {
        return Err(Failure::config(format!("--alg {alg:?} solves forest instances only").to_lowercase()));
    }
    Ok(())
}

pub fn run(inst: &Instance, alg: Algorithm, cfg: &RunConfig) -> CliResult<Run> {
    let problem = cfg.problem_for(inst);
    if problem.is_rooted() && inst.root.is_none() {
        return Err(Failure::config(format!("{problem:?} needs a root").to_lowercase()));
    }
    let solution_artifact = |solution: &Solution| Artifact::Solution {
        instance: inst.to_spec(),
        problem,
        solution: solution.report(),
    };
    let (solution, artifact) = match alg {
        Algorithm::Exact => {
            let s = oracle_solve(inst, problem, &cfg.budget)?;
            let a = solution_artifact(&s);
            (s, a)
        }
        Algorithm::Dp => {
            let s = run_dp(inst, problem, cfg)?;
            let a = solution_artifact(&s);
            (s, a)
        }
        Algorithm::Cluster => {
            forest_only(alg, problem)?;
            let out = submodular_pc_clustering(inst)?;
            let s = with_satisfied(inst, out.forest.clone(), out.satisfied(inst))?;
            (s, Artifact::Clustering { instance: inst.to_spec(), output: out })
        }
        Algorithm::Restrict => {
            forest_only(alg, problem)?;
            let out = restrict_demands(inst, &cfg.epsilon, cfg.initial_solver().as_ref())?;
            let s = with_satisfied(inst, out.forest.clone(), out.satisfied.clone())?;
            let a = solution_artifact(&s);
            (s, a)
        }
        Algorithm::Pipeline => {
            forest_only(alg, problem)?;
            let out = reduction_pipeline(inst, &cfg.epsilon, cfg.initial_solver().as_ref())?;
            let s = solve_pieces(inst, &out, &cfg.budget)?;
            (s, merge_artifact(inst, &out))
        }
    };
    Ok(Run { problem, solution, artifact })
}

fn run_dp(inst: &Instance, problem: Problem, cfg: &RunConfig) -> CliResult<Solution> {
    if problem == Problem::Forest {
        if cfg.td.is_some() {
            return Err(Failure::config("--td applies to the tree, tour and stroll programs"));
        }
        return Ok(oracle_pcsf_td(inst, &cfg.budget)?);
    }
    let root = inst.require_root()?;
    let td = match &cfg.td {
        Some(td) => td.clone(),
        None => heuristic_decompose(&inst.graph),
    };
    let nice = to_nice(&td, inst.graph.vertex_count(), Some(root))?;
    let result = match problem {
        Problem::Tree => dp_pcst(inst, &nice)?,
        Problem::Tour => dp_pctsp(inst, &nice)?,
        _ => dp_pcs(inst, &nice)?,
    };
    Ok(result.solution)
}

/// Solves every piece exactly and joins the witnesses in the original graph.
pub fn solve_pieces(inst: &Instance, out: &PipelineOutput, budget: &OracleBudget) -> CliResult<Solution> {
    let mut edges = Vec::new();
    for piece in &out.pieces {
        let s = oracle_spcsf(&piece.instance, budget)?;
        edges.extend(s.edges.iter().map(|&e| piece.edges[e]));
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(solution_cost(inst, &edges)?)
}

pub fn merge_artifact(inst: &Instance, out: &PipelineOutput) -> Artifact {
    Artifact::Merge {
        instance: inst.to_spec(),
        epsilon: rational::format(&out.restrict.epsilon),
        forest: out.restrict.forest.clone(),
        satisfied: out.restrict.satisfied.to_vec(),
        trees: out.merge.trees.clone(),
        forest_length: rational::format(&out.merge.forest_length),
        total_length: rational::format(&out.merge.total_length),
        bound: rational::format(&out.merge.bound),
    }
}
