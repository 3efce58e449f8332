//! `gen`: random instances and hardness gadgets.

use std::path::{Path, PathBuf};

use clap::{Args, Subcommand, ValueEnum};
use pcsteiner::gadgets::{gen_random, gen_vc_gadget, CubicGraph, EuclideanGadget, PenaltyKind, RandomKind, RandomParams, DEFAULT_POINT_BUDGET};
use pcsteiner::Instance;

use crate::failure::CliResult;

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// A `rows × cols` grid.
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[command(flatten)]
        common: RandomArgs,
    },
    /// A series-parallel graph on `n` vertices.
    SeriesParallel {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: RandomArgs,
    },
    /// `G(n, p)`; may be disconnected.
    ErdosRenyi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        common: RandomArgs,
    },
    /// The vertex-cover gadget of a named cubic graph.
    VcGadget {
        /// k4, k33, prism or petersen.
        #[arg(long)]
        graph: String,
    },
    /// The Euclidean gadget of a named cubic graph.
    Euclid {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 1)]
        divisor: i64,
        /// Refuse to materialize more points than this.
        #[arg(long, default_value_t = DEFAULT_POINT_BUDGET)]
        point_budget: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PenaltyArg {
    Additive,
    Capped,
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub demands: usize,
    #[arg(long, value_enum, default_value_t = PenaltyArg::Additive)]
    pub penalty: PenaltyArg,
    /// All demands share vertex 0, which becomes the root.
    #[arg(long)]
    pub rooted: bool,
    #[arg(long, default_value_t = 6)]
    pub max_cost: i64,
    #[arg(long, default_value_t = 10)]
    pub max_penalty: i64,
    /// Write seeds `seed, seed+1, …` into `--out-dir` instead of one file.
    #[arg(long, requires = "out_dir")]
    pub count: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

impl RandomArgs {
    fn params(&self) -> RandomParams {
        RandomParams {
            demands: self.demands,
            penalty: match self.penalty {
                PenaltyArg::Additive => PenaltyKind::Additive,
                PenaltyArg::Capped => PenaltyKind::Capped,
            },
            rooted: self.rooted,
            max_cost: self.max_cost,
            max_penalty: self.max_penalty,
        }
    }
}

pub fn gen(kind: &GenKind, output: Option<&Path>) -> CliResult<()> {
    let (random, common) = match kind {
        GenKind::Grid { rows, cols, common } => (RandomKind::Grid { rows: *rows, cols: *cols }, common),
        GenKind::SeriesParallel { n, common } => (RandomKind::SeriesParallel { n: *n }, common),
        GenKind::ErdosRenyi { n, p, common } => (RandomKind::ErdosRenyi { n: *n, p: *p }, common),
        GenKind::VcGadget { graph } => {
            let g = gen_vc_gadget(&CubicGraph::named(graph)?)?;
            return crate::emit(&g.instance.to_json(), output);
        }
        GenKind::Euclid { graph, divisor, point_budget } => {
            let g = EuclideanGadget::new(&CubicGraph::named(graph)?, *divisor)?;
            return crate::emit(&g.to_instance(*point_budget)?.to_json(), output);
        }
    };
    let params = common.params();
    match (common.count, &common.out_dir) {
        (Some(count), Some(dir)) => {
            std::fs::create_dir_all(dir)?;
            let tag = match random {
                RandomKind::Grid { .. } => "grid",
                RandomKind::SeriesParallel { .. } => "sp",
                RandomKind::ErdosRenyi { .. } => "er",
            };
            for seed in common.seed..common.seed + count {
                gen_random(random, &params, seed)?.save(dir.join(format!("{tag}_{seed:06}.json")))?;
            }
            Ok(())
        }
        _ => {
            let inst: Instance = gen_random(random, &params, common.seed)?;
            crate::emit(&inst.to_json(), output)
        }
    }
}
