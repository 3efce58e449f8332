//! Prize-collecting Steiner network problems with submodular penalties.

pub mod error;
pub mod gadgets;
pub mod clustering;
pub mod graph;
pub mod instance;
pub mod oracle;
pub mod penalty;
pub mod rational;
pub mod reduction;
pub mod solution;
pub mod submodular;
pub mod treewidth;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, Graph, UnionFind, VertexId};
pub use instance::{Demand, Instance, Problem};
pub use penalty::{check_penalty_axioms, DemandSet, PenaltyFn};
pub use rational::Rational;
pub use solution::{solution_cost, Solution};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/instances.md")]
    pub mod instances {}
    #[doc = include_str!("../../../book/src/clustering.md")]
    pub mod clustering {}
    #[doc = include_str!("../../../book/src/reduction.md")]
    pub mod reduction {}
    #[doc = include_str!("../../../book/src/treewidth.md")]
    pub mod treewidth {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    pub mod oracles {}
    #[doc = include_str!("../../../book/src/gadgets.md")]
    pub mod gadgets {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
