//! Demand restriction against a scaled clustering run, contraction of the
//! resulting forest, and potential-driven merging of its components into
//! separable pieces.

mod contract;
mod merge;
mod pipeline;
mod restrict;

pub use contract::{contract_components, Contraction};
pub use merge::{pc_cluster_merge, MergeOutput, MergeTree};
pub use pipeline::{reduction_pipeline, write_bundle, BundleManifest, PipelineOutput, Subinstance};
pub use restrict::{restrict_demands, ClusteringInitial, ExactInitial, InitialSolver, RestrictOutput};
