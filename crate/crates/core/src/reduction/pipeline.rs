//! Restriction followed by merging, split into independent subinstances.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::merge::{pc_cluster_merge, MergeOutput};
use super::restrict::{restrict_demands, InitialSolver, RestrictOutput};
use crate::error::Result;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::instance::{Demand, Instance};
use crate::rational::{self, Rational};

/// The subinstance induced by one merged tree.
#[derive(Clone, Debug)]
pub struct Subinstance {
    /// Original vertex ids; vertex `i` of `instance` is `vertices[i]`.
    pub vertices: Vec<VertexId>,
    /// Original demand ids, in the order of `instance.demands`.
    pub demands: Vec<usize>,
    /// Original edge ids; edge `i` of `instance` is `edges[i]`.
    pub edges: Vec<EdgeId>,
    /// Penalties are `D ↦ π(D ∪ 𝒟ᵘⁿˢᵃᵗ) − π(𝒟ᵘⁿˢᵃᵗ)`.
    pub instance: Instance,
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub restrict: RestrictOutput,
    pub merge: MergeOutput,
    pub pieces: Vec<Subinstance>,
}

/// Restricts the demands, merges the restricted forest and cuts the
/// instance into one induced subinstance per merged tree.
pub fn reduction_pipeline(inst: &Instance, epsilon: &Rational, initial: &dyn InitialSolver) -> Result<PipelineOutput> {
    let restrict = restrict_demands(inst, epsilon, initial)?;
    let merge = pc_cluster_merge(inst, &restrict.forest, &restrict.satisfied, epsilon)?;
    let pieces = merge
        .trees
        .iter()
        .map(|t| induced(inst, &t.vertices, &t.demands, &restrict))
        .collect::<Result<Vec<_>>>()?;
    Ok(PipelineOutput { restrict, merge, pieces })
}

fn induced(inst: &Instance, vertices: &[VertexId], demands: &[usize], restrict: &RestrictOutput) -> Result<Subinstance> {
    let index: HashMap<VertexId, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut g = Graph::new(vertices.len());
    let mut edges = Vec::new();
    for (id, e) in inst.graph.edges().iter().enumerate() {
        if let (Some(&a), Some(&b)) = (index.get(&e.u), index.get(&e.v)) {
            g.add_edge(a, b, e.cost.clone())?;
            edges.push(id);
        }
    }
    let (penalty, _) = inst.penalty.restricted(&restrict.unsatisfied, demands)?;
    let ds = demands.iter().map(|&d| Demand { s: index[&inst.demands[d].s], t: index[&inst.demands[d].t] }).collect();
    let root = inst.root.and_then(|r| index.get(&r).copied());
    let instance = Instance::new(g, ds, penalty, root)?;
    Ok(Subinstance { vertices: vertices.to_vec(), demands: demands.to_vec(), edges, instance })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundlePiece {
    pub file: String,
    pub vertices: Vec<VertexId>,
    pub demands: Vec<usize>,
}

/// `manifest.json` of a subinstance bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleManifest {
    pub epsilon: String,
    pub unsatisfied: Vec<usize>,
    /// `π(𝒟ᵘⁿˢᵃᵗ)`, the constant added to every piece.
    pub base: String,
    pub base_exact: String,
    pub forest_length: String,
    pub merged_length: String,
    pub bound: String,
    pub pieces: Vec<BundlePiece>,
}

/// Writes `piece_000.json`, `piece_001.json`, … and `manifest.json` into
/// `dir`, creating it if needed.
pub fn write_bundle(dir: impl AsRef<Path>, out: &PipelineOutput) -> Result<BundleManifest> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let mut pieces = Vec::new();
    for (i, p) in out.pieces.iter().enumerate() {
        let file = format!("piece_{i:03}.json");
        p.instance.save(dir.join(&file))?;
        pieces.push(BundlePiece { file, vertices: p.vertices.clone(), demands: p.demands.clone() });
    }
    let manifest = BundleManifest {
        epsilon: rational::format(&out.restrict.epsilon),
        unsatisfied: out.restrict.unsatisfied.to_vec(),
        base: rational::format(&out.restrict.base),
        base_exact: rational::format_fraction(&out.restrict.base),
        forest_length: rational::format(&out.merge.forest_length),
        merged_length: rational::format(&out.merge.total_length),
        bound: rational::format(&out.merge.bound),
        pieces,
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    std::fs::write(dir.join("manifest.json"), text)?;
    Ok(manifest)
}
