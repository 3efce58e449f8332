//! Instances `(G, 𝒟, π)` and their JSON form.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::penalty::{DemandSet, PenaltyFn, PenaltySpec};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Demand {
    pub s: VertexId,
    pub t: VertexId,
}

impl Demand {
    /// True when exactly one endpoint lies in the set described by `inside`.
    pub fn crosses(&self, inside: impl Fn(VertexId) -> bool) -> bool {
        inside(self.s) != inside(self.t)
    }
}

/// Which connectivity structure a solution must have.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    /// Any forest; each demand is satisfied by connecting its endpoints.
    #[default]
    Forest,
    /// A single tree containing the root.
    Tree,
    /// A closed walk through the root.
    Tour,
    /// An open walk through the root with free endpoints.
    Stroll,
}

impl Problem {
    pub fn is_rooted(self) -> bool {
        self != Problem::Forest
    }
}

impl std::str::FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forest" => Ok(Problem::Forest),
            "tree" => Ok(Problem::Tree),
            "tour" => Ok(Problem::Tour),
            "stroll" => Ok(Problem::Stroll),
            other => Err(Error::parse(format!("unknown problem kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub demands: Vec<Demand>,
    pub penalty: PenaltyFn,
    pub root: Option<VertexId>,
    /// Planar coordinates, present for geometric instances.
    pub points: Option<Vec<(i64, i64)>>,
}

impl Instance {
    pub fn new(graph: Graph, demands: Vec<Demand>, penalty: PenaltyFn, root: Option<VertexId>) -> Result<Self> {
        let n = graph.vertex_count();
        for (i, d) in demands.iter().enumerate() {
            if d.s >= n || d.t >= n {
                return Err(Error::domain(format!("demand {i} references a vertex outside 0..{n}")));
            }
            if d.s == d.t {
                return Err(Error::domain(format!("demand {i} has equal endpoints")));
            }
        }
        if penalty.ground_size() != demands.len() {
            return Err(Error::domain(format!(
                "penalty ground set has {} demands but the instance has {}",
                penalty.ground_size(),
                demands.len()
            )));
        }
        if let Some(r) = root {
            if r >= n {
                return Err(Error::domain(format!("root {r} outside 0..{n}")));
            }
        }
        Ok(Instance { graph, demands, penalty, root, points: None })
    }

    /// Rooted instance with one demand `{v, r}` per listed vertex.
    pub fn rooted(graph: Graph, root: VertexId, terminals: &[VertexId], penalty: PenaltyFn) -> Result<Self> {
        let demands = terminals.iter().map(|&v| Demand { s: v, t: root }).collect();
        Instance::new(graph, demands, penalty, Some(root))
    }

    pub fn demand_count(&self) -> usize {
        self.demands.len()
    }

    pub fn all_demands(&self) -> DemandSet {
        DemandSet::full(self.demands.len())
    }

    /// The root, if every demand has it as an endpoint.
    pub fn rooted_at(&self) -> Option<VertexId> {
        let r = self.root?;
        self.demands.iter().all(|d| d.s == r || d.t == r).then_some(r)
    }

    pub fn require_root(&self) -> Result<VertexId> {
        self.rooted_at()
            .ok_or_else(|| Error::Precondition("instance needs a root shared by every demand".into()))
    }

    /// The non-root endpoint of a rooted demand.
    pub fn terminal(&self, d: usize) -> Option<VertexId> {
        let r = self.rooted_at()?;
        let dm = self.demands[d];
        Some(if dm.s == r { dm.t } else { dm.s })
    }

    /// Vertex prizes `π(v) = Σ p_d` over rooted demands `{v, r}`; requires
    /// additive penalties.
    pub fn vertex_penalties(&self) -> Result<Vec<Rational>> {
        let r = self.require_root()?;
        let PenaltyFn::Additive { values } = &self.penalty else {
            return Err(Error::Precondition("vertex penalties need an additive penalty function".into()));
        };
        let mut out = vec![rational::zero(); self.graph.vertex_count()];
        for (i, d) in self.demands.iter().enumerate() {
            let v = if d.s == r { d.t } else { d.s };
            out[v] += &values[i];
        }
        Ok(out)
    }

    pub fn with_graph(&self, graph: Graph) -> Result<Self> {
        let mut out = Instance::new(graph, self.demands.clone(), self.penalty.clone(), self.root)?;
        out.points = self.points.clone();
        Ok(out)
    }

    pub fn with_penalty(&self, penalty: PenaltyFn) -> Result<Self> {
        let mut out = Instance::new(self.graph.clone(), self.demands.clone(), penalty, self.root)?;
        out.points = self.points.clone();
        Ok(out)
    }

    /// Keeps only the listed demands (re-indexed in order), charging the
    /// dropped ones as if always unsatisfied. Returns the constant
    /// `π(dropped)` alongside.
    pub fn restricted_to(&self, keep: &[usize]) -> Result<(Instance, Rational)> {
        let keep_set: DemandSet = keep.iter().copied().collect();
        let dropped = self.all_demands().difference(&keep_set);
        let (penalty, base) = self.penalty.restricted(&dropped, keep)?;
        let demands = keep.iter().map(|&d| self.demands[d]).collect();
        let mut out = Instance::new(self.graph.clone(), demands, penalty, self.root)?;
        out.points = self.points.clone();
        Ok((out, base))
    }

    pub fn to_spec(&self) -> InstanceSpec {
        InstanceSpec {
            vertices: self.graph.vertex_count(),
            edges: self.graph.edges().iter().map(|e| (e.u, e.v, rational::format(&e.cost))).collect(),
            demands: self.demands.iter().map(|d| (d.s, d.t)).collect(),
            penalty: PenaltySpec::from_fn(&self.penalty),
            root: self.root,
            points: self.points.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_spec()).expect("instance serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: InstanceSpec = serde_json::from_str(text).map_err(|e| Error::parse(e.to_string()))?;
        spec.build()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Instance::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

/// JSON shape of an instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub vertices: usize,
    pub edges: Vec<(VertexId, VertexId, String)>,
    pub demands: Vec<(VertexId, VertexId)>,
    pub penalty: PenaltySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<(i64, i64)>>,
}

impl InstanceSpec {
    /// Validates and builds the instance. Demands with `s = t` are dropped
    /// with a warning; the penalty is restricted to the remaining ones.
    pub fn build(&self) -> Result<Instance> {
        let edges = self
            .edges
            .iter()
            .map(|(u, v, c)| Ok((*u, *v, rational::parse(c)?)))
            .collect::<Result<Vec<_>>>()?;
        let graph = Graph::from_edges(self.vertices, edges)?;
        let penalty = self.penalty.to_fn()?;
        if penalty.ground_size() != self.demands.len() {
            return Err(Error::parse(format!(
                "penalty lists {} demands but {} are given",
                penalty.ground_size(),
                self.demands.len()
            )));
        }
        let keep: Vec<usize> = (0..self.demands.len()).filter(|&i| self.demands[i].0 != self.demands[i].1).collect();
        let (penalty, demands) = if keep.len() == self.demands.len() {
            (penalty, self.demands.clone())
        } else {
            log::warn!("dropping {} demand(s) with equal endpoints", self.demands.len() - keep.len());
            let (restricted, _) = penalty.restricted(&DemandSet::new(), &keep)?;
            (restricted, keep.iter().map(|&i| self.demands[i]).collect())
        };
        let demands = demands.into_iter().map(|(s, t)| Demand { s, t }).collect();
        let mut inst = Instance::new(graph, demands, penalty, self.root)?;
        if let Some(points) = &self.points {
            if points.len() != self.vertices {
                return Err(Error::parse("point count differs from vertex count"));
            }
            inst.points = Some(points.clone());
        }
        Ok(inst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn k2(cost: i64, penalty: i64) -> Instance {
        let g = Graph::from_edges(2, [(0, 1, int(cost))]).unwrap();
        Instance::new(g, vec![Demand { s: 0, t: 1 }], PenaltyFn::additive(vec![int(penalty)]).unwrap(), None).unwrap()
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let inst = k2(2, 10);
        let text = inst.to_json();
        let again = Instance::from_json(&text).unwrap();
        assert_eq!(again, inst);
        assert_eq!(again.to_json(), text);
    }

    #[test]
    fn equal_endpoint_demands_are_stripped() {
        let text = r#"{"vertices":2,"edges":[[0,1,"1"]],"demands":[[0,0],[0,1]],
            "penalty":{"kind":"additive","values":["4","5"]}}"#;
        let inst = Instance::from_json(text).unwrap();
        assert_eq!(inst.demands, vec![Demand { s: 0, t: 1 }]);
        assert_eq!(inst.penalty.eval(&DemandSet::from_mask(1)).unwrap(), int(5));
    }

    #[test]
    fn table_offset_survives_round_trip() {
        let text = r#"{"vertices":2,"edges":[],"demands":[[0,1]],
            "penalty":{"kind":"table","ground":1,"values":["2","5"]}}"#;
        let inst = Instance::from_json(text).unwrap();
        assert_eq!(inst.penalty.offset(), int(2));
        let once = inst.to_json();
        assert_eq!(Instance::from_json(&once).unwrap().to_json(), once);
        assert_eq!(Instance::from_json(&once).unwrap().penalty.offset(), int(2));
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(Instance::from_json("{").is_err());
        let loop_edge = r#"{"vertices":2,"edges":[[1,1,"1"]],"demands":[],"penalty":{"kind":"additive","values":[]}}"#;
        assert!(Instance::from_json(loop_edge).is_err());
        let neg = r#"{"vertices":2,"edges":[[0,1,"-1"]],"demands":[],"penalty":{"kind":"additive","values":[]}}"#;
        assert!(Instance::from_json(neg).is_err());
    }

    #[test]
    fn vertex_penalties_sum_rooted_demands() {
        let g = Graph::from_edges(3, [(0, 1, int(1)), (1, 2, int(1))]).unwrap();
        let inst = Instance::rooted(g, 0, &[1, 2, 2], PenaltyFn::additive(vec![int(1), int(2), int(3)]).unwrap()).unwrap();
        assert_eq!(inst.vertex_penalties().unwrap(), vec![int(0), int(1), int(5)]);
    }
}
