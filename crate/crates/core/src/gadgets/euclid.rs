//! The Euclidean gadget: a long vertical lattice path through the origin
//! with horizontal lattice arms at `y = iV`, `y = −jV` and `y = −jV + 4U`,
//! and the points `a_i`, `b_j`, `c¹_j`, `c²_j` beyond the arm ends.
//!
//! At full size the lattice of `K₄` alone has over 10⁸ points, so points
//! and demands are streamed; only scaled-down instances are materialized.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::CubicGraph;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::{Demand, Instance};
use crate::penalty::PenaltyFn;
use crate::rational::int;

/// Largest point count [`EuclideanGadget::to_instance`] accepts by default.
pub const DEFAULT_POINT_BUDGET: usize = 1_000_000;

/// Point kinds; indices are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EuclideanPoint {
    Z(i64, i64),
    A(usize),
    B(usize),
    C1(usize),
    C2(usize),
}

/// Named points present at every scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Anchor {
    Origin,
    Top,
    Bottom,
    W(usize),
    W1(usize),
    W2(usize),
    A(usize),
    B(usize),
    C1(usize),
    C2(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EuclideanCounts {
    pub z: u64,
    pub points: u64,
    pub lattice_demands: u64,
    pub demands: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EuclideanGadget {
    pub source: CubicGraph,
    pub divisor: i64,
    /// Unit of cost.
    pub u: i64,
    /// Arm length.
    pub h: i64,
    /// Vertical spacing.
    pub v: i64,
}

impl EuclideanGadget {
    /// Builds the construction with unit `U = 10000(n+m)/s` on the integer
    /// lattice, `H = 10U`, `V = 100U`. The divisor must divide
    /// `10000(n+m)` and leave `U > 10`.
    pub fn new(source: &CubicGraph, divisor: i64) -> Result<Self> {
        let source = CubicGraph::new(source.n, source.edges.clone())?;
        let full = 10_000 * (source.n + source.m()) as i64;
        if divisor < 1 || full % divisor != 0 {
            return Err(Error::domain(format!("scale divisor {divisor} does not divide {full}")));
        }
        let u = full / divisor;
        if u <= 10 {
            return Err(Error::domain(format!("scale divisor {divisor} leaves U = {u}, need U > 10")));
        }
        Ok(EuclideanGadget { source, divisor, u, h: 10 * u, v: 100 * u })
    }

    fn nm(&self) -> (i64, i64) {
        (self.source.n as i64, self.source.m() as i64)
    }

    /// The y-coordinates of the horizontal arms.
    fn arms(&self) -> Vec<i64> {
        let (n, m) = self.nm();
        let mut ys: Vec<i64> = (1..=n).map(|i| i * self.v).collect();
        for j in 1..=m {
            ys.push(-j * self.v);
            ys.push(-j * self.v + 4 * self.u);
        }
        ys
    }

    pub fn coordinate(&self, p: EuclideanPoint) -> (i64, i64) {
        let (h, u, v) = (self.h, self.u, self.v);
        match p {
            EuclideanPoint::Z(x, y) => (x, y),
            EuclideanPoint::A(i) => (h + 2 * u, (i as i64 + 1) * v),
            EuclideanPoint::B(j) => (h, -(j as i64 + 1) * v + 2 * u),
            EuclideanPoint::C1(j) => (h, -(j as i64 + 1) * v + u),
            EuclideanPoint::C2(j) => (h, -(j as i64 + 1) * v + 3 * u),
        }
    }

    /// Every point: the vertical path bottom to top, then each arm left to
    /// right without its `x = 0` point, then `a`, `b`, `c¹`, `c²`.
    pub fn points(&self) -> impl Iterator<Item = EuclideanPoint> + '_ {
        let (n, m) = self.nm();
        let path = (-m * self.v..=n * self.v).map(|y| EuclideanPoint::Z(0, y));
        let arms = self.arms().into_iter().flat_map(move |y| (1..=self.h).map(move |x| EuclideanPoint::Z(x, y)));
        let m = m as usize;
        let rest = (0..self.source.n)
            .map(EuclideanPoint::A)
            .chain((0..m).map(EuclideanPoint::B))
            .chain((0..m).map(EuclideanPoint::C1))
            .chain((0..m).map(EuclideanPoint::C2));
        path.chain(arms).chain(rest)
    }

    /// Every demand with its penalty: lattice neighbours (penalty 1), then
    /// `{(0,0), b_j}` (penalty `3U`), then `{a_i, c^ℓ_j}` (penalty `U − 10`).
    pub fn demands(&self) -> impl Iterator<Item = (EuclideanPoint, EuclideanPoint, i64)> + '_ {
        let (n, m) = self.nm();
        let path = (-m * self.v..n * self.v).map(|y| (EuclideanPoint::Z(0, y), EuclideanPoint::Z(0, y + 1), 1));
        let arms = self
            .arms()
            .into_iter()
            .flat_map(move |y| (0..self.h).map(move |x| (EuclideanPoint::Z(x, y), EuclideanPoint::Z(x + 1, y), 1)));
        let roots = (0..m as usize).map(move |j| (EuclideanPoint::Z(0, 0), EuclideanPoint::B(j), 3 * self.u));
        let covers = self.source.edges.iter().enumerate().flat_map(move |(j, &(a, b))| {
            [(EuclideanPoint::A(a), EuclideanPoint::C1(j), self.u - 10), (EuclideanPoint::A(b), EuclideanPoint::C2(j), self.u - 10)]
        });
        path.chain(arms).chain(roots).chain(covers)
    }

    /// Counts from the construction's families: `|Z| = (n+m)V + 1 + (n+2m)H`
    /// and `|Z| − 1` lattice demands plus `m` root demands and `2m` cover
    /// demands.
    pub fn counts(&self) -> EuclideanCounts {
        let (n, m) = self.nm();
        let z = ((n + m) * self.v + 1 + (n + 2 * m) * self.h) as u64;
        let (n, m) = (n as u64, m as u64);
        EuclideanCounts { z, points: z + n + 3 * m, lattice_demands: z - 1, demands: z - 1 + 3 * m }
    }

    /// The same quantities as printed with the construction: the point
    /// count agrees, the demand count reads `|Z| − 1 + n + 3m`.
    pub fn stated_counts(&self) -> EuclideanCounts {
        let c = self.counts();
        let (n, m) = (self.source.n as u64, self.source.m() as u64);
        EuclideanCounts { demands: c.z - 1 + n + 3 * m, ..c }
    }

    /// Counts by streaming [`Self::points`] and [`Self::demands`].
    pub fn streamed_counts(&self) -> EuclideanCounts {
        let mut z = 0u64;
        let mut points = 0u64;
        for p in self.points() {
            points += 1;
            if matches!(p, EuclideanPoint::Z(..)) {
                z += 1;
            }
        }
        let mut lattice_demands = 0u64;
        let mut demands = 0u64;
        for (p, q, _) in self.demands() {
            demands += 1;
            if matches!((p, q), (EuclideanPoint::Z(..), EuclideanPoint::Z(..))) {
                lattice_demands += 1;
            }
        }
        EuclideanCounts { z, points, lattice_demands, demands }
    }

    /// Lattice adjacencies found by looking up the right and upper
    /// neighbour of every point of `Z`; independent of [`Self::demands`].
    pub fn lattice_adjacencies_by_lookup(&self, point_budget: usize) -> Result<u64> {
        self.check_budget(point_budget)?;
        let zs: HashSet<(i64, i64)> = self
            .points()
            .filter_map(|p| match p {
                EuclideanPoint::Z(x, y) => Some((x, y)),
                _ => None,
            })
            .collect();
        Ok(zs.iter().map(|&(x, y)| zs.contains(&(x + 1, y)) as u64 + zs.contains(&(x, y + 1)) as u64).sum())
    }

    pub fn anchors(&self) -> Vec<(Anchor, (i64, i64))> {
        let (n, m) = self.nm();
        let mut out = vec![(Anchor::Origin, (0, 0)), (Anchor::Top, (0, n * self.v)), (Anchor::Bottom, (0, -m * self.v))];
        for i in 0..self.source.n {
            out.push((Anchor::W(i), (self.h, (i as i64 + 1) * self.v)));
            out.push((Anchor::A(i), self.coordinate(EuclideanPoint::A(i))));
        }
        for j in 0..self.source.m() {
            let y = -(j as i64 + 1) * self.v;
            out.push((Anchor::W1(j), (self.h, y)));
            out.push((Anchor::W2(j), (self.h, y + 4 * self.u)));
            out.push((Anchor::B(j), self.coordinate(EuclideanPoint::B(j))));
            out.push((Anchor::C1(j), self.coordinate(EuclideanPoint::C1(j))));
            out.push((Anchor::C2(j), self.coordinate(EuclideanPoint::C2(j))));
        }
        out
    }

    fn check_budget(&self, point_budget: usize) -> Result<()> {
        let points = self.counts().points;
        if points > point_budget as u64 {
            return Err(Error::capacity(format!("{points} points exceed the budget of {point_budget}")));
        }
        Ok(())
    }

    /// Materializes the points as vertices with the lattice edges and the
    /// construction's spokes as graph edges (all of integer length) and
    /// every demand with an additive penalty.
    pub fn to_instance(&self, point_budget: usize) -> Result<Instance> {
        self.check_budget(point_budget)?;
        let coords: Vec<(i64, i64)> = self.points().map(|p| self.coordinate(p)).collect();
        let index: HashMap<(i64, i64), usize> = coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        if index.len() != coords.len() {
            return Err(Error::Internal("two gadget points share a coordinate".into()));
        }
        let at = |p: EuclideanPoint| index[&self.coordinate(p)];
        let mut g = Graph::new(coords.len());
        let mut demands = Vec::new();
        let mut penalties = Vec::new();
        for (p, q, pen) in self.demands() {
            if let (EuclideanPoint::Z(..), EuclideanPoint::Z(..)) = (p, q) {
                g.add_edge(at(p), at(q), int(1))?;
            }
            demands.push(Demand { s: at(p), t: at(q) });
            penalties.push(int(pen));
        }
        for (i, &y) in self.arms().iter().take(self.source.n).enumerate() {
            g.add_edge(index[&(self.h, y)], at(EuclideanPoint::A(i)), int(2 * self.u))?;
        }
        for j in 0..self.source.m() {
            let y = -(j as i64 + 1) * self.v;
            let (b, c1, c2) = (at(EuclideanPoint::B(j)), at(EuclideanPoint::C1(j)), at(EuclideanPoint::C2(j)));
            g.add_edge(index[&(self.h, y)], c1, int(self.u))?;
            g.add_edge(index[&(self.h, y + 4 * self.u)], c2, int(self.u))?;
            g.add_edge(c1, b, int(self.u))?;
            g.add_edge(c2, b, int(self.u))?;
        }
        let mut inst = Instance::new(g, demands, PenaltyFn::additive(penalties)?, None)?;
        inst.points = Some(coords);
        Ok(inst)
    }
}

/// Squared Euclidean distance.
pub fn squared_distance(p: (i64, i64), q: (i64, i64)) -> i128 {
    let dx = (p.0 - q.0) as i128;
    let dy = (p.1 - q.1) as i128;
    dx * dx + dy * dy
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(g: CubicGraph) -> EuclideanGadget {
        let full = 10_000 * (g.n + g.m()) as i64;
        EuclideanGadget::new(&g, full / 20).unwrap()
    }

    #[test]
    fn divisor_must_divide_and_leave_room() {
        let g = CubicGraph::k4();
        assert!(EuclideanGadget::new(&g, 3).is_err());
        assert!(EuclideanGadget::new(&g, 10_000).is_err());
        assert_eq!(EuclideanGadget::new(&g, 1).unwrap().u, 100_000);
    }

    #[test]
    fn counts_agree_on_a_small_gadget() {
        let gad = small(CubicGraph::k4());
        let c = gad.counts();
        assert_eq!(gad.streamed_counts(), c);
        assert_eq!(gad.lattice_adjacencies_by_lookup(DEFAULT_POINT_BUDGET).unwrap(), c.lattice_demands);
        assert_eq!(c.z, 10 * 2000 + 1 + 16 * 200);
        assert_eq!(gad.stated_counts().demands - c.demands, 4);
    }

    #[test]
    fn instance_is_structurally_valid() {
        let gad = small(CubicGraph::k4());
        let inst = gad.to_instance(DEFAULT_POINT_BUDGET).unwrap();
        let c = gad.counts();
        assert_eq!(inst.graph.vertex_count() as u64, c.points);
        assert_eq!(inst.demand_count() as u64, c.demands);
        let pts = inst.points.as_ref().unwrap();
        for e in inst.graph.edges() {
            let d2 = squared_distance(pts[e.u], pts[e.v]);
            let len: i128 = e.cost.to_integer().try_into().unwrap();
            assert_eq!(d2, len * len);
        }
        assert!(matches!(gad.to_instance(10), Err(Error::Capacity(_))));
    }

    #[test]
    fn anchor_distances_scale_exactly() {
        let g = CubicGraph::prism();
        let big = EuclideanGadget::new(&g, 10).unwrap();
        let tiny = EuclideanGadget::new(&g, 1000).unwrap();
        let (a, b) = (big.anchors(), tiny.anchors());
        assert_eq!(a.len(), b.len());
        for i in 0..a.len() {
            for k in 0..a.len() {
                assert_eq!(a[i].0, b[i].0);
                assert_eq!(squared_distance(a[i].1, a[k].1), 10_000 * squared_distance(b[i].1, b[k].1));
            }
        }
    }
}
