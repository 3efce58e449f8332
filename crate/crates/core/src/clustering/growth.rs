//! The growth phase.

use num_traits::{Signed, Zero};

use super::trace::{y_hash, TraceEvent, TraceKind};
use super::{Cluster, DualState, LaminarFamily, Merge};
use crate::error::{Error, Result};
use crate::graph::EdgeId;
use crate::instance::Instance;
use crate::penalty::DemandSet;
use crate::rational::{self, Rational};
use crate::submodular::{compute_eta, dead_set_update, Binding, EdgeConstraint, SlackFn};

/// Everything the growth phase produces.
#[derive(Clone, Debug)]
pub struct GrowthOutput {
    pub forest: Vec<EdgeId>,
    pub dual: DualState,
    pub family: LaminarFamily,
    pub dead: DemandSet,
    pub iterations: usize,
    pub trace: Vec<TraceEvent>,
}

/// Growth phase state, advanced one iteration at a time by [`GrowthRun::step`].
#[derive(Clone, Debug)]
pub struct GrowthRun<'a> {
    inst: &'a Instance,
    family: LaminarFamily,
    owner: Vec<usize>,
    dual: DualState,
    charge: Vec<Rational>,
    load: Vec<Rational>,
    live: DemandSet,
    dead: DemandSet,
    forest: Vec<EdgeId>,
    iterations: usize,
    trace: Vec<TraceEvent>,
    finished: bool,
}

impl<'a> GrowthRun<'a> {
    /// Starts from singleton clusters; demands with zero penalty die at once.
    pub fn new(inst: &'a Instance) -> Result<Self> {
        let n = inst.graph.vertex_count();
        let k = inst.demand_count();
        let mut run = GrowthRun {
            inst,
            family: LaminarFamily::singletons(n),
            owner: (0..n).collect(),
            dual: DualState::default(),
            charge: vec![Rational::zero(); k],
            load: vec![Rational::zero(); inst.graph.edge_count()],
            live: DemandSet::full(k),
            dead: DemandSet::new(),
            forest: Vec::new(),
            iterations: 0,
            trace: Vec::new(),
            finished: false,
        };
        run.update_deaths()?;
        Ok(run)
    }

    pub fn family(&self) -> &LaminarFamily {
        &self.family
    }

    pub fn dual(&self) -> &DualState {
        &self.dual
    }

    pub fn dead(&self) -> &DemandSet {
        &self.dead
    }

    pub fn forest(&self) -> &[EdgeId] {
        &self.forest
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Number of live demands crossing each current cluster.
    fn kappa(&self) -> Vec<usize> {
        let mut kappa = vec![0; self.family.clusters.len()];
        for d in self.live.iter() {
            let dm = self.inst.demands[d];
            let (cs, ct) = (self.owner[dm.s], self.owner[dm.t]);
            if cs != ct {
                kappa[cs] += 1;
                kappa[ct] += 1;
            }
        }
        kappa
    }

    /// Runs one iteration: grow by η, merge tight edges, record deaths.
    /// Returns false once no cluster is active.
    pub fn step(&mut self) -> Result<bool> {
        if self.finished {
            return Ok(false);
        }
        let inst = self.inst;
        let g = &inst.graph;
        let kappa = self.kappa();
        let active_count = self.family.current.iter().filter(|&&c| kappa[c] > 0).count();
        if active_count == 0 {
            self.finished = true;
            return Ok(false);
        }
        let mut constraints = Vec::new();
        for (id, e) in g.edges().iter().enumerate() {
            let (a, b) = (self.owner[e.u], self.owner[e.v]);
            if a != b {
                let rate = u32::from(kappa[a] > 0) + u32::from(kappa[b] > 0);
                constraints.push(EdgeConstraint { edge: id, slack: &e.cost - &self.load[id], rate });
            }
        }
        let mut rate = vec![Rational::zero(); inst.demand_count()];
        for d in self.live.iter() {
            let dm = inst.demands[d];
            let (cs, ct) = (self.owner[dm.s], self.owner[dm.t]);
            if cs != ct {
                rate[d] = Rational::new(1.into(), kappa[cs].into()) + Rational::new(1.into(), kappa[ct].into());
            }
        }
        let slack = SlackFn::new(&inst.penalty, self.charge.clone(), rate)?;
        let eta = compute_eta(active_count, &constraints, &slack)?;
        if eta.binding == Binding::Unbounded {
            return Err(Error::Internal("active cluster with no binding constraint".into()));
        }
        let eta = eta.eta;
        self.iterations += 1;

        if eta.is_positive() {
            for &c in &self.family.current {
                if kappa[c] == 0 {
                    continue;
                }
                let share = &eta / Rational::from_integer(kappa[c].into());
                for d in self.live.iter() {
                    let dm = inst.demands[d];
                    let (cs, ct) = (self.owner[dm.s], self.owner[dm.t]);
                    if cs != ct && (cs == c || ct == c) {
                        self.dual.add(c, d, &share);
                        self.charge[d] += &share;
                    }
                }
            }
            for c in &constraints {
                if c.rate > 0 {
                    self.load[c.edge] += &eta * Rational::from_integer(c.rate.into());
                }
            }
        }
        let active: Vec<usize> = self.family.current.iter().copied().filter(|&c| kappa[c] > 0).collect();
        self.push(TraceKind::Grow, Some(rational::format(&eta)), active, None, vec![]);

        self.merge_tight_edges();
        self.update_deaths()?;
        Ok(true)
    }

    fn merge_tight_edges(&mut self) {
        let g = &self.inst.graph;
        loop {
            let kappa = self.kappa();
            let tight = g.edges().iter().enumerate().find(|(id, e)| {
                let (a, b) = (self.owner[e.u], self.owner[e.v]);
                a != b && (kappa[a] > 0 || kappa[b] > 0) && self.load[*id] == e.cost
            });
            let Some((id, e)) = tight else { break };
            let (a, b) = (self.owner[e.u], self.owner[e.v]);
            let mut members = self.family.clusters[a].members.clone();
            members.extend_from_slice(&self.family.clusters[b].members);
            members.sort_unstable();
            let new = self.family.clusters.len();
            for &v in &members {
                self.owner[v] = new;
            }
            self.family.clusters.push(Cluster { members, merge: Some(Merge { left: a, right: b, edge: id }) });
            self.family.current.retain(|&c| c != a && c != b);
            self.family.current.push(new);
            self.forest.push(id);
            self.push(TraceKind::Merge, None, vec![a, b, new], Some(id), vec![]);
        }
    }

    fn update_deaths(&mut self) -> Result<()> {
        let k = self.inst.demand_count();
        let slack = SlackFn::new(&self.inst.penalty, self.charge.clone(), vec![Rational::zero(); k])?;
        let newly = dead_set_update(&slack, &self.live)?;
        if !newly.is_empty() {
            self.live = self.live.difference(&newly);
            self.dead = self.dead.union(&newly);
            self.push(TraceKind::Death, None, vec![], None, newly.to_vec());
        }
        Ok(())
    }

    fn push(&mut self, kind: TraceKind, eta: Option<String>, clusters: Vec<usize>, edge: Option<EdgeId>, demands: Vec<usize>) {
        let step = self.trace.len();
        let y_hash = y_hash(&self.dual);
        self.trace.push(TraceEvent { step, kind, eta, clusters, edge, demands, y_hash });
    }

    /// Current dual load on every edge.
    pub fn loads(&self) -> &[Rational] {
        &self.load
    }

    pub fn finish(self) -> GrowthOutput {
        GrowthOutput {
            forest: self.forest,
            dual: self.dual,
            family: self.family,
            dead: self.dead,
            iterations: self.iterations,
            trace: self.trace,
        }
    }
}

/// Runs the growth phase to completion.
pub fn grow(inst: &Instance) -> Result<GrowthOutput> {
    let mut run = GrowthRun::new(inst)?;
    let bound = 2 * inst.graph.vertex_count() + inst.demand_count();
    while run.step()? {
        if run.iterations > bound {
            return Err(Error::Internal(format!("growth exceeded {bound} iterations")));
        }
    }
    Ok(run.finish())
}
