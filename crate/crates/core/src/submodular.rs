//! Value-oracle submodular machinery used by the growth phase: minimising
//! the slack function, computing the growth step η, and detecting dead
//! demands.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::EdgeId;
use crate::penalty::{DemandSet, PenaltyFn, MAX_TABLE_GROUND};
use crate::rational::Rational;

/// `g_η(D) = π(D) − y(D) − η·rate(D)`.
#[derive(Clone, Debug)]
pub struct SlackFn<'a> {
    pub base: &'a PenaltyFn,
    /// `y_d` per demand.
    pub charge: Vec<Rational>,
    /// Growth rate of `y_d` per unit of η.
    pub rate: Vec<Rational>,
}

impl<'a> SlackFn<'a> {
    pub fn new(base: &'a PenaltyFn, charge: Vec<Rational>, rate: Vec<Rational>) -> Result<Self> {
        let k = base.ground_size();
        if charge.len() != k || rate.len() != k {
            return Err(Error::domain("charge and rate vectors must match the ground set"));
        }
        if charge.iter().chain(&rate).any(|v| v.is_negative()) {
            return Err(Error::domain("charges and rates must be nonnegative"));
        }
        Ok(SlackFn { base, charge, rate })
    }

    pub fn ground_size(&self) -> usize {
        self.base.ground_size()
    }

    /// `y_d + η·rate_d`, the modular part subtracted from π.
    fn weight(&self, d: usize, eta: &Rational) -> Rational {
        &self.charge[d] + eta * &self.rate[d]
    }

    pub fn eval(&self, set: &DemandSet, eta: &Rational) -> Result<Rational> {
        let mut value = self.base.eval(set)?;
        for d in set.iter() {
            value -= self.weight(d, eta);
        }
        Ok(value)
    }

    fn eval_mask(&self, mask: u64, weights: &[Rational]) -> Rational {
        let mut value = self.base.eval_mask(mask);
        let mut m = mask;
        while m != 0 {
            value -= &weights[m.trailing_zeros() as usize];
            m &= m - 1;
        }
        value
    }

    fn rate_of(&self, set: &DemandSet) -> Rational {
        set.iter().fold(Rational::zero(), |acc, d| acc + &self.rate[d])
    }

    fn charge_of(&self, set: &DemandSet) -> Rational {
        set.iter().fold(Rational::zero(), |acc, d| acc + &self.charge[d])
    }
}

/// Minimises `g_η` over the sets containing `forced`. Additive and capped
/// penalties use closed forms; tables are enumerated.
pub fn minimize_submodular(g: &SlackFn, eta: &Rational, forced: &DemandSet) -> Result<(DemandSet, Rational)> {
    let k = g.ground_size();
    if forced.max().is_some_and(|d| d >= k) {
        return Err(Error::domain("forced demand outside the ground set"));
    }
    match g.base {
        PenaltyFn::Additive { values } => {
            let mut set = forced.clone();
            for (d, p) in values.iter().enumerate() {
                if (p - g.weight(d, eta)).is_negative() {
                    set.insert(d);
                }
            }
            let value = g.eval(&set, eta)?;
            Ok((set, value))
        }
        PenaltyFn::Capped { values, .. } => {
            // g(D) = min(p(D) − w(D), B − w(D)); minimise each branch separately.
            let mut below = forced.clone();
            let mut above = forced.clone();
            for (d, p) in values.iter().enumerate() {
                let w = g.weight(d, eta);
                if (p - &w).is_negative() {
                    below.insert(d);
                }
                if w.is_positive() {
                    above.insert(d);
                }
            }
            let vb = g.eval(&below, eta)?;
            let va = g.eval(&above, eta)?;
            Ok(if va < vb || (va == vb && above.len() < below.len()) { (above, va) } else { (below, vb) })
        }
        PenaltyFn::Table { .. } => minimize_by_enumeration(g, eta, forced),
    }
}

/// Exhaustive minimisation over supersets of `forced`; smallest mask wins ties.
pub fn minimize_by_enumeration(g: &SlackFn, eta: &Rational, forced: &DemandSet) -> Result<(DemandSet, Rational)> {
    let k = g.ground_size();
    if k > MAX_TABLE_GROUND {
        return Err(Error::capacity(format!(
            "enumerating {k} demands exceeds the limit of {MAX_TABLE_GROUND}"
        )));
    }
    let weights: Vec<Rational> = (0..k).map(|d| g.weight(d, eta)).collect();
    let fmask = forced.mask();
    let free = ((1u64 << k) - 1) & !fmask;
    let mut best: Option<(u64, Rational)> = None;
    let mut sub = 0u64;
    loop {
        let mask = fmask | sub;
        let value = g.eval_mask(mask, &weights);
        if best.as_ref().is_none_or(|(_, b)| value < *b) {
            best = Some((mask, value));
        }
        if sub == free {
            break;
        }
        sub = (sub.wrapping_sub(free)) & free;
    }
    let (mask, value) = best.expect("at least one candidate");
    Ok((DemandSet::from_mask(mask), value))
}

/// An inter-cluster edge as seen by the η computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeConstraint {
    pub edge: EdgeId,
    /// `c_e` minus the dual load already on the edge.
    pub slack: Rational,
    /// Number of active clusters among the edge's two endpoint clusters.
    pub rate: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    Edge(EdgeId),
    Set(DemandSet),
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EtaKind {
    EdgeTight,
    SetTight,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaResult {
    /// Zero when unbounded.
    pub eta: Rational,
    pub binding: Binding,
}

impl EtaResult {
    pub fn kind(&self) -> EtaKind {
        match self.binding {
            Binding::Edge(_) => EtaKind::EdgeTight,
            Binding::Set(_) => EtaKind::SetTight,
            Binding::Unbounded => EtaKind::Unbounded,
        }
    }
}

/// The largest uniform growth η keeping every edge and every penalty
/// constraint feasible. Edges win ties, then the smallest edge id.
pub fn compute_eta(active_clusters: usize, edges: &[EdgeConstraint], g: &SlackFn) -> Result<EtaResult> {
    if active_clusters == 0 {
        return Err(Error::Precondition("no active cluster".into()));
    }
    let mut edge_best: Option<(Rational, EdgeId)> = None;
    for c in edges.iter().filter(|c| c.rate > 0) {
        let ratio = &c.slack / Rational::from_integer(c.rate.into());
        let better = match &edge_best {
            None => true,
            Some((r, e)) => ratio < *r || (ratio == *r && c.edge < *e),
        };
        if better {
            edge_best = Some((ratio, c.edge));
        }
    }
    let set_best = eta_set(g)?;
    Ok(match (edge_best, set_best) {
        (Some((re, e)), Some((rs, _))) if re <= rs => EtaResult { eta: re, binding: Binding::Edge(e) },
        (Some((re, e)), None) => EtaResult { eta: re, binding: Binding::Edge(e) },
        (_, Some((rs, set))) => EtaResult { eta: rs, binding: Binding::Set(set) },
        (None, None) => EtaResult { eta: Rational::zero(), binding: Binding::Unbounded },
    })
}

/// `min_D (π(D) − y(D)) / rate(D)` over sets with positive rate, with a
/// witness set. `None` when every rate is zero.
pub fn eta_set(g: &SlackFn) -> Result<Option<(Rational, DemandSet)>> {
    let k = g.ground_size();
    let zero = Rational::zero();
    let singles = || {
        let mut best: Option<(Rational, DemandSet)> = None;
        for d in 0..k {
            if g.rate[d].is_positive() {
                let set = DemandSet::from_iter([d]);
                let ratio = (g.base.eval(&set).expect("demand in ground set") - &g.charge[d]) / &g.rate[d];
                if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
                    best = Some((ratio, set));
                }
            }
        }
        best
    };
    let result = match g.base {
        PenaltyFn::Additive { .. } => singles(),
        PenaltyFn::Capped { cap, .. } => {
            let mut best = singles();
            let all = DemandSet::full(k);
            let r = g.rate_of(&all);
            if r.is_positive() {
                let ratio = (cap - g.charge_of(&all)) / r;
                if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
                    best = Some((ratio, all));
                }
            }
            best
        }
        PenaltyFn::Table { .. } => {
            if k > MAX_TABLE_GROUND {
                return Err(Error::capacity(format!("η enumeration over {k} demands")));
            }
            let mut best: Option<(Rational, u64)> = None;
            for mask in 1..1u64 << k {
                let set = DemandSet::from_mask(mask);
                let r = g.rate_of(&set);
                if !r.is_positive() {
                    continue;
                }
                let ratio = (g.base.eval_mask(mask) - g.charge_of(&set)) / r;
                if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
                    best = Some((ratio, mask));
                }
            }
            best.map(|(r, m)| (r, DemandSet::from_mask(m)))
        }
    };
    if let Some((eta, set)) = &result {
        if eta < &zero {
            return Err(Error::Internal("penalty constraint already violated".into()));
        }
        // feasibility self-check: the slack is nonnegative everywhere and zero on the witness
        let (_, min) = minimize_submodular(g, eta, &DemandSet::new())?;
        let at = g.eval(set, eta)?;
        if min.is_negative() || !at.is_zero() {
            return Err(Error::Internal(format!("η self-check failed: min {min}, witness {at}")));
        }
    }
    Ok(result)
}

/// Live demands that lie in some tight set: `min_{D∋d} π(D) − y(D) = 0`.
pub fn dead_set_update(g: &SlackFn, live: &DemandSet) -> Result<DemandSet> {
    let zero = Rational::zero();
    let mut dead = DemandSet::new();
    for d in live.iter() {
        let (_, value) = minimize_submodular(g, &zero, &DemandSet::from_iter([d]))?;
        if value.is_negative() {
            return Err(Error::Internal(format!("penalty constraint violated around demand {d}")));
        }
        if value.is_zero() {
            dead.insert(d);
        }
    }
    Ok(dead)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn zeros(k: usize) -> Vec<Rational> {
        vec![Rational::zero(); k]
    }

    #[test]
    fn additive_minimum_example() {
        let pi = PenaltyFn::additive(vec![int(1), int(2)]).unwrap();
        let g = SlackFn::new(&pi, vec![ratio(1, 2), ratio(5, 2)], zeros(2)).unwrap();
        let (set, value) = minimize_submodular(&g, &int(0), &DemandSet::new()).unwrap();
        assert_eq!(set.to_vec(), vec![1]);
        assert_eq!(value, ratio(-1, 2));
        let (eset, evalue) = minimize_by_enumeration(&g, &int(0), &DemandSet::new()).unwrap();
        assert_eq!((eset, evalue), (set, value));
    }

    #[test]
    fn zero_dual_minimum_is_empty() {
        let pi = PenaltyFn::capped(vec![int(3), int(1), int(2)], int(4)).unwrap();
        let g = SlackFn::new(&pi, zeros(3), zeros(3)).unwrap();
        let (set, value) = minimize_submodular(&g, &int(0), &DemandSet::new()).unwrap();
        assert!(set.is_empty());
        assert_eq!(value, int(0));
    }

    #[test]
    fn forced_demand_is_kept() {
        let pi = PenaltyFn::additive(vec![int(1), int(2)]).unwrap();
        let g = SlackFn::new(&pi, vec![int(1), int(0)], zeros(2)).unwrap();
        let (set, value) = minimize_submodular(&g, &int(0), &DemandSet::from_iter([0])).unwrap();
        assert_eq!(set.to_vec(), vec![0]);
        assert_eq!(value, int(0));
    }

    #[test]
    fn eta_examples_from_two_singletons() {
        let edge = [EdgeConstraint { edge: 0, slack: int(2), rate: 2 }];
        // each endpoint cluster has κ = 1, so y_d grows at rate 2
        let pi = PenaltyFn::additive(vec![int(10)]).unwrap();
        let g = SlackFn::new(&pi, zeros(1), vec![int(2)]).unwrap();
        let r = compute_eta(2, &edge, &g).unwrap();
        assert_eq!(r, EtaResult { eta: int(1), binding: Binding::Edge(0) });
        assert_eq!(eta_set(&g).unwrap().unwrap().0, int(5));

        let pi = PenaltyFn::additive(vec![int(1)]).unwrap();
        let g = SlackFn::new(&pi, zeros(1), vec![int(2)]).unwrap();
        let r = compute_eta(2, &edge, &g).unwrap();
        assert_eq!(r.eta, ratio(1, 2));
        assert_eq!(r.binding, Binding::Set(DemandSet::from_iter([0])));
        assert_eq!(r.kind(), EtaKind::SetTight);
    }

    #[test]
    fn zero_cost_edge_binds_immediately() {
        let edge = [EdgeConstraint { edge: 3, slack: int(0), rate: 2 }];
        let pi = PenaltyFn::additive(vec![int(1)]).unwrap();
        let g = SlackFn::new(&pi, zeros(1), vec![int(2)]).unwrap();
        let r = compute_eta(2, &edge, &g).unwrap();
        assert_eq!(r.eta, int(0));
        assert_eq!(r.kind(), EtaKind::EdgeTight);
    }

    #[test]
    fn no_active_cluster_is_a_precondition_error() {
        let pi = PenaltyFn::additive(vec![]).unwrap();
        let g = SlackFn::new(&pi, vec![], vec![]).unwrap();
        assert!(matches!(compute_eta(0, &[], &g), Err(Error::Precondition(_))));
        assert_eq!(compute_eta(1, &[], &g).unwrap().kind(), EtaKind::Unbounded);
    }

    #[test]
    fn dead_set_examples() {
        let pi = PenaltyFn::additive(vec![int(2), int(3)]).unwrap();
        let g = SlackFn::new(&pi, vec![int(2), int(1)], zeros(2)).unwrap();
        assert_eq!(dead_set_update(&g, &DemandSet::full(2)).unwrap().to_vec(), vec![0]);

        let g = SlackFn::new(&pi, zeros(2), zeros(2)).unwrap();
        assert!(dead_set_update(&g, &DemandSet::full(2)).unwrap().is_empty());

        let capped = PenaltyFn::capped(vec![int(3), int(3)], int(4)).unwrap();
        let g = SlackFn::new(&capped, vec![int(2), int(2)], zeros(2)).unwrap();
        assert_eq!(dead_set_update(&g, &DemandSet::full(2)).unwrap().to_vec(), vec![0, 1]);
    }

    #[test]
    fn capped_eta_binds_on_the_full_set() {
        let capped = PenaltyFn::capped(vec![int(3), int(3)], int(4)).unwrap();
        let g = SlackFn::new(&capped, zeros(2), vec![int(1), int(1)]).unwrap();
        let (eta, set) = eta_set(&g).unwrap().unwrap();
        assert_eq!(eta, int(2));
        assert_eq!(set, DemandSet::full(2));
        let table = capped.to_table().unwrap();
        let gt = SlackFn::new(&table, zeros(2), vec![int(1), int(1)]).unwrap();
        assert_eq!(eta_set(&gt).unwrap().unwrap().0, int(2));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn slack_inputs() -> impl Strategy<Value = (Vec<i64>, Option<i64>, Vec<(i64, i64)>, Vec<i64>, (i64, i64))> {
            (1usize..=8).prop_flat_map(|k| {
                (
                    proptest::collection::vec(0i64..20, k),
                    proptest::option::of(0i64..60),
                    proptest::collection::vec((0i64..10, 1i64..4), k),
                    proptest::collection::vec(0i64..3, k),
                    (0i64..10, 1i64..4),
                )
            })
        }

        fn build(p: &[i64], cap: Option<i64>) -> PenaltyFn {
            let values = p.iter().map(|&v| int(v)).collect();
            match cap {
                Some(b) => PenaltyFn::capped(values, int(b)).unwrap(),
                None => PenaltyFn::additive(values).unwrap(),
            }
        }

        proptest! {
            #[test]
            fn fast_paths_match_enumeration((p, cap, y, rate, (en, ed)) in slack_inputs(), forced_bits in 0u64..256) {
                let pi = build(&p, cap);
                let k = p.len();
                let charge: Vec<Rational> = y.iter().map(|&(n, d)| ratio(n, d)).collect();
                let rates: Vec<Rational> = rate.iter().map(|&r| int(r)).collect();
                let g = SlackFn::new(&pi, charge, rates).unwrap();
                let eta = ratio(en, ed);
                let forced = DemandSet::from_mask(forced_bits & ((1 << k) - 1));
                let (_, fast) = minimize_submodular(&g, &eta, &forced).unwrap();
                let (_, slow) = minimize_by_enumeration(&g, &eta, &forced).unwrap();
                prop_assert_eq!(fast, slow);
            }

            #[test]
            fn slack_is_submodular((p, cap, y, rate, (en, ed)) in slack_inputs(), a in 0u64..256, b in 0u64..256) {
                let pi = build(&p, cap);
                let k = p.len();
                let m = (1u64 << k) - 1;
                let charge: Vec<Rational> = y.iter().map(|&(n, d)| ratio(n, d)).collect();
                let g = SlackFn::new(&pi, charge, rate.iter().map(|&r| int(r)).collect()).unwrap();
                let eta = ratio(en, ed);
                let (a, b) = (a & m, b & m);
                let f = |x: u64| g.eval(&DemandSet::from_mask(x), &eta).unwrap();
                prop_assert!(f(a) + f(b) >= f(a | b) + f(a & b));
            }

            #[test]
            fn eta_set_matches_table_enumeration(p in proptest::collection::vec(1i64..20, 1..6), cap in 1i64..40, rate in proptest::collection::vec(0i64..3, 6)) {
                let k = p.len();
                let pi = build(&p, Some(cap));
                let table = pi.to_table().unwrap();
                let rates: Vec<Rational> = rate[..k].iter().map(|&r| int(r)).collect();
                let g1 = SlackFn::new(&pi, zeros(k), rates.clone()).unwrap();
                let g2 = SlackFn::new(&table, zeros(k), rates).unwrap();
                let a = eta_set(&g1).unwrap().map(|x| x.0);
                let b = eta_set(&g2).unwrap().map(|x| x.0);
                prop_assert_eq!(a, b);
            }
        }
    }
}
