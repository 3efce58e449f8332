use pcsteiner::gadgets::{gen_random, PenaltyKind, RandomKind, RandomParams};
use pcsteiner::oracle::{oracle_spcsf, OracleBudget};
use pcsteiner::penalty::PenaltyFn;
use pcsteiner::rational::{int, ratio};
use pcsteiner::reduction::{
    contract_components, pc_cluster_merge, reduction_pipeline, restrict_demands, write_bundle, BundleManifest,
    ClusteringInitial, ExactInitial,
};
use pcsteiner::{Demand, DemandSet, Graph, Instance};
use proptest::prelude::*;

fn k2(cost: i64, penalty: i64) -> Instance {
    let g = Graph::from_edges(2, [(0, 1, int(cost))]).unwrap();
    Instance::new(g, vec![Demand { s: 0, t: 1 }], PenaltyFn::additive(vec![int(penalty)]).unwrap(), None).unwrap()
}

#[test]
fn cheap_penalty_is_dropped_and_expensive_one_kept() {
    let out = restrict_demands(&k2(100, 1), &int(1), &ExactInitial::default()).unwrap();
    assert!(out.forest.is_empty());
    assert_eq!(out.unsatisfied.to_vec(), vec![0]);
    assert_eq!(out.base, int(1));

    let out = restrict_demands(&k2(100, 1000), &int(1), &ExactInitial::default()).unwrap();
    assert_eq!(out.initial.edges, vec![0]);
    assert_eq!(out.forest, vec![0]);
    assert!(out.unsatisfied.is_empty());
}

#[test]
fn parallel_edges_keep_the_cheaper_after_contraction() {
    let g = Graph::from_edges(3, [(0, 1, int(1)), (1, 2, int(3)), (0, 2, int(5))]).unwrap();
    let c = contract_components(&g, &[0]).unwrap();
    assert_eq!(c.graph.vertex_count(), 2);
    assert_eq!(c.graph.edge_count(), 1);
    assert_eq!(c.graph.edges()[0].cost, int(3));
    let all = contract_components(&g, &[0, 1]).unwrap();
    assert_eq!((all.graph.vertex_count(), all.graph.edge_count()), (1, 0));
    assert!(contract_components(&g, &[0, 1, 2]).is_err());
}

#[test]
fn single_cheap_demand_gives_one_piece() {
    let out = reduction_pipeline(&k2(2, 10), &ratio(1, 2), &ExactInitial::default()).unwrap();
    assert_eq!(out.merge.trees.len(), 1);
    assert_eq!(out.merge.trees[0].demands, vec![0]);
    assert_eq!(out.pieces.len(), 1);
    assert_eq!(out.pieces[0].instance.graph.edge_count(), 1);
}

#[test]
fn bundle_has_one_file_per_piece() {
    // two demands on opposite ends of an expensive bridge
    let g = Graph::from_edges(4, [(0, 1, int(1)), (1, 2, int(60)), (2, 3, int(1))]).unwrap();
    let demands = vec![Demand { s: 0, t: 1 }, Demand { s: 2, t: 3 }];
    let inst = Instance::new(g, demands, PenaltyFn::additive(vec![int(5), int(5)]).unwrap(), None).unwrap();
    let out = reduction_pipeline(&inst, &ratio(1, 2), &ExactInitial::default()).unwrap();
    assert_eq!(out.pieces.len(), 2);
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_bundle(dir.path(), &out).unwrap();
    let text = std::fs::read_to_string(dir.path().join("manifest.json")).unwrap();
    assert_eq!(serde_json::from_str::<BundleManifest>(&text).unwrap(), manifest);
    for (p, piece) in manifest.pieces.iter().zip(&out.pieces) {
        let back = Instance::load(dir.path().join(&p.file)).unwrap();
        assert_eq!(back.to_json(), piece.instance.to_json());
    }
}

#[test]
fn rooted_label_does_not_change_the_restriction() {
    let p = RandomParams { rooted: true, ..RandomParams::default() };
    for seed in 0..20 {
        let rooted = gen_random(RandomKind::Grid { rows: 2, cols: 4 }, &p, seed).unwrap();
        let mut plain = rooted.clone();
        plain.root = None;
        let a = restrict_demands(&rooted, &ratio(1, 2), &ExactInitial::default()).unwrap();
        let b = restrict_demands(&plain, &ratio(1, 2), &ExactInitial::default()).unwrap();
        assert_eq!(a.satisfied, b.satisfied);
        assert_eq!(a.forest, b.forest);
    }
}

fn small_instance() -> impl Strategy<Value = Instance> {
    (0u64..10_000, 0usize..3, 1usize..5, any::<bool>()).prop_map(|(seed, kind, demands, capped)| {
        let kind = match kind {
            0 => RandomKind::Grid { rows: 2, cols: 3 },
            1 => RandomKind::SeriesParallel { n: 6 },
            _ => RandomKind::ErdosRenyi { n: 6, p: 0.5 },
        };
        let penalty = if capped { PenaltyKind::Capped } else { PenaltyKind::Additive };
        let p = RandomParams { demands, penalty, max_penalty: 12, ..RandomParams::default() };
        gen_random(kind, &p, seed).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn restriction_bounds_hold(inst in small_instance(), half in any::<bool>()) {
        let eps = if half { ratio(1, 2) } else { int(1) };
        let budget = OracleBudget::default();
        let opt = oracle_spcsf(&inst, &budget).unwrap().total;
        let out = restrict_demands(&inst, &eps, &ExactInitial::default()).unwrap();
        prop_assert!(out.length <= (int(2) / &eps + int(1)) * &opt);
        let restricted = oracle_spcsf(&out.restricted, &budget).unwrap().total + &out.base;
        prop_assert!(restricted <= (int(1) + &eps) * &opt);
    }

    #[test]
    fn merge_covers_spans_and_stays_within_bound(inst in small_instance(), eps_den in 1i64..4) {
        let eps = ratio(1, eps_den);
        let r = restrict_demands(&inst, &eps, &ClusteringInitial).unwrap();
        let m = pc_cluster_merge(&inst, &r.forest, &r.satisfied, &eps).unwrap();
        prop_assert!(m.bound_holds());
        let covered: DemandSet = m.trees.iter().flat_map(|t| t.demands.iter().copied()).collect();
        prop_assert_eq!(covered, r.satisfied.clone());
        for t in &m.trees {
            prop_assert_eq!(t.edges.len() + 1, t.vertices.len());
            for &d in &t.demands {
                prop_assert!(t.vertices.contains(&inst.demands[d].s) && t.vertices.contains(&inst.demands[d].t));
            }
        }
    }
}
