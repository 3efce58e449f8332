use pcsteiner::oracle::{oracle_by_edges, oracle_by_satisfied_sets, oracle_spcsf, oracle_stroll, oracle_tour, oracle_vertex_cover, steiner_forest_len, OracleBudget};
use pcsteiner::penalty::PenaltyFn;
use pcsteiner::rational::int;
use pcsteiner::{Demand, Graph, Instance};

#[test]
fn triangle_buys_two_edges() {
    let g = Graph::from_edges(3, [(0, 1, int(1)), (1, 2, int(1)), (0, 2, int(1))]).unwrap();
    let demands = vec![Demand { s: 0, t: 1 }, Demand { s: 1, t: 2 }];
    let inst = Instance::new(g, demands, PenaltyFn::additive(vec![int(5), int(5)]).unwrap(), None).unwrap();
    let b = OracleBudget::default();
    assert_eq!(oracle_by_edges(&inst, &b).unwrap().total, int(2));
    assert_eq!(oracle_by_satisfied_sets(&inst, &b).unwrap().total, int(2));
    assert_eq!(oracle_spcsf(&inst, &b).unwrap().total, int(2));
}

#[test]
fn crossing_pairs_on_a_unit_four_cycle() {
    let g = Graph::from_edges(4, (0..4).map(|i| (i, (i + 1) % 4, int(1)))).unwrap();
    let b = OracleBudget::default();
    assert_eq!(steiner_forest_len(&g, &[Demand { s: 0, t: 2 }, Demand { s: 1, t: 3 }], &b).unwrap(), int(3));
    assert_eq!(steiner_forest_len(&g, &[Demand { s: 0, t: 2 }], &b).unwrap(), int(2));
    assert_eq!(steiner_forest_len(&g, &[], &b).unwrap(), int(0));
}

#[test]
fn walks_on_k2() {
    let g = Graph::from_edges(2, [(0, 1, int(3))]).unwrap();
    let b = OracleBudget::default();
    for p in [1, 4, 7] {
        let inst = Instance::rooted(g.clone(), 0, &[1], PenaltyFn::additive(vec![int(p)]).unwrap()).unwrap();
        assert_eq!(oracle_tour(&inst, &b).unwrap().total, int(p.min(6)));
        assert_eq!(oracle_stroll(&inst, &b).unwrap().total, int(p.min(3)));
    }
}

#[test]
fn vertex_cover_sizes() {
    let b = OracleBudget::default();
    assert_eq!(oracle_vertex_cover(2, &[(0, 1)], &b).unwrap().0, 1);
    let k4: Vec<(usize, usize)> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
    assert_eq!(oracle_vertex_cover(4, &k4, &b).unwrap().0, 3);
    let petersen = pcsteiner::gadgets::CubicGraph::petersen();
    let (tau, cover) = oracle_vertex_cover(petersen.n, &petersen.edges, &b).unwrap();
    assert_eq!(tau, 6);
    assert!(petersen.is_cover(&cover));
}
