use pcsteiner::gadgets::{gen_random, PenaltyKind, RandomKind, RandomParams};
use pcsteiner::penalty::{check_penalty_axioms, DemandSet, PenaltyFn};
use pcsteiner::rational::int;
use pcsteiner::solution::solution_cost;
use pcsteiner::{Demand, Graph, Instance};

#[test]
fn json_round_trips_byte_for_byte() {
    for (seed, penalty) in [(1, PenaltyKind::Additive), (2, PenaltyKind::Capped)] {
        for rooted in [false, true] {
            let p = RandomParams { penalty, rooted, ..RandomParams::default() };
            let inst = gen_random(RandomKind::ErdosRenyi { n: 7, p: 0.5 }, &p, seed).unwrap();
            let text = inst.to_json();
            assert_eq!(Instance::from_json(&text).unwrap().to_json(), text);
        }
    }
}

#[test]
fn malformed_json_is_a_parse_error() {
    assert!(matches!(Instance::from_json("{"), Err(pcsteiner::Error::Parse(_))));
    let bad_cost = r#"{"vertices":2,"edges":[[0,1,"x"]],"demands":[],"penalty":{"kind":"additive","values":[]}}"#;
    assert!(Instance::from_json(bad_cost).is_err());
}

#[test]
fn penalty_kinds_evaluate() {
    let both = DemandSet::from_iter([0, 1]);
    assert_eq!(PenaltyFn::additive(vec![int(2), int(3)]).unwrap().eval(&both).unwrap(), int(5));
    assert_eq!(PenaltyFn::capped(vec![int(2), int(3)], int(4)).unwrap().eval(&both).unwrap(), int(4));
    assert_eq!(PenaltyFn::additive(vec![int(2), int(3)]).unwrap().eval(&DemandSet::new()).unwrap(), int(0));
}

#[test]
fn axiom_checker_flags_a_supermodular_table() {
    assert!(check_penalty_axioms(&PenaltyFn::capped(vec![int(2), int(3), int(1)], int(4)).unwrap(), 0, 0).holds());
    let bad = PenaltyFn::table(2, vec![int(0), int(1), int(1), int(3)]).unwrap();
    assert!(!check_penalty_axioms(&bad, 0, 0).holds());
}

#[test]
fn solution_cost_charges_unsatisfied_demands() {
    let g = Graph::from_edges(3, [(0, 1, int(2)), (1, 2, int(3))]).unwrap();
    let demands = vec![Demand { s: 0, t: 1 }, Demand { s: 1, t: 2 }];
    let inst = Instance::new(g, demands, PenaltyFn::additive(vec![int(3), int(4)]).unwrap(), None).unwrap();
    assert_eq!(solution_cost(&inst, &[]).unwrap().total, int(7));
    assert_eq!(solution_cost(&inst, &[0]).unwrap().total, int(6));
    assert_eq!(solution_cost(&inst, &[0, 1]).unwrap().total, int(5));
}
