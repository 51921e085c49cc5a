//! Worked examples and properties of the three reduction pipelines.

use orthonet::formats::{parse_dstree, write_dstree};
use orthonet::generate::{random_fas, random_restricted_act, rng};
use orthonet::reconcile::min_transfer_cost;
use orthonet::reductions::{
    act_to_nc, fas_to_tmstc, fas_witness, mcc_to_act, solve_act_bruteforce, solve_act_bruteforce_with,
    solve_fas_bruteforce, ActInstance, FasInstance, MccInstance, ReductionError, RootedTree,
};
use orthonet::relations::{build_least_resolved_dstree, relation_graph_of};
use orthonet::timing::check_time_consistency;
use orthonet::verify::verify_reconciliation;
use orthonet::{validate_network, Cost};
use proptest::prelude::*;

#[test]
fn mcc_yes_instance_with_three_classes() {
    let h = MccInstance::from_json(
        r#"{"classes": [["a1", "a2"], ["b1"], ["c1", "c2"]],
            "edges": [["a1", "b1"], ["b1", "c2"], ["a1", "c2"], ["a2", "c1"]]}"#,
    )
    .unwrap();
    let act = mcc_to_act(&h).unwrap();
    assert_eq!(act.elements.len(), 1 + 3 + 2 * 5 + 5 * 2);
    assert_eq!(solve_act_bruteforce_with(&act, 64).unwrap(), Cost::Finite(15));
    assert!(matches!(solve_act_bruteforce(&act), Err(ReductionError::BoundExceeded { .. })));
}

#[test]
fn act_hand_instance() {
    // r -> {a, b}, a -> {c}; x prefers c, y sits on a and forces x to b.
    let mut t = RootedTree::with_root("r");
    let a = t.add_child(0, "a").unwrap();
    let b = t.add_child(0, "b").unwrap();
    let c = t.add_child(a, "c").unwrap();
    let mut inst = ActInstance::new(t, vec!["x".into(), "y".into()]).unwrap();
    inst.set_weight(0, c, 0);
    inst.set_weight(0, b, 1);
    inst.set_weight(1, a, 0);
    assert_eq!(solve_act_bruteforce(&inst).unwrap(), Cost::Finite(1));
    let (d, net) = act_to_nc(&inst).unwrap();
    assert!(validate_network(&net).is_ok());
    assert!(check_time_consistency(&net).is_ok());
    assert_eq!(min_transfer_cost(&d, &net).unwrap(), Cost::Finite(2));
    // the DS-tree is least resolved and represents its own relation graph
    let back = build_least_resolved_dstree(&relation_graph_of(&d)).unwrap();
    assert_eq!(back.shape_key(), d.shape_key());
    assert_eq!(parse_dstree(&write_dstree(&d)).unwrap().shape_key(), d.shape_key());
}

#[test]
fn fas_examples() {
    let dag = FasInstance {
        vertices: vec!["a".into(), "b".into(), "c".into()],
        arcs: vec![("a".into(), "b".into()), ("b".into(), "c".into())],
        k: 0,
    };
    assert!(solve_fas_bruteforce(&dag).unwrap().is_empty());
    let red = fas_to_tmstc(&dag).unwrap();
    assert_eq!(red.big_k, 4);
    let (net, alpha) = fas_witness(&dag, &[], &red).unwrap();
    assert!(check_time_consistency(&net).is_ok());
    assert_eq!(verify_reconciliation(&red.dstree, &net, &alpha).unwrap().transfer_count, 4);
    let bad = FasInstance { vertices: vec!["a".into()], arcs: vec![("a".into(), "a".into())], k: 0 };
    assert!(solve_fas_bruteforce(&bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn act_to_nc_doubles_the_optimum(seed in any::<u64>(), nodes in 2usize..11, elements in 1usize..4) {
        let inst = random_restricted_act(&mut rng(seed), nodes, elements.min(nodes), 2);
        let opt = solve_act_bruteforce(&inst).unwrap();
        let (d, net) = act_to_nc(&inst).unwrap();
        let dp = min_transfer_cost(&d, &net).unwrap();
        match opt {
            Cost::Finite(w) => prop_assert_eq!(dp, Cost::Finite(2 * w)),
            Cost::Infinite => prop_assert_eq!(dp, Cost::Infinite),
        }
    }

    #[test]
    fn fas_witness_counts(seed in any::<u64>(), n in 2usize..5, m in 1usize..7) {
        let m = m.min(n * (n - 1));
        let mut h = random_fas(&mut rng(seed), n, m);
        let a = solve_fas_bruteforce(&h).unwrap();
        h.k = a.len();
        let red = fas_to_tmstc(&h).unwrap();
        prop_assert!(red.dstree.is_least_resolved());
        let (net, alpha) = fas_witness(&h, &a, &red).unwrap();
        prop_assert!(check_time_consistency(&net).is_ok());
        let rep = verify_reconciliation(&red.dstree, &net, &alpha).unwrap();
        prop_assert!(rep.valid);
        prop_assert_eq!(rep.transfer_count, (2 * m + a.len()) as u64);
    }
}
