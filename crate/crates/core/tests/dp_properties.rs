//! Property tests for the reconciliation DP against the exhaustive oracle.

mod common;

use orthonet::generate::{random_dstree, random_lgt_network, rng};
use orthonet::reconcile::{extract_witness_with, min_transfer_cost, min_transfer_cost_with, DpConfig};
use orthonet::verify::verify_reconciliation;
use orthonet::{ArcKind, Cost, DsTree, LgtNetwork, Parallelism};
use proptest::prelude::*;

fn instance(seed: u64, leaves: usize, transfers: usize, genes: usize, degree: usize) -> (DsTree, LgtNetwork) {
    let mut r = rng(seed);
    let net = random_lgt_network(&mut r, leaves, transfers, seed % 3 != 0);
    let species: Vec<String> = net.leaves().into_iter().map(|v| net.species(v).unwrap().to_string()).collect();
    (random_dstree(&mut r, genes, degree, &species), net)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dp_equals_oracle(seed in any::<u64>(), leaves in 2usize..5, transfers in 0usize..4, genes in 1usize..7, degree in 2usize..5) {
        let (d, net) = instance(seed, leaves, transfers, genes, degree);
        prop_assert_eq!(min_transfer_cost(&d, &net).unwrap(), common::oracle_min_transfers(&d, &net));
    }

    #[test]
    fn sequential_and_parallel_agree(seed in any::<u64>(), genes in 1usize..9) {
        let (d, net) = instance(seed, 4, 3, genes, 4);
        let seq = DpConfig { parallelism: Parallelism::Sequential, ..DpConfig::default() };
        let par = DpConfig { parallelism: Parallelism::Parallel, ..DpConfig::default() };
        prop_assert_eq!(min_transfer_cost_with(&d, &net, &seq).unwrap(), min_transfer_cost_with(&d, &net, &par).unwrap());
        let (a, b) = (extract_witness_with(&d, &net, &seq), extract_witness_with(&d, &net, &par));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn witnesses_verify(seed in any::<u64>(), genes in 1usize..9) {
        let (d, net) = instance(seed, 5, 2, genes, 4);
        if let Ok(w) = extract_witness_with(&d, &net, &DpConfig::default()) {
            let rep = verify_reconciliation(&w.tree, &net, &w.reconciliation).unwrap();
            prop_assert!(rep.valid, "{:?}", rep.violations);
            prop_assert_eq!(rep.transfer_count, w.cost);
            prop_assert_eq!(rep.secondary_arcs_used, w.cost);
            prop_assert!(w.tree.is_refinement_of(&d));
        }
    }

    /// Dropping a secondary arc can only make reconciliation harder.
    #[test]
    fn removing_transfers_never_helps(seed in any::<u64>(), genes in 1usize..7) {
        let (d, net) = instance(seed, 4, 3, genes, 3);
        let full = min_transfer_cost(&d, &net).unwrap();
        for (k, a) in net.arcs().iter().enumerate() {
            if a.kind == ArcKind::Secondary {
                let fewer = min_transfer_cost(&d, &net.without_arc(k)).unwrap();
                prop_assert!(fewer >= full, "{} < {}", fewer, full);
            }
        }
    }
}

#[test]
fn species_tree_costs_are_zero_or_infinite() {
    for seed in 0..40 {
        let (d, net) = instance(seed, 4, 0, 5, 3);
        let c = min_transfer_cost(&d, &net).unwrap();
        assert!(c == Cost::ZERO || c == Cost::Infinite, "{c}");
    }
}
