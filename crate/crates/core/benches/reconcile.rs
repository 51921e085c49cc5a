//! Sequential against parallel LBR evaluation for growing DS-tree degree.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use orthonet::formats::parse_dstree;
use orthonet::generate::{random_lgt_network, rng};
use orthonet::reconcile::{min_transfer_cost_with, DpConfig};
use orthonet::{DsTree, LgtNetwork, Parallelism};

/// A duplication of `k` speciation cherries, so the root has out-degree `k`.
fn wide_tree(k: usize, species: &[String]) -> DsTree {
    let kids: Vec<String> = (0..k)
        .map(|i| {
            let a = &species[i % species.len()];
            let b = &species[(i + 1) % species.len()];
            format!("(x{i}@{a},y{i}@{b})S")
        })
        .collect();
    parse_dstree(&format!("({})D;", kids.join(","))).unwrap()
}

fn network() -> LgtNetwork {
    random_lgt_network(&mut rng(11), 6, 4, true)
}

fn bench(c: &mut Criterion) {
    let net = network();
    let species: Vec<String> = net.leaves().into_iter().map(|v| net.species(v).unwrap().to_string()).collect();
    let mut group = c.benchmark_group("min_transfer_cost");
    group.sample_size(10);
    for k in 2..=7 {
        let d = wide_tree(k, &species);
        for (name, parallelism) in [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)] {
            let cfg = DpConfig { max_degree: 8, parallelism };
            group.bench_with_input(BenchmarkId::new(name, k), &d, |b, d| {
                b.iter(|| min_transfer_cost_with(d, &net, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
