//! Seeded random instances for tests, benches and the CLI.
//!
//! Every generator draws from a caller-supplied RNG; [`rng`] gives the
//! crate's standard seeded stream so that a seed fully determines the output.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{validate_network, Arc, ArcKind, DsShape, DsTree, Label, LgtNetwork, NetworkBuilder, RelationGraph};
use crate::reductions::{ActInstance, FasInstance, MccInstance, RootedTree};
use crate::relations::{contract_all, relation_graph_of};
use crate::timing::check_time_consistency;

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Species names `A` … `Z`, then `S27`, `S28`, ….
pub fn species_name(i: usize) -> String {
    if i < 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        format!("S{}", i + 1)
    }
}

/// A uniform random-merge binary species tree on `leaves` ≥ 1 leaves.
pub fn random_species_tree(rng: &mut GenRng, leaves: usize) -> LgtNetwork {
    assert!(leaves >= 1);
    let mut b = NetworkBuilder::new();
    let mut open: Vec<usize> = (0..leaves)
        .map(|i| {
            let v = b.add_node(&species_name(i));
            b.set_species(v, species_name(i));
            v
        })
        .collect();
    let mut k = 0;
    while open.len() > 1 {
        let x = open.swap_remove(rng.gen_range(0..open.len()));
        let y = open.swap_remove(rng.gen_range(0..open.len()));
        let p = b.add_node(&format!("n{k}"));
        k += 1;
        b.add_arc(p, x, ArcKind::Principal);
        b.add_arc(p, y, ArcKind::Principal);
        open.push(p);
    }
    b.set_root(open[0]);
    b.build().expect("random merges form a tree")
}

/// Adds one secondary arc between two random principal arcs; `None` if no
/// attempt out of `tries` gives a valid (and, if asked, time-consistent)
/// network.
pub fn add_random_transfer(
    rng: &mut GenRng,
    net: &LgtNetwork,
    time_consistent: bool,
    tries: usize,
) -> Option<LgtNetwork> {
    let principal: Vec<Arc> = net.arcs().iter().filter(|a| a.kind == ArcKind::Principal).cloned().collect();
    if principal.len() < 2 {
        return None;
    }
    let k = net.secondary_arc_count();
    for _ in 0..tries {
        let mut pick = principal.choose_multiple(rng, 2);
        let (a, c) = (pick.next().unwrap(), pick.next().unwrap());
        let mut b = NetworkBuilder::from_network(net);
        let x = b.subdivide_above(a.to, &format!("t{k}"));
        let y = b.subdivide_above(c.to, &format!("h{k}"));
        b.add_arc(x, y, ArcKind::Secondary);
        let Ok(next) = b.build() else { continue };
        if !validate_network(&next).is_ok() {
            continue;
        }
        if time_consistent && check_time_consistency(&next).is_err() {
            continue;
        }
        return Some(next);
    }
    None
}

/// A species tree on `leaves` leaves with up to `transfers` secondary arcs.
pub fn random_lgt_network(rng: &mut GenRng, leaves: usize, transfers: usize, time_consistent: bool) -> LgtNetwork {
    let mut net = random_species_tree(rng, leaves);
    for _ in 0..transfers {
        match add_random_transfer(rng, &net, time_consistent, 50) {
            Some(next) => net = next,
            None => break,
        }
    }
    net
}

/// A random DS-tree on genes `g1` … `gn` with species drawn from `species`
/// and node degrees in 2 ..= `max_degree`. Labels are uniform, so the tree
/// need not be least resolved.
pub fn random_dstree(rng: &mut GenRng, genes: usize, max_degree: usize, species: &[String]) -> DsTree {
    assert!(genes >= 1 && max_degree >= 2 && !species.is_empty());
    let mut open: Vec<DsShape> =
        (1..=genes).map(|g| DsShape::leaf(format!("g{g}"), species.choose(rng).unwrap().clone())).collect();
    while open.len() > 1 {
        let r = rng.gen_range(2..=max_degree.min(open.len()));
        let children: Vec<DsShape> = (0..r).map(|_| open.swap_remove(rng.gen_range(0..open.len()))).collect();
        let label = if rng.gen_bool(0.5) { Label::Spec } else { Label::Dup };
        open.push(DsShape::node(label, children));
    }
    DsTree::from_shape(&open[0]).expect("generated shape is valid")
}

/// A random least-resolved DS-tree (cotree).
pub fn random_cotree(rng: &mut GenRng, genes: usize, max_degree: usize, species: &[String]) -> DsTree {
    contract_all(&random_dstree(rng, genes, max_degree, species))
}

/// A relation graph that contains an induced P4 and is therefore not
/// represented by any DS-tree. Needs at least four genes.
pub fn p4_planted_graph(rng: &mut GenRng, genes: usize, species: &[String]) -> RelationGraph {
    assert!(genes >= 4);
    let base = relation_graph_of(&random_dstree(rng, genes, 4, species));
    let names: Vec<String> = base.genes().keys().cloned().collect();
    let path: Vec<&String> = names.choose_multiple(rng, 4).collect();
    let key = |a: &String, b: &String| if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    let mut edges = base.edges().clone();
    for (i, j) in [(0, 2), (1, 3), (0, 3)] {
        edges.remove(&key(path[i], path[j]));
    }
    for i in 0..3 {
        edges.insert(key(path[i], path[i + 1]));
    }
    RelationGraph::new(base.genes().clone(), edges).expect("same gene set")
}

/// A random rooted tree `t0` … `t{n-1}`, each node attached to an earlier one.
pub fn random_rooted_tree(rng: &mut GenRng, nodes: usize) -> RootedTree {
    assert!(nodes >= 1);
    let mut t = RootedTree::with_root("t0");
    for v in 1..nodes {
        let p = rng.gen_range(0..v);
        t.add_child(p, format!("t{v}")).expect("fresh id");
    }
    t
}

/// A random incomparable-assignment instance in restricted form: distinct
/// zero nodes, and up to `max_ones` weight-1 nodes per element, incomparable
/// with each other and with the element's zero node, and never another
/// element's zero node.
pub fn random_restricted_act(rng: &mut GenRng, nodes: usize, elements: usize, max_ones: usize) -> ActInstance {
    assert!(elements >= 1 && elements <= nodes);
    let tree = random_rooted_tree(rng, nodes);
    let mut all: Vec<usize> = (0..nodes).collect();
    all.shuffle(rng);
    let anchors: Vec<usize> = all[..elements].to_vec();
    let names = (1..=elements).map(|x| format!("x{x}")).collect();
    let mut inst = ActInstance::new(tree, names).expect("distinct names");
    for (x, &u) in anchors.iter().enumerate() {
        inst.set_weight(x, u, 0);
        let mut finite = vec![u];
        let want = rng.gen_range(0..=max_ones);
        let mut pool: Vec<usize> = (0..nodes).filter(|v| !anchors.contains(v)).collect();
        pool.shuffle(rng);
        for v in pool {
            if finite.len() > want {
                break;
            }
            if finite.iter().all(|&f| !inst.tree.comparable(f, v)) {
                inst.set_weight(x, v, 1);
                finite.push(v);
            }
        }
    }
    debug_assert!(inst.is_restricted());
    inst
}

/// A random multicolored-clique instance with `k` nonempty classes over
/// `v1` … `vn` and each cross-class pair an edge with probability `p`.
pub fn random_mcc(rng: &mut GenRng, k: usize, vertices: usize, p: f64) -> MccInstance {
    assert!(k >= 1 && vertices >= k);
    let mut classes: Vec<Vec<String>> = vec![Vec::new(); k];
    let mut class_of = BTreeMap::new();
    for v in 0..vertices {
        let c = if v < k { v } else { rng.gen_range(0..k) };
        classes[c].push(format!("v{}", v + 1));
        class_of.insert(v, c);
    }
    let mut edges = Vec::new();
    for a in 0..vertices {
        for b in a + 1..vertices {
            if class_of[&a] != class_of[&b] && rng.gen_bool(p) {
                edges.push((format!("v{}", a + 1), format!("v{}", b + 1)));
            }
        }
    }
    MccInstance { classes, edges }
}

/// Every multicolored-clique instance with at most `max_k` classes and
/// `max_vertices` vertices, up to renaming: class sizes are nondecreasing
/// and every subset of the cross-class pairs is taken as the edge set.
pub fn mcc_catalog(max_k: usize, max_vertices: usize) -> Vec<MccInstance> {
    fn sizes(k: usize, min: usize, budget: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in min..=budget {
            if budget - s < (k - cur.len() - 1) * s {
                break;
            }
            cur.push(s);
            sizes(k, s, budget - s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for k in 1..=max_k {
        let mut shapes = Vec::new();
        sizes(k, 1, max_vertices, &mut Vec::new(), &mut shapes);
        for shape in shapes {
            let mut classes = Vec::new();
            let mut next = 1;
            for &s in &shape {
                classes.push((next..next + s).map(|v| format!("v{v}")).collect::<Vec<_>>());
                next += s;
            }
            let mut pairs = Vec::new();
            for (i, a) in classes.iter().enumerate() {
                for bclass in &classes[i + 1..] {
                    for u in a {
                        for v in bclass {
                            pairs.push((u.clone(), v.clone()));
                        }
                    }
                }
            }
            for mask in 0u64..(1 << pairs.len()) {
                let edges =
                    pairs.iter().enumerate().filter(|(e, _)| mask >> e & 1 == 1).map(|(_, p)| p.clone()).collect();
                out.push(MccInstance { classes: classes.clone(), edges });
            }
        }
    }
    out
}

/// A random simple digraph on `x1` … `xn` with `arcs` distinct arcs and no
/// self-loops; the budget is left at 0.
pub fn random_fas(rng: &mut GenRng, vertices: usize, arcs: usize) -> FasInstance {
    let names: Vec<String> = (1..=vertices).map(|v| format!("x{v}")).collect();
    let mut pairs: Vec<(String, String)> = Vec::new();
    for a in &names {
        for b in &names {
            if a != b {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    assert!(arcs <= pairs.len());
    pairs.shuffle(rng);
    pairs.truncate(arcs);
    FasInstance { vertices: names, arcs: pairs, k: 0 }
}
