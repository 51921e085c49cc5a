//! Brute-force oracles shared by the integration tests. None of this reuses
//! the library's refinement enumeration, path distances or DP tables.

#![allow(dead_code)]

use std::collections::HashMap;

use orthonet::{ArcKind, Cost, DsTree, Label, LgtNetwork};

/// An unlabeled rooted binary topology over leaf indices.
#[derive(Clone, Debug)]
pub enum Topo {
    Leaf(usize),
    Node(Box<Topo>, Box<Topo>),
}

impl Topo {
    fn graft(&self, leaf: usize) -> Vec<Topo> {
        let mut out = vec![Topo::Node(Box::new(self.clone()), Box::new(Topo::Leaf(leaf)))];
        if let Topo::Node(a, b) = self {
            for a2 in a.graft(leaf) {
                out.push(Topo::Node(Box::new(a2), b.clone()));
            }
            for b2 in b.graft(leaf) {
                out.push(Topo::Node(a.clone(), Box::new(b2)));
            }
        }
        out
    }

    fn mask(&self) -> u64 {
        match self {
            Topo::Leaf(i) => 1 << i,
            Topo::Node(a, b) => a.mask() | b.mask(),
        }
    }
}

/// All (2n − 3)!! rooted binary topologies on n leaves, by stepwise insertion.
pub fn binary_topologies(n: usize) -> Vec<Topo> {
    let mut all = vec![Topo::Leaf(0)];
    for leaf in 1..n {
        all = all.iter().flat_map(|t| t.graft(leaf)).collect();
    }
    all
}

/// A binary DS-tree in flat form; leaves carry a network leaf index.
#[derive(Clone, Debug)]
pub struct Bin {
    pub kids: Vec<Option<(usize, usize)>>,
    pub label: Vec<Option<Label>>,
    pub leaf_node: Vec<Option<usize>>,
    pub root: usize,
}

/// Every binary refinement of `d`, found by scanning all binary topologies
/// on its leaves: a topology refines `d` when it contains every cluster of
/// `d`, and each of its nodes takes the label of the smallest cluster of `d`
/// around it.
pub fn binary_refinements(d: &DsTree, net: &LgtNetwork) -> Vec<Bin> {
    let leaves = d.leaves();
    assert!(leaves.len() <= 12, "oracle is exponential");
    let pos: HashMap<usize, usize> = leaves.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut mask = vec![0u64; d.len()];
    for v in d.postorder() {
        mask[v] =
            if d.is_leaf(v) { 1 << pos[&v] } else { d.children(v).iter().map(|&c| mask[c]).fold(0, |a, b| a | b) };
    }
    let clusters: Vec<(u64, Label)> = d.internal_nodes().into_iter().map(|v| (mask[v], d.label(v).unwrap())).collect();
    let species: Vec<Option<usize>> = leaves.iter().map(|&v| net.leaf_of_species(d.species(v).unwrap())).collect();
    let mut out = Vec::new();
    for t in binary_topologies(leaves.len()) {
        let mut found: Vec<u64> = Vec::new();
        collect_masks(&t, &mut found);
        if !clusters.iter().all(|(c, _)| found.contains(c)) {
            continue;
        }
        let mut b = Bin { kids: Vec::new(), label: Vec::new(), leaf_node: Vec::new(), root: 0 };
        b.root = flatten(&t, &clusters, &species, &mut b);
        out.push(b);
    }
    out
}

fn collect_masks(t: &Topo, out: &mut Vec<u64>) {
    if let Topo::Node(a, c) = t {
        out.push(t.mask());
        collect_masks(a, out);
        collect_masks(c, out);
    }
}

fn flatten(t: &Topo, clusters: &[(u64, Label)], species: &[Option<usize>], b: &mut Bin) -> usize {
    let id = b.kids.len();
    b.kids.push(None);
    b.label.push(None);
    b.leaf_node.push(None);
    match t {
        Topo::Leaf(i) => b.leaf_node[id] = species[*i],
        Topo::Node(l, r) => {
            let m = t.mask();
            let (_, label) = clusters
                .iter()
                .filter(|(c, _)| c & m == m)
                .min_by_key(|(c, _)| c.count_ones())
                .expect("the root cluster covers everything");
            b.label[id] = Some(*label);
            let a = flatten(l, clusters, species, b);
            let c = flatten(r, clusters, species, b);
            b.kids[id] = Some((a, c));
        }
    }
    id
}

/// Minimum secondary-arc count over directed paths, by depth-first search
/// that drops a path once it reaches a node no cheaper than before.
pub fn path_transfer_counts(net: &LgtNetwork) -> Vec<Vec<Option<u64>>> {
    let n = net.len();
    let mut best = vec![vec![None; n]; n];
    for s in 0..n {
        let mut stack = vec![(s, 0u64)];
        while let Some((v, c)) = stack.pop() {
            if best[s][v].is_some_and(|b| b <= c) {
                continue;
            }
            best[s][v] = Some(c);
            for a in net.out_arcs(v) {
                stack.push((a.to, c + u64::from(a.kind == ArcKind::Secondary)));
            }
        }
    }
    best
}

/// Fewest transfers of a reconciliation of the binary tree `b` with `net`.
///
/// α_last is enumerated at every node; given α_last(u) = s, each allowed
/// terminal event fixes the children's first nodes, and each child then
/// ranges over every reachable α_last with the path cost from
/// [`path_transfer_counts`]. Because subtrees only interact through these
/// endpoints, keeping the best value per (node, α_last) covers every
/// assignment.
pub fn bin_cost(b: &Bin, net: &LgtNetwork, dist: &[Vec<Option<u64>>]) -> Cost {
    let n = net.len();
    let mut best: Vec<Vec<Option<u64>>> = vec![Vec::new(); b.kids.len()];
    let order = postorder(b);
    for &u in &order {
        let row: Vec<Option<u64>> = match b.kids[u] {
            None => (0..n).map(|s| (Some(s) == b.leaf_node[u]).then_some(0)).collect(),
            Some((x, y)) => (0..n).map(|s| node_cost(b.label[u].unwrap(), s, &best[x], &best[y], net, dist)).collect(),
        };
        best[u] = row;
    }
    best[b.root].iter().flatten().min().map_or(Cost::Infinite, |&c| Cost::Finite(c))
}

fn postorder(b: &Bin) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack = vec![(b.root, false)];
    while let Some((v, done)) = stack.pop() {
        if done {
            out.push(v);
            continue;
        }
        stack.push((v, true));
        if let Some((x, y)) = b.kids[v] {
            stack.push((x, false));
            stack.push((y, false));
        }
    }
    out
}

/// Cheapest child subtree whose path starts at `first`.
fn from_first(first: usize, child: &[Option<u64>], dist: &[Vec<Option<u64>>]) -> Option<u64> {
    (0..child.len()).filter_map(|s| Some(dist[first][s]? + child[s]?)).min()
}

fn node_cost(
    label: Label,
    s: usize,
    fx: &[Option<u64>],
    fy: &[Option<u64>],
    net: &LgtNetwork,
    dist: &[Vec<Option<u64>>],
) -> Option<u64> {
    let mut options: Vec<(usize, usize, u64)> = Vec::new();
    let principal: Vec<usize> = net.out_arcs(s).filter(|a| a.kind == ArcKind::Principal).map(|a| a.to).collect();
    let secondary: Vec<usize> = net.out_arcs(s).filter(|a| a.kind == ArcKind::Secondary).map(|a| a.to).collect();
    if label == Label::Spec && principal.len() == 2 {
        options.push((principal[0], principal[1], 0));
        options.push((principal[1], principal[0], 0));
    }
    if label == Label::Dup {
        options.push((s, s, 0));
    }
    // transfers are compatible with both labels
    for &h in &secondary {
        options.push((s, h, 1));
        options.push((h, s, 1));
    }
    options
        .into_iter()
        .filter_map(|(a, c, extra)| Some(extra + from_first(a, fx, dist)? + from_first(c, fy, dist)?))
        .min()
}

/// Exhaustive refinement × assignment oracle for the minimum transfer cost.
pub fn oracle_min_transfers(d: &DsTree, net: &LgtNetwork) -> Cost {
    let dist = path_transfer_counts(net);
    binary_refinements(d, net).iter().map(|b| bin_cost(b, net, &dist)).min().unwrap_or(Cost::Infinite)
}

/// (2k − 3)!!
pub fn double_factorial_count(k: usize) -> u64 {
    (1..k.max(2) as u64).map(|i| 2 * i - 1).product()
}
