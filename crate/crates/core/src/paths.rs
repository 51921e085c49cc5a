//! Reachability P(s) and minimum-transfer distances t(s, s').

use std::collections::VecDeque;

use crate::cost::Cost;
use crate::model::{ArcKind, LgtNetwork};
use crate::par::{map_range, Parallelism};

/// Forward-reachable nodes from `s` over all arcs, `s` included, in node order.
pub fn reachable_set(net: &LgtNetwork, s: usize) -> Vec<usize> {
    let mut seen = vec![false; net.len()];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(v) = stack.pop() {
        for a in net.out_arcs(v) {
            if !seen[a.to] {
                seen[a.to] = true;
                stack.push(a.to);
            }
        }
    }
    (0..net.len()).filter(|&v| seen[v]).collect()
}

/// Matrix of t(s, s'): the fewest secondary arcs on any directed s → s' path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferDistances {
    n: usize,
    dist: Vec<Cost>,
}

impl TransferDistances {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, s: usize, t: usize) -> Cost {
        self.dist[s * self.n + t]
    }

    pub fn row(&self, s: usize) -> &[Cost] {
        &self.dist[s * self.n..(s + 1) * self.n]
    }

    /// A path from `from` to `to` using exactly t(from, to) secondary arcs.
    ///
    /// At each node the successor with the smallest id among those that stay
    /// on some minimum path is taken.
    pub fn realize_path(&self, net: &LgtNetwork, from: usize, to: usize) -> Option<Vec<usize>> {
        self.get(from, to).finite()?;
        let mut path = vec![from];
        let mut x = from;
        while x != to {
            let here = self.get(x, to);
            let next = net
                .out_arcs(x)
                .filter(|a| weight(a.kind) + self.get(a.to, to) == here)
                .map(|a| a.to)
                .min_by_key(|&y| net.rank(y))
                .expect("a finite distance has a next step");
            path.push(next);
            x = next;
        }
        Some(path)
    }
}

fn weight(kind: ArcKind) -> Cost {
    match kind {
        ArcKind::Principal => Cost::ZERO,
        ArcKind::Secondary => Cost::ONE,
    }
}

/// 0/1-weight BFS from `s`: weight 0 on principal arcs, 1 on secondary arcs.
fn distances_from(net: &LgtNetwork, s: usize) -> Vec<Cost> {
    let mut dist = vec![Cost::Infinite; net.len()];
    let mut deque = VecDeque::new();
    dist[s] = Cost::ZERO;
    deque.push_back(s);
    while let Some(v) = deque.pop_front() {
        let dv = dist[v];
        for a in net.out_arcs(v) {
            let nd = dv + weight(a.kind);
            if nd < dist[a.to] {
                dist[a.to] = nd;
                match a.kind {
                    ArcKind::Principal => deque.push_front(a.to),
                    ArcKind::Secondary => deque.push_back(a.to),
                }
            }
        }
    }
    dist
}

pub fn transfer_distances(net: &LgtNetwork) -> TransferDistances {
    transfer_distances_with(net, Parallelism::default())
}

/// Runs one BFS per source; sources are independent and may run in parallel.
pub fn transfer_distances_with(net: &LgtNetwork, mode: Parallelism) -> TransferDistances {
    let rows = map_range(net.len(), mode, |s| distances_from(net, s));
    TransferDistances { n: net.len(), dist: rows.concat() }
}
