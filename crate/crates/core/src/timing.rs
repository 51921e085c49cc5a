//! Time consistency: equal times across secondary arcs, increasing along principal arcs.

use std::fmt;

use crate::model::{ArcKind, LgtNetwork};

/// Node times indexed by network node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeAssignment {
    pub times: Vec<u64>,
}

impl TimeAssignment {
    pub fn satisfies(&self, net: &LgtNetwork) -> bool {
        net.arcs().iter().all(|a| match a.kind {
            ArcKind::Secondary => self.times[a.from] == self.times[a.to],
            ArcKind::Principal => self.times[a.from] < self.times[a.to],
        })
    }
}

/// A cycle of principal arcs `(u_1,v_1) … (u_k,v_k)` where each `v_i` shares a
/// secondary-arc equivalence class with `u_{i+1}` (and `v_k` with `u_1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconsistency {
    pub principal_arcs: Vec<(usize, usize)>,
}

impl Inconsistency {
    pub fn describe(&self, net: &LgtNetwork) -> String {
        let parts: Vec<String> =
            self.principal_arcs.iter().map(|&(u, v)| format!("{}->{}", net.id(u), net.id(v))).collect();
        format!("{} ~ (back to {})", parts.join(" ~ "), net.id(self.principal_arcs[0].0))
    }
}

impl fmt::Display for Inconsistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "principal cycle of length {} through secondary classes", self.principal_arcs.len())
    }
}

fn find(uf: &mut [usize], mut x: usize) -> usize {
    while uf[x] != x {
        uf[x] = uf[uf[x]];
        x = uf[x];
    }
    x
}

/// Returns a time assignment by longest-path layering, or a certificate cycle.
pub fn check_time_consistency(net: &LgtNetwork) -> Result<TimeAssignment, Inconsistency> {
    let n = net.len();
    let mut uf: Vec<usize> = (0..n).collect();
    for a in net.arcs().iter().filter(|a| a.kind == ArcKind::Secondary) {
        let (x, y) = (find(&mut uf, a.from), find(&mut uf, a.to));
        if x != y {
            uf[x.max(y)] = x.min(y);
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut classes = 0;
    let mut rep_class = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut uf, v);
        if rep_class[r] == usize::MAX {
            rep_class[r] = classes;
            classes += 1;
        }
        class_of[v] = rep_class[r];
    }
    // class digraph; each edge remembers the principal arc that induced it
    let mut out: Vec<Vec<(usize, (usize, usize))>> = vec![Vec::new(); classes];
    for a in net.arcs().iter().filter(|a| a.kind == ArcKind::Principal) {
        let (cu, cv) = (class_of[a.from], class_of[a.to]);
        if cu == cv {
            return Err(Inconsistency { principal_arcs: vec![(a.from, a.to)] });
        }
        out[cu].push((cv, (a.from, a.to)));
    }
    let mut indeg = vec![0usize; classes];
    for edges in &out {
        for &(c, _) in edges {
            indeg[c] += 1;
        }
    }
    let mut level = vec![0u64; classes];
    let mut queue: Vec<usize> = (0..classes).filter(|&c| indeg[c] == 0).collect();
    let mut done = 0;
    while let Some(c) = queue.pop() {
        done += 1;
        for &(d, _) in &out[c] {
            level[d] = level[d].max(level[c] + 1);
            indeg[d] -= 1;
            if indeg[d] == 0 {
                queue.push(d);
            }
        }
    }
    if done < classes {
        return Err(Inconsistency { principal_arcs: class_cycle(&out, &indeg) });
    }
    Ok(TimeAssignment { times: class_of.iter().map(|&c| level[c]).collect() })
}

/// Walks backwards inside the unresolved part of the class graph until a class repeats.
fn class_cycle(out: &[Vec<(usize, (usize, usize))>], indeg: &[usize]) -> Vec<(usize, usize)> {
    let stuck: Vec<bool> = indeg.iter().map(|&d| d > 0).collect();
    let mut pred: Vec<Option<(usize, (usize, usize))>> = vec![None; out.len()];
    for (c, edges) in out.iter().enumerate() {
        if !stuck[c] {
            continue;
        }
        for &(d, arc) in edges {
            if stuck[d] && pred[d].is_none() {
                pred[d] = Some((c, arc));
            }
        }
    }
    let start = (0..out.len()).find(|&c| stuck[c]).unwrap();
    let mut seen = vec![usize::MAX; out.len()];
    let mut walk = Vec::new();
    let mut c = start;
    while seen[c] == usize::MAX {
        seen[c] = walk.len();
        let (p, arc) = pred[c].expect("every stuck class has a stuck predecessor");
        walk.push(arc);
        c = p;
    }
    let mut cycle = walk[seen[c]..].to_vec();
    cycle.reverse();
    cycle
}
