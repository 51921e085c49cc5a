//! Feedback arc set to consistency over a species tree with unknown highways.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{invalid, ReductionError};
use crate::model::{ArcKind, DsShape, DsTree, Event, Label, LgtNetwork, NetworkBuilder, Reconciliation};
use crate::reconcile::step_event;

/// Largest arc count [`solve_fas_bruteforce`] accepts.
pub const FAS_ARC_BOUND: usize = 16;

/// A simple digraph with a budget k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FasInstance {
    pub vertices: Vec<String>,
    pub arcs: Vec<(String, String)>,
    #[serde(default)]
    pub k: usize,
}

impl FasInstance {
    pub fn validate(&self) -> Result<(), ReductionError> {
        let vs: BTreeSet<&str> = self.vertices.iter().map(String::as_str).collect();
        if vs.len() != self.vertices.len() {
            return Err(invalid("duplicate vertex"));
        }
        let mut seen = BTreeSet::new();
        for (a, b) in &self.arcs {
            if !vs.contains(a.as_str()) || !vs.contains(b.as_str()) {
                return Err(invalid(format!("arc {a} -> {b} names an unknown vertex")));
            }
            if a == b {
                return Err(invalid(format!("self-loop at '{a}'")));
            }
            if !seen.insert((a, b)) {
                return Err(invalid(format!("parallel arc {a} -> {b}")));
            }
        }
        Ok(())
    }

    /// Arcs as 0-based vertex index pairs.
    fn arc_indices(&self) -> Vec<(usize, usize)> {
        let pos: BTreeMap<&str, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        self.arcs.iter().map(|(a, b)| (pos[a.as_str()], pos[b.as_str()])).collect()
    }

    pub fn from_json(text: &str) -> Result<Self, ReductionError> {
        let inst: FasInstance = serde_json::from_str(text).map_err(|e| ReductionError::Json(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

/// Kahn's order of (V, A ∖ removed), smallest vertex id first among the
/// ready vertices; `None` if a cycle remains. Entries are vertex indices.
fn topological_order(h: &FasInstance, removed: &[usize]) -> Option<Vec<usize>> {
    let n = h.vertices.len();
    let gone: BTreeSet<usize> = removed.iter().copied().collect();
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, (a, b)) in h.arc_indices().into_iter().enumerate() {
        if !gone.contains(&k) {
            indeg[b] += 1;
            out[a].push(b);
        }
    }
    let mut ready: BTreeSet<(&str, usize)> =
        (0..n).filter(|&v| indeg[v] == 0).map(|v| (h.vertices[v].as_str(), v)).collect();
    let mut order = Vec::with_capacity(n);
    while let Some((_, v)) = ready.pop_first() {
        order.push(v);
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.insert((h.vertices[w].as_str(), w));
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Whether removing the arcs at the given indices leaves H acyclic.
pub fn is_acyclic_without(h: &FasInstance, removed: &[usize]) -> bool {
    topological_order(h, removed).is_some()
}

/// A minimum feedback arc set (arc indices), by enumerating subsets in
/// order of size; among those of minimum size the lexicographically first.
pub fn solve_fas_bruteforce(h: &FasInstance) -> Result<Vec<usize>, ReductionError> {
    h.validate()?;
    let m = h.arcs.len();
    if m > FAS_ARC_BOUND {
        return Err(ReductionError::BoundExceeded { what: "arc set", size: m, max: FAS_ARC_BOUND });
    }
    for size in 0..=m {
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            if is_acyclic_without(h, &pick) {
                return Ok(pick);
            }
            // next combination in lexicographic order
            let Some(i) = (0..size).rev().find(|&i| pick[i] != i + m - size) else { break };
            pick[i] += 1;
            for j in i + 1..size {
                pick[j] = pick[j - 1] + 1;
            }
        }
    }
    unreachable!("removing every arc leaves no cycle")
}

/// Output of [`fas_to_tmstc`]: the DS-tree, the species tree and the
/// caterpillar length parameter K = 2|A| + k.
#[derive(Clone, Debug)]
pub struct FasReduction {
    pub dstree: DsTree,
    pub species_tree: LgtNetwork,
    pub big_k: usize,
}

/// Species leaf `v_{i,h}` (1-based).
fn v_leaf(i: usize, h: usize) -> String {
    format!("v{i}_{h}")
}

/// Internal node z_{i,h} = parent of `v_{i,h}` in the caterpillar S_{v_i}.
fn z(i: usize, h: usize, big_k: usize) -> String {
    format!("z{i}_{}", h.min(2 * big_k - 1))
}

/// Builds S and D. Vertices and arcs are numbered from 1 in input order;
/// species are `p{l}`, `q{l}` for arc l and `v{i}_{h}` for vertex i, and
/// gene ids carry the arc number as a prefix `a{l}_`.
///
/// S is the subtree caterpillar of the cherries (p_l, q_l) followed by the
/// 2K-leaf caterpillars of the vertices. D chains one piece per arc
/// (i, j): leaves p¹ p² q¹ q² for the arc's cherry, then two leaves per
/// position of S_{v_i}, then a cherry w¹ w² mapped to v_{j,1} and v_{j,2}.
/// Labels alternate, so D is binary and least resolved.
pub fn fas_to_tmstc(h: &FasInstance) -> Result<FasReduction, ReductionError> {
    h.validate()?;
    let m = h.arcs.len();
    let n = h.vertices.len();
    if m == 0 {
        return Err(invalid("the digraph has no arcs"));
    }
    let big_k = 2 * m + h.k;
    let arcs = h.arc_indices();

    let mut b = NetworkBuilder::new();
    let node = |b: &mut NetworkBuilder, id: String| {
        let v = b.add_node(&id);
        debug_assert_eq!(b.id(v), id);
        v
    };
    let leaf = |b: &mut NetworkBuilder, id: String| {
        let v = b.add_node(&id);
        b.set_species(v, id);
        v
    };
    let mut subtrees = Vec::with_capacity(m + n);
    for l in 1..=m {
        let r = node(&mut b, format!("r_a{l}"));
        let p = leaf(&mut b, format!("p{l}"));
        let q = leaf(&mut b, format!("q{l}"));
        b.add_arc(r, p, ArcKind::Principal);
        b.add_arc(r, q, ArcKind::Principal);
        subtrees.push(r);
    }
    for i in 1..=n {
        let zs: Vec<usize> = (1..2 * big_k).map(|hh| node(&mut b, z(i, hh, big_k))).collect();
        for hh in 1..=2 * big_k {
            let v = leaf(&mut b, v_leaf(i, hh));
            b.add_arc(zs[(hh - 1).min(2 * big_k - 2)], v, ArcKind::Principal);
        }
        for w in zs.windows(2) {
            b.add_arc(w[0], w[1], ArcKind::Principal);
        }
        subtrees.push(zs[0]);
    }
    let spine: Vec<usize> = (1..subtrees.len()).map(|t| node(&mut b, format!("s{t}"))).collect();
    for (t, &s) in spine.iter().enumerate() {
        b.add_arc(s, subtrees[t], ArcKind::Principal);
        let next = spine.get(t + 1).copied().unwrap_or(subtrees[t + 1]);
        b.add_arc(s, next, ArcKind::Principal);
    }
    b.set_root(spine[0]);
    let species_tree = b.build().map_err(|e| invalid(e.to_string()))?;

    let gene = |l: usize, name: &str, species: String| DsShape::leaf(format!("a{l}_{name}"), species);
    let piece = |l: usize, (i, j): (usize, usize)| {
        let (i, j) = (i + 1, j + 1);
        let mut cur = DsShape::named(
            format!("a{l}_w"),
            Label::Dup,
            vec![gene(l, "w1", v_leaf(j, 1)), gene(l, "w2", v_leaf(j, 2))],
        );
        for hh in (1..=2 * big_k).rev() {
            let s = DsShape::named(
                format!("a{l}_s{hh}"),
                Label::Spec,
                vec![gene(l, &format!("v{hh}_2"), v_leaf(i, hh)), cur],
            );
            cur =
                DsShape::named(format!("a{l}_d{hh}"), Label::Dup, vec![gene(l, &format!("v{hh}_1"), v_leaf(i, hh)), s]);
        }
        let sq = DsShape::named(format!("a{l}_sq"), Label::Spec, vec![gene(l, "q2", format!("q{l}")), cur]);
        let dq = DsShape::named(format!("a{l}_dq"), Label::Dup, vec![gene(l, "q1", format!("q{l}")), sq]);
        let sp = DsShape::named(format!("a{l}_sp"), Label::Spec, vec![gene(l, "p2", format!("p{l}")), dq]);
        DsShape::named(format!("a{l}_dp"), Label::Dup, vec![gene(l, "p1", format!("p{l}")), sp])
    };
    let mut pieces: Vec<DsShape> = arcs.iter().enumerate().map(|(k, &a)| piece(k + 1, a)).collect();
    let shape = if m == 1 {
        pieces.pop().unwrap()
    } else {
        let last = pieces.pop().unwrap();
        let before = pieces.pop().unwrap();
        let mut cur = DsShape::named(format!("spine_s{}", m - 1), Label::Spec, vec![before, last]);
        for hh in (1..=m - 2).rev() {
            let l = hh + 1;
            let d = DsShape::named(format!("spine_d{l}"), Label::Dup, vec![gene(l, "p3", format!("p{l}")), cur]);
            cur = DsShape::named(format!("spine_s{hh}"), Label::Spec, vec![pieces.pop().unwrap(), d]);
        }
        cur
    };
    let dstree = DsTree::from_shape(&shape).map_err(|e| invalid(e.to_string()))?;
    Ok(FasReduction { dstree, species_tree, big_k })
}

/// The network of the forward direction and a reconciliation of `red.dstree`
/// with it, given a feedback arc set `a_prime` (arc indices).
///
/// Forward arcs of a topological order of (V, A ∖ A′) get send/recv
/// highways between the caterpillars, arcs of A′ that point backwards in that
/// order use the escape route through `backsend`/`backrecv` and the
/// `send12` arc, and every arc's cherry q gets a transfer into its tail
/// caterpillar. Each arc then costs 2 transfers, or 3 if it takes the
/// escape route.
pub fn fas_witness(
    h: &FasInstance,
    a_prime: &[usize],
    red: &FasReduction,
) -> Result<(LgtNetwork, Reconciliation), ReductionError> {
    h.validate()?;
    if let Some(&bad) = a_prime.iter().find(|&&a| a >= h.arcs.len()) {
        return Err(invalid(format!("arc index {bad} out of range")));
    }
    let order = topological_order(h, a_prime).ok_or(ReductionError::NotAFeedbackArcSet)?;
    let n = h.vertices.len();
    let big_k = red.big_k;
    let arcs = h.arc_indices();
    let at: Vec<usize> = {
        let mut at = vec![0; n];
        for (p, &v) in order.iter().enumerate() {
            at[v] = p;
        }
        at
    };
    let s = &red.species_tree;
    let sp = |id: &str| s.index_of(id).unwrap_or_else(|| panic!("species tree node {id}"));
    let mut b = NetworkBuilder::from_network(s);

    // Step 1: each arc's cherry sends into the caterpillar of its tail.
    for (k, &(i, _)) in arcs.iter().enumerate() {
        let (l, i) = (k + 1, i + 1);
        let x = b.subdivide_above(sp(&format!("q{l}")), &format!("send_q{l}_to_{i}"));
        let y = b.subdivide_above(sp(&z(i, 1, big_k)), &format!("recv_{i}_from_q{l}"));
        b.add_arc(x, y, ArcKind::Secondary);
    }
    // Step 2: forward highways along the order.
    let mut send = BTreeMap::new();
    let mut recv = BTreeMap::new();
    for (p, &vi) in order.iter().enumerate() {
        let i = vi + 1;
        for &vj in &order[..p] {
            let y = b.subdivide_above(sp(&z(i, 1, big_k)), &format!("recv_{i}_from_{}", vj + 1));
            recv.insert((vi, vj), y);
        }
        for &vj in &order[p + 1..] {
            let x = b.subdivide_above(sp(&v_leaf(i, 2 * big_k)), &format!("send_{i}_to_{}", vj + 1));
            send.insert((vi, vj), x);
        }
    }
    for (&(vi, vj), &x) in &send {
        b.add_arc(x, recv[&(vj, vi)], ArcKind::Secondary);
    }
    // Step 3: escape routes for backward arcs.
    let mut backsend = BTreeMap::new();
    let mut backrecv = BTreeMap::new();
    for (p, &vi) in order.iter().enumerate() {
        let i = vi + 1;
        for &vj in &order[..p] {
            let x = b.subdivide_above(sp(&v_leaf(i, 2 * big_k)), &format!("backsend_{i}_to_{}", vj + 1));
            backsend.insert((vi, vj), x);
        }
        for &vj in &order[p + 1..] {
            let y = b.subdivide_above(sp(&v_leaf(i, 1)), &format!("backrecv_{i}_from_{}", vj + 1));
            backrecv.insert((vi, vj), y);
        }
    }
    for (&(vi, vj), &x) in &backsend {
        b.add_arc(x, backrecv[&(vj, vi)], ArcKind::Secondary);
    }
    for i in 1..=n {
        let x = b.subdivide_above(sp(&v_leaf(i, 1)), &format!("send12_{i}"));
        let y = b.subdivide_above(sp(&v_leaf(i, 2)), &format!("recv12_{i}"));
        b.add_arc(x, y, ArcKind::Secondary);
    }
    let net = b.build().map_err(|e| invalid(e.to_string()))?;

    let mut w = Paths { net: &net, alpha: BTreeMap::new(), events: BTreeMap::new() };
    let nd = |id: &str| net.index_of(id).unwrap_or_else(|| panic!("network node {id}"));
    let m = arcs.len();
    for (k, &(vi, vj)) in arcs.iter().enumerate() {
        let (l, i, j) = (k + 1, vi + 1, vj + 1);
        let g = |name: &str| format!("a{l}_{name}");
        let ra = nd(&format!("r_a{l}"));
        let p = nd(&format!("p{l}"));
        let q = nd(&format!("q{l}"));
        let sq = nd(&format!("send_q{l}_to_{i}"));
        // the piece's root: a duplication at r_a
        let dp_path = if l < m || m == 1 { vec![ra] } else { w.down(nd(&format!("s{}", m - 1)), ra)[1..].to_vec() };
        w.record(&g("dp"), dp_path, Event::Dup);
        w.record(&g("p1"), w.down(ra, p), Event::Extant);
        w.record(&g("sp"), vec![ra], Event::Spec);
        w.record(&g("p2"), w.down(ra, p)[1..].to_vec(), Event::Extant);
        w.record(&g("dq"), w.down(ra, sq)[1..].to_vec(), Event::Dup);
        w.record(&g("q1"), w.down(sq, q), Event::Extant);
        w.record(&g("sq"), vec![sq], Event::Transfer);
        w.record(&g("q2"), w.down(sq, q), Event::Extant);

        let zi = |hh: usize| nd(&z(i, hh, big_k));
        let vl = |c: usize, hh: usize| nd(&v_leaf(c, hh));
        w.record(&g("d1"), w.down(nd(&format!("recv_{i}_from_q{l}")), zi(1)), Event::Dup);
        let escape = at[vi] > at[vj];
        let t = if escape { backsend[&(vi, vj)] } else { send[&(vi, vj)] };
        for hh in 1..=2 * big_k {
            let last = if hh < 2 * big_k { zi(hh) } else { t };
            w.record(&g(&format!("v{hh}_1")), w.down(last, vl(i, hh)), Event::Extant);
            if hh < 2 * big_k {
                w.record(&g(&format!("s{hh}")), vec![last], Event::Spec);
                w.record(&g(&format!("v{hh}_2")), w.down(last, vl(i, hh))[1..].to_vec(), Event::Extant);
                let next = if hh + 1 < 2 * big_k { vec![zi(hh + 1)] } else { w.down(zi(hh), t)[1..].to_vec() };
                w.record(&g(&format!("d{}", hh + 1)), next, Event::Dup);
            } else {
                w.record(&g(&format!("s{hh}")), vec![t], Event::Transfer);
                w.record(&g(&format!("v{hh}_2")), w.down(t, vl(i, hh)), Event::Extant);
            }
        }
        if escape {
            let s12 = nd(&format!("send12_{j}"));
            w.record(&g("w"), w.down(backrecv[&(vj, vi)], s12), Event::Transfer);
            w.record(&g("w1"), w.down(s12, vl(j, 1)), Event::Extant);
            w.record(&g("w2"), w.down(nd(&format!("recv12_{j}")), vl(j, 2)), Event::Extant);
        } else {
            let zj = nd(&z(j, 1, big_k));
            w.record(&g("w"), w.down(recv[&(vj, vi)], zj), Event::Dup);
            w.record(&g("w1"), w.down(zj, vl(j, 1)), Event::Extant);
            w.record(&g("w2"), w.down(zj, vl(j, 2)), Event::Extant);
        }
    }
    // the spine: speciations at s_l with the arc pieces hanging off
    for l in 1..m {
        let sl = nd(&format!("s{l}"));
        w.record(&format!("spine_s{l}"), vec![sl], Event::Spec);
        if l >= 2 {
            w.record(&format!("spine_d{l}"), vec![sl], Event::Dup);
            w.record(&format!("a{l}_p3"), w.down(sl, nd(&format!("p{l}"))), Event::Extant);
        }
    }
    let alpha = Reconciliation::new(w.alpha, w.events).map_err(|e| invalid(e.to_string()))?;
    Ok((net, alpha))
}

struct Paths<'a> {
    net: &'a LgtNetwork,
    alpha: BTreeMap<String, Vec<String>>,
    events: BTreeMap<String, Vec<Event>>,
}

impl Paths<'_> {
    /// Principal path from `from` down to its descendant `to`.
    fn down(&self, from: usize, to: usize) -> Vec<usize> {
        let mut path = vec![to];
        let mut x = to;
        while x != from {
            x = self.net.principal_parent(x).expect("`to` lies below `from`");
            path.push(x);
        }
        path.reverse();
        path
    }

    fn record(&mut self, id: &str, path: Vec<usize>, terminal: Event) {
        let net = self.net;
        let mut ev: Vec<Event> = path.windows(2).map(|p| step_event(net, p[0], p[1])).collect();
        ev.push(terminal);
        self.alpha.insert(id.to_string(), path.iter().map(|&x| net.id(x).to_string()).collect());
        self.events.insert(id.to_string(), ev);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timing::check_time_consistency;
    use crate::verify::verify_reconciliation;

    fn digraph(n: usize, arcs: &[(usize, usize)], k: usize) -> FasInstance {
        FasInstance {
            vertices: (1..=n).map(|i| format!("x{i}")).collect(),
            arcs: arcs.iter().map(|&(a, b)| (format!("x{a}"), format!("x{b}"))).collect(),
            k,
        }
    }

    #[test]
    fn bruteforce_sizes() {
        assert_eq!(solve_fas_bruteforce(&digraph(3, &[(1, 2), (2, 3), (1, 3)], 0)).unwrap().len(), 0);
        assert_eq!(solve_fas_bruteforce(&digraph(2, &[(1, 2), (2, 1)], 0)).unwrap().len(), 1);
        let two = digraph(4, &[(1, 2), (2, 1), (3, 4), (4, 3)], 0);
        assert_eq!(solve_fas_bruteforce(&two).unwrap().len(), 2);
    }

    #[test]
    fn shape_of_the_reduction() {
        let h = digraph(2, &[(1, 2), (2, 1)], 1);
        let red = fas_to_tmstc(&h).unwrap();
        assert_eq!(red.big_k, 5);
        assert!(red.dstree.is_binary());
        assert!(red.dstree.is_least_resolved());
        let caterpillar =
            red.species_tree.leaves().iter().filter(|&&v| red.species_tree.id(v).starts_with("v1_")).count();
        assert_eq!(caterpillar, 10);
        let d = &red.dstree;
        let piece = d.index_of("a1_d1").unwrap();
        assert_eq!(d.leaf_sets()[piece].len(), 22);
        assert_eq!(d.species(d.index_of("a1_w1").unwrap()), Some("v2_1"));
    }

    fn check(h: &FasInstance, a_prime: &[usize]) -> u64 {
        let red = fas_to_tmstc(h).unwrap();
        let (net, alpha) = fas_witness(h, a_prime, &red).unwrap();
        assert!(check_time_consistency(&net).is_ok());
        let rep = verify_reconciliation(&red.dstree, &net, &alpha).unwrap();
        assert!(rep.valid, "{:?}", &rep.violations[..rep.violations.len().min(5)]);
        rep.transfer_count
    }

    #[test]
    fn single_arc_costs_two() {
        assert_eq!(check(&digraph(2, &[(1, 2)], 0), &[]), 2);
    }

    #[test]
    fn two_cycle_costs_five() {
        let h = digraph(2, &[(1, 2), (2, 1)], 1);
        let a = solve_fas_bruteforce(&h).unwrap();
        assert_eq!(check(&h, &a), 5);
    }

    #[test]
    fn cyclic_remainder_is_rejected() {
        let h = digraph(2, &[(1, 2), (2, 1)], 1);
        let red = fas_to_tmstc(&h).unwrap();
        assert!(matches!(fas_witness(&h, &[], &red), Err(ReductionError::NotAFeedbackArcSet)));
    }
}
