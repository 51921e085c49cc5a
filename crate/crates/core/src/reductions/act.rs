//! Incomparable assignment on a rooted tree, and its encoding as a
//! transfer-minimizing consistency instance.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::tree::{RootedTree, TreeDoc};
use super::{invalid, ReductionError};
use crate::cost::Cost;
use crate::model::{ArcKind, DsShape, DsTree, Label, LgtNetwork, NetworkBuilder};

/// Default limit on |X| for [`solve_act_bruteforce`].
pub const DEFAULT_ACT_BOUND: usize = 12;

/// A tree T, elements X and finite weights w(x, v); missing pairs are ∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActInstance {
    pub tree: RootedTree,
    pub elements: Vec<String>,
    /// Finite weights of each element, keyed by tree node.
    pub weights: Vec<BTreeMap<usize, u64>>,
}

#[derive(Serialize, Deserialize)]
struct ActDoc {
    tree: TreeDoc,
    elements: Vec<String>,
    #[serde(default)]
    weights: BTreeMap<String, BTreeMap<String, Cost>>,
}

impl ActInstance {
    pub fn new(tree: RootedTree, elements: Vec<String>) -> Result<Self, ReductionError> {
        let distinct: HashSet<&String> = elements.iter().collect();
        if distinct.len() != elements.len() {
            return Err(invalid("duplicate element"));
        }
        let weights = vec![BTreeMap::new(); elements.len()];
        Ok(ActInstance { tree, elements, weights })
    }

    pub fn element_index(&self, x: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == x)
    }

    pub fn set_weight(&mut self, x: usize, v: usize, w: u64) {
        self.weights[x].insert(v, w);
    }

    pub fn weight(&self, x: usize, v: usize) -> Cost {
        self.weights[x].get(&v).map_or(Cost::Infinite, |&w| Cost::Finite(w))
    }

    /// The unique zero-weight node u_x of every element, if the instance has
    /// the restricted form: weights in {0, 1}, one zero per element, no other
    /// element finite on a zero node, and each element's finite nodes
    /// pairwise incomparable.
    pub fn restricted_anchors(&self) -> Result<Vec<usize>, ReductionError> {
        let t = &self.tree;
        let mut anchors = Vec::with_capacity(self.elements.len());
        for (x, ws) in self.weights.iter().enumerate() {
            let name = &self.elements[x];
            if let Some((&v, &w)) = ws.iter().find(|(_, &w)| w > 1) {
                return Err(ReductionError::NotRestricted(format!("w({name}, {}) = {w}", t.id(v))));
            }
            let zeros: Vec<usize> = ws.iter().filter(|(_, &w)| w == 0).map(|(&v, _)| v).collect();
            if zeros.len() != 1 {
                return Err(ReductionError::NotRestricted(format!("{name} has {} zero-weight nodes", zeros.len())));
            }
            let finite: Vec<usize> = ws.keys().copied().collect();
            for (i, &a) in finite.iter().enumerate() {
                if let Some(&b) = finite[i + 1..].iter().find(|&&b| t.comparable(a, b)) {
                    return Err(ReductionError::NotRestricted(format!(
                        "{name} is finite on comparable nodes {} and {}",
                        t.id(a),
                        t.id(b)
                    )));
                }
            }
            anchors.push(zeros[0]);
        }
        for (x, &u) in anchors.iter().enumerate() {
            if let Some(y) = (0..self.elements.len()).find(|&y| y != x && self.weights[y].contains_key(&u)) {
                return Err(ReductionError::NotRestricted(format!(
                    "{} is finite on {}, the zero node of {}",
                    self.elements[y],
                    t.id(u),
                    self.elements[x]
                )));
            }
        }
        Ok(anchors)
    }

    pub fn is_restricted(&self) -> bool {
        self.restricted_anchors().is_ok()
    }

    pub fn to_json(&self) -> String {
        let weights = self
            .weights
            .iter()
            .enumerate()
            .map(|(x, ws)| {
                let row = ws.iter().map(|(&v, &w)| (self.tree.id(v).to_string(), Cost::Finite(w))).collect();
                (self.elements[x].clone(), row)
            })
            .collect();
        let doc = ActDoc { tree: self.tree.to_doc(), elements: self.elements.clone(), weights };
        serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, ReductionError> {
        let doc: ActDoc = serde_json::from_str(text).map_err(|e| ReductionError::Json(e.to_string()))?;
        let tree = RootedTree::from_doc(&doc.tree)?;
        let mut inst = ActInstance::new(tree, doc.elements)?;
        for (x, row) in &doc.weights {
            let xi = inst.element_index(x).ok_or_else(|| invalid(format!("weights for unknown element '{x}'")))?;
            for (v, w) in row {
                let vi = inst.tree.index_of(v).ok_or_else(|| invalid(format!("weight on unknown node '{v}'")))?;
                if let Cost::Finite(w) = w {
                    inst.set_weight(xi, vi, *w);
                }
            }
        }
        Ok(inst)
    }
}

pub fn solve_act_bruteforce(inst: &ActInstance) -> Result<Cost, ReductionError> {
    solve_act_bruteforce_with(inst, DEFAULT_ACT_BOUND)
}

/// Minimum total weight of an assignment of every element to a finite node
/// such that the images are pairwise incomparable; ∞ if there is none.
///
/// Depth-first over elements with the fewest candidates first, pruned by the
/// sum of the remaining elements' cheapest weights.
pub fn solve_act_bruteforce_with(inst: &ActInstance, max_elements: usize) -> Result<Cost, ReductionError> {
    let n = inst.elements.len();
    if n > max_elements {
        return Err(ReductionError::BoundExceeded { what: "element set", size: n, max: max_elements });
    }
    let mut cands: Vec<Vec<(u64, usize)>> =
        inst.weights.iter().map(|ws| ws.iter().map(|(&v, &w)| (w, v)).collect()).collect();
    if cands.iter().any(|c| c.is_empty()) {
        return Ok(Cost::Infinite);
    }
    for c in &mut cands {
        c.sort_unstable();
    }
    cands.sort_by_key(|c| c.len());
    let mut rest = vec![0u64; n + 1];
    for i in (0..n).rev() {
        rest[i] = rest[i + 1] + cands[i][0].0;
    }

    struct Search<'a> {
        tree: &'a RootedTree,
        cands: &'a [Vec<(u64, usize)>],
        rest: &'a [u64],
        chosen: Vec<usize>,
        best: Option<u64>,
    }
    impl Search<'_> {
        fn go(&mut self, i: usize, cost: u64) {
            if self.best.is_some_and(|b| cost + self.rest[i] >= b) {
                return;
            }
            if i == self.cands.len() {
                self.best = Some(cost);
                return;
            }
            for &(w, v) in &self.cands[i] {
                if self.chosen.iter().any(|&u| self.tree.comparable(u, v)) {
                    continue;
                }
                self.chosen.push(v);
                self.go(i + 1, cost + w);
                self.chosen.pop();
            }
        }
    }
    let mut s = Search { tree: &inst.tree, cands: &cands, rest: &rest, chosen: Vec::new(), best: None };
    s.go(0, 0);
    Ok(s.best.map_or(Cost::Infinite, Cost::Finite))
}

/// Builds the DS-tree and network whose minimum transfer cost is twice the
/// optimum of the restricted instance `inst`.
///
/// T is binarized (single children get a fresh leaf sibling, wider nodes
/// become left combs in id order) and every node v of the result gets two
/// leaves `spec_v_left` and `spec_v_right` below different children. Each
/// finite weight w(x, v) = 1 adds a secondary arc from above `spec_v_left`
/// to above `spec_{u_x}_left`, and the same on the right.
pub fn act_to_nc(inst: &ActInstance) -> Result<(DsTree, LgtNetwork), ReductionError> {
    let anchors = inst.restricted_anchors()?;
    if inst.elements.is_empty() {
        return Err(invalid("no elements"));
    }
    let t = &inst.tree;
    let mut b = NetworkBuilder::new();

    // Binarized copy of T. `node_of[v]` is the network node of T node v; the
    // extra comb and padding nodes only exist in the network.
    let mut node_of = vec![usize::MAX; t.len()];
    // every binarized node, paired with its name and binary children
    let mut bin: Vec<(usize, String)> = Vec::new();
    let mut kids: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let root = b.add_node(&format!("spec_{}", t.id(t.root())));
    b.set_root(root);
    node_of[t.root()] = root;
    let mut stack = vec![t.root()];
    while let Some(v) = stack.pop() {
        let x = node_of[v];
        bin.push((x, t.id(v).to_string()));
        let mut ch: Vec<usize> = t.children(v).to_vec();
        ch.sort_by(|&a, &c| t.id(a).cmp(t.id(c)));
        for &c in &ch {
            node_of[c] = b.add_node(&format!("spec_{}", t.id(c)));
            stack.push(c);
        }
        let nets: Vec<usize> = ch.iter().map(|&c| node_of[c]).collect();
        match nets.len() {
            0 => {}
            1 => {
                let pad = b.add_node(&format!("spec_{}_pad", t.id(v)));
                bin.push((pad, format!("{}_pad", t.id(v))));
                kids.insert(x, vec![nets[0], pad]);
            }
            r => {
                // ((c1, c2), c3) ... with v on top
                let mut acc = nets[0];
                for (step, &c) in nets.iter().enumerate().take(r - 1).skip(1) {
                    let name = format!("{}_comb{}", t.id(v), step + 1);
                    let comb = b.add_node(&format!("spec_{name}"));
                    bin.push((comb, name));
                    kids.insert(comb, vec![acc, c]);
                    acc = comb;
                }
                kids.insert(x, vec![acc, nets[r - 1]]);
            }
        }
    }
    for (&p, cs) in &kids {
        for &c in cs {
            b.add_arc(p, c, ArcKind::Principal);
        }
    }
    // Smallest binarized leaf (by network id) below each binarized node.
    let leaf_below = {
        let mut memo: BTreeMap<usize, usize> = BTreeMap::new();
        fn go(
            v: usize,
            kids: &BTreeMap<usize, Vec<usize>>,
            b: &NetworkBuilder,
            memo: &mut BTreeMap<usize, usize>,
        ) -> usize {
            if let Some(&l) = memo.get(&v) {
                return l;
            }
            let l = match kids.get(&v) {
                None => v,
                Some(cs) => cs.iter().map(|&c| go(c, kids, b, memo)).min_by(|&a, &c| b.id(a).cmp(b.id(c))).unwrap(),
            };
            memo.insert(v, l);
            l
        }
        bin.iter().map(|&(x, _)| (x, go(x, &kids, &b, &mut memo))).collect::<BTreeMap<usize, usize>>()
    };
    // spec_v_left / spec_v_right leaves
    let mut side_leaf: BTreeMap<(usize, bool), usize> = BTreeMap::new();
    for (x, name) in &bin {
        for (k, side) in ["left", "right"].into_iter().enumerate() {
            let id = format!("spec_{name}_{side}");
            let leaf = b.add_node(&id);
            b.set_species(leaf, b.id(leaf).to_string());
            match kids.get(x) {
                None => b.add_arc(*x, leaf, ArcKind::Principal),
                Some(cs) => {
                    let host = leaf_below[&cs[k]];
                    let att = b.subdivide_above(host, &format!("{id}_att"));
                    b.add_arc(att, leaf, ArcKind::Principal);
                }
            }
            side_leaf.insert((*x, k == 1), leaf);
        }
    }
    for (x, ws) in inst.weights.iter().enumerate() {
        let ux = node_of[anchors[x]];
        for (&v, &w) in ws {
            if w != 1 {
                continue;
            }
            let nv = node_of[v];
            for right in [false, true] {
                let side = if right { "right" } else { "left" };
                let tail = b
                    .subdivide_above(side_leaf[&(nv, right)], &format!("send_{}_{}_{side}", inst.elements[x], t.id(v)));
                let head = b
                    .subdivide_above(side_leaf[&(ux, right)], &format!("recv_{}_{}_{side}", inst.elements[x], t.id(v)));
                b.add_arc(tail, head, ArcKind::Secondary);
            }
        }
    }
    let net = b.build().map_err(|e| invalid(e.to_string()))?;

    let genes: Vec<DsShape> = inst
        .elements
        .iter()
        .enumerate()
        .map(|(x, name)| {
            let ux = node_of[anchors[x]];
            let left = net.species(side_leaf[&(ux, false)]).unwrap();
            let right = net.species(side_leaf[&(ux, true)]).unwrap();
            DsShape::named(
                format!("gene_{name}"),
                Label::Dup,
                vec![DsShape::leaf(format!("{name}_left"), left), DsShape::leaf(format!("{name}_right"), right)],
            )
        })
        .collect();
    let shape =
        if genes.len() == 1 { genes.into_iter().next().unwrap() } else { DsShape::named("root", Label::Spec, genes) };
    let d = DsTree::from_shape(&shape).map_err(|e| invalid(e.to_string()))?;
    Ok((d, net))
}
