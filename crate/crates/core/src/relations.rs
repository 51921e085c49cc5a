//! Relation graphs ↔ least-resolved DS-trees, l-contraction and binary refinements.

use std::collections::HashSet;

use thiserror::Error;

use crate::model::ids::fresh_id;
use crate::model::{DsShape, DsTree, Label, RelationGraph};
use crate::reconcile::lbr::{enumerate_lbrs, Lbr, LbrNode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationsError {
    #[error("relation graph has no genes")]
    Empty,
    #[error("not representable by a DS-tree: induced path {}", .path.join(" - "))]
    NotRepresentable { path: [String; 4] },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error("'{0}' is not a node of the tree")]
    UnknownNode(String),
    #[error("'{child}' is not a child of '{parent}'")]
    NotAnArc { parent: String, child: String },
    #[error("cannot contract an arc with a leaf endpoint")]
    LeafEndpoint,
    #[error("labels differ on '{parent}' and '{child}'")]
    LabelMismatch { parent: String, child: String },
}

/// R(D): genes x, y are adjacent iff lca(x, y) is a speciation.
pub fn relation_graph_of(d: &DsTree) -> RelationGraph {
    let sets = d.leaf_sets();
    let mut edges = Vec::new();
    for v in d.internal_nodes() {
        if d.label(v) != Some(Label::Spec) {
            continue;
        }
        let ch = d.children(v);
        for (i, &a) in ch.iter().enumerate() {
            for &b in &ch[i + 1..] {
                for x in &sets[a] {
                    for y in &sets[b] {
                        edges.push((x.to_string(), y.to_string()));
                    }
                }
            }
        }
    }
    RelationGraph::new(d.gene_species(), edges).expect("edges join leaves of the tree")
}

/// The cotree of R: Dup over connected components, Spec over co-components.
///
/// Children are ordered by their smallest gene id. Fails with an induced P4
/// when some part is connected with a connected complement.
pub fn build_least_resolved_dstree(r: &RelationGraph) -> Result<DsTree, RelationsError> {
    let genes: Vec<(&String, &String)> = r.genes().iter().collect();
    if genes.is_empty() {
        return Err(RelationsError::Empty);
    }
    let n = genes.len();
    let pos = |g: &str| genes.binary_search_by(|(x, _)| x.as_str().cmp(g)).unwrap();
    let mut adj = vec![vec![false; n]; n];
    for (a, b) in r.edges() {
        let (i, j) = (pos(a), pos(b));
        adj[i][j] = true;
        adj[j][i] = true;
    }
    let all: Vec<usize> = (0..n).collect();
    let shape = cotree(&all, &adj, &genes)?;
    Ok(DsTree::from_shape(&shape).expect("cotree nodes have at least two children"))
}

fn cotree(set: &[usize], adj: &[Vec<bool>], genes: &[(&String, &String)]) -> Result<DsShape, RelationsError> {
    if set.len() == 1 {
        let (g, s) = genes[set[0]];
        return Ok(DsShape::leaf(g.clone(), s.clone()));
    }
    let comps = components(set, adj, false);
    let (label, parts) = if comps.len() > 1 {
        (Label::Dup, comps)
    } else {
        let co = components(set, adj, true);
        if co.len() == 1 {
            let p = induced_p4(set, adj).expect("a prime part of a graph contains an induced P4");
            return Err(RelationsError::NotRepresentable { path: p.map(|v| genes[v].0.clone()) });
        }
        (Label::Spec, co)
    };
    let children = parts.iter().map(|p| cotree(p, adj, genes)).collect::<Result<Vec<_>, _>>()?;
    Ok(DsShape::node(label, children))
}

/// Connected components of the induced subgraph (or of its complement),
/// each sorted, listed by smallest member.
fn components(set: &[usize], adj: &[Vec<bool>], complement: bool) -> Vec<Vec<usize>> {
    let mut seen = vec![false; set.len()];
    let mut out = Vec::new();
    for s in 0..set.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![set[s]];
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for j in 0..set.len() {
                if !seen[j] && j != i && adj[set[i]][set[j]] != complement {
                    seen[j] = true;
                    comp.push(set[j]);
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Some induced path a–b–c–d inside `set`.
fn induced_p4(set: &[usize], adj: &[Vec<bool>]) -> Option<[usize; 4]> {
    for &b in set {
        for &c in set {
            if b == c || !adj[b][c] {
                continue;
            }
            for &a in set {
                if a == b || a == c || !adj[a][b] || adj[a][c] {
                    continue;
                }
                for &d in set {
                    if d != a && d != b && d != c && adj[c][d] && !adj[b][d] && !adj[a][d] {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

/// Contracts the arc `parent → child` between equally labeled internal nodes.
/// The child's children take its place in the parent's child list.
pub fn l_contract(d: &DsTree, parent: &str, child: &str) -> Result<DsTree, ContractError> {
    let u = d.index_of(parent).ok_or_else(|| ContractError::UnknownNode(parent.into()))?;
    let v = d.index_of(child).ok_or_else(|| ContractError::UnknownNode(child.into()))?;
    if d.parent(v) != Some(u) {
        return Err(ContractError::NotAnArc { parent: parent.into(), child: child.into() });
    }
    if d.is_leaf(v) {
        return Err(ContractError::LeafEndpoint);
    }
    if d.label(u) != d.label(v) {
        return Err(ContractError::LabelMismatch { parent: parent.into(), child: child.into() });
    }
    fn go(d: &DsTree, x: usize, v: usize) -> DsShape {
        match d.label(x) {
            None => d.subtree_shape(x, true),
            Some(label) => {
                let mut children = Vec::new();
                for &c in d.children(x) {
                    if c == v {
                        children.extend(d.children(v).iter().map(|&g| go(d, g, v)));
                    } else {
                        children.push(go(d, c, v));
                    }
                }
                DsShape::named(d.id(x), label, children)
            }
        }
    }
    Ok(DsTree::from_shape(&go(d, d.root(), v)).expect("contraction keeps the tree valid"))
}

/// Contracts every arc between equally labeled internal nodes.
pub fn contract_all(d: &DsTree) -> DsTree {
    let mut t = d.clone();
    loop {
        let arc = (0..t.len()).find_map(|v| {
            let p = t.parent(v)?;
            (t.label(v).is_some() && t.label(v) == t.label(p)).then_some((p, v))
        });
        match arc {
            Some((p, v)) => {
                let (pid, vid) = (t.id(p).to_string(), t.id(v).to_string());
                t = l_contract(&t, &pid, &vid).expect("arc chosen with equal labels");
            }
            None => return t,
        }
    }
}

/// Ids for the internal nodes of `lbr` expanded at a node called `root_id`:
/// the LBR root keeps `root_id`, the others get `root_id/1`, `root_id/2`, …
/// in pre-order. Entries for handles are `None`.
pub(crate) fn lbr_node_ids(lbr: &Lbr, root_id: &str, taken: &mut HashSet<String>) -> Vec<Option<String>> {
    let mut ids = vec![None; lbr.nodes().len()];
    let mut counter = 0;
    let mut stack = vec![lbr.root()];
    while let Some(x) = stack.pop() {
        if let LbrNode::Join(a, b) = lbr.nodes()[x] {
            ids[x] = Some(if counter == 0 {
                root_id.to_string()
            } else {
                let id = fresh_id(&format!("{root_id}/{counter}"), taken);
                taken.insert(id.clone());
                id
            });
            counter += 1;
            stack.push(b);
            stack.push(a);
        }
    }
    ids
}

/// Replaces a multifurcation by `lbr`; `children[h]` is the shape for handle `h`.
pub(crate) fn expand_lbr(lbr: &Lbr, label: Label, ids: &[Option<String>], children: &[DsShape]) -> DsShape {
    fn go(lbr: &Lbr, x: usize, label: Label, ids: &[Option<String>], children: &[DsShape]) -> DsShape {
        match lbr.nodes()[x] {
            LbrNode::Handle(h) => children[h].clone(),
            LbrNode::Join(a, b) => DsShape::named(
                ids[x].clone().unwrap(),
                label,
                vec![go(lbr, a, label, ids, children), go(lbr, b, label, ids, children)],
            ),
        }
    }
    go(lbr, lbr.root(), label, ids, children)
}

/// Every binary refinement of `d`, each once.
///
/// Multifurcations are taken in pre-order; the last one varies fastest.
/// Original nodes keep their ids.
pub fn enumerate_binary_refinements(d: &DsTree) -> BinaryRefinements<'_> {
    let multis: Vec<usize> = (0..d.len()).filter(|&v| d.children(v).len() > 2).collect();
    let shapes: Vec<Vec<Lbr>> = multis.iter().map(|&v| enumerate_lbrs(d.children(v).len())).collect();
    BinaryRefinements { tree: d, counter: vec![0; multis.len()], multis, shapes, done: false }
}

pub struct BinaryRefinements<'a> {
    tree: &'a DsTree,
    multis: Vec<usize>,
    shapes: Vec<Vec<Lbr>>,
    counter: Vec<usize>,
    done: bool,
}

impl BinaryRefinements<'_> {
    /// Total number of refinements in the stream (saturating).
    pub fn total(&self) -> u64 {
        self.shapes.iter().fold(1u64, |acc, s| acc.saturating_mul(s.len() as u64))
    }

    fn current(&self) -> DsTree {
        let d = self.tree;
        let mut taken: HashSet<String> = (0..d.len()).map(|v| d.id(v).to_string()).collect();
        fn go(it: &BinaryRefinements<'_>, v: usize, taken: &mut HashSet<String>) -> DsShape {
            let d = it.tree;
            let Some(label) = d.label(v) else {
                return d.subtree_shape(v, true);
            };
            let children: Vec<DsShape> = d.children(v).iter().map(|&c| go(it, c, taken)).collect();
            match it.multis.iter().position(|&m| m == v) {
                None => DsShape::named(d.id(v), label, children),
                Some(j) => {
                    let lbr = &it.shapes[j][it.counter[j]];
                    let ids = lbr_node_ids(lbr, d.id(v), taken);
                    expand_lbr(lbr, label, &ids, &children)
                }
            }
        }
        let shape = go(self, d.root(), &mut taken);
        DsTree::from_shape(&shape).expect("refinement is a valid DS-tree")
    }
}

impl Iterator for BinaryRefinements<'_> {
    type Item = DsTree;

    fn next(&mut self) -> Option<DsTree> {
        if self.done {
            return None;
        }
        let out = self.current();
        // odometer step
        let mut j = self.counter.len();
        loop {
            if j == 0 {
                self.done = true;
                break;
            }
            j -= 1;
            self.counter[j] += 1;
            if self.counter[j] < self.shapes[j].len() {
                break;
            }
            self.counter[j] = 0;
        }
        Some(out)
    }
}
