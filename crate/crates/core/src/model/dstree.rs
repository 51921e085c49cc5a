use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use super::ids::{check_newick_id, fresh_id};
use super::ModelError;

/// Event label on an internal DS-tree node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Spec,
    Dup,
}

impl Label {
    pub fn symbol(self) -> char {
        match self {
            Label::Spec => 'S',
            Label::Dup => 'D',
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DsKind {
    /// A gene; the node id is the gene id.
    Leaf {
        species: String,
    },
    Internal(Label),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DsNode {
    id: String,
    parent: Option<usize>,
    children: Vec<usize>,
    kind: DsKind,
}

impl DsNode {
    pub fn id(&self) -> &str {
        &self.id
    }
    pub fn parent(&self) -> Option<usize> {
        self.parent
    }
    pub fn children(&self) -> &[usize] {
        &self.children
    }
    pub fn kind(&self) -> &DsKind {
        &self.kind
    }
}

/// Nested description of a DS-tree, used to build [`DsTree`] values.
///
/// Internal nodes without an explicit id get `u{k}`, where `k` is the node's
/// pre-order position (primed if that name is already taken).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DsShape {
    Leaf { gene: String, species: String },
    Node { id: Option<String>, label: Label, children: Vec<DsShape> },
}

impl DsShape {
    pub fn leaf(gene: impl Into<String>, species: impl Into<String>) -> Self {
        DsShape::Leaf { gene: gene.into(), species: species.into() }
    }

    pub fn node(label: Label, children: Vec<DsShape>) -> Self {
        DsShape::Node { id: None, label, children }
    }

    pub fn named(id: impl Into<String>, label: Label, children: Vec<DsShape>) -> Self {
        DsShape::Node { id: Some(id.into()), label, children }
    }

    fn collect_names(&self, taken: &mut HashSet<String>) -> Result<(), ModelError> {
        match self {
            DsShape::Leaf { gene, species } => {
                check_newick_id(gene)?;
                check_newick_id(species)?;
                if !taken.insert(gene.clone()) {
                    return Err(ModelError::DuplicateId(gene.clone()));
                }
            }
            DsShape::Node { id, children, .. } => {
                if let Some(id) = id {
                    check_newick_id(id)?;
                    if !taken.insert(id.clone()) {
                        return Err(ModelError::DuplicateId(id.clone()));
                    }
                }
                for c in children {
                    c.collect_names(taken)?;
                }
            }
        }
        Ok(())
    }
}

/// Rooted gene tree with Spec/Dup labels on internal nodes.
///
/// Nodes are stored in pre-order, so the root is index 0 and every child has a
/// larger index than its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DsTree {
    nodes: Vec<DsNode>,
    index: HashMap<String, usize>,
}

impl DsTree {
    pub fn from_shape(shape: &DsShape) -> Result<DsTree, ModelError> {
        let mut taken = HashSet::new();
        shape.collect_names(&mut taken)?;
        let mut nodes = Vec::new();
        Self::push(shape, None, &mut nodes, &mut taken)?;
        let index = nodes.iter().enumerate().map(|(i, n)| (n.id.clone(), i)).collect();
        Ok(DsTree { nodes, index })
    }

    fn push(
        shape: &DsShape,
        parent: Option<usize>,
        nodes: &mut Vec<DsNode>,
        taken: &mut HashSet<String>,
    ) -> Result<usize, ModelError> {
        let idx = nodes.len();
        match shape {
            DsShape::Leaf { gene, species } => nodes.push(DsNode {
                id: gene.clone(),
                parent,
                children: Vec::new(),
                kind: DsKind::Leaf { species: species.clone() },
            }),
            DsShape::Node { id, label, children } => {
                let id = match id {
                    Some(id) => id.clone(),
                    None => {
                        let id = fresh_id(&format!("u{idx}"), taken);
                        taken.insert(id.clone());
                        id
                    }
                };
                if children.len() < 2 {
                    return Err(ModelError::TooFewChildren(id));
                }
                nodes.push(DsNode { id, parent, children: Vec::new(), kind: DsKind::Internal(*label) });
                for c in children {
                    let ci = Self::push(c, Some(idx), nodes, taken)?;
                    nodes[idx].children.push(ci);
                }
            }
        }
        Ok(idx)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn node(&self, i: usize) -> &DsNode {
        &self.nodes[i]
    }

    pub fn id(&self, i: usize) -> &str {
        &self.nodes[i].id
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.nodes[i].parent
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.nodes[i].children
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        matches!(self.nodes[i].kind, DsKind::Leaf { .. })
    }

    pub fn label(&self, i: usize) -> Option<Label> {
        match self.nodes[i].kind {
            DsKind::Internal(l) => Some(l),
            DsKind::Leaf { .. } => None,
        }
    }

    /// Species σ(g) of a leaf.
    pub fn species(&self, i: usize) -> Option<&str> {
        match &self.nodes[i].kind {
            DsKind::Leaf { species } => Some(species),
            DsKind::Internal(_) => None,
        }
    }

    /// Leaf indices in pre-order.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_leaf(i)).collect()
    }

    pub fn internal_nodes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.is_leaf(i)).collect()
    }

    /// Gene id → species id.
    pub fn gene_species(&self) -> BTreeMap<String, String> {
        self.leaves().into_iter().map(|i| (self.id(i).to_string(), self.species(i).unwrap().to_string())).collect()
    }

    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root(), false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                out.push(v);
            } else {
                stack.push((v, true));
                for &c in self.children(v).iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    pub fn depth(&self, mut i: usize) -> usize {
        let mut d = 0;
        while let Some(p) = self.parent(i) {
            d += 1;
            i = p;
        }
        d
    }

    /// Number of arcs on a longest root-to-leaf path.
    pub fn height(&self) -> usize {
        let mut h = vec![0usize; self.len()];
        for v in (0..self.len()).rev() {
            h[v] = self.children(v).iter().map(|&c| h[c] + 1).max().unwrap_or(0);
        }
        h[self.root()]
    }

    pub fn lca(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let (mut da, mut db) = (self.depth(a), self.depth(b));
        while da > db {
            a = self.parent(a).unwrap();
            da -= 1;
        }
        while db > da {
            b = self.parent(b).unwrap();
            db -= 1;
        }
        while a != b {
            a = self.parent(a).unwrap();
            b = self.parent(b).unwrap();
        }
        a
    }

    pub fn is_binary(&self) -> bool {
        (0..self.len()).all(|i| self.is_leaf(i) || self.children(i).len() == 2)
    }

    /// No arc joins two internal nodes with equal labels.
    pub fn is_least_resolved(&self) -> bool {
        (0..self.len()).all(|v| match (self.parent(v), self.label(v)) {
            (Some(p), Some(l)) => self.label(p) != Some(l),
            _ => true,
        })
    }

    pub fn max_degree(&self) -> usize {
        (0..self.len()).map(|i| self.children(i).len()).max().unwrap_or(0)
    }

    /// Smallest gene id below each node.
    pub fn min_leaf_ids(&self) -> Vec<&str> {
        let mut m: Vec<&str> = vec![""; self.len()];
        for v in (0..self.len()).rev() {
            m[v] = if self.is_leaf(v) { self.id(v) } else { self.children(v).iter().map(|&c| m[c]).min().unwrap() };
        }
        m
    }

    /// Sorted gene ids below each node.
    pub fn leaf_sets(&self) -> Vec<Vec<&str>> {
        let mut sets: Vec<Vec<&str>> = vec![Vec::new(); self.len()];
        for v in (0..self.len()).rev() {
            if self.is_leaf(v) {
                sets[v] = vec![self.id(v)];
            } else {
                let mut s: Vec<&str> = self.children(v).iter().flat_map(|&c| sets[c].iter().copied()).collect();
                s.sort_unstable();
                sets[v] = s;
            }
        }
        sets
    }

    pub fn to_shape(&self) -> DsShape {
        self.subtree_shape(self.root(), true)
    }

    /// Shape of the subtree at `v`; internal ids are kept when `keep_ids` is set.
    pub fn subtree_shape(&self, v: usize, keep_ids: bool) -> DsShape {
        match &self.nodes[v].kind {
            DsKind::Leaf { species } => DsShape::leaf(self.id(v), species.clone()),
            DsKind::Internal(label) => DsShape::Node {
                id: keep_ids.then(|| self.id(v).to_string()),
                label: *label,
                children: self.children(v).iter().map(|&c| self.subtree_shape(c, keep_ids)).collect(),
            },
        }
    }

    /// Same tree with children ordered by smallest gene id below them; ids kept.
    pub fn canonicalized(&self) -> DsTree {
        fn go(t: &DsTree, v: usize, min: &[&str]) -> DsShape {
            match t.label(v) {
                None => t.subtree_shape(v, true),
                Some(label) => {
                    let mut ch = t.children(v).to_vec();
                    ch.sort_by_key(|&c| min[c]);
                    DsShape::named(t.id(v), label, ch.into_iter().map(|c| go(t, c, min)).collect())
                }
            }
        }
        let min = self.min_leaf_ids();
        DsTree::from_shape(&go(self, self.root(), &min)).expect("reordering preserves validity")
    }

    /// Canonical text ignoring internal ids and child order; equal keys mean
    /// label-preserving, leaf-respecting isomorphism.
    pub fn shape_key(&self) -> String {
        fn go(t: &DsTree, v: usize) -> String {
            match &t.nodes[v].kind {
                DsKind::Leaf { species } => format!("{}@{}", t.id(v), species),
                DsKind::Internal(label) => {
                    let mut parts: Vec<String> = t.children(v).iter().map(|&c| go(t, c)).collect();
                    parts.sort();
                    format!("({}){}", parts.join(","), label)
                }
            }
        }
        go(self, self.root())
    }

    /// True iff `coarse` is obtained from `self` by a sequence of l-contractions.
    pub fn is_refinement_of(&self, coarse: &DsTree) -> bool {
        if self.gene_species() != coarse.gene_species() {
            return false;
        }
        let fine_sets = self.leaf_sets();
        let coarse_sets = coarse.leaf_sets();
        let coarse_by_set: HashMap<&[&str], usize> =
            coarse.internal_nodes().into_iter().map(|v| (coarse_sets[v].as_slice(), v)).collect();
        let fine_by_set: HashMap<&[&str], usize> =
            self.internal_nodes().into_iter().map(|v| (fine_sets[v].as_slice(), v)).collect();
        for (set, &cv) in &coarse_by_set {
            match fine_by_set.get(set) {
                Some(&fv) if self.label(fv) == coarse.label(cv) => {}
                _ => return false,
            }
        }
        for v in self.internal_nodes() {
            if coarse_by_set.contains_key(fine_sets[v].as_slice()) {
                continue;
            }
            // The nearest ancestor whose cluster survives absorbs v; labels must agree.
            let mut a = self.parent(v).expect("the root cluster is shared");
            while !coarse_by_set.contains_key(fine_sets[a].as_slice()) {
                a = self.parent(a).expect("the root cluster is shared");
            }
            if self.label(a) != self.label(v) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::*;

    fn sample() -> DsTree {
        DsTree::from_shape(&DsShape::node(
            Spec,
            vec![
                DsShape::node(Spec, vec![DsShape::leaf("a1", "A"), DsShape::leaf("b1", "B")]),
                DsShape::node(Dup, vec![DsShape::leaf("a2", "A"), DsShape::leaf("b2", "B")]),
            ],
        ))
        .unwrap()
    }

    #[test]
    fn default_ids_follow_preorder() {
        let t = sample();
        assert_eq!(t.id(0), "u0");
        assert_eq!(t.id(1), "u1");
        assert_eq!(t.id(4), "u4");
        assert_eq!(t.height(), 2);
        assert!(t.is_binary());
        assert!(!t.is_least_resolved());
    }

    #[test]
    fn default_ids_avoid_gene_names() {
        let t =
            DsTree::from_shape(&DsShape::node(Spec, vec![DsShape::leaf("u0", "A"), DsShape::leaf("b", "B")])).unwrap();
        assert_eq!(t.id(0), "u0'");
    }

    #[test]
    fn rejects_bad_shapes() {
        let unary = DsShape::node(Spec, vec![DsShape::leaf("a", "A")]);
        assert!(matches!(DsTree::from_shape(&unary), Err(ModelError::TooFewChildren(_))));
        let dup = DsShape::node(Spec, vec![DsShape::leaf("a", "A"), DsShape::leaf("a", "B")]);
        assert!(matches!(DsTree::from_shape(&dup), Err(ModelError::DuplicateId(_))));
        let bad = DsShape::node(Spec, vec![DsShape::leaf("a,b", "A"), DsShape::leaf("c", "B")]);
        assert!(matches!(DsTree::from_shape(&bad), Err(ModelError::ReservedChar(_))));
    }

    #[test]
    fn lca_and_sets() {
        let t = sample();
        let a1 = t.index_of("a1").unwrap();
        let b1 = t.index_of("b1").unwrap();
        let b2 = t.index_of("b2").unwrap();
        assert_eq!(t.lca(a1, b1), 1);
        assert_eq!(t.lca(a1, b2), 0);
        assert_eq!(t.leaf_sets()[0], vec!["a1", "a2", "b1", "b2"]);
    }

    #[test]
    fn refinement_check() {
        let fine = sample();
        let coarse = DsTree::from_shape(&DsShape::node(
            Spec,
            vec![
                DsShape::leaf("a1", "A"),
                DsShape::leaf("b1", "B"),
                DsShape::node(Dup, vec![DsShape::leaf("a2", "A"), DsShape::leaf("b2", "B")]),
            ],
        ))
        .unwrap();
        assert!(fine.is_refinement_of(&coarse));
        assert!(!coarse.is_refinement_of(&fine));
        assert!(fine.is_refinement_of(&fine));
    }
}
