//! Local binary refinements: every rooted binary topology over `k` handles.

/// Node of an LBR arena; handles are indices into the multifurcation's child list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LbrNode {
    Handle(usize),
    Join(usize, usize),
}

/// A rooted binary tree over handles `0..k`, stored children-before-parents.
///
/// Within every `Join` the left operand holds the smaller handle, so the
/// topology is in canonical child order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lbr {
    nodes: Vec<LbrNode>,
}

#[derive(Clone)]
enum Nested {
    Leaf(usize),
    Join(Box<Nested>, Box<Nested>),
}

impl Nested {
    /// All ways to hang a new leaf `i` on an edge of `self`, including above the root.
    fn insertions(&self, i: usize) -> Vec<Nested> {
        let mut out = vec![Nested::Join(Box::new(self.clone()), Box::new(Nested::Leaf(i)))];
        if let Nested::Join(a, b) = self {
            for a2 in a.insertions(i) {
                out.push(Nested::Join(Box::new(a2), b.clone()));
            }
            for b2 in b.insertions(i) {
                out.push(Nested::Join(a.clone(), Box::new(b2)));
            }
        }
        out
    }

    fn flatten(&self, nodes: &mut Vec<LbrNode>) -> usize {
        let node = match self {
            Nested::Leaf(h) => LbrNode::Handle(*h),
            Nested::Join(a, b) => {
                let l = a.flatten(nodes);
                let r = b.flatten(nodes);
                LbrNode::Join(l, r)
            }
        };
        nodes.push(node);
        nodes.len() - 1
    }
}

impl Lbr {
    pub fn nodes(&self) -> &[LbrNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn handle_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, LbrNode::Handle(_))).count()
    }

    /// Parenthesized form over handle numbers, e.g. `((0,1),2)`.
    pub fn key(&self) -> String {
        fn go(t: &Lbr, v: usize, out: &mut String) {
            match t.nodes[v] {
                LbrNode::Handle(h) => out.push_str(&h.to_string()),
                LbrNode::Join(a, b) => {
                    out.push('(');
                    go(t, a, out);
                    out.push(',');
                    go(t, b, out);
                    out.push(')');
                }
            }
        }
        let mut s = String::new();
        go(self, self.root(), &mut s);
        s
    }
}

/// All (2k−3)!! rooted binary topologies over `k ≥ 2` handles, by recursive
/// insertion of handles `2, 3, …` into the cherry `(0,1)`.
pub fn enumerate_lbrs(k: usize) -> Vec<Lbr> {
    assert!(k >= 2, "a multifurcation has at least two children");
    let mut trees = vec![Nested::Join(Box::new(Nested::Leaf(0)), Box::new(Nested::Leaf(1)))];
    for i in 2..k {
        trees = trees.iter().flat_map(|t| t.insertions(i)).collect();
    }
    trees
        .iter()
        .map(|t| {
            let mut nodes = Vec::with_capacity(2 * k - 1);
            t.flatten(&mut nodes);
            Lbr { nodes }
        })
        .collect()
}

/// (2k−3)!!, the number of rooted binary topologies on `k` labeled leaves.
pub fn lbr_count(k: usize) -> u64 {
    (2..k as u64).map(|i| 2 * i - 1).product()
}
