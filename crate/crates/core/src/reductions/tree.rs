use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{invalid, ReductionError};

/// A rooted tree with string node ids, built root-first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    ids: Vec<String>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
    root: usize,
    /// Euler-tour entry and exit times, refreshed on every insertion.
    tin: Vec<usize>,
    tout: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct TreeDoc {
    pub nodes: Vec<String>,
    pub root: String,
    pub edges: Vec<(String, String)>,
}

impl RootedTree {
    pub fn with_root(id: impl Into<String>) -> Self {
        let id = id.into();
        let mut t = RootedTree {
            ids: vec![id.clone()],
            parent: vec![None],
            children: vec![Vec::new()],
            index: HashMap::from([(id, 0)]),
            root: 0,
            tin: Vec::new(),
            tout: Vec::new(),
        };
        t.reindex();
        t
    }

    pub fn add_child(&mut self, parent: usize, id: impl Into<String>) -> Result<usize, ReductionError> {
        let id = id.into();
        if self.index.contains_key(&id) {
            return Err(invalid(format!("duplicate tree node '{id}'")));
        }
        let v = self.ids.len();
        self.index.insert(id.clone(), v);
        self.ids.push(id);
        self.parent.push(Some(parent));
        self.children.push(Vec::new());
        self.children[parent].push(v);
        self.reindex();
        Ok(v)
    }

    fn reindex(&mut self) {
        let n = self.ids.len();
        self.tin = vec![0; n];
        self.tout = vec![0; n];
        let mut clock = 0;
        let mut stack = vec![(self.root, false)];
        while let Some((v, done)) = stack.pop() {
            if done {
                self.tout[v] = clock;
                continue;
            }
            self.tin[v] = clock;
            clock += 1;
            stack.push((v, true));
            stack.extend(self.children[v].iter().rev().map(|&c| (c, false)));
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    /// `a` is `b` or an ancestor of `b`.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        self.tin[a] <= self.tin[b] && self.tout[b] <= self.tout[a]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.is_ancestor(a, b) || self.is_ancestor(b, a)
    }

    pub(crate) fn to_doc(&self) -> TreeDoc {
        let edges =
            (0..self.len()).filter_map(|v| Some((self.ids[self.parent[v]?].clone(), self.ids[v].clone()))).collect();
        TreeDoc { nodes: self.ids.clone(), root: self.ids[self.root].clone(), edges }
    }

    /// Node order and child order follow the document.
    pub(crate) fn from_doc(doc: &TreeDoc) -> Result<Self, ReductionError> {
        let index: HashMap<String, usize> = doc.nodes.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        if index.len() != doc.nodes.len() {
            return Err(invalid("duplicate tree node"));
        }
        let n = doc.nodes.len();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        for (p, c) in &doc.edges {
            let (Some(&pi), Some(&ci)) = (index.get(p), index.get(c)) else {
                return Err(invalid(format!("edge {p} -> {c} names an unknown node")));
            };
            if parent[ci].replace(pi).is_some() {
                return Err(invalid(format!("tree node '{c}' has two parents")));
            }
            children[pi].push(ci);
        }
        let root = *index.get(&doc.root).ok_or_else(|| invalid(format!("unknown root '{}'", doc.root)))?;
        if parent[root].is_some() {
            return Err(invalid("the root has a parent"));
        }
        let mut seen = 0;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            seen += 1;
            stack.extend(&children[v]);
        }
        if seen != n {
            return Err(invalid("tree is not connected"));
        }
        let mut t =
            RootedTree { ids: doc.nodes.clone(), parent, children, index, root, tin: Vec::new(), tout: Vec::new() };
        t.reindex();
        Ok(t)
    }
}
