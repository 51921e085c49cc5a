//! Newick-like text for DS-trees and species trees.
//!
//! DS-tree grammar (whitespace allowed between tokens):
//!
//! ```text
//! tree    := subtree ';'
//! subtree := gene ['@' species] | '(' subtree (',' subtree)+ ')' ('S'|'D') ['#' id]
//! ```
//!
//! A leaf written without `@species` is its own species. Internal nodes
//! without `#id` receive the default pre-order ids described on
//! [`DsShape`]. Species trees use plain `'(' ... ')' [name]` nesting.

use std::collections::BTreeMap;
use std::collections::HashSet;

use super::FormatError;
use crate::model::ids::{fresh_id, newick_reserved};
use crate::model::{ArcKind, DsShape, DsTree, Label, LgtNetwork, NetworkBuilder};

struct RawNode {
    name: Option<String>,
    /// `@species` on leaves, the S/D label on DS-tree internal nodes.
    tag: Option<(String, usize)>,
    id: Option<String>,
    children: Vec<RawNode>,
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    ds_tree: bool,
}

impl<'a> Parser<'a> {
    fn error(&self, at: usize, message: impl Into<String>) -> FormatError {
        FormatError::syntax_at(self.text, at, message)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn expect(&mut self, want: char) -> Result<(), FormatError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => Err(self.error(self.pos, format!("expected '{want}', found '{c}'"))),
            None => Err(self.error(self.pos, format!("expected '{want}', found end of input"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize), FormatError> {
        self.skip_ws();
        let start = self.pos;
        let len: usize = self.text[start..].chars().take_while(|&c| !newick_reserved(c)).map(char::len_utf8).sum();
        if len == 0 {
            return Err(self.error(start, format!("expected {what}")));
        }
        self.pos += len;
        Ok((self.text[start..self.pos].to_string(), start))
    }

    fn subtree(&mut self) -> Result<RawNode, FormatError> {
        if self.peek() == Some('(') {
            self.pos += 1;
            let mut children = vec![self.subtree()?];
            while self.peek() == Some(',') {
                self.pos += 1;
                children.push(self.subtree()?);
            }
            self.expect(')')?;
            let mut node = RawNode { name: None, tag: None, id: None, children };
            if self.ds_tree {
                node.tag = Some(self.ident("an S or D label")?);
                if self.peek() == Some('#') {
                    self.pos += 1;
                    node.id = Some(self.ident("a node id after '#'")?.0);
                }
            } else if matches!(self.peek(), Some(c) if !newick_reserved(c)) {
                node.name = Some(self.ident("a node name")?.0);
            }
            Ok(node)
        } else {
            let name = self.ident("a leaf name or '('")?.0;
            let mut node = RawNode { name: Some(name), tag: None, id: None, children: Vec::new() };
            if self.ds_tree && self.peek() == Some('@') {
                self.pos += 1;
                node.tag = Some(self.ident("a species after '@'")?);
            }
            Ok(node)
        }
    }

    fn tree(mut self) -> Result<RawNode, FormatError> {
        let root = self.subtree()?;
        self.expect(';')?;
        if let Some(c) = self.peek() {
            return Err(self.error(self.pos, format!("unexpected '{c}' after ';'")));
        }
        Ok(root)
    }
}

fn to_shape(raw: RawNode) -> Result<DsShape, FormatError> {
    if raw.children.is_empty() {
        let gene = raw.name.unwrap();
        let species = raw.tag.map_or_else(|| gene.clone(), |t| t.0);
        return Ok(DsShape::Leaf { gene, species });
    }
    let (tag, _) = raw.tag.unwrap();
    let label = match tag.as_str() {
        "S" => Label::Spec,
        "D" => Label::Dup,
        other => return Err(FormatError::Semantic(format!("unknown label '{other}' on internal node"))),
    };
    let children = raw.children.into_iter().map(to_shape).collect::<Result<_, _>>()?;
    Ok(DsShape::Node { id: raw.id, label, children })
}

pub fn parse_dstree(text: &str) -> Result<DsTree, FormatError> {
    let raw = Parser { text, pos: 0, ds_tree: true }.tree()?;
    let shape = to_shape(raw)?;
    DsTree::from_shape(&shape).map_err(|e| FormatError::Semantic(e.to_string()))
}

pub fn write_dstree(tree: &DsTree) -> String {
    fn go(t: &DsTree, v: usize, out: &mut String) {
        match t.label(v) {
            None => {
                out.push_str(t.id(v));
                let sp = t.species(v).unwrap();
                if sp != t.id(v) {
                    out.push('@');
                    out.push_str(sp);
                }
            }
            Some(label) => {
                out.push('(');
                for (k, &c) in t.children(v).iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    go(t, c, out);
                }
                out.push(')');
                out.push(label.symbol());
                if t.id(v) != format!("u{v}") {
                    out.push('#');
                    out.push_str(t.id(v));
                }
            }
        }
    }
    let mut out = String::new();
    go(tree, tree.root(), &mut out);
    out.push(';');
    out
}

/// Parses a species tree; leaves are species ids and double as node ids.
///
/// Unnamed internal nodes get `n{k}` (pre-order position `k`, primed on clashes).
pub fn parse_species_tree(text: &str) -> Result<LgtNetwork, FormatError> {
    let raw = Parser { text, pos: 0, ds_tree: false }.tree()?;
    let mut taken = HashSet::new();
    fn names(r: &RawNode, taken: &mut HashSet<String>) -> Result<(), FormatError> {
        if let Some(n) = &r.name {
            if !taken.insert(n.clone()) {
                return Err(FormatError::Semantic(format!("duplicate node name '{n}'")));
            }
        }
        if r.children.len() == 1 {
            return Err(FormatError::Semantic("species tree node with a single child".into()));
        }
        r.children.iter().try_for_each(|c| names(c, taken))
    }
    names(&raw, &mut taken)?;
    let mut b = NetworkBuilder::new();
    let mut counter = 0usize;
    fn build(r: &RawNode, b: &mut NetworkBuilder, taken: &mut HashSet<String>, counter: &mut usize) -> usize {
        let k = *counter;
        *counter += 1;
        let id = match &r.name {
            Some(n) => n.clone(),
            None => {
                let id = fresh_id(&format!("n{k}"), taken);
                taken.insert(id.clone());
                id
            }
        };
        let v = b.add_node(&id);
        if r.children.is_empty() {
            b.set_species(v, id);
        }
        for c in &r.children {
            let w = build(c, b, taken, counter);
            b.add_arc(v, w, ArcKind::Principal);
        }
        v
    }
    let root = build(&raw, &mut b, &mut taken, &mut counter);
    b.set_root(root);
    b.build().map_err(|e| FormatError::Semantic(e.to_string()))
}

/// Writes a network without secondary arcs as a species tree.
pub fn write_species_tree(net: &LgtNetwork) -> Result<String, FormatError> {
    if net.secondary_arc_count() > 0 {
        return Err(FormatError::Semantic("network has secondary arcs".into()));
    }
    let mut order = BTreeMap::new();
    fn number(net: &LgtNetwork, v: usize, order: &mut BTreeMap<usize, usize>) {
        let k = order.len();
        order.insert(v, k);
        for c in net.principal_children(v) {
            number(net, c, order);
        }
    }
    number(net, net.root(), &mut order);
    fn go(net: &LgtNetwork, v: usize, order: &BTreeMap<usize, usize>, out: &mut String) {
        let ch = net.principal_children(v);
        if ch.is_empty() {
            out.push_str(net.species(v).unwrap_or(net.id(v)));
            return;
        }
        out.push('(');
        for (k, &c) in ch.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            go(net, c, order, out);
        }
        out.push(')');
        if net.id(v) != format!("n{}", order[&v]) {
            out.push_str(net.id(v));
        }
    }
    let mut out = String::new();
    go(net, net.root(), &order, &mut out);
    out.push(';');
    Ok(out)
}
