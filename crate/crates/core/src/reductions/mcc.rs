//! Multicolored clique instances and their gadget encoding as incomparable
//! assignment.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::act::ActInstance;
use super::tree::RootedTree;
use super::{invalid, ReductionError};

/// A graph whose vertices are partitioned into color classes V_1 … V_k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MccInstance {
    pub classes: Vec<Vec<String>>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
}

impl MccInstance {
    pub fn validate(&self) -> Result<(), ReductionError> {
        if self.classes.is_empty() {
            return Err(invalid("at least one color class is required"));
        }
        let mut seen = BTreeSet::new();
        for (i, class) in self.classes.iter().enumerate() {
            if class.is_empty() {
                return Err(invalid(format!("color class {} is empty", i + 1)));
            }
            for v in class {
                if !seen.insert(v.as_str()) {
                    return Err(invalid(format!("vertex '{v}' is in two classes")));
                }
            }
        }
        for (a, b) in &self.edges {
            if !seen.contains(a.as_str()) || !seen.contains(b.as_str()) {
                return Err(invalid(format!("edge {a}-{b} names an unknown vertex")));
            }
            if a == b {
                return Err(invalid(format!("self-loop at '{a}'")));
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    pub fn class_of(&self) -> BTreeMap<&str, usize> {
        self.classes.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |v| (v.as_str(), i))).collect()
    }

    fn adjacency(&self) -> BTreeSet<(&str, &str)> {
        self.edges.iter().flat_map(|(a, b)| [(a.as_str(), b.as_str()), (b.as_str(), a.as_str())]).collect()
    }

    pub fn from_json(text: &str) -> Result<Self, ReductionError> {
        let inst: MccInstance = serde_json::from_str(text).map_err(|e| ReductionError::Json(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

/// One vertex per class, pairwise adjacent, by exhaustive search.
pub fn find_multicolored_clique(h: &MccInstance) -> Option<Vec<String>> {
    fn go<'a>(h: &'a MccInstance, adj: &BTreeSet<(&str, &str)>, picked: &mut Vec<&'a str>) -> bool {
        let i = picked.len();
        if i == h.k() {
            return true;
        }
        for v in &h.classes[i] {
            if picked.iter().all(|&u| adj.contains(&(u, v.as_str()))) {
                picked.push(v);
                if go(h, adj, picked) {
                    return true;
                }
                picked.pop();
            }
        }
        false
    }
    let adj = h.adjacency();
    let mut picked = Vec::new();
    go(h, &adj, &mut picked).then(|| picked.into_iter().map(String::from).collect())
}

/// The gadget forest under a fresh root: Start, Choose_v and Cover_v for
/// every vertex, and one `count_i_out` leaf per class. Elements are `s`,
/// `class_i`, every vertex v, `count_v` and `v_to_j`; each has weight 0 on
/// its `_in` node and weight 1 on the nodes it may be pushed to.
///
/// A multicolored clique gives an assignment of weight k² + 2k.
pub fn mcc_to_act(h: &MccInstance) -> Result<ActInstance, ReductionError> {
    h.validate()?;
    let class = h.class_of();
    let adj = h.adjacency();
    let k = h.k();
    let mut t = RootedTree::with_root("root");
    let s_in = t.add_child(0, "s_in")?;
    for i in 1..=k {
        t.add_child(s_in, format!("class_{i}_in"))?;
    }
    for (i, vs) in h.classes.iter().enumerate() {
        for v in vs {
            let v_in = t.add_child(0, format!("{v}_in"))?;
            t.add_child(v_in, format!("class_{}_out_{v}", i + 1))?;
            for (u, &j) in &class {
                if j != i && adj.contains(&(*u, v.as_str())) {
                    t.add_child(v_in, format!("{u}_to_{}_out_{v}", i + 1))?;
                }
            }
        }
    }
    for (i, vs) in h.classes.iter().enumerate() {
        for v in vs {
            let v_out = t.add_child(0, format!("{v}_out"))?;
            t.add_child(v_out, format!("count_{v}_in"))?;
            for j in (1..=k).filter(|&j| j != i + 1) {
                t.add_child(v_out, format!("{v}_to_{j}_in"))?;
            }
        }
    }
    for i in 1..=k {
        t.add_child(0, format!("count_{i}_out"))?;
    }

    let mut elements = vec!["s".to_string()];
    elements.extend((1..=k).map(|i| format!("class_{i}")));
    for vs in &h.classes {
        elements.extend(vs.iter().cloned());
    }
    for vs in &h.classes {
        for v in vs {
            elements.push(format!("count_{v}"));
        }
    }
    for (i, vs) in h.classes.iter().enumerate() {
        for v in vs {
            elements.extend((1..=k).filter(|&j| j != i + 1).map(|j| format!("{v}_to_{j}")));
        }
    }
    let mut inst = ActInstance::new(t, elements)?;
    let node = |inst: &ActInstance, id: String| inst.tree.index_of(&id).expect("gadget node exists");
    let elem = |inst: &ActInstance, id: &str| inst.element_index(id).expect("element exists");
    for x in 0..inst.elements.len() {
        let v = node(&inst, format!("{}_in", inst.elements[x]));
        inst.set_weight(x, v, 0);
    }
    for (i, vs) in h.classes.iter().enumerate() {
        let c = elem(&inst, &format!("class_{}", i + 1));
        for v in vs {
            let out = node(&inst, format!("class_{}_out_{v}", i + 1));
            inst.set_weight(c, out, 1);
            let x = elem(&inst, v);
            let out = node(&inst, format!("{v}_out"));
            inst.set_weight(x, out, 1);
            let x = elem(&inst, &format!("count_{v}"));
            let out = node(&inst, format!("count_{}_out", i + 1));
            inst.set_weight(x, out, 1);
            for (u, &j) in &class {
                if j != i && adj.contains(&(*u, v.as_str())) {
                    // u_to_i may move into the Choose gadget of its neighbor v ∈ V_i
                    let x = elem(&inst, &format!("{u}_to_{}", i + 1));
                    let out = node(&inst, format!("{u}_to_{}_out_{v}", i + 1));
                    inst.set_weight(x, out, 1);
                }
            }
        }
    }
    Ok(inst)
}
