//! Independent checks of reconciliations and of relation-graph display.
//!
//! Nothing here looks at DP tables: the verifier is the oracle half of the
//! test suite.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::model::{ArcKind, DsTree, Event, Label, LgtNetwork, Reconciliation, RelationGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    ExtantLeaf,
    Speciation,
    Duplication,
    Transfer,
    SpeciationLoss,
    TransferLoss,
    NoEvent,
    /// Terminal event before the last position, or a step event at the end.
    EventPosition,
    LabelCompatibility,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::ExtantLeaf => "extant leaf",
            Rule::Speciation => "speciation",
            Rule::Duplication => "duplication",
            Rule::Transfer => "transfer",
            Rule::SpeciationLoss => "speciation loss",
            Rule::TransferLoss => "transfer loss",
            Rule::NoEvent => "no event",
            Rule::EventPosition => "event position",
            Rule::LabelCompatibility => "label compatibility",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A failed check at position `index` (1-based) of α(node).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub node: String,
    pub index: usize,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at ({}, {})", self.rule, self.node, self.index)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub valid: bool,
    /// Number of T and TL events.
    pub transfer_count: u64,
    /// Secondary arcs used by paths plus secondary arcs from a node to a child's
    /// first node; equals `transfer_count` on valid reconciliations.
    pub secondary_arcs_used: u64,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("DS-tree node '{0}' has {1} children; reconciliations need a binary tree")]
    NotBinary(String, usize),
    #[error("no path for DS-tree node '{0}'")]
    MissingNode(String),
    #[error("path given for '{0}', which is not a DS-tree node")]
    ExtraNode(String),
    #[error("unknown network node '{1}' in the path of '{0}'")]
    UnknownNetworkNode(String, String),
    #[error("path of '{node}' breaks at position {index}: no arc {from} -> {to}")]
    NotAPath { node: String, index: usize, from: String, to: String },
}

/// Checks `alpha` against every case of the reconciliation definition plus
/// label compatibility at internal nodes.
pub fn verify_reconciliation(d: &DsTree, net: &LgtNetwork, alpha: &Reconciliation) -> Result<Report, VerifyError> {
    for v in 0..d.len() {
        let k = d.children(v).len();
        if k != 0 && k != 2 {
            return Err(VerifyError::NotBinary(d.id(v).into(), k));
        }
        if alpha.path(d.id(v)).is_none() {
            return Err(VerifyError::MissingNode(d.id(v).into()));
        }
    }
    if let Some(extra) = alpha.alpha().keys().find(|u| d.index_of(u).is_none()) {
        return Err(VerifyError::ExtraNode(extra.clone()));
    }
    // network indices of every path
    let mut paths: Vec<Vec<usize>> = Vec::with_capacity(d.len());
    for v in 0..d.len() {
        let u = d.id(v);
        let path = alpha
            .path(u)
            .unwrap()
            .iter()
            .map(|x| net.index_of(x).ok_or_else(|| VerifyError::UnknownNetworkNode(u.into(), x.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, w) in path.windows(2).enumerate() {
            if net.arc_kind(w[0], w[1]).is_none() {
                return Err(VerifyError::NotAPath {
                    node: u.into(),
                    index: i + 1,
                    from: net.id(w[0]).into(),
                    to: net.id(w[1]).into(),
                });
            }
        }
        paths.push(path);
    }

    let mut violations = Vec::new();
    let mut arcs_used = 0u64;
    for v in 0..d.len() {
        let u = d.id(v);
        let path = &paths[v];
        let events = alpha.events_of(u).unwrap();
        let mut bad = |index: usize, rule: Rule| violations.push(Violation { node: u.into(), index, rule });
        let last = path.len() - 1;
        for i in 0..last {
            let (x, y) = (path[i], path[i + 1]);
            let kind = net.arc_kind(x, y).unwrap();
            if kind == ArcKind::Secondary {
                arcs_used += 1;
            }
            let principal_out = net.principal_children(x).len();
            let ok = match events[i] {
                Event::SpecLoss => kind == ArcKind::Principal && principal_out == 2,
                Event::TransferLoss => kind == ArcKind::Secondary,
                Event::NoEvent => kind == ArcKind::Principal && principal_out == 1,
                _ => {
                    bad(i + 1, Rule::EventPosition);
                    continue;
                }
            };
            if !ok {
                bad(i + 1, step_rule(events[i]));
            }
        }
        let x = path[last];
        let e = events[last];
        let at = last + 1;
        match d.label(v) {
            None => {
                if e != Event::Extant || net.species(x) != d.species(v) {
                    bad(at, Rule::ExtantLeaf);
                }
            }
            Some(label) => {
                let ch = d.children(v);
                let (a, b) = (paths[ch[0]][0], paths[ch[1]][0]);
                for c in [a, b] {
                    if net.arc_kind(x, c) == Some(ArcKind::Secondary) {
                        arcs_used += 1;
                    }
                }
                let ok = match e {
                    Event::Spec => {
                        let pc = net.principal_children(x);
                        pc.len() == 2 && ((a, b) == (pc[0], pc[1]) || (a, b) == (pc[1], pc[0]))
                    }
                    Event::Dup => a == x && b == x,
                    Event::Transfer => {
                        let sec = |p, q| p == x && net.arc_kind(x, q) == Some(ArcKind::Secondary);
                        sec(a, b) || sec(b, a)
                    }
                    Event::Extant => {
                        bad(at, Rule::ExtantLeaf);
                        continue;
                    }
                    _ => {
                        bad(at, Rule::EventPosition);
                        continue;
                    }
                };
                if !ok {
                    bad(at, terminal_rule(e));
                }
                let compatible = match label {
                    Label::Spec => matches!(e, Event::Spec | Event::Transfer),
                    Label::Dup => matches!(e, Event::Dup | Event::Transfer),
                };
                if !compatible {
                    bad(at, Rule::LabelCompatibility);
                }
            }
        }
    }
    Ok(Report {
        valid: violations.is_empty(),
        transfer_count: alpha.transfer_count(),
        secondary_arcs_used: arcs_used,
        violations,
    })
}

fn step_rule(e: Event) -> Rule {
    match e {
        Event::SpecLoss => Rule::SpeciationLoss,
        Event::TransferLoss => Rule::TransferLoss,
        _ => Rule::NoEvent,
    }
}

fn terminal_rule(e: Event) -> Rule {
    match e {
        Event::Spec => Rule::Speciation,
        Event::Dup => Rule::Duplication,
        _ => Rule::Transfer,
    }
}

/// Whether the reconciled tree displays `r`: transfers may each be read as
/// a speciation or a duplication, uniformly for all gene pairs they separate.
pub fn check_displays(d: &DsTree, alpha: &Reconciliation, r: &RelationGraph) -> bool {
    if d.gene_species() != *r.genes() {
        return false;
    }
    let leaves = d.leaves();
    // For transfer nodes, the orthology value forced by the first pair seen.
    let mut forced: BTreeMap<usize, bool> = BTreeMap::new();
    for (i, &x) in leaves.iter().enumerate() {
        for &y in &leaves[i + 1..] {
            let u = d.lca(x, y);
            let edge = r.has_edge(d.id(x), d.id(y));
            let e = alpha.events_of(d.id(u)).and_then(|ev| ev.last().copied());
            let ok = match e {
                Some(Event::Spec) => edge,
                Some(Event::Dup) => !edge,
                Some(Event::Transfer) => *forced.entry(u).or_insert(edge) == edge,
                _ => false,
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::{parse_dstree, parse_species_tree};
    use crate::reconcile::extract_witness;
    use crate::relations::relation_graph_of;

    fn setup() -> (DsTree, LgtNetwork, Reconciliation) {
        let net = parse_species_tree("((A,B),C);").unwrap();
        let d = parse_dstree("((x@A,y@B)S,z@C)D;").unwrap();
        let w = extract_witness(&d, &net).unwrap();
        (w.tree, net, w.reconciliation)
    }

    fn edit(r: &Reconciliation, u: &str, f: impl FnOnce(&mut Vec<String>, &mut Vec<Event>)) -> Reconciliation {
        let (mut a, mut e) = r.clone().into_parts();
        f(a.get_mut(u).unwrap(), e.get_mut(u).unwrap());
        Reconciliation::new(a, e).unwrap()
    }

    #[test]
    fn witness_is_valid() {
        let (d, net, r) = setup();
        let rep = verify_reconciliation(&d, &net, &r).unwrap();
        assert!(rep.valid, "{:?}", rep.violations);
        assert_eq!(rep.transfer_count, 0);
        assert_eq!(rep.secondary_arcs_used, 0);
    }

    #[test]
    fn wrong_species_breaks_the_extant_rule() {
        let (d, net, r) = setup();
        let bad = edit(&r, "x", |a, _| *a.last_mut().unwrap() = "B".into());
        let rep = match verify_reconciliation(&d, &net, &bad) {
            Ok(rep) => rep,
            Err(VerifyError::NotAPath { .. }) => return,
            Err(e) => panic!("{e}"),
        };
        assert!(rep.violations.iter().any(|v| v.rule == Rule::ExtantLeaf && v.node == "x"));
    }

    #[test]
    fn spec_relabeled_dup_breaks_label_compatibility() {
        let (d, net, r) = setup();
        let spec = d.internal_nodes().into_iter().find(|&v| d.label(v) == Some(Label::Spec)).unwrap();
        let id = d.id(spec).to_string();
        let bad = edit(&r, &id, |_, e| *e.last_mut().unwrap() = Event::Dup);
        let rep = verify_reconciliation(&d, &net, &bad).unwrap();
        assert!(rep.violations.iter().any(|v| v.rule == Rule::LabelCompatibility && v.node == id));
    }

    #[test]
    fn display() {
        let (d, _, r) = setup();
        let rel = relation_graph_of(&d);
        assert!(check_displays(&d, &r, &rel));
        let flipped = RelationGraph::new(rel.genes().clone(), vec![("x".to_string(), "z".to_string())]).unwrap();
        assert!(!check_displays(&d, &r, &flipped));
        let one = parse_dstree("g@A;").unwrap();
        let alpha = Reconciliation::new(
            [("g".to_string(), vec!["A".to_string()])].into(),
            [("g".to_string(), vec![Event::Extant])].into(),
        )
        .unwrap();
        assert!(check_displays(&one, &alpha, &relation_graph_of(&one)));
    }
}
