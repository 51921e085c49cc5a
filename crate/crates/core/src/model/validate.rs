use std::collections::HashSet;
use std::fmt;

use super::{ArcKind, LgtNetwork};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NetworkRule {
    Root,
    Degree,
    Acyclic,
    SelfLoop,
    ParallelArc,
    SecondaryArity,
    Leaf,
    BaseTree,
}

impl NetworkRule {
    pub fn name(self) -> &'static str {
        match self {
            NetworkRule::Root => "root",
            NetworkRule::Degree => "degree",
            NetworkRule::Acyclic => "acyclic",
            NetworkRule::SelfLoop => "self-loop",
            NetworkRule::ParallelArc => "parallel arc",
            NetworkRule::SecondaryArity => "secondary arity",
            NetworkRule::Leaf => "leaf",
            NetworkRule::BaseTree => "base tree",
        }
    }
}

impl fmt::Display for NetworkRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: NetworkRule,
    /// Offending node id, or `from->to` for arcs.
    pub subject: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.rule, self.subject, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: NetworkRule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

/// Checks every structural rule of a binary LGT network.
pub fn validate_network(net: &LgtNetwork) -> ValidationReport {
    let mut out = Vec::new();
    let mut push = |rule, subject: String, detail: String| out.push(Violation { rule, subject, detail });
    let n = net.len();
    let root = net.root();

    let mut seen = HashSet::new();
    for a in net.arcs() {
        let subject = format!("{}->{}", net.id(a.from), net.id(a.to));
        if a.from == a.to {
            push(NetworkRule::SelfLoop, subject.clone(), "arc starts and ends at the same node".into());
        }
        if !seen.insert((a.from, a.to)) {
            push(NetworkRule::ParallelArc, subject, "arc appears more than once".into());
        }
    }

    if net.in_degree(root) != 0 {
        push(NetworkRule::Root, net.id(root).into(), "declared root has incoming arcs".into());
    }
    for v in 0..n {
        if v != root && net.in_degree(v) == 0 {
            push(NetworkRule::Root, net.id(v).into(), "second node without incoming arcs".into());
        }
    }

    for v in 0..n {
        let (i, o) = (net.in_degree(v), net.out_degree(v));
        let ok = if v == root { o == 2 || (o == 0 && n == 1) } else { matches!((i, o), (1, 2) | (2, 1) | (1, 0)) };
        if !ok {
            push(NetworkRule::Degree, net.id(v).into(), format!("indegree {i}, outdegree {o}"));
        }
        let heads = net.in_arcs(v).filter(|a| a.kind == ArcKind::Secondary).count();
        let tails = net.out_arcs(v).filter(|a| a.kind == ArcKind::Secondary).count();
        if heads > 1 || tails > 1 {
            push(
                NetworkRule::SecondaryArity,
                net.id(v).into(),
                format!("head of {heads} and tail of {tails} secondary arcs"),
            );
        }
        match (net.out_degree(v) == 0, net.species(v)) {
            (true, None) => push(NetworkRule::Leaf, net.id(v).into(), "leaf has no species".into()),
            (false, Some(s)) => push(NetworkRule::Leaf, net.id(v).into(), format!("species '{s}' on a non-leaf")),
            _ => {}
        }
    }

    if let Some(cycle) = find_cycle(net) {
        let ids: Vec<&str> = cycle.iter().map(|&v| net.id(v)).collect();
        push(NetworkRule::Acyclic, ids[0].into(), format!("directed cycle {}", ids.join(" -> ")));
    }

    // Base tree: principal in-degree 1 everywhere but the root, all nodes
    // reached from the root, and principal sinks are real leaves.
    for v in 0..n {
        let p_in = net.in_arcs(v).filter(|a| a.kind == ArcKind::Principal).count();
        let expected = usize::from(v != root);
        if p_in != expected {
            push(NetworkRule::BaseTree, net.id(v).into(), format!("{p_in} incoming principal arcs"));
        }
        if net.out_degree(v) > 0 && net.principal_children(v).is_empty() {
            push(NetworkRule::BaseTree, net.id(v).into(), "no outgoing principal arc".into());
        }
    }
    let mut reached = vec![false; n];
    let mut stack = vec![root];
    reached[root] = true;
    while let Some(v) = stack.pop() {
        for c in net.principal_children(v) {
            if !reached[c] {
                reached[c] = true;
                stack.push(c);
            }
        }
    }
    for v in (0..n).filter(|&v| !reached[v]) {
        push(NetworkRule::BaseTree, net.id(v).into(), "not reachable from the root by principal arcs".into());
    }

    ValidationReport { violations: out }
}

/// Some directed cycle over all arcs, if one exists.
pub(crate) fn find_cycle(net: &LgtNetwork) -> Option<Vec<usize>> {
    let n = net.len();
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    let mut parent = vec![usize::MAX; n];
    for s in 0..n {
        if state[s] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(s, net.out_arcs(s).map(|a| a.to).collect())];
        state[s] = 1;
        while let Some((v, succ)) = stack.last_mut() {
            let v = *v;
            match succ.pop() {
                Some(w) if state[w] == 0 => {
                    state[w] = 1;
                    parent[w] = v;
                    let next = net.out_arcs(w).map(|a| a.to).collect();
                    stack.push((w, next));
                }
                Some(w) if state[w] == 1 => {
                    let mut back = vec![v];
                    let mut x = v;
                    while x != w {
                        x = parent[x];
                        back.push(x);
                    }
                    back.reverse();
                    back.push(w);
                    return Some(back);
                }
                Some(_) => {}
                None => {
                    state[v] = 2;
                    stack.pop();
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;

    fn net(arcs: &[(&str, &str, ArcKind)], leaves: &[(&str, &str)]) -> LgtNetwork {
        let mut nodes: Vec<String> = Vec::new();
        for (a, b, _) in arcs {
            for x in [a, b] {
                if !nodes.iter().any(|n| n == x) {
                    nodes.push(x.to_string());
                }
            }
        }
        let arcs: Vec<_> = arcs.iter().map(|(a, b, k)| (a.to_string(), b.to_string(), *k)).collect();
        let leaves: BTreeMap<_, _> = leaves.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        LgtNetwork::new(&nodes, &nodes[0].clone(), &arcs, &leaves).unwrap()
    }

    use ArcKind::{Principal as P, Secondary as S};

    #[test]
    fn minimal_species_tree_is_ok() {
        let n = net(&[("r", "A", P), ("r", "B", P)], &[("A", "A"), ("B", "B")]);
        assert!(validate_network(&n).is_ok());
    }

    #[test]
    fn outdegree_three_is_a_degree_violation() {
        let n = net(&[("r", "A", P), ("r", "B", P), ("r", "C", P)], &[("A", "A"), ("B", "B"), ("C", "C")]);
        assert!(validate_network(&n).has(NetworkRule::Degree));
    }

    #[test]
    fn secondary_back_arc_is_cyclic() {
        // r -> x -> y -> A, with y -> x secondary closing a cycle.
        let n = net(
            &[("r", "x", P), ("r", "B", P), ("x", "y", P), ("x", "C", P), ("y", "A", P), ("y", "x", S)],
            &[("A", "A"), ("B", "B"), ("C", "C")],
        );
        let report = validate_network(&n);
        assert!(report.has(NetworkRule::Acyclic), "{report:?}");
        let cyc = find_cycle(&n).unwrap();
        assert_eq!(cyc.first(), cyc.last());
        for w in cyc.windows(2) {
            assert!(n.arc_kind(w[0], w[1]).is_some());
        }
    }

    #[test]
    fn transfer_network_is_ok() {
        // tail t above A, head h above B
        let n = net(
            &[("r", "t", P), ("r", "h", P), ("t", "A", P), ("t", "h", S), ("h", "B", P)],
            &[("A", "A"), ("B", "B")],
        );
        assert!(validate_network(&n).is_ok());
    }

    #[test]
    fn principal_sink_must_be_a_leaf() {
        // x only continues through its secondary arc
        let n = net(&[("r", "x", P), ("r", "t", P), ("t", "A", P), ("t", "h", S), ("h", "x", S)], &[("A", "A")]);
        let report = validate_network(&n);
        assert!(report.has(NetworkRule::BaseTree) || report.has(NetworkRule::SecondaryArity));
    }
}
