use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{parse_dstree, write_dstree, FormatError};
use crate::model::{ArcKind, DsTree, Event, LgtNetwork, Reconciliation, RelationGraph};

pub(crate) fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|e| {
        use serde_json::error::Category;
        match e.classify() {
            Category::Syntax | Category::Eof | Category::Io => {
                FormatError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
            }
            Category::Data => FormatError::Semantic(e.to_string()),
        }
    })
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn semantic(e: impl std::fmt::Display) -> FormatError {
    FormatError::Semantic(e.to_string())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationDoc {
    genes: BTreeMap<String, String>,
    edges: Vec<(String, String)>,
}

pub fn parse_relation_graph(text: &str) -> Result<RelationGraph, FormatError> {
    let doc: RelationDoc = from_json(text)?;
    let mut seen = BTreeSet::new();
    for (a, b) in &doc.edges {
        let key = if a < b { (a, b) } else { (b, a) };
        if !seen.insert(key) {
            return Err(FormatError::Semantic(format!("duplicate edge {a}-{b}")));
        }
    }
    RelationGraph::new(doc.genes, doc.edges).map_err(semantic)
}

pub fn write_relation_graph(r: &RelationGraph) -> String {
    to_json(&RelationDoc { genes: r.genes().clone(), edges: r.edges().iter().cloned().collect() })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcDoc {
    from: String,
    to: String,
    kind: ArcKind,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDoc {
    nodes: Vec<String>,
    root: String,
    arcs: Vec<ArcDoc>,
    leaves: BTreeMap<String, String>,
}

pub fn parse_network(text: &str) -> Result<LgtNetwork, FormatError> {
    let doc: NetworkDoc = from_json(text)?;
    let arcs: Vec<_> = doc.arcs.into_iter().map(|a| (a.from, a.to, a.kind)).collect();
    LgtNetwork::new(&doc.nodes, &doc.root, &arcs, &doc.leaves).map_err(semantic)
}

pub fn write_network(net: &LgtNetwork) -> String {
    let doc = NetworkDoc {
        nodes: net.ids().to_vec(),
        root: net.id(net.root()).to_string(),
        arcs: net
            .arcs()
            .iter()
            .map(|a| ArcDoc { from: net.id(a.from).into(), to: net.id(a.to).into(), kind: a.kind })
            .collect(),
        leaves: net.leaves().into_iter().map(|v| (net.id(v).into(), net.species(v).unwrap().into())).collect(),
    };
    to_json(&doc)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReconDoc {
    alpha: BTreeMap<String, Vec<String>>,
    events: BTreeMap<String, Vec<String>>,
    /// The binary refinement the reconciliation refers to, as DS-tree text.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dstree: Option<String>,
}

pub fn parse_reconciliation(text: &str) -> Result<Reconciliation, FormatError> {
    parse_reconciliation_doc(text).map(|(r, _)| r)
}

/// Parses a reconciliation together with its optional embedded refinement.
pub fn parse_reconciliation_doc(text: &str) -> Result<(Reconciliation, Option<DsTree>), FormatError> {
    let doc: ReconDoc = from_json(text)?;
    let events = doc
        .events
        .into_iter()
        .map(|(u, names)| {
            let ev = names.iter().map(|n| n.parse::<Event>()).collect::<Result<Vec<_>, _>>();
            ev.map(|ev| (u, ev)).map_err(FormatError::Semantic)
        })
        .collect::<Result<BTreeMap<_, _>, _>>()?;
    let recon = Reconciliation::new(doc.alpha, events).map_err(semantic)?;
    let tree = doc.dstree.as_deref().map(parse_dstree).transpose()?;
    Ok((recon, tree))
}

pub fn write_reconciliation(r: &Reconciliation) -> String {
    write_reconciliation_doc(r, None)
}

pub fn write_reconciliation_doc(r: &Reconciliation, tree: Option<&DsTree>) -> String {
    let doc = ReconDoc {
        alpha: r.alpha().clone(),
        events: r
            .events()
            .iter()
            .map(|(u, ev)| (u.clone(), ev.iter().map(|e| e.name().to_string()).collect()))
            .collect(),
        dstree: tree.map(write_dstree),
    };
    to_json(&doc)
}

pub fn write_time_assignment(net: &LgtNetwork, times: &[u64]) -> String {
    let map: BTreeMap<&str, u64> = (0..net.len()).map(|v| (net.id(v), times[v])).collect();
    to_json(&map)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_LEAF: &str = r#"{"nodes": ["r", "A", "B"], "root": "r",
        "arcs": [{"from": "r", "to": "A", "kind": "principal"}, {"from": "r", "to": "B", "kind": "principal"}],
        "leaves": {"A": "A", "B": "B"}}"#;

    #[test]
    fn network_round_trip() {
        let net = parse_network(TWO_LEAF).unwrap();
        assert_eq!(parse_network(&write_network(&net)).unwrap(), net);
    }

    #[test]
    fn undeclared_ids_are_rejected() {
        let bad = TWO_LEAF.replace(r#""to": "B""#, r#""to": "Q""#);
        assert!(matches!(parse_network(&bad), Err(FormatError::Semantic(_))));
        let rel = r#"{"genes": {"x": "A"}, "edges": [["x", "y"]]}"#;
        assert!(matches!(parse_relation_graph(rel), Err(FormatError::Semantic(_))));
    }

    #[test]
    fn syntax_error_position() {
        match parse_network("{\n  \"nodes\": [,]}") {
            Err(FormatError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn relation_round_trip_and_duplicates() {
        let text = r#"{"genes": {"x": "A", "y": "B", "z": "B"}, "edges": [["y", "x"], ["x", "z"]]}"#;
        let r = parse_relation_graph(text).unwrap();
        assert_eq!(parse_relation_graph(&write_relation_graph(&r)).unwrap(), r);
        let dup = r#"{"genes": {"x": "A", "y": "B"}, "edges": [["y", "x"], ["x", "y"]]}"#;
        assert!(parse_relation_graph(dup).is_err());
    }

    #[test]
    fn reconciliation_round_trip() {
        let text = r#"{"alpha": {"u0": ["r"], "x": ["A"], "y": ["B"]},
            "events": {"u0": ["S"], "x": ["extant"], "y": ["extant"]}, "dstree": "(x@A,y@B)S;"}"#;
        let (r, t) = parse_reconciliation_doc(text).unwrap();
        let t = t.unwrap();
        let again = write_reconciliation_doc(&r, Some(&t));
        let (r2, t2) = parse_reconciliation_doc(&again).unwrap();
        assert_eq!((r2, t2.unwrap()), (r.clone(), t));
        assert_eq!(parse_reconciliation(&write_reconciliation(&r)).unwrap(), r);
        assert!(parse_reconciliation(&text.replace("extant", "gone")).is_err());
    }
}
