//! Backtracking a concrete binary refinement and reconciliation from the DP.

use std::collections::{BTreeMap, HashSet};

use super::dp::{check_inputs, fill, DpConfig, DpTable, Host, NetCtx, ReconcileError};
use super::lbr::{enumerate_lbrs, Lbr, LbrNode};
use crate::cost::Cost;
use crate::model::{ArcKind, DsShape, DsTree, Event, Label, LgtNetwork, Reconciliation};
use crate::relations::{expand_lbr, lbr_node_ids};

/// An optimal binary refinement with a witness reconciliation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub tree: DsTree,
    pub reconciliation: Reconciliation,
    pub cost: u64,
}

/// Event of a non-terminal step `x → y` of a path.
pub fn step_event(net: &LgtNetwork, x: usize, y: usize) -> Event {
    match net.arc_kind(x, y) {
        Some(ArcKind::Secondary) => Event::TransferLoss,
        _ if net.principal_children(x).len() == 1 => Event::NoEvent,
        _ => Event::SpecLoss,
    }
}

pub fn extract_witness(d: &DsTree, net: &LgtNetwork) -> Result<Witness, ReconcileError> {
    extract_witness_with(d, net, &DpConfig::default())
}

/// Runs the DP and backtracks one optimum.
///
/// Ties go to the lowest refinement index, then the smallest pair of node
/// ids for the two children, then the unswapped child order. Paths follow
/// [`crate::paths::TransferDistances::realize_path`].
pub fn extract_witness_with(d: &DsTree, net: &LgtNetwork, cfg: &DpConfig) -> Result<Witness, ReconcileError> {
    check_inputs(d, net, cfg)?;
    let ctx = NetCtx::new(net, cfg.parallelism);
    let table = fill(d, &ctx, cfg.parallelism);
    let root_row = table.row(d.root());
    let s = (0..net.len())
        .filter(|&s| root_row[s].is_finite())
        .min_by_key(|&s| (root_row[s], net.rank(s)))
        .ok_or(ReconcileError::Infeasible)?;
    let cost = root_row[s].finite().unwrap();
    let mut b = Backtrack {
        d,
        ctx: &ctx,
        table: &table,
        taken: (0..d.len()).map(|v| d.id(v).to_string()).collect(),
        alpha: BTreeMap::new(),
        events: BTreeMap::new(),
    };
    let shape = b.node(d.root(), s, s);
    let tree = DsTree::from_shape(&shape).expect("witness tree is valid");
    let reconciliation = Reconciliation::new(b.alpha, b.events).expect("one path per node");
    debug_assert_eq!(reconciliation.transfer_count(), cost);
    Ok(Witness { tree, reconciliation, cost })
}

struct Backtrack<'a> {
    d: &'a DsTree,
    ctx: &'a NetCtx<'a>,
    table: &'a DpTable,
    taken: HashSet<String>,
    alpha: BTreeMap<String, Vec<String>>,
    events: BTreeMap<String, Vec<Event>>,
}

/// One candidate placement of a binary node's two children.
struct Pick {
    key: (Cost, usize, usize, u8),
    starts: (usize, usize),
    lasts: (usize, usize),
    event: Event,
}

impl Backtrack<'_> {
    /// Records α(id) as the realized path `first → last`, ending in `terminal`.
    fn record(&mut self, id: &str, first: usize, last: usize, terminal: Event) {
        let net = self.ctx.net;
        let path = self.ctx.dist.realize_path(net, first, last).expect("chosen endpoints are connected");
        let mut events: Vec<Event> = path.windows(2).map(|w| step_event(net, w[0], w[1])).collect();
        events.push(terminal);
        self.alpha.insert(id.to_string(), path.iter().map(|&v| net.id(v).to_string()).collect());
        self.events.insert(id.to_string(), events);
    }

    /// Emits DS node `g` with α(g) running from `first` to `s`.
    fn node(&mut self, g: usize, s: usize, first: usize) -> DsShape {
        let d = self.d;
        if let Some(sp) = d.species(g) {
            self.record(d.id(g), first, s, Event::Extant);
            return DsShape::leaf(d.id(g), sp);
        }
        let label = d.label(g).unwrap();
        let children = d.children(g);
        let lbr = enumerate_lbrs(children.len()).swap_remove(self.table.choice(g, s).expect("finite entry"));
        let handle_f: Vec<&[Cost]> = children.iter().map(|&c| self.table.row(c)).collect();
        let handle_h: Vec<Vec<Cost>> = handle_f.iter().map(|f| self.ctx.lift(f)).collect();
        let f = self.ctx.lbr_table(&lbr, label, &handle_h);
        debug_assert_eq!(f[lbr.root()][s], self.table.f(g, s));
        let ids = lbr_node_ids(&lbr, d.id(g), &mut self.taken);
        let view = LbrView { lbr: &lbr, label, f: &f, handle_f: &handle_f, ids: &ids, g };
        let mut shapes = vec![None; children.len()];
        self.lbr_node(&view, lbr.root(), s, first, &mut shapes);
        let shapes: Vec<DsShape> = shapes.into_iter().map(|s| s.expect("every handle placed")).collect();
        expand_lbr(&lbr, label, &ids, &shapes)
    }

    fn lbr_node(&mut self, v: &LbrView<'_>, x: usize, s: usize, first: usize, shapes: &mut [Option<DsShape>]) {
        match v.lbr.nodes()[x] {
            LbrNode::Handle(i) => {
                let child = self.d.children(v.g)[i];
                shapes[i] = Some(self.node(child, s, first));
            }
            LbrNode::Join(a, b) => {
                let pick = self.pick(v, x, s);
                let id = v.ids[x].clone().unwrap();
                self.record(&id, first, s, pick.event);
                self.lbr_node(v, a, pick.lasts.0, pick.starts.0, shapes);
                self.lbr_node(v, b, pick.lasts.1, pick.starts.1, shapes);
            }
        }
    }

    /// Cheapest placement of the children of LBR node `x` mapped to `s`.
    fn pick(&self, v: &LbrView<'_>, x: usize, s: usize) -> Pick {
        let LbrNode::Join(a, b) = v.lbr.nodes()[x] else { unreachable!() };
        let (fa, fb) = (v.cost(a), v.cost(b));
        let net = self.ctx.net;
        let dist = &self.ctx.dist;
        let mut starts: Vec<((usize, usize), Cost, Event)> = Vec::new();
        match (v.label, self.ctx.host[s]) {
            (Label::Dup, _) => starts.push(((s, s), Cost::ZERO, Event::Dup)),
            (Label::Spec, Host::Split(l, r)) => {
                starts.push(((l, r), Cost::ZERO, Event::Spec));
                starts.push(((r, l), Cost::ZERO, Event::Spec));
            }
            (Label::Spec, Host::Tail(z)) => {
                starts.push(((s, z), Cost::ONE, Event::Transfer));
                starts.push(((z, s), Cost::ONE, Event::Transfer));
            }
            (Label::Spec, Host::Other) => {}
        }
        let mut best: Option<Pick> = None;
        for (order, &((p, q), extra, event)) in starts.iter().enumerate() {
            for &s1 in &self.ctx.reach[p] {
                let c1 = fa[s1] + dist.get(p, s1);
                if !c1.is_finite() {
                    continue;
                }
                for &s2 in &self.ctx.reach[q] {
                    let c = extra + c1 + fb[s2] + dist.get(q, s2);
                    let key = (c, net.rank(s1), net.rank(s2), order as u8);
                    if c.is_finite() && best.as_ref().map_or(true, |b| key < b.key) {
                        best = Some(Pick { key, starts: (p, q), lasts: (s1, s2), event });
                    }
                }
            }
        }
        let best = best.expect("finite entry has a placement");
        debug_assert_eq!(best.key.0, v.f[x][s]);
        best
    }
}

struct LbrView<'a> {
    lbr: &'a Lbr,
    label: Label,
    f: &'a [Vec<Cost>],
    handle_f: &'a [&'a [Cost]],
    ids: &'a [Option<String>],
    g: usize,
}

impl LbrView<'_> {
    /// f′ of LBR node `x` over network nodes.
    fn cost(&self, x: usize) -> &[Cost] {
        match self.lbr.nodes()[x] {
            LbrNode::Handle(i) => self.handle_f[i],
            LbrNode::Join(..) => &self.f[x],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::{parse_dstree, parse_species_tree};

    #[test]
    fn cherry_witness() {
        let net = parse_species_tree("(A,B);").unwrap();
        let d = parse_dstree("(x@A,y@B)S;").unwrap();
        let w = extract_witness(&d, &net).unwrap();
        assert_eq!(w.cost, 0);
        let r = &w.reconciliation;
        assert_eq!(r.path("u0").unwrap(), ["n0"]);
        assert_eq!(r.events_of("u0").unwrap(), [Event::Spec]);
        assert_eq!(r.path("x").unwrap(), ["A"]);
        assert_eq!(r.events_of("y").unwrap(), [Event::Extant]);
    }

    #[test]
    fn infeasible_is_reported() {
        let net = parse_species_tree("(A,B);").unwrap();
        let d = parse_dstree("(x@A,y@A)S;").unwrap();
        assert_eq!(extract_witness(&d, &net), Err(ReconcileError::Infeasible));
    }

    #[test]
    fn refinement_ids_extend_the_original() {
        let net = parse_species_tree("((A,B),C);").unwrap();
        let d = parse_dstree("(x@A,y@B,z@C)S;").unwrap();
        let w = extract_witness(&d, &net).unwrap();
        assert_eq!(w.cost, 0);
        assert!(w.tree.is_binary());
        assert!(w.tree.is_refinement_of(&d));
        assert!(w.tree.index_of("u0/1").is_some());
        assert_eq!(w.reconciliation.alpha().len(), w.tree.len());
    }
}
