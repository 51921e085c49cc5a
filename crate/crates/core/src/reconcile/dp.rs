use thiserror::Error;

use super::lbr::{enumerate_lbrs, Lbr, LbrNode};
use crate::cost::Cost;
use crate::model::{ArcKind, DsTree, Label, LgtNetwork};
use crate::par::{map_reduce, Parallelism};
use crate::paths::{reachable_set, transfer_distances_with, TransferDistances};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DpConfig {
    /// Largest DS-tree out-degree accepted; the work per node grows like 2^{2k}.
    pub max_degree: usize,
    pub parallelism: Parallelism,
}

impl Default for DpConfig {
    fn default() -> Self {
        DpConfig { max_degree: 8, parallelism: Parallelism::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReconcileError {
    #[error(
        "node '{node}' has {degree} children, above the limit of {max} \
         (local refinements grow like 2^(2k))"
    )]
    DegreeTooLarge { node: String, degree: usize, max: usize },
    #[error("gene '{gene}' has species '{species}', which does not label a network leaf")]
    UnknownSpecies { gene: String, species: String },
    #[error("the DS-tree is not reconcilable with the network")]
    Infeasible,
}

/// How a network node can host a binary DS node.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Host {
    /// Two principal children: speciation.
    Split(usize, usize),
    /// Tail of the secondary arc to the given head: transfer.
    Tail(usize),
    Other,
}

/// Network data shared by every DP step.
pub(crate) struct NetCtx<'a> {
    pub net: &'a LgtNetwork,
    pub dist: TransferDistances,
    pub host: Vec<Host>,
    /// P(s) as node lists.
    pub reach: Vec<Vec<usize>>,
}

impl<'a> NetCtx<'a> {
    pub fn new(net: &'a LgtNetwork, mode: Parallelism) -> Self {
        let dist = transfer_distances_with(net, mode);
        let host = (0..net.len())
            .map(|s| {
                if let Some(z) = net.secondary_head(s) {
                    return Host::Tail(z);
                }
                let pc: Vec<usize> = net.out_arcs(s).filter(|a| a.kind == ArcKind::Principal).map(|a| a.to).collect();
                match pc[..] {
                    [a, b] => Host::Split(a, b),
                    _ => Host::Other,
                }
            })
            .collect();
        let reach = (0..net.len()).map(|s| reachable_set(net, s)).collect();
        NetCtx { net, dist, host, reach }
    }

    pub fn len(&self) -> usize {
        self.net.len()
    }

    /// H[a] = min over s1 ∈ P(a) of F[s1] + t(a, s1): best cost of a child
    /// whose path starts at `a`.
    pub fn lift(&self, f: &[Cost]) -> Vec<Cost> {
        (0..self.len())
            .map(|a| self.reach[a].iter().map(|&s1| f[s1] + self.dist.get(a, s1)).min().unwrap_or(Cost::Infinite))
            .collect()
    }

    /// f′ at a binary node over children with lifted costs `ha`, `hb`.
    pub fn join(&self, label: Label, ha: &[Cost], hb: &[Cost]) -> Vec<Cost> {
        (0..self.len())
            .map(|s| match label {
                Label::Dup => ha[s] + hb[s],
                Label::Spec => match self.host[s] {
                    Host::Split(l, r) => (ha[l] + hb[r]).min(ha[r] + hb[l]),
                    Host::Tail(z) => Cost::ONE + (ha[s] + hb[z]).min(ha[z] + hb[s]),
                    Host::Other => Cost::Infinite,
                },
            })
            .collect()
    }

    /// f′ for every node of `lbr`, given the lifted costs of its handles.
    /// Entries for handles are empty.
    pub fn lbr_table(&self, lbr: &Lbr, label: Label, handle_h: &[Vec<Cost>]) -> Vec<Vec<Cost>> {
        let nodes = lbr.nodes();
        let mut f: Vec<Vec<Cost>> = vec![Vec::new(); nodes.len()];
        let mut h: Vec<Option<Vec<Cost>>> = vec![None; nodes.len()];
        for (x, node) in nodes.iter().enumerate() {
            if let LbrNode::Join(a, b) = *node {
                let ha = lifted(nodes, a, handle_h, &h);
                let hb = lifted(nodes, b, handle_h, &h);
                f[x] = self.join(label, ha, hb);
                if x != lbr.root() {
                    h[x] = Some(self.lift(&f[x]));
                }
            }
        }
        f
    }
}

pub(crate) fn lifted<'v>(
    nodes: &[LbrNode],
    x: usize,
    handle_h: &'v [Vec<Cost>],
    h: &'v [Option<Vec<Cost>>],
) -> &'v [Cost] {
    match nodes[x] {
        LbrNode::Handle(i) => &handle_h[i],
        LbrNode::Join(..) => h[x].as_deref().expect("children precede parents"),
    }
}

/// f and the chosen local refinement for every (DS node, network node).
#[derive(Clone, Debug)]
pub struct DpTable {
    f: Vec<Vec<Cost>>,
    /// Index into the node's LBR list of the first refinement reaching f(g, s).
    choice: Vec<Vec<Option<usize>>>,
}

impl DpTable {
    pub fn f(&self, g: usize, s: usize) -> Cost {
        self.f[g][s]
    }

    pub fn row(&self, g: usize) -> &[Cost] {
        &self.f[g]
    }

    pub fn choice(&self, g: usize, s: usize) -> Option<usize> {
        self.choice[g][s]
    }
}

pub(crate) fn check_inputs(d: &DsTree, net: &LgtNetwork, cfg: &DpConfig) -> Result<(), ReconcileError> {
    for v in 0..d.len() {
        let k = d.children(v).len();
        if k > cfg.max_degree {
            return Err(ReconcileError::DegreeTooLarge { node: d.id(v).into(), degree: k, max: cfg.max_degree });
        }
        if let Some(sp) = d.species(v) {
            if net.leaf_of_species(sp).is_none() {
                return Err(ReconcileError::UnknownSpecies { gene: d.id(v).into(), species: sp.into() });
            }
        }
    }
    Ok(())
}

pub(crate) fn fill(d: &DsTree, ctx: &NetCtx<'_>, mode: Parallelism) -> DpTable {
    let n = ctx.len();
    let mut f = vec![Vec::new(); d.len()];
    let mut choice = vec![vec![None; n]; d.len()];
    let mut lbr_cache: Vec<Option<Vec<Lbr>>> = Vec::new();
    for g in d.postorder() {
        if let Some(sp) = d.species(g) {
            let leaf = ctx.net.leaf_of_species(sp).expect("checked");
            f[g] = (0..n).map(|s| if s == leaf { Cost::ZERO } else { Cost::Infinite }).collect();
            continue;
        }
        let label = d.label(g).unwrap();
        let children = d.children(g);
        let k = children.len();
        if lbr_cache.len() <= k {
            lbr_cache.resize(k + 1, None);
        }
        let lbrs = lbr_cache[k].get_or_insert_with(|| enumerate_lbrs(k));
        let handle_h: Vec<Vec<Cost>> = children.iter().map(|&c| ctx.lift(&f[c])).collect();
        let best = map_reduce(
            lbrs.len(),
            mode,
            |i| {
                let lbr = &lbrs[i];
                let root = ctx.lbr_table(lbr, label, &handle_h).swap_remove(lbr.root());
                root.into_iter().map(|c| (c, i)).collect::<Vec<_>>()
            },
            |a, b| a.into_iter().zip(b).map(|(x, y)| x.min(y)).collect(),
        )
        .expect("at least one refinement");
        f[g] = best.iter().map(|&(c, _)| c).collect();
        choice[g] = best.iter().map(|&(c, i)| c.is_finite().then_some(i)).collect();
    }
    DpTable { f, choice }
}

/// Runs the DP over all of `d`.
pub fn run_dp(d: &DsTree, net: &LgtNetwork, cfg: &DpConfig) -> Result<DpTable, ReconcileError> {
    check_inputs(d, net, cfg)?;
    let ctx = NetCtx::new(net, cfg.parallelism);
    Ok(fill(d, &ctx, cfg.parallelism))
}

/// Fewest transfers of any witness reconciliation of any binary refinement
/// of `d`; `Infinite` when `d` is not reconcilable with `net`.
pub fn min_transfer_cost(d: &DsTree, net: &LgtNetwork) -> Result<Cost, ReconcileError> {
    min_transfer_cost_with(d, net, &DpConfig::default())
}

pub fn min_transfer_cost_with(d: &DsTree, net: &LgtNetwork, cfg: &DpConfig) -> Result<Cost, ReconcileError> {
    let table = run_dp(d, net, cfg)?;
    Ok(table.row(d.root()).iter().copied().min().unwrap_or(Cost::Infinite))
}

/// Cost of one local refinement with its root mapped to `s`.
///
/// `leaf_f[h]` holds f(g_h, ·) for handle `h`, indexed by network node.
pub fn reconcile_lbr(
    lbr: &Lbr,
    label: Label,
    net: &LgtNetwork,
    s: usize,
    leaf_f: &[Vec<Cost>],
    dist: &TransferDistances,
) -> Cost {
    let mut ctx = NetCtx::new(net, Parallelism::Sequential);
    ctx.dist = dist.clone();
    let handle_h: Vec<Vec<Cost>> = leaf_f.iter().map(|f| ctx.lift(f)).collect();
    ctx.lbr_table(lbr, label, &handle_h)[lbr.root()][s]
}
