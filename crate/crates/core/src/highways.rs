//! Transfer highways on a bare species tree.
//!
//! [`construct_network`] adds, for every depth level and every ordered pair
//! of species, a donor above the first species with a secondary arc to a
//! receiver above the second. Every binary DS-tree is reconcilable with the
//! result by making each internal node a transfer ([`build_s_witness`]).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{ArcKind, DsTree, Event, LgtNetwork, NetworkBuilder, Reconciliation, RelationGraph};
use crate::reconcile::step_event;
use crate::relations::{build_least_resolved_dstree, enumerate_binary_refinements};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HighwayError {
    #[error("the species tree needs at least two leaves, found {0}")]
    TooFewSpecies(usize),
    #[error("expected a species tree without secondary arcs")]
    NotATree,
    #[error("DS-tree node '{0}' is not binary")]
    NotBinary(String),
    #[error("gene '{gene}' has species '{species}', which is not a leaf of the species tree")]
    UnknownSpecies { gene: String, species: String },
}

/// A species tree with highways, plus the location of every donor and receiver.
#[derive(Clone, Debug)]
pub struct HighwayNetwork {
    pub network: LgtNetwork,
    /// Species ids in the order s_1, …, s_m (lexicographic).
    pub species: Vec<String>,
    /// Levels d = 0 ..= levels - 1.
    pub levels: usize,
    /// donor σ^d_{i→j} at key (i, j, d), 0-based species indices.
    donors: BTreeMap<(usize, usize, usize), usize>,
    /// receiver of the arc out of donor (i, j, d), keyed (j, i, d).
    receivers: BTreeMap<(usize, usize, usize), usize>,
}

impl HighwayNetwork {
    pub fn donor(&self, i: usize, j: usize, d: usize) -> usize {
        self.donors[&(i, j, d)]
    }

    pub fn receiver(&self, j: usize, i: usize, d: usize) -> usize {
        self.receivers[&(j, i, d)]
    }

    fn leaf(&self, i: usize) -> usize {
        self.network.leaf_of_species(&self.species[i]).unwrap()
    }

    /// Principal path from `from` down to its descendant `to` on one pendant chain.
    fn down(&self, from: usize, to: usize) -> Vec<usize> {
        let net = &self.network;
        let mut path = vec![from];
        let mut x = from;
        while x != to {
            let next = net.principal_children(x);
            assert_eq!(next.len(), 1, "pendant chains are unary in principal arcs");
            x = next[0];
            path.push(x);
        }
        path
    }

    /// From `start` on the chain of species `c` (at level `d`) to the leaf of
    /// species `p`, crossing over through the level-(d+1) highway if c ≠ p.
    fn to_leaf(&self, start: usize, c: usize, p: usize, d: usize) -> Vec<usize> {
        if c == p {
            return self.down(start, self.leaf(p));
        }
        let mut path = self.down(start, self.donor(c, p, d + 1));
        path.extend(self.down(self.receiver(p, c, d + 1), self.leaf(p)));
        path
    }
}

/// Number of highway secondary arcs for height `h` and `m` species.
pub fn highway_count(h: usize, m: usize) -> usize {
    (h + 2) * m * (m - 1)
}

/// Subdivides the pendant arcs of `species_tree` with donors and receivers
/// for every level d ∈ 0..=h(D)+1. Node ids are `don_i_j_d` and `recv_j_i_d`
/// with 1-based species positions.
pub fn construct_network(d: &DsTree, species_tree: &LgtNetwork) -> Result<HighwayNetwork, HighwayError> {
    if species_tree.secondary_arc_count() > 0 {
        return Err(HighwayError::NotATree);
    }
    let mut species: Vec<String> =
        species_tree.leaves().into_iter().map(|v| species_tree.species(v).unwrap().to_string()).collect();
    species.sort();
    let m = species.len();
    if m < 2 {
        return Err(HighwayError::TooFewSpecies(m));
    }
    let leaf: Vec<usize> = species.iter().map(|s| species_tree.leaf_of_species(s).unwrap()).collect();
    let levels = d.height() + 2;
    let mut b = NetworkBuilder::from_network(species_tree);
    let mut donors = BTreeMap::new();
    let mut receivers = BTreeMap::new();
    for lvl in 0..levels {
        for i in 0..m {
            for j in (0..m).filter(|&j| j != i) {
                let x = b.subdivide_above(leaf[i], &format!("don_{}_{}_{lvl}", i + 1, j + 1));
                let y = b.subdivide_above(leaf[j], &format!("recv_{}_{}_{lvl}", j + 1, i + 1));
                b.add_arc(x, y, ArcKind::Secondary);
                donors.insert((i, j, lvl), x);
                receivers.insert((j, i, lvl), y);
            }
        }
    }
    let network = b.build().expect("subdivision keeps the network well formed");
    Ok(HighwayNetwork { network, species, levels, donors, receivers })
}

/// The inductive witness: every internal node v of `d` is a transfer at a
/// donor of level d(v). The non-transferred child's path starts at the
/// donor itself, as the transfer case requires.
pub fn build_s_witness(d: &DsTree, hw: &HighwayNetwork) -> Result<Reconciliation, HighwayError> {
    let pos: BTreeMap<&str, usize> = hw.species.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect();
    for v in 0..d.len() {
        if !d.is_leaf(v) && d.children(v).len() != 2 {
            return Err(HighwayError::NotBinary(d.id(v).into()));
        }
        if let Some(sp) = d.species(v) {
            if !pos.contains_key(sp) {
                return Err(HighwayError::UnknownSpecies { gene: d.id(v).into(), species: sp.into() });
            }
        }
    }
    assert!(d.height() + 2 <= hw.levels, "network built for a shallower DS-tree");
    let mut w = WitnessBuilder { d, hw, pos, alpha: BTreeMap::new(), events: BTreeMap::new() };
    let root = d.root();
    match d.species(root) {
        Some(sp) => {
            let leaf = hw.leaf(w.pos[sp]);
            w.record(root, vec![leaf]);
        }
        None => {
            let x = hw.donor(0, 1, 0);
            w.record(root, vec![x]);
            w.internal(root, 0, 1);
        }
    }
    Ok(Reconciliation::new(w.alpha, w.events).expect("one path per node"))
}

struct WitnessBuilder<'a> {
    d: &'a DsTree,
    hw: &'a HighwayNetwork,
    pos: BTreeMap<&'a str, usize>,
    alpha: BTreeMap<String, Vec<String>>,
    events: BTreeMap<String, Vec<Event>>,
}

impl WitnessBuilder<'_> {
    fn record(&mut self, v: usize, path: Vec<usize>) {
        let net = &self.hw.network;
        let mut ev: Vec<Event> = path.windows(2).map(|w| step_event(net, w[0], w[1])).collect();
        ev.push(if self.d.is_leaf(v) { Event::Extant } else { Event::Transfer });
        let id = self.d.id(v).to_string();
        self.alpha.insert(id.clone(), path.iter().map(|&x| net.id(x).to_string()).collect());
        self.events.insert(id, ev);
    }

    /// Children of internal `v`, whose α ends at donor (i, j, d(v)).
    fn internal(&mut self, v: usize, i: usize, j: usize) {
        let (d, hw) = (self.d, self.hw);
        let lvl = d.depth(v);
        let x = hw.donor(i, j, lvl);
        let head = hw.receiver(j, i, lvl);
        let ch = d.children(v);
        // the transferred child starts at the receiver, the other at x
        let (moved, stays) = match (d.is_leaf(ch[0]), d.is_leaf(ch[1])) {
            (false, true) => (ch[1], ch[0]),
            _ => (ch[0], ch[1]),
        };
        if let Some(sp) = d.species(moved) {
            let p = self.pos[sp];
            self.record(moved, hw.to_leaf(head, j, p, lvl));
        } else {
            // both children internal: the moved one continues on the j → i highway
            let target = hw.donor(j, i, lvl + 1);
            self.record(moved, hw.down(head, target));
            self.internal(moved, j, i);
        }
        if let Some(sp) = d.species(stays) {
            let q = self.pos[sp];
            self.record(stays, hw.to_leaf(x, i, q, lvl));
        } else {
            let target = hw.donor(i, j, lvl + 1);
            self.record(stays, hw.down(x, target));
            self.internal(stays, i, j);
        }
    }
}

/// Whether some time-consistent network over `species_tree` is consistent
/// with `r`; this holds exactly when `r` is represented by a DS-tree.
pub fn decide_s_consistency(r: &RelationGraph, _species_tree: &LgtNetwork) -> bool {
    build_least_resolved_dstree(r).is_ok()
}

/// A full certificate of S-consistency: a binary refinement of the cotree of
/// `r`, its highway network and the transfer witness.
pub fn s_consistency_certificate(
    r: &RelationGraph,
    species_tree: &LgtNetwork,
) -> Result<Option<(DsTree, HighwayNetwork, Reconciliation)>, HighwayError> {
    let Ok(d) = build_least_resolved_dstree(r) else {
        return Ok(None);
    };
    let binary = enumerate_binary_refinements(&d).next().expect("at least one refinement");
    let hw = construct_network(&binary, species_tree)?;
    let alpha = build_s_witness(&binary, &hw)?;
    Ok(Some((binary, hw, alpha)))
}
